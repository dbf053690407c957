//! Structured output records shared by the command-line front end.
//!
//! One record per run, serialized as a single JSON line. Field names are
//! stable; see the README for the schema.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::Serialize;

use crate::error::Result;
use crate::graph::GraphStats;
use crate::oracle::{PairTypeCounts, VarianceBounds};
use crate::sampling::{Estimate, TracePoint};

/// `100 · |estimate − exact| / exact`, or `None` unless `exact > 0`.
pub fn relative_error_pct(estimate: f64, exact: Option<f64>) -> Option<f64> {
    exact
        .filter(|&e| e > 0.0)
        .map(|e| 100.0 * (estimate - e).abs() / e)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRecord {
    pub iterations: u64,
    pub elapsed_seconds: Option<f64>,
    pub estimate: f64,
    pub relative_error_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub method: String,
    pub estimate: f64,
    /// Integer result of exact commands.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    pub exact: Option<f64>,
    pub relative_error_pct: Option<f64>,
    pub iterations: u64,
    pub elapsed_seconds: Option<f64>,
    pub seed: u64,
    pub params: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceRecord>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub group_means: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<f64>,
}

impl RunReport {
    pub fn new(command: &'static str, method: impl Into<String>, estimate: f64, seed: u64) -> Self {
        RunReport {
            command,
            method: method.into(),
            estimate,
            count: None,
            exact: None,
            relative_error_pct: None,
            iterations: 0,
            elapsed_seconds: None,
            seed,
            params: BTreeMap::new(),
            trace: None,
            group_means: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn from_estimate(command: &'static str, method: impl Into<String>, est: &Estimate) -> Self {
        let mut r = RunReport::new(command, method, est.value, est.seed);
        r.iterations = est.iterations_done;
        r.elapsed_seconds = Some(est.elapsed_seconds);
        r.group_means = est.per_group_means.clone();
        r.values = est.trial_values.clone();
        r.trace = est.trace.as_ref().map(|t| t.iter().map(trace_record).collect());
        r
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Sets the reference count and fills every relative error from it.
    pub fn with_exact(mut self, exact: Option<f64>) -> Self {
        self.exact = exact;
        self.relative_error_pct = relative_error_pct(self.estimate, exact);
        if let Some(trace) = self.trace.as_mut() {
            for p in trace {
                p.relative_error_pct = relative_error_pct(p.estimate, exact);
            }
        }
        self
    }

    /// Drops wall-clock fields so repeated runs print identical bytes.
    pub fn without_timing(mut self) -> Self {
        self.elapsed_seconds = None;
        if let Some(trace) = self.trace.as_mut() {
            for p in trace {
                p.elapsed_seconds = None;
            }
        }
        self
    }
}

fn trace_record(p: &TracePoint) -> TraceRecord {
    TraceRecord {
        iterations: p.iterations,
        elapsed_seconds: Some(p.elapsed_seconds),
        estimate: p.estimate,
        relative_error_pct: None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsRecord {
    pub command: &'static str,
    pub n: u64,
    pub left: u64,
    pub right: u64,
    pub m: u64,
    #[serde(rename = "sumDegSqL")]
    pub sum_deg_sq_left: u128,
    #[serde(rename = "sumDegSqR")]
    pub sum_deg_sq_right: u128,
    pub wedges: u64,
    #[serde(rename = "maxDeg")]
    pub max_degree: u64,
}

impl From<GraphStats> for StatsRecord {
    fn from(s: GraphStats) -> Self {
        StatsRecord {
            command: "stats",
            n: s.n,
            left: s.left_count,
            right: s.right_count,
            m: s.m,
            sum_deg_sq_left: s.sum_deg_sq_left,
            sum_deg_sq_right: s.sum_deg_sq_right,
            wedges: s.wedge_count,
            max_degree: s.max_degree,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairsRecord {
    pub command: &'static str,
    pub butterflies: u64,
    pub p_0v: u64,
    pub p_1v: u64,
    pub p_2v: u64,
    pub p_1e: u64,
    pub p_1w: u64,
    #[serde(rename = "p_V")]
    pub p_v: u64,
    #[serde(rename = "p_E")]
    pub p_e: u64,
    pub p: f64,
    pub bounds: VarianceBounds,
}

impl PairsRecord {
    pub fn new(counts: &PairTypeCounts, p: f64, bounds: VarianceBounds) -> Self {
        PairsRecord {
            command: "pairs",
            butterflies: counts.butterflies,
            p_0v: counts.p_0v,
            p_1v: counts.p_1v,
            p_2v: counts.p_2v,
            p_1e: counts.p_1e,
            p_1w: counts.p_1w,
            p_v: counts.p_v(),
            p_e: counts.p_e(),
            p,
            bounds,
        }
    }
}

/// Writes `record` as one JSON line, or as aligned `key value` rows.
pub fn emit<T: Serialize, W: Write + ?Sized>(out: &mut W, record: &T, human: bool) -> Result<()> {
    if human {
        let value = serde_json::to_value(record).map_err(io::Error::other)?;
        let mut rows = Vec::new();
        flatten("", &value, &mut rows);
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in rows {
            writeln!(out, "{k:<width$}  {v}")?;
        }
    } else {
        let line = serde_json::to_string(record).map_err(io::Error::other)?;
        writeln!(out, "{line}")?;
    }
    Ok(())
}

fn flatten(prefix: &str, v: &serde_json::Value, rows: &mut Vec<(String, String)>) {
    use serde_json::Value;
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                flatten(&key(k), inner, rows);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            for (i, inner) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), inner, rows);
            }
        }
        Value::Null => rows.push((prefix.to_string(), "-".to_string())),
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}
