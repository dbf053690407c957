//! One-shot sparsification: thin the edge set once, count exactly on what
//! remains, and rescale by the survival probability of a butterfly.
//!
//! Edge coins and vertex colors are hashes of `(seed, index)`, so a trial's
//! retained subgraph does not depend on iteration order.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::exact_count;
use crate::graph::BipartiteGraph;
use crate::rng::{below, derive, unit_f64};
use crate::sampling::Estimate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SparsifyMethod {
    EdgeSpar,
    ColorSpar,
}

impl fmt::Display for SparsifyMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SparsifyMethod::EdgeSpar => "edge",
            SparsifyMethod::ColorSpar => "color",
        })
    }
}

impl FromStr for SparsifyMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge" | "espar" => Ok(SparsifyMethod::EdgeSpar),
            "color" | "colour" | "clrspar" => Ok(SparsifyMethod::ColorSpar),
            other => Err(Error::invalid(format!("unknown sparsification method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparsifyConfig {
    pub method: SparsifyMethod,
    /// Edge retention probability (edge sparsification).
    pub p: f64,
    /// Palette size `N` (color sparsification).
    pub colors: u32,
    pub seed: u64,
    pub trials: u32,
    /// Optional pilot count used only to check the variance condition on `p`.
    pub pilot_bfly: Option<f64>,
}

impl SparsifyConfig {
    pub fn edge(p: f64, seed: u64) -> Self {
        SparsifyConfig {
            method: SparsifyMethod::EdgeSpar,
            p,
            colors: 1,
            seed,
            trials: 1,
            pilot_bfly: None,
        }
    }

    pub fn color(colors: u32, seed: u64) -> Self {
        SparsifyConfig {
            method: SparsifyMethod::ColorSpar,
            p: 1.0,
            colors,
            seed,
            trials: 1,
            pilot_bfly: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials must be >= 1"));
        }
        match self.method {
            SparsifyMethod::EdgeSpar => check_p(self.p),
            SparsifyMethod::ColorSpar => check_colors(self.colors),
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("retention probability {p} not in (0, 1]")))
    }
}

fn check_colors(colors: u32) -> Result<()> {
    if colors >= 1 {
        Ok(())
    } else {
        Err(Error::invalid("number of colors must be >= 1"))
    }
}

/// Coin for edge `k` under `seed`.
#[inline]
pub fn edge_retained(seed: u64, k: usize, p: f64) -> bool {
    p >= 1.0 || unit_f64(derive(seed, k as u64)) < p
}

/// Color in `0..colors` of the vertex at global index `i` under `seed`.
#[inline]
pub fn vertex_color(seed: u64, i: usize, colors: u32) -> u32 {
    below(derive(seed, i as u64), colors as u64) as u32
}

/// Exact butterfly count of the subgraph formed by the retained edges.
pub fn count_retained<F>(g: &BipartiteGraph, keep: F) -> Result<u64>
where
    F: FnMut(usize, u32, u32) -> bool,
{
    match g.retain_edges(keep) {
        Some(sub) => exact_count(&sub),
        None => Ok(0),
    }
}

/// Edge sparsification value for an explicit retained-edge mask.
pub fn edge_estimate_from_mask(g: &BipartiteGraph, retained: &[bool], p: f64) -> Result<f64> {
    check_p(p)?;
    let beta = count_retained(g, |k, _, _| retained[k])?;
    Ok(beta as f64 / p.powi(4))
}

/// Color sparsification value for an explicit coloring in global vertex order.
pub fn color_estimate_from_coloring(g: &BipartiteGraph, coloring: &[u32], colors: u32) -> Result<f64> {
    check_colors(colors)?;
    let nl = g.left_count();
    let beta = count_retained(g, |_, l, r| coloring[l as usize] == coloring[nl + r as usize])?;
    Ok(beta as f64 * (colors as f64).powi(3))
}

fn warn_on_p(g: &BipartiteGraph, p: f64, pilot: Option<f64>) {
    if p >= 1.0 {
        return;
    }
    match pilot {
        None => log::warn!(
            "edge sparsification with p = {p}: variance condition unchecked without a pilot count"
        ),
        Some(b) => {
            let need = suggest_p(g, b).edge;
            if p <= need {
                log::warn!("p = {p} is at or below the suggested minimum {need:.4} for pilot count {b}");
            }
        }
    }
}

/// Keeps each edge with probability `p` and returns `β · p⁻⁴`.
pub fn edge_sparsify_estimate(g: &BipartiteGraph, p: f64, seed: u64) -> Result<f64> {
    check_p(p)?;
    warn_on_p(g, p, None);
    edge_trial(g, p, seed)
}

fn edge_trial(g: &BipartiteGraph, p: f64, seed: u64) -> Result<f64> {
    let beta = count_retained(g, |k, _, _| edge_retained(seed, k, p))?;
    Ok(beta as f64 / p.powi(4))
}

/// Colors every vertex from one palette of `colors`, keeps monochromatic
/// edges, and returns `β · N³`.
pub fn color_sparsify_estimate(g: &BipartiteGraph, colors: u32, seed: u64) -> Result<f64> {
    check_colors(colors)?;
    let coloring: Vec<u32> = (0..g.vertex_count())
        .map(|i| vertex_color(seed, i, colors))
        .collect();
    color_estimate_from_coloring(g, &coloring, colors)
}

pub fn sparsify_run(g: &BipartiteGraph, cfg: &SparsifyConfig) -> Result<Estimate> {
    cfg.validate()?;
    if cfg.method == SparsifyMethod::EdgeSpar {
        warn_on_p(g, cfg.p, cfg.pilot_bfly);
    }
    let start = Instant::now();
    let values: Vec<f64> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            let seed = derive(cfg.seed, t);
            match cfg.method {
                SparsifyMethod::EdgeSpar => edge_trial(g, cfg.p, seed),
                SparsifyMethod::ColorSpar => color_sparsify_estimate(g, cfg.colors, seed),
            }
        })
        .collect::<Result<_>>()?;
    let value = values.iter().sum::<f64>() / values.len() as f64;
    Ok(Estimate {
        value,
        iterations_done: values.len() as u64,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        seed: cfg.seed,
        per_group_means: Vec::new(),
        trial_values: values,
        trace: None,
    })
}

/// Smallest retention probabilities for which the variance is at most
/// `bfly² / 8`, given a pilot butterfly count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuggestedP {
    pub edge: f64,
    pub color: f64,
}

pub fn suggest_p(g: &BipartiteGraph, pilot_bfly: f64) -> SuggestedP {
    let delta = g.max_degree() as f64;
    let b = pilot_bfly.max(f64::MIN_POSITIVE);
    let edge = (24.0 / b)
        .powf(0.25)
        .max((24.0 * delta / b).sqrt())
        .max(24.0 * delta * delta / b);
    let color = (32.0 / b)
        .cbrt()
        .max((32.0 * delta / b).sqrt())
        .max(32.0 * delta * delta / b);
    SuggestedP { edge, color }
}
