//! Local-sampling estimators of the global butterfly count.
//!
//! Each estimator draws one random element (vertex, edge, wedge), counts the
//! butterflies through it, and rescales by the probability that a fixed
//! butterfly contains the drawn element. Iterations are combined by a plain
//! mean or by a median of group means.
//!
//! Iteration `i` draws from its own ChaCha stream keyed by `(seed, i)`, so
//! the estimate is bit-identical regardless of thread count.

use std::fmt;
use std::ops::{Deref, DerefMut};
use std::str::FromStr;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{choose2, BipartiteGraph, Side, VertexRef};
use crate::local::{edge_endpoints, Scratch};
use crate::rng::StreamFactory;

pub const DEFAULT_FAST_EDGE_REPEATS: u32 = 1000;

/// Clock is read once per this many iterations in time-budget mode.
const CLOCK_STRIDE: u64 = 64;
const ITERATION_CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Vertex,
    Edge,
    Wedge,
    FastEdge,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Vertex => "vertex",
            Method::Edge => "edge",
            Method::Wedge => "wedge",
            Method::FastEdge => "fast-edge",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vertex" | "vsamp" => Ok(Method::Vertex),
            "edge" | "esamp" => Ok(Method::Edge),
            "wedge" | "wsamp" => Ok(Method::Wedge),
            "fast-edge" | "fast_edge" | "fastedge" => Ok(Method::FastEdge),
            other => Err(Error::invalid(format!("unknown sampling method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Budget {
    Iterations(u64),
    /// Wall-clock seconds.
    TimeBudget(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorConfig {
    pub method: Method,
    pub budget: Budget,
    pub seed: u64,
    /// Trials per sampled edge for [`Method::FastEdge`].
    pub fast_edge_repeats: u32,
    /// Number of groups `t` for the median of means; 1 gives the plain mean.
    pub groups: u32,
    /// Iterations per group `α`. With an iteration budget it defaults to the
    /// budget, for `α · t` iterations in total.
    pub group_size: Option<u64>,
    pub trace: bool,
}

impl EstimatorConfig {
    pub fn new(method: Method, iterations: u64, seed: u64) -> Self {
        EstimatorConfig {
            method,
            budget: Budget::Iterations(iterations),
            seed,
            fast_edge_repeats: DEFAULT_FAST_EDGE_REPEATS,
            groups: 1,
            group_size: None,
            trace: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.budget {
            Budget::Iterations(0) => return Err(Error::invalid("iterations must be >= 1")),
            Budget::TimeBudget(s) if !(s > 0.0 && s.is_finite()) => {
                return Err(Error::invalid(format!("time budget {s} must be positive")))
            }
            _ => {}
        }
        if self.fast_edge_repeats == 0 {
            return Err(Error::invalid("fast-edge repeats must be >= 1"));
        }
        if self.groups == 0 {
            return Err(Error::invalid("groups must be >= 1"));
        }
        if self.groups > 1 && self.groups.is_multiple_of(2) {
            return Err(Error::invalid(format!("groups must be odd, got {}", self.groups)));
        }
        if self.group_size == Some(0) {
            return Err(Error::invalid("group size must be >= 1"));
        }
        Ok(())
    }

    fn total_iterations(&self) -> Option<u64> {
        match self.budget {
            Budget::Iterations(n) => Some(self.group_size.unwrap_or(n) * self.groups as u64),
            Budget::TimeBudget(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub iterations: u64,
    pub elapsed_seconds: f64,
    pub estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub iterations_done: u64,
    pub elapsed_seconds: f64,
    pub seed: u64,
    /// Group means, when more than one group was used.
    pub per_group_means: Vec<f64>,
    /// Per-trial values of repeated one-shot estimators.
    pub trial_values: Vec<f64>,
    pub trace: Option<Vec<TracePoint>>,
}

/// Prefix sums of `C(d, 2)` over vertices in global order (left side first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeIndex {
    prefix: Vec<u64>,
}

impl WedgeIndex {
    pub fn build(g: &BipartiteGraph) -> Self {
        let mut acc = 0u64;
        let prefix = g
            .degrees(Side::Left)
            .chain(g.degrees(Side::Right))
            .map(|d| {
                acc += choose2(d as u64);
                acc
            })
            .collect();
        WedgeIndex { prefix }
    }

    pub fn total_wedges(&self) -> u64 {
        self.prefix.last().copied().unwrap_or(0)
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    /// Smallest global index `j` with `prefix[j] >= r`, for `r` in `1..=total`.
    pub fn locate(&self, r: u64) -> usize {
        debug_assert!(r >= 1 && r <= self.total_wedges());
        self.prefix.partition_point(|&b| b < r)
    }

    /// Draws a wedge center with probability `C(d, 2) / ∧`.
    pub fn sample_center<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize> {
        let total = self.total_wedges();
        if total == 0 {
            return Err(Error::NoWedges);
        }
        Ok(self.locate(rng.gen_range(1..=total)))
    }
}

/// `bfly_v · n / 4`.
pub fn vertex_value(g: &BipartiteGraph, scratch: &mut Scratch, v: VertexRef) -> Result<f64> {
    Ok(scratch.vertex(g, v)? as f64 * g.vertex_count() as f64 / 4.0)
}

/// `bfly_e · m / 4` for the dense edge `(left, right)`.
pub fn edge_value(g: &BipartiteGraph, scratch: &mut Scratch, left: u32, right: u32) -> Result<f64> {
    let b = scratch.edge(g, VertexRef::left(left), VertexRef::right(right))?;
    Ok(b as f64 * g.edge_count() as f64 / 4.0)
}

/// `(|Γ_a ∩ Γ_b| − 1) · ∧ / 4` for the wedge `a - center - b`.
pub fn wedge_value(
    g: &BipartiteGraph,
    scratch: &mut Scratch,
    total_wedges: u64,
    center: VertexRef,
    a: u32,
    b: u32,
) -> f64 {
    let end_side = center.side.opposite();
    let common = scratch.common_neighbors(g, end_side, a, b);
    (common - 1) as f64 * total_wedges as f64 / 4.0
}

/// One Fast-eBFC trial on edge `(left, right)` that picked `w ∈ Γ_left \ {right}`
/// and `x ∈ Γ_right \ {left}`: `(d_left − 1)(d_right − 1)` if `x - w` closes a
/// butterfly, else 0.
pub fn fast_trial_value(g: &BipartiteGraph, left: u32, right: u32, w: u32, x: u32) -> f64 {
    if g.has_edge(x, w) {
        let dl = g.degree(Side::Left, left) as f64;
        let dr = g.degree(Side::Right, right) as f64;
        (dl - 1.0) * (dr - 1.0)
    } else {
        0.0
    }
}

fn pick_excluding<R: Rng + ?Sized>(row: &[u32], skip_pos: usize, rng: &mut R) -> u32 {
    let mut k = rng.gen_range(0..row.len() - 1);
    if k >= skip_pos {
        k += 1;
    }
    row[k]
}

fn fast_ebfc_dense<R: Rng + ?Sized>(
    g: &BipartiteGraph,
    left: u32,
    right: u32,
    rng: &mut R,
    repeats: u32,
) -> f64 {
    let lrow = g.neighbors(Side::Left, left);
    let rrow = g.neighbors(Side::Right, right);
    if lrow.len() < 2 || rrow.len() < 2 {
        return 0.0;
    }
    let lpos = lrow.binary_search(&right).expect("edge endpoints are adjacent");
    let rpos = rrow.binary_search(&left).expect("edge endpoints are adjacent");
    let mut hits = 0u64;
    for _ in 0..repeats {
        let w = pick_excluding(lrow, lpos, rng);
        let x = pick_excluding(rrow, rpos, rng);
        if g.has_edge(x, w) {
            hits += 1;
        }
    }
    let scale = (lrow.len() - 1) as f64 * (rrow.len() - 1) as f64;
    hits as f64 * scale / repeats as f64
}

/// Unbiased estimate of `bfly_e` from `repeats` random closing tests.
pub fn fast_ebfc_estimate<R: Rng + ?Sized>(
    g: &BipartiteGraph,
    u: VertexRef,
    v: VertexRef,
    rng: &mut R,
    repeats: u32,
) -> Result<f64> {
    if repeats == 0 {
        return Err(Error::invalid("fast-edge repeats must be >= 1"));
    }
    let (l, r) = edge_endpoints(g, u, v)?;
    Ok(fast_ebfc_dense(g, l, r, rng, repeats))
}

/// Per-iteration kernel shared by the public single-shot functions and the
/// runner.
#[derive(Debug, Clone)]
enum Kernel {
    Vertex,
    Edge,
    Wedge(WedgeIndex),
    FastEdge(u32),
}

impl Kernel {
    fn new(g: &BipartiteGraph, method: Method, repeats: u32) -> Result<Self> {
        match method {
            Method::Vertex => Ok(Kernel::Vertex),
            Method::Edge | Method::FastEdge if g.edge_count() == 0 => Err(Error::NoEdges),
            Method::Edge => Ok(Kernel::Edge),
            Method::FastEdge => Ok(Kernel::FastEdge(repeats)),
            Method::Wedge => {
                let idx = WedgeIndex::build(g);
                if idx.total_wedges() == 0 {
                    return Err(Error::NoWedges);
                }
                Ok(Kernel::Wedge(idx))
            }
        }
    }

    fn draw<R: Rng + ?Sized>(&self, g: &BipartiteGraph, scratch: &mut Scratch, rng: &mut R) -> Result<f64> {
        match self {
            Kernel::Vertex => {
                let v = g.vertex_at(rng.gen_range(0..g.vertex_count()));
                vertex_value(g, scratch, v)
            }
            Kernel::Edge => {
                let (l, r) = g.edge_at(rng.gen_range(0..g.edge_count()));
                edge_value(g, scratch, l, r)
            }
            Kernel::Wedge(idx) => draw_wedge(g, idx, scratch, rng),
            Kernel::FastEdge(repeats) => {
                let (l, r) = g.edge_at(rng.gen_range(0..g.edge_count()));
                Ok(fast_ebfc_dense(g, l, r, rng, *repeats) * g.edge_count() as f64 / 4.0)
            }
        }
    }
}

fn draw_wedge<R: Rng + ?Sized>(
    g: &BipartiteGraph,
    idx: &WedgeIndex,
    scratch: &mut Scratch,
    rng: &mut R,
) -> Result<f64> {
    let center = g.vertex_at(idx.sample_center(rng)?);
    let row = g.neighbors(center.side, center.index);
    let i = rng.gen_range(0..row.len());
    let mut j = rng.gen_range(0..row.len() - 1);
    if j >= i {
        j += 1;
    }
    Ok(wedge_value(g, scratch, idx.total_wedges(), center, row[i], row[j]))
}

pub fn vsamp_iteration<R: Rng + ?Sized>(g: &BipartiteGraph, rng: &mut R) -> Result<f64> {
    Kernel::Vertex.draw(g, &mut Scratch::new(g), rng)
}

pub fn esamp_iteration<R: Rng + ?Sized>(g: &BipartiteGraph, rng: &mut R) -> Result<f64> {
    Kernel::new(g, Method::Edge, 1)?.draw(g, &mut Scratch::new(g), rng)
}

pub fn wsamp_iteration<R: Rng + ?Sized>(g: &BipartiteGraph, idx: &WedgeIndex, rng: &mut R) -> Result<f64> {
    draw_wedge(g, idx, &mut Scratch::new(g), rng)
}

pub fn fast_esamp_iteration<R: Rng + ?Sized>(g: &BipartiteGraph, rng: &mut R, repeats: u32) -> Result<f64> {
    if repeats == 0 {
        return Err(Error::invalid("fast-edge repeats must be >= 1"));
    }
    Kernel::new(g, Method::FastEdge, repeats)?.draw(g, &mut Scratch::new(g), rng)
}

struct ScratchPool<'g> {
    graph: &'g BipartiteGraph,
    free: Mutex<Vec<Scratch>>,
}

struct Pooled<'p, 'g> {
    pool: &'p ScratchPool<'g>,
    scratch: Option<Scratch>,
}

impl<'g> ScratchPool<'g> {
    fn new(graph: &'g BipartiteGraph) -> Self {
        ScratchPool {
            graph,
            free: Mutex::new(Vec::new()),
        }
    }

    fn take(&self) -> Pooled<'_, 'g> {
        let reused = self.free.lock().expect("scratch pool poisoned").pop();
        Pooled {
            pool: self,
            scratch: Some(reused.unwrap_or_else(|| Scratch::new(self.graph))),
        }
    }
}

impl Deref for Pooled<'_, '_> {
    type Target = Scratch;
    fn deref(&self) -> &Scratch {
        self.scratch.as_ref().expect("present until drop")
    }
}

impl DerefMut for Pooled<'_, '_> {
    fn deref_mut(&mut self) -> &mut Scratch {
        self.scratch.as_mut().expect("present until drop")
    }
}

impl Drop for Pooled<'_, '_> {
    fn drop(&mut self) {
        if let (Some(s), Ok(mut free)) = (self.scratch.take(), self.pool.free.lock()) {
            free.push(s);
        }
    }
}

/// Folds iteration values in index order into groups and the trace.
struct Accumulator {
    group_sums: Vec<f64>,
    group_counts: Vec<u64>,
    sum: f64,
    done: u64,
    next_checkpoint: u64,
    trace: Option<Vec<TracePoint>>,
}

impl Accumulator {
    fn new(groups: usize, trace: bool) -> Self {
        Accumulator {
            group_sums: vec![0.0; groups],
            group_counts: vec![0; groups],
            sum: 0.0,
            done: 0,
            next_checkpoint: 1,
            trace: trace.then(Vec::new),
        }
    }

    fn push(&mut self, value: f64, start: Instant) {
        let g = (self.done % self.group_sums.len() as u64) as usize;
        self.group_sums[g] += value;
        self.group_counts[g] += 1;
        self.sum += value;
        self.done += 1;
        if self.done == self.next_checkpoint {
            self.checkpoint(start);
            self.next_checkpoint *= 2;
        }
    }

    fn checkpoint(&mut self, start: Instant) {
        let estimate = self.current();
        if let Some(trace) = self.trace.as_mut() {
            trace.push(TracePoint {
                iterations: self.done,
                elapsed_seconds: start.elapsed().as_secs_f64(),
                estimate,
            });
        }
    }

    fn group_means(&self) -> Vec<f64> {
        self.group_sums
            .iter()
            .zip(&self.group_counts)
            .filter(|(_, &c)| c > 0)
            .map(|(&s, &c)| s / c as f64)
            .collect()
    }

    fn current(&self) -> f64 {
        if self.group_sums.len() == 1 {
            self.sum / self.done as f64
        } else {
            median(self.group_means())
        }
    }

    fn finish(mut self, seed: u64, start: Instant) -> Estimate {
        if self.trace.as_ref().is_some_and(|t| t.last().map(|p| p.iterations) != Some(self.done)) {
            self.checkpoint(start);
        }
        let per_group_means = if self.group_sums.len() > 1 {
            self.group_means()
        } else {
            Vec::new()
        };
        Estimate {
            value: self.current(),
            iterations_done: self.done,
            elapsed_seconds: start.elapsed().as_secs_f64(),
            seed,
            per_group_means,
            trial_values: Vec::new(),
            trace: self.trace,
        }
    }
}

/// Median of a non-empty list; the upper middle element for even lengths.
pub fn median(mut values: Vec<f64>) -> f64 {
    assert!(!values.is_empty(), "median of an empty list");
    values.sort_by(f64::total_cmp);
    values[values.len() / 2]
}

pub fn run_estimator(g: &BipartiteGraph, cfg: &EstimatorConfig) -> Result<Estimate> {
    cfg.validate()?;
    let kernel = Kernel::new(g, cfg.method, cfg.fast_edge_repeats)?;
    let streams = StreamFactory::new(cfg.seed);
    let pool = ScratchPool::new(g);
    let start = Instant::now();
    let mut acc = Accumulator::new(cfg.groups as usize, cfg.trace);

    let eval = |lo: u64, hi: u64| -> Result<Vec<f64>> {
        (lo..hi)
            .into_par_iter()
            .map_init(
                || pool.take(),
                |scratch, i| kernel.draw(g, scratch, &mut streams.stream(i)),
            )
            .collect()
    };

    match (cfg.total_iterations(), cfg.budget) {
        (Some(total), _) => {
            let mut lo = 0;
            while lo < total {
                let hi = total.min(lo + ITERATION_CHUNK);
                for v in eval(lo, hi)? {
                    acc.push(v, start);
                }
                lo = hi;
            }
        }
        (None, Budget::TimeBudget(secs)) => {
            let budget = Duration::from_secs_f64(secs);
            let mut lo = 0;
            while start.elapsed() < budget {
                for v in eval(lo, lo + CLOCK_STRIDE)? {
                    acc.push(v, start);
                }
                lo += CLOCK_STRIDE;
            }
        }
        (None, Budget::Iterations(_)) => unreachable!("iteration budgets have a total"),
    }
    Ok(acc.finish(cfg.seed, start))
}

/// Odd group count `t = ⌈8 ln(1/δ)⌉` for a median-of-means combiner.
pub fn groups_for_confidence(delta: f64) -> Result<u32> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("delta {delta} not in (0, 1)")));
    }
    let t = (8.0 * (1.0 / delta).ln()).ceil().max(1.0) as u32;
    Ok(if t.is_multiple_of(2) { t + 1 } else { t })
}

/// Group size `α` that makes each group mean an `(ε, 1/32)` estimate, given a
/// pilot count and pair count. Only as good as the pilot values.
pub fn group_size_for(method: Method, g: &BipartiteGraph, epsilon: f64, pilot_bfly: f64, pilot_pairs: f64) -> Result<u64> {
    if epsilon.is_nan() || epsilon <= 0.0 || pilot_bfly.is_nan() || pilot_bfly <= 0.0 || pilot_pairs < 0.0 {
        return Err(Error::invalid("epsilon and pilot count must be positive"));
    }
    let scale = match method {
        Method::Vertex => g.vertex_count() as f64,
        Method::Edge | Method::FastEdge => g.edge_count() as f64,
        Method::Wedge => g.stats().wedge_count as f64,
    };
    let alpha = 8.0 * scale / (epsilon * epsilon * pilot_bfly) * (1.0 + pilot_pairs / pilot_bfly);
    Ok(alpha.ceil().max(1.0) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_biclique, load_edge_list_str};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn c6() -> BipartiteGraph {
        load_edge_list_str("1 1\n2 1\n2 2\n3 2\n3 3\n1 3\n").unwrap()
    }

    #[test]
    fn vertex_iterations() {
        let k22 = complete_biclique(2, 2).unwrap();
        let k33 = complete_biclique(3, 3).unwrap();
        let mut r = rng(1);
        for _ in 0..20 {
            assert_eq!(vsamp_iteration(&k22, &mut r).unwrap(), 1.0);
            assert_eq!(vsamp_iteration(&k33, &mut r).unwrap(), 9.0);
        }
        let k32 = complete_biclique(3, 2).unwrap();
        let mut s = Scratch::new(&k32);
        assert_eq!(vertex_value(&k32, &mut s, VertexRef::left(0)).unwrap(), 2.5);
        assert_eq!(vertex_value(&k32, &mut s, VertexRef::right(1)).unwrap(), 3.75);
    }

    #[test]
    fn edge_iterations() {
        let mut r = rng(2);
        let k22 = complete_biclique(2, 2).unwrap();
        let k32 = complete_biclique(3, 2).unwrap();
        let star = complete_biclique(1, 5).unwrap();
        for _ in 0..20 {
            assert_eq!(esamp_iteration(&k22, &mut r).unwrap(), 1.0);
            assert_eq!(esamp_iteration(&k32, &mut r).unwrap(), 3.0);
            assert_eq!(esamp_iteration(&star, &mut r).unwrap(), 0.0);
        }
    }

    #[test]
    fn wedge_index_examples() {
        assert_eq!(WedgeIndex::build(&complete_biclique(2, 2).unwrap()).total_wedges(), 4);
        let k32 = complete_biclique(3, 2).unwrap();
        let idx = WedgeIndex::build(&k32);
        assert_eq!(idx.total_wedges(), 9);
        assert_eq!(idx.prefix(), &[1, 2, 3, 6, 9]);
        let single = load_edge_list_str("0 0\n").unwrap();
        let idx0 = WedgeIndex::build(&single);
        assert_eq!(idx0.total_wedges(), 0);
        assert!(matches!(wsamp_iteration(&single, &idx0, &mut rng(0)), Err(Error::NoWedges)));
    }

    #[test]
    fn wedge_locate_hits_each_center_by_weight() {
        let g = load_edge_list_str("0 0\n0 1\n0 2\n1 0\n1 1\n2 2\n").unwrap();
        let idx = WedgeIndex::build(&g);
        let mut hits = vec![0u64; g.vertex_count()];
        for r in 1..=idx.total_wedges() {
            hits[idx.locate(r)] += 1;
        }
        let expect: Vec<u64> = (0..g.vertex_count())
            .map(|i| {
                let v = g.vertex_at(i);
                choose2(g.degree(v.side, v.index) as u64)
            })
            .collect();
        assert_eq!(hits, expect);
    }

    #[test]
    fn wedge_iterations() {
        let k22 = complete_biclique(2, 2).unwrap();
        let k33 = complete_biclique(3, 3).unwrap();
        let (i22, i33) = (WedgeIndex::build(&k22), WedgeIndex::build(&k33));
        let k32 = complete_biclique(3, 2).unwrap();
        let i32 = WedgeIndex::build(&k32);
        let mut r = rng(3);
        for _ in 0..30 {
            assert_eq!(wsamp_iteration(&k22, &i22, &mut r).unwrap(), 1.0);
            assert_eq!(wsamp_iteration(&k33, &i33, &mut r).unwrap(), 9.0);
            let v = wsamp_iteration(&k32, &i32, &mut r).unwrap();
            assert!(v == 4.5 || v == 2.25, "{v}");
        }
    }

    #[test]
    fn fast_edge_examples() {
        let k22 = complete_biclique(2, 2).unwrap();
        let k33 = complete_biclique(3, 3).unwrap();
        let star = complete_biclique(1, 3).unwrap();
        let mut r = rng(4);
        for repeats in [1, 5] {
            let e = fast_ebfc_estimate(&k22, VertexRef::left(0), VertexRef::right(0), &mut r, repeats).unwrap();
            assert_eq!(e, 1.0);
            let e = fast_ebfc_estimate(&k33, VertexRef::right(2), VertexRef::left(1), &mut r, repeats).unwrap();
            assert_eq!(e, 4.0);
            let e = fast_ebfc_estimate(&star, VertexRef::left(0), VertexRef::right(1), &mut r, repeats).unwrap();
            assert_eq!(e, 0.0);
        }
        for _ in 0..10 {
            assert_eq!(fast_esamp_iteration(&k22, &mut r, 3).unwrap(), 1.0);
            assert_eq!(fast_esamp_iteration(&k33, &mut r, 3).unwrap(), 9.0);
            assert_eq!(fast_esamp_iteration(&c6(), &mut r, 10).unwrap(), 0.0);
        }
        assert!(matches!(
            fast_ebfc_estimate(&star, VertexRef::left(0), VertexRef::left(0), &mut r, 1),
            Err(Error::InvalidArgument(_))
        ));
        assert!(fast_ebfc_estimate(&k22, VertexRef::left(0), VertexRef::right(0), &mut r, 0).is_err());
    }

    #[test]
    fn runner_plain_mean() {
        let k22 = complete_biclique(2, 2).unwrap();
        let est = run_estimator(&k22, &EstimatorConfig::new(Method::Vertex, 10, 7)).unwrap();
        assert_eq!(est.value, 1.0);
        assert_eq!(est.iterations_done, 10);
        assert!(est.per_group_means.is_empty());
    }

    #[test]
    fn runner_median_of_three_groups() {
        // α = 1, t = 3: one wedge per group; K_{3,2} wedge values are 4.5 or 2.25.
        let k32 = complete_biclique(3, 2).unwrap();
        let mut cfg = EstimatorConfig::new(Method::Wedge, 1, 0);
        cfg.groups = 3;
        for seed in 0..50 {
            cfg.seed = seed;
            let est = run_estimator(&k32, &cfg).unwrap();
            assert_eq!(est.iterations_done, 3);
            let mut means = est.per_group_means.clone();
            means.sort_by(f64::total_cmp);
            assert_eq!(est.value, means[1]);
        }
        assert_eq!(median(vec![2.25, 4.5, 2.25]), 2.25);
    }

    #[test]
    fn runner_is_deterministic_and_traces() {
        let g = crate::graph::random_bipartite(12, 12, 0.5, 9).unwrap();
        let mut cfg = EstimatorConfig::new(Method::Edge, 100, 5);
        cfg.trace = true;
        let a = run_estimator(&g, &cfg).unwrap();
        let b = run_estimator(&g, &cfg).unwrap();
        assert_eq!(a.value, b.value);
        let iters: Vec<u64> = a.trace.as_ref().unwrap().iter().map(|p| p.iterations).collect();
        assert_eq!(iters, vec![1, 2, 4, 8, 16, 32, 64, 100]);
        assert_eq!(a.trace.unwrap().last().unwrap().estimate, a.value);
    }

    #[test]
    fn runner_rejects_bad_configs() {
        let k22 = complete_biclique(2, 2).unwrap();
        let mut cfg = EstimatorConfig::new(Method::Vertex, 0, 0);
        assert!(run_estimator(&k22, &cfg).is_err());
        cfg.budget = Budget::Iterations(5);
        cfg.groups = 2;
        assert!(run_estimator(&k22, &cfg).is_err());
        cfg.groups = 1;
        cfg.budget = Budget::TimeBudget(0.0);
        assert!(run_estimator(&k22, &cfg).is_err());
        let single = load_edge_list_str("0 0\n").unwrap();
        let cfg = EstimatorConfig::new(Method::Wedge, 5, 0);
        assert!(matches!(run_estimator(&single, &cfg), Err(Error::NoWedges)));
    }

    #[test]
    fn time_budget_runs_whole_strides() {
        let k33 = complete_biclique(3, 3).unwrap();
        let mut cfg = EstimatorConfig::new(Method::Wedge, 1, 0);
        cfg.budget = Budget::TimeBudget(0.02);
        let est = run_estimator(&k33, &cfg).unwrap();
        assert!(est.iterations_done >= CLOCK_STRIDE);
        assert_eq!(est.iterations_done % CLOCK_STRIDE, 0);
        assert_eq!(est.value, 9.0);
    }

    #[test]
    fn confidence_helpers() {
        assert_eq!(groups_for_confidence(0.5).unwrap(), 7);
        let t = groups_for_confidence(0.01).unwrap();
        assert_eq!(t % 2, 1);
        assert!(t >= 37);
        assert!(groups_for_confidence(0.0).is_err());
        let k33 = complete_biclique(3, 3).unwrap();
        // 8 · 6 / (0.25 · 9) · (1 + 0) = 21.33…
        assert_eq!(group_size_for(Method::Vertex, &k33, 0.5, 9.0, 0.0).unwrap(), 22);
    }

    #[test]
    fn method_names_round_trip() {
        for m in [Method::Vertex, Method::Edge, Method::Wedge, Method::FastEdge] {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
        assert!("triangle".parse::<Method>().is_err());
    }
}
