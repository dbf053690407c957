//! Ground truth for small graphs: brute-force butterfly enumeration, the
//! classification of butterfly pairs by what they share, the theoretical
//! per-iteration variance bounds built from those pair counts, and exact
//! moments of every estimator obtained by walking its whole sample space.
//!
//! Nothing here depends on the exact counting module; it works from
//! pairwise neighborhood intersections only.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Side, VertexRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleGuards {
    pub max_side: usize,
    pub max_butterflies: u64,
}

impl Default for OracleGuards {
    fn default() -> Self {
        OracleGuards {
            max_side: 64,
            max_butterflies: 2000,
        }
    }
}

/// Canonical butterfly: both vertex pairs sorted ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Butterfly {
    pub left_pair: [u32; 2],
    pub right_pair: [u32; 2],
}

impl Butterfly {
    fn shared(a: [u32; 2], b: [u32; 2]) -> usize {
        a.iter().filter(|x| b.contains(x)).count()
    }

    /// `(shared vertices, shared edges)` with another butterfly. Both are
    /// complete 2×2 bicliques, so the shared edges are exactly the pairs of
    /// a shared left and a shared right vertex.
    pub fn overlap(&self, other: &Butterfly) -> (usize, usize) {
        let l = Butterfly::shared(self.left_pair, other.left_pair);
        let r = Butterfly::shared(self.right_pair, other.right_pair);
        (l + r, l * r)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PairTypeCounts {
    pub butterflies: u64,
    pub p_0v: u64,
    pub p_1v: u64,
    pub p_2v: u64,
    pub p_1e: u64,
    pub p_1w: u64,
}

impl PairTypeCounts {
    /// Pairs sharing at least one vertex.
    pub fn p_v(&self) -> u64 {
        self.p_1v + self.p_2v + self.p_1e + self.p_1w
    }

    /// Pairs sharing at least one edge.
    pub fn p_e(&self) -> u64 {
        self.p_1e + self.p_1w
    }

    pub fn total(&self) -> u64 {
        self.p_0v + self.p_1v + self.p_2v + self.p_1e + self.p_1w
    }
}

fn check_sides(g: &BipartiteGraph, guards: &OracleGuards) -> Result<()> {
    for side in [Side::Left, Side::Right] {
        let n = g.count(side);
        if n > guards.max_side {
            return Err(Error::SizeGuard {
                what: "vertices per side",
                actual: n as u64,
                limit: guards.max_side as u64,
            });
        }
    }
    Ok(())
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub fn enumerate_butterflies(g: &BipartiteGraph) -> Result<Vec<Butterfly>> {
    enumerate_butterflies_with(g, &OracleGuards::default())
}

/// Every butterfly, ordered by left pair then right pair.
pub fn enumerate_butterflies_with(g: &BipartiteGraph, guards: &OracleGuards) -> Result<Vec<Butterfly>> {
    check_sides(g, guards)?;
    let nl = g.left_count() as u32;
    let mut out = Vec::new();
    for a in 0..nl {
        for b in a + 1..nl {
            let common = intersect(g.neighbors(Side::Left, a), g.neighbors(Side::Left, b));
            for (i, &x) in common.iter().enumerate() {
                for &y in &common[i + 1..] {
                    out.push(Butterfly {
                        left_pair: [a, b],
                        right_pair: [x, y],
                    });
                }
            }
        }
    }
    Ok(out)
}

pub fn brute_force_count(g: &BipartiteGraph) -> Result<u64> {
    brute_force_count_with(g, &OracleGuards::default())
}

pub fn brute_force_count_with(g: &BipartiteGraph, guards: &OracleGuards) -> Result<u64> {
    check_sides(g, guards)?;
    let nl = g.left_count() as u32;
    let mut total = 0u64;
    for a in 0..nl {
        for b in a + 1..nl {
            let k = intersect(g.neighbors(Side::Left, a), g.neighbors(Side::Left, b)).len() as u64;
            total += k * k.saturating_sub(1) / 2;
        }
    }
    Ok(total)
}

pub fn classify_pairs(g: &BipartiteGraph) -> Result<PairTypeCounts> {
    classify_pairs_with(g, &OracleGuards::default())
}

pub fn classify_pairs_with(g: &BipartiteGraph, guards: &OracleGuards) -> Result<PairTypeCounts> {
    check_sides(g, guards)?;
    let bfly = brute_force_count_with(g, guards)?;
    if bfly > guards.max_butterflies {
        return Err(Error::SizeGuard {
            what: "butterflies",
            actual: bfly,
            limit: guards.max_butterflies,
        });
    }
    let all = enumerate_butterflies_with(g, guards)?;
    let mut counts = PairTypeCounts {
        butterflies: all.len() as u64,
        ..PairTypeCounts::default()
    };
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            match a.overlap(b) {
                (0, 0) => counts.p_0v += 1,
                (1, 0) => counts.p_1v += 1,
                (2, 0) => counts.p_2v += 1,
                (2, 1) => counts.p_1e += 1,
                (3, 2) => counts.p_1w += 1,
                (vertices, edges) => return Err(Error::ImpossiblePairType { vertices, edges }),
            }
        }
    }
    Ok(counts)
}

/// Per-iteration variance upper bounds expressed through pair counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceBounds {
    /// `n (bfly + p_V) / 4`
    pub vsamp: f64,
    /// `m (bfly + p_E) / 4`
    pub esamp: f64,
    /// `∧ (bfly + p_1w) / 4`
    pub wsamp: f64,
    /// `bfly p⁻⁴ + p_1w p⁻² + p_1e p⁻¹`
    pub espar: Option<f64>,
    /// `bfly p⁻³ + p_1w p⁻² + p_1e p⁻¹ + p_2v p⁻¹`
    pub clrspar: Option<f64>,
}

/// `p` is the edge retention probability for the edge sparsifier and `1/N`
/// for the color sparsifier; the sparsifier bounds are omitted without it.
pub fn variance_bounds(g: &BipartiteGraph, counts: &PairTypeCounts, p: Option<f64>) -> VarianceBounds {
    let s = g.stats();
    let b = counts.butterflies as f64;
    let (p1w, p1e, p2v) = (counts.p_1w as f64, counts.p_1e as f64, counts.p_2v as f64);
    VarianceBounds {
        vsamp: s.n as f64 * (b + counts.p_v() as f64) / 4.0,
        esamp: s.m as f64 * (b + counts.p_e() as f64) / 4.0,
        wsamp: s.wedge_count as f64 * (b + p1w) / 4.0,
        espar: p.map(|p| b * p.powi(-4) + p1w * p.powi(-2) + p1e / p),
        clrspar: p.map(|p| b * p.powi(-3) + p1w * p.powi(-2) + p1e / p + p2v / p),
    }
}

/// The other side of [`variance_bounds`]: the exact variances that follow
/// from the same per-pair covariances when the covariance sum runs over
/// ordered pairs (each unordered pair contributes twice).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairVariances {
    pub vsamp: f64,
    pub esamp: f64,
    pub wsamp: f64,
    pub espar: Option<f64>,
    pub clrspar: Option<f64>,
}

pub fn pair_variances(g: &BipartiteGraph, counts: &PairTypeCounts, p: Option<f64>) -> PairVariances {
    let s = g.stats();
    let b = counts.butterflies as f64;
    let (p1v, p2v, p1e, p1w) = (
        counts.p_1v as f64,
        counts.p_2v as f64,
        counts.p_1e as f64,
        counts.p_1w as f64,
    );
    let (n, m, h) = (s.n as f64, s.m as f64, s.wedge_count as f64);
    PairVariances {
        vsamp: n / 4.0 * b - b * b + n / 8.0 * (p1v + 2.0 * p2v + 2.0 * p1e + 3.0 * p1w),
        esamp: m / 4.0 * b - b * b + m / 8.0 * (p1e + 2.0 * p1w),
        wsamp: h / 4.0 * b - b * b + h / 8.0 * p1w,
        espar: p.map(|p| {
            b * (p.powi(-4) - 1.0) + 2.0 * p1e * (1.0 / p - 1.0) + 2.0 * p1w * (p.powi(-2) - 1.0)
        }),
        clrspar: p.map(|p| {
            b * (p.powi(-3) - 1.0) + 2.0 * (p2v + p1e) * (1.0 / p - 1.0) + 2.0 * p1w * (p.powi(-2) - 1.0)
        }),
    }
}

/// Mean and variance of a discrete distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// Accumulates `(weight, value)` outcomes.
#[derive(Debug, Default)]
struct MomentSum {
    weight: f64,
    first: f64,
    second: f64,
}

impl MomentSum {
    fn add(&mut self, weight: f64, value: f64) {
        self.weight += weight;
        self.first += weight * value;
        self.second += weight * value * value;
    }

    fn finish(self) -> Moments {
        let mean = self.first / self.weight;
        Moments {
            mean,
            variance: (self.second / self.weight - mean * mean).max(0.0),
        }
    }
}

/// Exact moments of each estimator over its complete sample space.
///
/// Outcome values come from the estimators' own value functions; outcome
/// weights are derived here from degrees alone.
pub mod exhaustive {
    use super::*;
    use crate::local::Scratch;
    use crate::sampling::{edge_value, fast_trial_value, vertex_value, wedge_value};
    use crate::sparsify::{color_estimate_from_coloring, edge_estimate_from_mask};

    pub const MAX_SUBSETS_LOG2: u32 = 20;
    pub const MAX_COLORINGS: u64 = 5_000_000;

    pub fn vsamp(g: &BipartiteGraph) -> Result<Moments> {
        let mut s = Scratch::new(g);
        let mut acc = MomentSum::default();
        for i in 0..g.vertex_count() {
            acc.add(1.0, vertex_value(g, &mut s, g.vertex_at(i))?);
        }
        Ok(acc.finish())
    }

    pub fn esamp(g: &BipartiteGraph) -> Result<Moments> {
        let mut s = Scratch::new(g);
        let mut acc = MomentSum::default();
        for (l, r) in g.edges() {
            acc.add(1.0, edge_value(g, &mut s, l, r)?);
        }
        Ok(acc.finish())
    }

    /// Every ordered wedge (center, a, b) with `a ≠ b`, weighted
    /// `C(d,2)/∧ · 1/(d (d − 1))`, which equals `1 / (2∧)` per ordered pair.
    pub fn wsamp(g: &BipartiteGraph) -> Result<Moments> {
        let total: u64 = (0..g.vertex_count())
            .map(|i| {
                let v = g.vertex_at(i);
                let d = g.degree(v.side, v.index) as u64;
                d * d.saturating_sub(1) / 2
            })
            .sum();
        if total == 0 {
            return Err(Error::NoWedges);
        }
        let mut s = Scratch::new(g);
        let mut acc = MomentSum::default();
        for i in 0..g.vertex_count() {
            let c = g.vertex_at(i);
            let row = g.neighbors(c.side, c.index);
            let d = row.len() as f64;
            if row.len() < 2 {
                continue;
            }
            let center_p = d * (d - 1.0) / 2.0 / total as f64;
            for (x, &a) in row.iter().enumerate() {
                for (y, &b) in row.iter().enumerate() {
                    if x != y {
                        let w = center_p / (d * (d - 1.0));
                        acc.add(w, wedge_value(g, &mut s, total, c, a, b));
                    }
                }
            }
        }
        Ok(acc.finish())
    }

    /// One Fast-eBFC trial on a fixed edge, over all `(w, x)` choices.
    pub fn fast_ebfc(g: &BipartiteGraph, left: u32, right: u32) -> Result<Moments> {
        crate::local::edge_endpoints(g, VertexRef::left(left), VertexRef::right(right))?;
        let lrow = g.neighbors(Side::Left, left);
        let rrow = g.neighbors(Side::Right, right);
        let mut acc = MomentSum::default();
        if lrow.len() < 2 || rrow.len() < 2 {
            acc.add(1.0, 0.0);
            return Ok(acc.finish());
        }
        for &w in lrow.iter().filter(|&&w| w != right) {
            for &x in rrow.iter().filter(|&&x| x != left) {
                acc.add(1.0, fast_trial_value(g, left, right, w, x));
            }
        }
        Ok(acc.finish())
    }

    /// ESamp with one Fast-eBFC trial per sampled edge: uniform edge, then
    /// uniform `(w, x)`.
    pub fn fast_esamp(g: &BipartiteGraph) -> Result<Moments> {
        let m = g.edge_count() as f64;
        let mut acc = MomentSum::default();
        for (l, r) in g.edges() {
            let lrow = g.neighbors(Side::Left, l);
            let rrow = g.neighbors(Side::Right, r);
            if lrow.len() < 2 || rrow.len() < 2 {
                acc.add(1.0 / m, 0.0);
                continue;
            }
            let w_of = 1.0 / m / ((lrow.len() - 1) * (rrow.len() - 1)) as f64;
            for &w in lrow.iter().filter(|&&w| w != r) {
                for &x in rrow.iter().filter(|&&x| x != l) {
                    acc.add(w_of, fast_trial_value(g, l, r, w, x) * m / 4.0);
                }
            }
        }
        Ok(acc.finish())
    }

    /// All `2^m` retained-edge subsets weighted `p^k (1 − p)^(m − k)`.
    pub fn espar(g: &BipartiteGraph, p: f64) -> Result<Moments> {
        let m = g.edge_count() as u32;
        if m > MAX_SUBSETS_LOG2 {
            return Err(Error::SizeGuard {
                what: "edges for subset enumeration",
                actual: m as u64,
                limit: MAX_SUBSETS_LOG2 as u64,
            });
        }
        let mut acc = MomentSum::default();
        let mut mask = vec![false; m as usize];
        for bits in 0u64..(1u64 << m) {
            for (k, slot) in mask.iter_mut().enumerate() {
                *slot = bits >> k & 1 == 1;
            }
            let kept = bits.count_ones() as i32;
            let w = p.powi(kept) * (1.0 - p).powi(m as i32 - kept);
            if w == 0.0 {
                continue;
            }
            acc.add(w, edge_estimate_from_mask(g, &mask, p)?);
        }
        Ok(acc.finish())
    }

    /// All `N^n` colorings, each with weight `N^-n`.
    pub fn clrspar(g: &BipartiteGraph, colors: u32) -> Result<Moments> {
        let n = g.vertex_count() as u32;
        let outcomes = (colors as u64).checked_pow(n).unwrap_or(u64::MAX);
        if outcomes > MAX_COLORINGS {
            return Err(Error::SizeGuard {
                what: "colorings",
                actual: outcomes,
                limit: MAX_COLORINGS,
            });
        }
        let mut acc = MomentSum::default();
        let mut coloring = vec![0u32; n as usize];
        for code in 0..outcomes {
            let mut c = code;
            for slot in coloring.iter_mut() {
                *slot = (c % colors as u64) as u32;
                c /= colors as u64;
            }
            acc.add(1.0, color_estimate_from_coloring(g, &coloring, colors)?);
        }
        Ok(acc.finish())
    }
}
