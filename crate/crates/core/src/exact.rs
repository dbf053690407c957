//! Exact global butterfly counting.
//!
//! For every anchor `v` on the iteration side, the number of length-2 paths
//! to each same-side `w ≺ v` is accumulated; every such `w` reached by `c`
//! paths closes `C(c, 2)` butterflies. The iteration side is the one whose
//! opposite side has the smaller sum of squared degrees, since that sum
//! bounds the number of paths walked.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Side};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SideChoice {
    pub chosen: Side,
    pub cost_left: f64,
    pub cost_right: f64,
}

/// Loop counters of one exact run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Work {
    /// Anchors processed (vertices of the iteration side).
    pub anchors: u64,
    /// Counter increments, one per path `v - u - w` with `w ≺ v`.
    pub counter_updates: u64,
}

fn sum_deg_sq(g: &BipartiteGraph, side: Side) -> f64 {
    g.degrees(side).map(|d| (d as f64) * (d as f64)).sum()
}

pub fn choose_side(g: &BipartiteGraph) -> SideChoice {
    let cost_left = sum_deg_sq(g, Side::Left);
    let cost_right = sum_deg_sq(g, Side::Right);
    let chosen = if cost_left < cost_right {
        Side::Right
    } else {
        Side::Left
    };
    SideChoice {
        chosen,
        cost_left,
        cost_right,
    }
}

#[inline]
pub(crate) fn checked_choose2(c: u64) -> Result<u64> {
    c.checked_mul(c.saturating_sub(1))
        .map(|x| x / 2)
        .ok_or(Error::Overflow)
}

pub fn exact_count(g: &BipartiteGraph) -> Result<u64> {
    exact_count_side(g, choose_side(g).chosen)
}

pub fn exact_count_side(g: &BipartiteGraph, iterate_over: Side) -> Result<u64> {
    exact_count_with_work(g, iterate_over).map(|(count, _)| count)
}

pub fn exact_count_with_work(g: &BipartiteGraph, iterate_over: Side) -> Result<(u64, Work)> {
    let anchors = g.count(iterate_over);
    let mid = iterate_over.opposite();
    let mut counter = vec![0u32; anchors];
    let mut touched: Vec<u32> = Vec::new();
    let mut total: u64 = 0;
    let mut work = Work::default();

    for v in 0..anchors as u32 {
        for &u in g.neighbors(iterate_over, v) {
            let row = g.neighbors(mid, u);
            // Rows are sorted, so the w ≺ v candidates form a prefix.
            let end = row.partition_point(|&w| w < v);
            for &w in &row[..end] {
                let slot = &mut counter[w as usize];
                if *slot == 0 {
                    touched.push(w);
                }
                *slot += 1;
            }
            work.counter_updates += end as u64;
        }
        for w in touched.drain(..) {
            let c = std::mem::take(&mut counter[w as usize]);
            total = total
                .checked_add(checked_choose2(c as u64)?)
                .ok_or(Error::Overflow)?;
        }
        work.anchors += 1;
    }
    Ok((total, work))
}
