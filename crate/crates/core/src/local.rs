//! Butterflies through a single vertex or a single edge.

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Side, VertexRef};

/// Reusable per-thread buffers for local counting.
///
/// Counters are reset through a touched list and membership marks through a
/// generation stamp, so repeated queries cost only the neighborhood they walk.
#[derive(Debug, Clone)]
pub struct Scratch {
    counter: [Vec<u32>; 2],
    touched: Vec<u32>,
    marks: [Vec<u32>; 2],
    stamp: u32,
}

fn slot(side: Side) -> usize {
    match side {
        Side::Left => 0,
        Side::Right => 1,
    }
}

impl Scratch {
    pub fn new(g: &BipartiteGraph) -> Self {
        Scratch {
            counter: [vec![0; g.left_count()], vec![0; g.right_count()]],
            touched: Vec::new(),
            marks: [vec![0; g.left_count()], vec![0; g.right_count()]],
            stamp: 0,
        }
    }

    fn ensure(&mut self, g: &BipartiteGraph) {
        for side in [Side::Left, Side::Right] {
            let n = g.count(side);
            let i = slot(side);
            if self.counter[i].len() < n {
                self.counter[i].resize(n, 0);
                self.marks[i].resize(n, 0);
            }
        }
    }

    fn next_stamp(&mut self) -> u32 {
        if self.stamp == u32::MAX {
            for m in &mut self.marks {
                m.fill(0);
            }
            self.stamp = 0;
        }
        self.stamp += 1;
        self.stamp
    }

    fn mark_all(&mut self, side: Side, members: &[u32]) -> u32 {
        let stamp = self.next_stamp();
        let marks = &mut self.marks[slot(side)];
        for &x in members {
            marks[x as usize] = stamp;
        }
        stamp
    }

    /// `bfly_v`: sum over distance-2 neighbors `w` of `C(|Γ_v ∩ Γ_w|, 2)`.
    pub fn vertex(&mut self, g: &BipartiteGraph, v: VertexRef) -> Result<u64> {
        check_vertex(g, v)?;
        self.ensure(g);
        let counter = &mut self.counter[slot(v.side)];
        for &u in g.neighbors(v.side, v.index) {
            for &w in g.neighbors(v.side.opposite(), u) {
                if w != v.index {
                    let c = &mut counter[w as usize];
                    if *c == 0 {
                        self.touched.push(w);
                    }
                    *c += 1;
                }
            }
        }
        let mut total = 0u64;
        for w in self.touched.drain(..) {
            let c = std::mem::take(&mut counter[w as usize]) as u64;
            total += c * (c - 1) / 2;
        }
        Ok(total)
    }

    /// `bfly_e` for the edge between `a` and `b` (either order).
    ///
    /// Walks two hops from the lower-degree endpoint and counts the paths
    /// `a - w - x` that land in `Γ_b \ {a}` with `w ≠ b`; each such path plus
    /// the edge `x - b` closes exactly one butterfly through the edge.
    pub fn edge(&mut self, g: &BipartiteGraph, a: VertexRef, b: VertexRef) -> Result<u64> {
        let (left, right) = edge_endpoints(g, a, b)?;
        self.ensure(g);
        let (lo, hi) = if g.degree(Side::Left, left) <= g.degree(Side::Right, right) {
            (VertexRef::left(left), VertexRef::right(right))
        } else {
            (VertexRef::right(right), VertexRef::left(left))
        };
        let stamp = self.mark_all(lo.side, g.neighbors(hi.side, hi.index));
        let marks = &self.marks[slot(lo.side)];
        let mut total = 0u64;
        for &w in g.neighbors(lo.side, lo.index) {
            if w == hi.index {
                continue;
            }
            for &x in g.neighbors(hi.side, w) {
                if x != lo.index && marks[x as usize] == stamp {
                    total += 1;
                }
            }
        }
        Ok(total)
    }

    /// `|Γ_a ∩ Γ_b|` for two vertices on `side`.
    pub fn common_neighbors(&mut self, g: &BipartiteGraph, side: Side, a: u32, b: u32) -> usize {
        self.ensure(g);
        let (small, large) = {
            let (na, nb) = (g.neighbors(side, a), g.neighbors(side, b));
            if na.len() <= nb.len() {
                (na, nb)
            } else {
                (nb, na)
            }
        };
        let other = side.opposite();
        let stamp = self.mark_all(other, small);
        let marks = &self.marks[slot(other)];
        large.iter().filter(|&&x| marks[x as usize] == stamp).count()
    }
}

fn check_vertex(g: &BipartiteGraph, v: VertexRef) -> Result<()> {
    if g.contains(v) {
        Ok(())
    } else {
        Err(Error::UnknownVertex {
            side: v.side,
            index: v.index as u64,
        })
    }
}

/// Normalizes an endpoint pair to dense `(left, right)` and checks the edge.
pub(crate) fn edge_endpoints(g: &BipartiteGraph, a: VertexRef, b: VertexRef) -> Result<(u32, u32)> {
    if a.side == b.side {
        return Err(Error::invalid(format!(
            "edge endpoints {a} and {b} lie on the same side"
        )));
    }
    check_vertex(g, a)?;
    check_vertex(g, b)?;
    let (l, r) = match a.side {
        Side::Left => (a.index, b.index),
        Side::Right => (b.index, a.index),
    };
    if !g.has_edge(l, r) {
        return Err(Error::NotAnEdge {
            left: l as u64,
            right: r as u64,
        });
    }
    Ok((l, r))
}

pub fn count_per_vertex(g: &BipartiteGraph, v: VertexRef) -> Result<u64> {
    Scratch::new(g).vertex(g, v)
}

pub fn count_per_edge(g: &BipartiteGraph, u: VertexRef, v: VertexRef) -> Result<u64> {
    Scratch::new(g).edge(g, u, v)
}
