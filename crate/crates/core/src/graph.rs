//! Simple bipartite graphs stored as two compressed adjacency arrays.
//!
//! Vertices are addressed by a side and a dense 0-based index within that
//! side. The external identifiers seen at load time are kept so a graph can
//! be written back out in the same id space.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "left" | "l" => Ok(Side::Left),
            "right" | "r" => Ok(Side::Right),
            other => Err(Error::invalid(format!("unknown side {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexRef {
    pub side: Side,
    pub index: u32,
}

impl VertexRef {
    pub fn new(side: Side, index: u32) -> Self {
        VertexRef { side, index }
    }

    pub fn left(index: u32) -> Self {
        VertexRef::new(Side::Left, index)
    }

    pub fn right(index: u32) -> Self {
        VertexRef::new(Side::Right, index)
    }
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.side, self.index)
    }
}

/// `side:index`, e.g. `left:0`.
impl FromStr for VertexRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (side, index) = s
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("expected side:index, got {s:?}")))?;
        let index = index
            .trim()
            .parse::<u32>()
            .map_err(|e| Error::invalid(format!("bad vertex index {index:?}: {e}")))?;
        Ok(VertexRef::new(side.trim().parse()?, index))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Csr {
    fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    fn row(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    #[inline]
    fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }
}

/// Immutable simple bipartite graph.
///
/// Every adjacency list is sorted ascending and duplicate free, both sides
/// store the edge set, and no vertex has degree zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: Csr,
    right: Csr,
    left_ids: Vec<u64>,
    right_ids: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub n: u64,
    pub left_count: u64,
    pub right_count: u64,
    pub m: u64,
    pub sum_deg_sq_left: u128,
    pub sum_deg_sq_right: u128,
    pub wedge_count: u64,
    pub max_degree: u64,
}

#[derive(Debug, Clone)]
pub struct ParseOptions {
    /// Lines whose first non-blank character is one of these are skipped.
    pub comment_prefixes: Vec<char>,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            comment_prefixes: vec!['%', '#'],
        }
    }
}

struct IdMap {
    index: HashMap<u64, u32>,
    ids: Vec<u64>,
}

impl IdMap {
    fn new() -> Self {
        IdMap {
            index: HashMap::new(),
            ids: Vec::new(),
        }
    }

    fn intern(&mut self, id: u64) -> u32 {
        let next = self.ids.len() as u32;
        *self.index.entry(id).or_insert_with(|| {
            self.ids.push(id);
            next
        })
    }
}

#[inline]
pub(crate) fn choose2(d: u64) -> u64 {
    d * d.saturating_sub(1) / 2
}

impl BipartiteGraph {
    /// Builds a graph from `(left_id, right_id)` pairs in external id space.
    ///
    /// Dense indices follow first appearance, duplicate pairs collapse, and
    /// only ids that occur in some edge become vertices.
    pub fn from_edges<I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut lmap = IdMap::new();
        let mut rmap = IdMap::new();
        let mut dense: Vec<(u32, u32)> = edges
            .into_iter()
            .map(|(l, r)| (lmap.intern(l), rmap.intern(r)))
            .collect();
        if dense.is_empty() {
            return Err(Error::EmptyGraph);
        }
        if lmap.ids.len() > u32::MAX as usize || rmap.ids.len() > u32::MAX as usize {
            return Err(Error::invalid("more than 2^32 vertices on one side"));
        }
        dense.sort_unstable();
        dense.dedup();
        Ok(Self::from_sorted_dense(lmap.ids, rmap.ids, &dense))
    }

    // `dense` must be sorted, deduplicated and touch every index on both sides.
    fn from_sorted_dense(left_ids: Vec<u64>, right_ids: Vec<u64>, dense: &[(u32, u32)]) -> Self {
        let (nl, nr) = (left_ids.len(), right_ids.len());
        let mut left_offsets = vec![0usize; nl + 1];
        let mut right_offsets = vec![0usize; nr + 1];
        for &(l, r) in dense {
            left_offsets[l as usize + 1] += 1;
            right_offsets[r as usize + 1] += 1;
        }
        for i in 0..nl {
            left_offsets[i + 1] += left_offsets[i];
        }
        for i in 0..nr {
            right_offsets[i + 1] += right_offsets[i];
        }
        let left_targets: Vec<u32> = dense.iter().map(|&(_, r)| r).collect();
        // Pairs arrive in left-major order, so each right row fills ascending.
        let mut right_targets = vec![0u32; dense.len()];
        let mut cursor = right_offsets.clone();
        for &(l, r) in dense {
            right_targets[cursor[r as usize]] = l;
            cursor[r as usize] += 1;
        }
        BipartiteGraph {
            left: Csr {
                offsets: left_offsets,
                targets: left_targets,
            },
            right: Csr {
                offsets: right_offsets,
                targets: right_targets,
            },
            left_ids,
            right_ids,
        }
    }

    fn csr(&self, side: Side) -> &Csr {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn left_count(&self) -> usize {
        self.left.len()
    }

    pub fn right_count(&self) -> usize {
        self.right.len()
    }

    pub fn count(&self, side: Side) -> usize {
        self.csr(side).len()
    }

    pub fn vertex_count(&self) -> usize {
        self.left_count() + self.right_count()
    }

    pub fn edge_count(&self) -> usize {
        self.left.targets.len()
    }

    #[inline]
    pub fn neighbors(&self, side: Side, index: u32) -> &[u32] {
        self.csr(side).row(index as usize)
    }

    #[inline]
    pub fn degree(&self, side: Side, index: u32) -> usize {
        self.csr(side).degree(index as usize)
    }

    pub fn degrees(&self, side: Side) -> impl Iterator<Item = usize> + '_ {
        let csr = self.csr(side);
        (0..csr.len()).map(move |i| csr.degree(i))
    }

    pub fn contains(&self, v: VertexRef) -> bool {
        (v.index as usize) < self.count(v.side)
    }

    pub fn has_edge(&self, left: u32, right: u32) -> bool {
        if left as usize >= self.left_count() || right as usize >= self.right_count() {
            return false;
        }
        let (row, key) = if self.degree(Side::Left, left) <= self.degree(Side::Right, right) {
            (self.neighbors(Side::Left, left), right)
        } else {
            (self.neighbors(Side::Right, right), left)
        };
        row.binary_search(&key).is_ok()
    }

    pub fn ids(&self, side: Side) -> &[u64] {
        match side {
            Side::Left => &self.left_ids,
            Side::Right => &self.right_ids,
        }
    }

    pub fn external_id(&self, v: VertexRef) -> u64 {
        self.ids(v.side)[v.index as usize]
    }

    /// The `k`-th edge in left-major order, as dense `(left, right)`.
    pub fn edge_at(&self, k: usize) -> (u32, u32) {
        let l = self.left.offsets.partition_point(|&o| o <= k) - 1;
        (l as u32, self.left.targets[k])
    }

    /// Edges in left-major order; position in this iterator is the edge index.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.left_count()).flat_map(move |l| {
            self.left
                .row(l)
                .iter()
                .map(move |&r| (l as u32, r))
        })
    }

    /// Vertices enumerated left side first; the position is the global index.
    pub fn vertex_at(&self, global: usize) -> VertexRef {
        let nl = self.left_count();
        if global < nl {
            VertexRef::left(global as u32)
        } else {
            VertexRef::right((global - nl) as u32)
        }
    }

    pub fn global_index(&self, v: VertexRef) -> usize {
        match v.side {
            Side::Left => v.index as usize,
            Side::Right => self.left_count() + v.index as usize,
        }
    }

    pub fn max_degree(&self) -> usize {
        self.degrees(Side::Left)
            .chain(self.degrees(Side::Right))
            .max()
            .unwrap_or(0)
    }

    /// Subgraph on the edges for which `keep(edge_index, left, right)` holds,
    /// with degree-zero vertices dropped. `None` when nothing survives.
    pub fn retain_edges<F>(&self, mut keep: F) -> Option<BipartiteGraph>
    where
        F: FnMut(usize, u32, u32) -> bool,
    {
        let kept: Vec<(u64, u64)> = self
            .edges()
            .enumerate()
            .filter(|&(k, (l, r))| keep(k, l, r))
            .map(|(_, (l, r))| (self.left_ids[l as usize], self.right_ids[r as usize]))
            .collect();
        BipartiteGraph::from_edges(kept).ok()
    }

    pub fn stats(&self) -> GraphStats {
        let mut s = GraphStats {
            n: self.vertex_count() as u64,
            left_count: self.left_count() as u64,
            right_count: self.right_count() as u64,
            m: self.edge_count() as u64,
            sum_deg_sq_left: 0,
            sum_deg_sq_right: 0,
            wedge_count: 0,
            max_degree: 0,
        };
        for (side, acc) in [
            (Side::Left, &mut s.sum_deg_sq_left),
            (Side::Right, &mut s.sum_deg_sq_right),
        ] {
            for d in self.degrees(side) {
                let d = d as u64;
                *acc += (d as u128) * (d as u128);
                s.wedge_count += choose2(d);
                s.max_degree = s.max_degree.max(d);
            }
        }
        s
    }

    /// Writes the `% bip` edge-list format, one `left_id right_id` per line.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "% bip")?;
        for (l, r) in self.edges() {
            writeln!(out, "{} {}", self.left_ids[l as usize], self.right_ids[r as usize])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_edge_list_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }
}

/// Parses a whitespace separated edge list. The first two tokens of each
/// data line are the left and right ids; further tokens are ignored.
pub fn load_edge_list<R: BufRead>(source: R, options: &ParseOptions) -> Result<BipartiteGraph> {
    let mut edges = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(c) = trimmed.chars().next() {
            if options.comment_prefixes.contains(&c) {
                continue;
            }
        }
        let mut tokens = trimmed.split_whitespace();
        let mut next_id = |what: &str| -> Result<u64> {
            let tok = tokens.next().ok_or_else(|| Error::Parse {
                line: lineno,
                message: format!("missing {what} id"),
            })?;
            tok.parse::<u64>().map_err(|e| Error::Parse {
                line: lineno,
                message: format!("bad {what} id {tok:?}: {e}"),
            })
        };
        let l = next_id("left")?;
        let r = next_id("right")?;
        edges.push((l, r));
    }
    BipartiteGraph::from_edges(edges)
}

pub fn load_edge_list_str(text: &str) -> Result<BipartiteGraph> {
    load_edge_list(text.as_bytes(), &ParseOptions::default())
}

pub fn load_edge_list_path(path: impl AsRef<std::path::Path>) -> Result<BipartiteGraph> {
    let file = std::fs::File::open(path)?;
    load_edge_list(std::io::BufReader::new(file), &ParseOptions::default())
}

/// `K_{a,b}` with external ids `0..a` and `0..b`.
pub fn complete_biclique(a: usize, b: usize) -> Result<BipartiteGraph> {
    if a == 0 || b == 0 {
        return Err(Error::invalid(format!("biclique sides must be >= 1, got ({a}, {b})")));
    }
    if a > u32::MAX as usize || b > u32::MAX as usize {
        return Err(Error::invalid("biclique side exceeds 2^32"));
    }
    let dense: Vec<(u32, u32)> = (0..a as u32)
        .flat_map(|l| (0..b as u32).map(move |r| (l, r)))
        .collect();
    Ok(BipartiteGraph::from_sorted_dense(
        (0..a as u64).collect(),
        (0..b as u64).collect(),
        &dense,
    ))
}

/// Each of the `a * b` possible edges independently with probability `p`.
pub fn random_bipartite(a: usize, b: usize, p: f64, seed: u64) -> Result<BipartiteGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("edge probability {p} not in [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for l in 0..a as u64 {
        for r in 0..b as u64 {
            if rng.gen_bool(p) {
                edges.push((l, r));
            }
        }
    }
    BipartiteGraph::from_edges(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_biclique_text() {
        let g = load_edge_list_str("1 1\n1 2\n2 1\n2 2\n").unwrap();
        assert_eq!((g.left_count(), g.right_count(), g.edge_count()), (2, 2, 4));
    }

    #[test]
    fn dedups_multi_edges() {
        let g = load_edge_list_str("1 1\n1 1\n1 2\n").unwrap();
        assert_eq!((g.left_count(), g.right_count(), g.edge_count()), (1, 2, 2));
    }

    #[test]
    fn ignores_comments_and_trailing_columns() {
        let g = load_edge_list_str("% bip\n1 1 1 2010\n").unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.ids(Side::Left), &[1]);
        let g = load_edge_list_str("# hash comment\n\n  7 9\n").unwrap();
        assert_eq!(g.ids(Side::Right), &[9]);
    }

    #[test]
    fn parse_error_carries_line_number() {
        match load_edge_list_str("1 1\n% c\n2 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match load_edge_list_str("5\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(load_edge_list_str("-1 2\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(load_edge_list_str(""), Err(Error::EmptyGraph)));
        assert!(matches!(load_edge_list_str("% only\n"), Err(Error::EmptyGraph)));
    }

    #[test]
    fn dense_remap_keeps_first_seen_order() {
        let g = load_edge_list_str("30 5\n10 7\n30 7\n").unwrap();
        assert_eq!(g.ids(Side::Left), &[30, 10]);
        assert_eq!(g.ids(Side::Right), &[5, 7]);
        assert_eq!(g.neighbors(Side::Left, 0), &[0, 1]);
        assert_eq!(g.neighbors(Side::Right, 1), &[0, 1]);
    }

    #[test]
    fn biclique_stats() {
        let s = complete_biclique(2, 2).unwrap().stats();
        assert_eq!((s.n, s.m, s.wedge_count, s.max_degree), (4, 4, 4, 2));
        let s = complete_biclique(3, 2).unwrap().stats();
        assert_eq!(s.n, 5);
        assert_eq!(s.m, 6);
        assert_eq!(s.sum_deg_sq_left, 12);
        assert_eq!(s.sum_deg_sq_right, 18);
        assert_eq!(s.wedge_count, 9);
        assert_eq!(s.max_degree, 3);
        let s = complete_biclique(10_000, 10).unwrap().stats();
        assert_eq!(s.m, 100_000);
        assert_eq!(s.sum_deg_sq_left, 1_000_000);
        assert_eq!(s.sum_deg_sq_right, 1_000_000_000);
    }

    #[test]
    fn single_edge_stats() {
        let s = load_edge_list_str("0 0\n").unwrap().stats();
        assert_eq!((s.n, s.m, s.wedge_count, s.max_degree), (2, 1, 0, 1));
    }

    #[test]
    fn biclique_rejects_zero_side() {
        assert!(matches!(complete_biclique(0, 3), Err(Error::InvalidArgument(_))));
        assert!(matches!(complete_biclique(3, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn random_generator_edge_cases() {
        assert!(matches!(random_bipartite(5, 5, 0.0, 1), Err(Error::EmptyGraph)));
        assert_eq!(random_bipartite(5, 5, 1.0, 1).unwrap(), complete_biclique(5, 5).unwrap());
        assert!(random_bipartite(5, 5, 1.5, 1).is_err());
        let a = random_bipartite(8, 8, 0.5, 42).unwrap();
        let b = random_bipartite(8, 8, 0.5, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_edge_list_string(), b.to_edge_list_string());
    }

    #[test]
    fn edge_at_matches_edge_iteration() {
        let g = random_bipartite(9, 7, 0.4, 3).unwrap();
        for (k, e) in g.edges().enumerate() {
            assert_eq!(g.edge_at(k), e);
        }
    }

    #[test]
    fn vertex_ref_parsing() {
        assert_eq!("left:3".parse::<VertexRef>().unwrap(), VertexRef::left(3));
        assert_eq!("R:0".parse::<VertexRef>().unwrap(), VertexRef::right(0));
        assert!("middle:1".parse::<VertexRef>().is_err());
        assert!("left".parse::<VertexRef>().is_err());
    }

    #[test]
    fn retain_edges_drops_isolated_vertices() {
        let g = complete_biclique(3, 3).unwrap();
        let sub = g.retain_edges(|_, l, _| l == 1).unwrap();
        assert_eq!((sub.left_count(), sub.right_count(), sub.edge_count()), (1, 3, 3));
        assert_eq!(sub.ids(Side::Left), &[1]);
        assert!(g.retain_edges(|_, _, _| false).is_none());
    }
}
