//! C ABI over the butterfly counting library.
//!
//! Graphs live behind an opaque `BflyGraph` handle created by one of the
//! `bfly_graph_*` constructors and released with `bfly_graph_free`. Every
//! fallible call returns a `BflyStatus` and writes its result through an out
//! pointer; on failure a message is available from
//! `bfly_last_error_message` on the same thread.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use butterfly::sampling::{run_estimator, EstimatorConfig, Method};
use butterfly::sparsify::{sparsify_run, SparsifyConfig};
use butterfly::{BipartiteGraph, Error, Side, VertexRef};

/// Opaque graph handle.
pub struct BflyGraph {
    inner: BipartiteGraph,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BflyStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Io = 4,
    EmptyGraph = 5,
    Overflow = 6,
    NoEdges = 7,
    NoWedges = 8,
    SizeGuard = 9,
    UnknownVertex = 10,
    NotAnEdge = 11,
    Internal = 12,
    Panic = 13,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BflySide {
    Left = 0,
    Right = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BflyMethod {
    Vertex = 0,
    Edge = 1,
    Wedge = 2,
    FastEdge = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BflyStats {
    pub n: u64,
    pub left_count: u64,
    pub right_count: u64,
    pub m: u64,
    pub sum_deg_sq_left: u64,
    pub sum_deg_sq_right: u64,
    pub wedge_count: u64,
    pub max_degree: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> BflyStatus {
    match err {
        Error::Parse { .. } => BflyStatus::Parse,
        Error::EmptyGraph => BflyStatus::EmptyGraph,
        Error::InvalidArgument(_) => BflyStatus::InvalidArgument,
        Error::Overflow => BflyStatus::Overflow,
        Error::NoWedges => BflyStatus::NoWedges,
        Error::NoEdges => BflyStatus::NoEdges,
        Error::SizeGuard { .. } => BflyStatus::SizeGuard,
        Error::ImpossiblePairType { .. } => BflyStatus::Internal,
        Error::UnknownVertex { .. } => BflyStatus::UnknownVertex,
        Error::NotAnEdge { .. } => BflyStatus::NotAnEdge,
        Error::Io(_) => BflyStatus::Io,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard<F>(f: F) -> BflyStatus
where
    F: FnOnce() -> Result<(), (BflyStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BflyStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside butterfly library".to_string());
            BflyStatus::Panic
        }
    }
}

fn lib<T>(r: butterfly::Result<T>) -> Result<T, (BflyStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (BflyStatus, String) {
    (BflyStatus::NullPointer, format!("{what} is null"))
}

unsafe fn graph_ref<'a>(g: *const BflyGraph) -> Result<&'a BipartiteGraph, (BflyStatus, String)> {
    g.as_ref().map(|h| &h.inner).ok_or_else(|| null("graph"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (BflyStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_graph(out: *mut *mut BflyGraph, g: butterfly::Result<BipartiteGraph>) -> Result<(), (BflyStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let g = lib(g)?;
    out.write(Box::into_raw(Box::new(BflyGraph { inner: g })));
    Ok(())
}

fn side_of(s: BflySide) -> Side {
    match s {
        BflySide::Left => Side::Left,
        BflySide::Right => Side::Right,
    }
}

/// Loads a whitespace-separated edge list from `path` (UTF-8).
#[no_mangle]
pub unsafe extern "C" fn bfly_graph_load_path(path: *const c_char, out: *mut *mut BflyGraph) -> BflyStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        let p = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| (BflyStatus::InvalidArgument, "path is not UTF-8".to_string()))?;
        put_graph(out, butterfly::load_edge_list_path(p))
    })
}

/// Builds a graph from `len` pairs `(left[i], right[i])` of external ids.
#[no_mangle]
pub unsafe extern "C" fn bfly_graph_from_edges(
    left: *const u64,
    right: *const u64,
    len: usize,
    out: *mut *mut BflyGraph,
) -> BflyStatus {
    guard(|| {
        if len > 0 && (left.is_null() || right.is_null()) {
            return Err(null("edge array"));
        }
        let (l, r) = if len == 0 {
            (&[][..], &[][..])
        } else {
            (std::slice::from_raw_parts(left, len), std::slice::from_raw_parts(right, len))
        };
        put_graph(out, BipartiteGraph::from_edges(l.iter().copied().zip(r.iter().copied())))
    })
}

#[no_mangle]
pub unsafe extern "C" fn bfly_graph_complete_biclique(a: usize, b: usize, out: *mut *mut BflyGraph) -> BflyStatus {
    guard(|| put_graph(out, butterfly::complete_biclique(a, b)))
}

#[no_mangle]
pub unsafe extern "C" fn bfly_graph_random(
    a: usize,
    b: usize,
    p: f64,
    seed: u64,
    out: *mut *mut BflyGraph,
) -> BflyStatus {
    guard(|| put_graph(out, butterfly::random_bipartite(a, b, p, seed)))
}

/// Releases a handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bfly_graph_free(g: *mut BflyGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Degree-square sums that exceed 64 bits report `Overflow`.
#[no_mangle]
pub unsafe extern "C" fn bfly_graph_stats(g: *const BflyGraph, out: *mut BflyStats) -> BflyStatus {
    guard(|| {
        let s = graph_ref(g)?.stats();
        let narrow = |x: u128| {
            u64::try_from(x).map_err(|_| (BflyStatus::Overflow, "degree-square sum exceeds 64 bits".to_string()))
        };
        write_out(
            out,
            BflyStats {
                n: s.n,
                left_count: s.left_count,
                right_count: s.right_count,
                m: s.m,
                sum_deg_sq_left: narrow(s.sum_deg_sq_left)?,
                sum_deg_sq_right: narrow(s.sum_deg_sq_right)?,
                wedge_count: s.wedge_count,
                max_degree: s.max_degree,
            },
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn bfly_exact_count(g: *const BflyGraph, out: *mut u64) -> BflyStatus {
    guard(|| write_out(out, lib(butterfly::exact_count(graph_ref(g)?))?))
}

#[no_mangle]
pub unsafe extern "C" fn bfly_exact_count_side(g: *const BflyGraph, side: BflySide, out: *mut u64) -> BflyStatus {
    guard(|| write_out(out, lib(butterfly::exact_count_side(graph_ref(g)?, side_of(side)))?))
}

#[no_mangle]
pub unsafe extern "C" fn bfly_count_vertex(g: *const BflyGraph, side: BflySide, index: u32, out: *mut u64) -> BflyStatus {
    guard(|| {
        let v = VertexRef::new(side_of(side), index);
        write_out(out, lib(butterfly::count_per_vertex(graph_ref(g)?, v))?)
    })
}

/// Butterflies through the edge between dense indices `left` and `right`.
#[no_mangle]
pub unsafe extern "C" fn bfly_count_edge(g: *const BflyGraph, left: u32, right: u32, out: *mut u64) -> BflyStatus {
    guard(|| {
        let g = graph_ref(g)?;
        write_out(out, lib(butterfly::count_per_edge(g, VertexRef::left(left), VertexRef::right(right)))?)
    })
}

/// Sampling estimate. `groups` must be odd or 1; `fast_repeats` only
/// applies to `FastEdge`.
#[no_mangle]
pub unsafe extern "C" fn bfly_sample(
    g: *const BflyGraph,
    method: BflyMethod,
    iterations: u64,
    groups: u32,
    fast_repeats: u32,
    seed: u64,
    out: *mut f64,
) -> BflyStatus {
    guard(|| {
        let m = match method {
            BflyMethod::Vertex => Method::Vertex,
            BflyMethod::Edge => Method::Edge,
            BflyMethod::Wedge => Method::Wedge,
            BflyMethod::FastEdge => Method::FastEdge,
        };
        let mut cfg = EstimatorConfig::new(m, iterations, seed);
        cfg.groups = groups;
        cfg.fast_edge_repeats = fast_repeats;
        write_out(out, lib(run_estimator(graph_ref(g)?, &cfg))?.value)
    })
}

/// Mean of `trials` edge-sparsification estimates with retention `p`.
#[no_mangle]
pub unsafe extern "C" fn bfly_sparsify_edge(
    g: *const BflyGraph,
    p: f64,
    trials: u32,
    seed: u64,
    out: *mut f64,
) -> BflyStatus {
    guard(|| {
        let mut cfg = SparsifyConfig::edge(p, seed);
        cfg.trials = trials;
        write_out(out, lib(sparsify_run(graph_ref(g)?, &cfg))?.value)
    })
}

/// Mean of `trials` color-sparsification estimates with `colors` colors.
#[no_mangle]
pub unsafe extern "C" fn bfly_sparsify_color(
    g: *const BflyGraph,
    colors: u32,
    trials: u32,
    seed: u64,
    out: *mut f64,
) -> BflyStatus {
    guard(|| {
        let mut cfg = SparsifyConfig::color(colors, seed);
        cfg.trials = trials;
        write_out(out, lib(sparsify_run(graph_ref(g)?, &cfg))?.value)
    })
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bfly_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn bfly_status_string(status: BflyStatus) -> *const c_char {
    let s: &'static CStr = match status {
        BflyStatus::Ok => c"ok",
        BflyStatus::NullPointer => c"null pointer",
        BflyStatus::InvalidArgument => c"invalid argument",
        BflyStatus::Parse => c"parse error",
        BflyStatus::Io => c"i/o error",
        BflyStatus::EmptyGraph => c"empty graph",
        BflyStatus::Overflow => c"overflow",
        BflyStatus::NoEdges => c"no edges",
        BflyStatus::NoWedges => c"no wedges",
        BflyStatus::SizeGuard => c"size guard",
        BflyStatus::UnknownVertex => c"unknown vertex",
        BflyStatus::NotAnEdge => c"not an edge",
        BflyStatus::Internal => c"internal error",
        BflyStatus::Panic => c"panic",
    };
    s.as_ptr()
}
