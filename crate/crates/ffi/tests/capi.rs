use std::ffi::{CStr, CString};
use std::io::Write;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use butterfly_ffi::*;

fn biclique(a: usize, b: usize) -> *mut BflyGraph {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { bfly_graph_complete_biclique(a, b, &mut g) }, BflyStatus::Ok);
    assert!(!g.is_null());
    g
}

fn last_error() -> String {
    let p = bfly_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn exact_counts_through_the_abi() {
    let g = biclique(10_000, 10);
    let mut count = 0u64;
    unsafe {
        assert_eq!(bfly_exact_count(g, &mut count), BflyStatus::Ok);
        assert_eq!(count, 2_249_775_000);
        assert_eq!(bfly_exact_count_side(g, BflySide::Left, &mut count), BflyStatus::Ok);
        assert_eq!(count, 2_249_775_000);
        let mut s = BflyStats::default();
        assert_eq!(bfly_graph_stats(g, &mut s), BflyStatus::Ok);
        assert_eq!((s.n, s.m, s.max_degree), (10_010, 100_000, 10_000));
        bfly_graph_free(g);
    }
}

#[test]
fn local_and_estimators() {
    let g = biclique(3, 3);
    let mut count = 0u64;
    let mut est = 0.0f64;
    unsafe {
        assert_eq!(bfly_count_vertex(g, BflySide::Left, 0, &mut count), BflyStatus::Ok);
        assert_eq!(count, 6);
        assert_eq!(bfly_count_edge(g, 2, 1, &mut count), BflyStatus::Ok);
        assert_eq!(count, 4);
        for method in [BflyMethod::Vertex, BflyMethod::Edge, BflyMethod::Wedge] {
            assert_eq!(bfly_sample(g, method, 50, 3, 1, 11, &mut est), BflyStatus::Ok);
            assert_eq!(est, 9.0);
        }
        assert_eq!(bfly_sparsify_edge(g, 1.0, 2, 5, &mut est), BflyStatus::Ok);
        assert_eq!(est, 9.0);
        assert_eq!(bfly_sparsify_color(g, 1, 2, 5, &mut est), BflyStatus::Ok);
        assert_eq!(est, 9.0);
        bfly_graph_free(g);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut g = ptr::null_mut();
    let mut count = 0u64;
    let mut est = 0.0f64;
    unsafe {
        assert_eq!(bfly_graph_complete_biclique(0, 3, &mut g), BflyStatus::InvalidArgument);
        assert!(g.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(bfly_graph_from_edges(ptr::null(), ptr::null(), 0, &mut g), BflyStatus::EmptyGraph);
        assert_eq!(bfly_exact_count(ptr::null(), &mut count), BflyStatus::NullPointer);
        assert!(last_error().contains("null"));

        let star = biclique(1, 4);
        assert_eq!(bfly_count_edge(star, 0, 7, &mut count), BflyStatus::UnknownVertex);
        assert_eq!(bfly_sample(star, BflyMethod::Wedge, 10, 1, 1, 0, &mut est), BflyStatus::Ok);
        assert_eq!(est, 0.0);
        assert_eq!(bfly_sample(star, BflyMethod::Edge, 10, 2, 1, 0, &mut est), BflyStatus::InvalidArgument);
        assert_eq!(bfly_sparsify_edge(star, 0.0, 1, 0, &mut est), BflyStatus::InvalidArgument);
        assert_eq!(bfly_exact_count(star, ptr::null_mut()), BflyStatus::NullPointer);
        bfly_graph_free(star);
        bfly_graph_free(ptr::null_mut());

        let missing = CString::new("/nonexistent/graph.txt").unwrap();
        assert_eq!(bfly_graph_load_path(missing.as_ptr(), &mut g), BflyStatus::Io);
    }
}

#[test]
fn load_path_and_parse_errors() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "% bip\n1 1\n1 2\n2 1\n2 2").unwrap();
    let path = CString::new(f.path().to_str().unwrap()).unwrap();
    let mut g = ptr::null_mut();
    let mut count = 0u64;
    unsafe {
        assert_eq!(bfly_graph_load_path(path.as_ptr(), &mut g), BflyStatus::Ok);
        assert_eq!(bfly_exact_count(g, &mut count), BflyStatus::Ok);
        assert_eq!(count, 1);
        bfly_graph_free(g);
    }

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "1 1\nx 2").unwrap();
    let path = CString::new(bad.path().to_str().unwrap()).unwrap();
    assert_eq!(unsafe { bfly_graph_load_path(path.as_ptr(), &mut g) }, BflyStatus::Parse);
    assert!(last_error().contains("line 2"));
}

#[test]
fn status_strings_are_static() {
    let s = unsafe { CStr::from_ptr(bfly_status_string(BflyStatus::NotAnEdge)) };
    assert_eq!(s.to_str().unwrap(), "not an edge");
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_the_surface() {
    let header = std::fs::read_to_string(crate_dir().join("include/butterfly.h")).unwrap();
    for name in [
        "typedef struct BflyGraph BflyGraph;",
        "bfly_graph_load_path",
        "bfly_graph_from_edges",
        "bfly_graph_free",
        "bfly_exact_count_side",
        "bfly_count_edge",
        "bfly_sample",
        "bfly_sparsify_color",
        "bfly_last_error_message",
        "BFLY_STATUS_OVERFLOW = 6",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    // target/<profile>/deps/<this test> -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap().to_path_buf();
    let lib = profile_dir.join("libbutterfly_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());

    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("bfly_smoke");
    let status = Command::new("cc")
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("C compiler not found");
    assert!(status.success());

    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "5 6\n5 7\n8 6\n8 7").unwrap();
    let run = Command::new(&out).arg(f.path()).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
