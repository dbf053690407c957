//! Butterfly (2×2 biclique) counting in bipartite graphs.
//!
//! Exact counting with side selection, per-vertex and per-edge counts,
//! sampling estimators (vertex, edge, wedge, fast edge) with a median of
//! means, one-shot edge and color sparsification, and a brute-force oracle
//! for small graphs.
//!
//! ```
//! use butterfly::{complete_biclique, exact_count};
//!
//! let g = complete_biclique(3, 3).unwrap();
//! assert_eq!(exact_count(&g).unwrap(), 9);
//! ```

pub mod cli;
pub mod error;
pub mod exact;
pub mod graph;
pub mod local;
pub mod oracle;
pub mod report;
pub mod rng;
pub mod sampling;
pub mod sparsify;

pub use error::{Error, Result};
pub use exact::{choose_side, exact_count, exact_count_side, exact_count_with_work, SideChoice, Work};
pub use graph::{
    complete_biclique, load_edge_list, load_edge_list_path, load_edge_list_str, random_bipartite, BipartiteGraph,
    GraphStats, ParseOptions, Side, VertexRef,
};
pub use local::{count_per_edge, count_per_vertex, Scratch};
pub use oracle::{brute_force_count, classify_pairs, enumerate_butterflies, Butterfly, OracleGuards, PairTypeCounts};
pub use sampling::{run_estimator, Budget, Estimate, EstimatorConfig, Method, WedgeIndex};
pub use sparsify::{color_sparsify_estimate, edge_sparsify_estimate, sparsify_run, SparsifyConfig, SparsifyMethod};
