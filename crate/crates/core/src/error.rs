use std::io;

use thiserror::Error;

use crate::graph::Side;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("butterfly count overflowed 64 bits")]
    Overflow,

    #[error("graph has no wedges to sample")]
    NoWedges,

    #[error("graph has no edges to sample")]
    NoEdges,

    #[error("{what} = {actual} exceeds oracle guard {limit}")]
    SizeGuard {
        what: &'static str,
        actual: u64,
        limit: u64,
    },

    #[error("butterfly pair shares {vertices} vertices and {edges} edges, which no pair type allows")]
    ImpossiblePairType { vertices: usize, edges: usize },

    #[error("vertex {side}:{index} does not exist")]
    UnknownVertex { side: Side, index: u64 },

    #[error("({left}, {right}) is not an edge")]
    NotAnEdge { left: u64, right: u64 },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
