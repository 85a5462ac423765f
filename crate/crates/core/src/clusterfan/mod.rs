//! Seeds, mutation with g-vector tracking, and enumeration of the g-vector
//! fan. Type A additionally gets the polygon model in [`triangulation`].

mod enumerate;
mod seed;
pub mod triangulation;

pub use enumerate::{
    enumerate_fan, enumerate_fan_with_budget, enumerate_with_triangulation, ExchangeEdge,
    ExchangeGraph, TriangulatedFan, DEFAULT_BUDGET,
};
pub use seed::{mutate_seed, Seed};
pub use triangulation::{flip_graph, seed_from_triangulation, Diagonal, FlipGraph, Triangulation};

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClusterError {
    #[error("exchange matrix must be square and non-empty")]
    NotSquare,
    #[error("exchange matrix is not skew-symmetrizable")]
    NotSkewSymmetrizable,
    #[error("mutation direction {k} out of range 1..={n}")]
    Direction { k: usize, n: usize },
    #[error("more than {budget} clusters reached; not of finite type?")]
    BudgetExceeded { budget: usize },
    #[error("c-vector {0} is not sign-coherent")]
    NotSignCoherent(usize),
    #[error("g-matrix with determinant {0} reached")]
    NotUnimodular(i64),
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
}
