//! Cones, fans and polytopes over an exact field.

mod fan;
mod hull;
mod intvert;
mod polytope;

pub(crate) use fan::ray_label;

pub use fan::{fan_eq, Fan, FanCheck, PAIRWISE_CONE_LIMIT, RANDOM_PROBES};
pub use hull::{hull_facets, HullFacet};
pub use polytope::{normal_fan, p_h, vertices, HPolytope, VPolytope};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("polyhedron is empty")]
    Empty,
    #[error("polyhedron has no interior point")]
    DimensionDeficient,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("ray {0} is the zero vector")]
    ZeroRay(usize),
    #[error("rays {0} and {1} coincide after primitive normalization")]
    DuplicateRay(usize, usize),
    #[error("cone {cone} references ray {ray}, but the fan has {rays} rays")]
    BadConeIndex {
        cone: usize,
        ray: usize,
        rays: usize,
    },
}

/// Call `f` on every `k`-subset of `0..m`, in lexicographic order.
/// Stops early when `f` returns `false`.
pub(crate) fn for_each_subset(m: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + m - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
