//! Two independent views on the wall structure of a type A g-vector fan.
//!
//! In the polygon model of the cluster category, indecomposables are
//! diagonals and the AR translation `τ` rotates both endpoints one step.
//! Relative to a cluster-tilting object `T` (a triangulation), the AR meshes
//! `L → M → τ⁻¹L` whose start `L` is not a shifted summand `ΣT_i = τT_i`
//! stay additive on indices, so each gives a linear relation among g-vectors:
//! the normal `h_L + h_{τ⁻¹L} − Σ h_{Mᵢ}`. These are compared with the
//! type-cone facets computed from the fan alone.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::clusterfan::{Diagonal, ExchangeGraph, TriangulatedFan, Triangulation};
use crate::polyhedra::Fan;
use crate::typecone::{dependencies, TypeConeError};

/// `τ⁻¹` rotates endpoints by this many steps. Clockwise matches the
/// triangle orientation used by `seed_from_triangulation`.
const INVERSE_TRANSLATION: isize = -1;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct RelativeMesh {
    pub start: Diagonal,
    /// One or two diagonals; polygon sides are dropped.
    pub middles: Vec<Diagonal>,
    pub end: Diagonal,
    /// The start is `τ` of an initial diagonal.
    pub excluded: bool,
}

pub fn tau(d: &Diagonal, polygon_size: usize) -> Diagonal {
    d.rotate(polygon_size, -INVERSE_TRANSLATION)
}

pub fn tau_inverse(d: &Diagonal, polygon_size: usize) -> Diagonal {
    d.rotate(polygon_size, INVERSE_TRANSLATION)
}

/// Every diagonal of the `m`-gon, sorted.
pub fn all_diagonals(m: usize) -> Vec<Diagonal> {
    (1..=m)
        .flat_map(|a| (a + 2..=m).map(move |b| Diagonal::new(a, b)))
        .filter(|d| d.is_valid(m))
        .collect()
}

/// All `N` AR meshes of the cluster category, one per start diagonal, with
/// the exclusion flag relative to `t`.
pub fn ar_meshes(t: &Triangulation) -> Vec<RelativeMesh> {
    let m = t.polygon_size();
    let shifted: BTreeSet<Diagonal> = t.diagonals().iter().map(|d| tau(d, m)).collect();
    all_diagonals(m)
        .into_iter()
        .map(|start| {
            let (a, b) = start.endpoints();
            let step = |v: usize| {
                ((v as isize - 1 + INVERSE_TRANSLATION).rem_euclid(m as isize) + 1) as usize
            };
            let middles: Vec<Diagonal> = [(a, step(b)), (step(a), b)]
                .into_iter()
                .filter(|&(x, y)| x != y)
                .map(|(x, y)| Diagonal::new(x, y))
                .filter(|d| d.is_valid(m))
                .collect();
            RelativeMesh {
                start,
                middles,
                end: tau_inverse(&start, m),
                excluded: shifted.contains(&start),
            }
        })
        .collect()
}

/// The non-excluded meshes of `tf.initial` with their normals over the rays
/// of `tf.fan`, sorted by normal in descending lexicographic order.
pub fn relative_ar_meshes(tf: &TriangulatedFan) -> Vec<(RelativeMesh, Vec<i64>)> {
    let n_rays = tf.fan.n_rays();
    let mut out: Vec<(RelativeMesh, Vec<i64>)> = ar_meshes(&tf.initial)
        .into_iter()
        .filter(|mesh| !mesh.excluded)
        .map(|mesh| {
            let mut v = vec![0i64; n_rays];
            v[tf.diagonal_rays[&mesh.start]] += 1;
            v[tf.diagonal_rays[&mesh.end]] += 1;
            for d in &mesh.middles {
                v[tf.diagonal_rays[d]] -= 1;
            }
            (mesh, v)
        })
        .collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

/// Whether a normal `k` over the fan rays satisfies `kᵀG = 0`.
pub fn annihilates_rays(fan: &Fan, normal: &[i64]) -> bool {
    (0..fan.dim()).all(|j| {
        fan.rays()
            .iter()
            .zip(normal)
            .map(|(r, &k)| k * r[j])
            .sum::<i64>()
            == 0
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MutationReport {
    /// Every wall lies in exactly two maximal cones.
    pub unique_complement: bool,
    pub regular: bool,
    pub connected: bool,
    pub degree: usize,
    /// Each dependency with `α = α′ = 1` reads `g_r + g_{r′} = Σ αᵢ g_{sᵢ}`
    /// with the `sᵢ` among the shared rays.
    pub exchange_relations: bool,
    /// Graph edges and fan walls are the same pairs of cones with the same
    /// exchanged rays.
    pub edges_match_walls: bool,
    pub failures: Vec<String>,
}

impl MutationReport {
    pub fn holds(&self) -> bool {
        self.unique_complement
            && self.regular
            && self.connected
            && self.exchange_relations
            && self.edges_match_walls
    }
}

pub fn verify_mutation_theorem(
    fan: &Fan,
    graph: &ExchangeGraph,
) -> Result<MutationReport, TypeConeError> {
    let mut rep = MutationReport {
        degree: fan.dim(),
        ..MutationReport::default()
    };
    let bad_ridges: Vec<(Vec<usize>, usize)> = fan
        .ridge_map()
        .into_iter()
        .filter(|(_, cs)| cs.len() != 2)
        .map(|(r, cs)| (r, cs.len()))
        .collect();
    rep.unique_complement = bad_ridges.is_empty();
    rep.failures.extend(
        bad_ridges
            .iter()
            .map(|(r, k)| format!("ridge {r:?} lies in {k} cones")),
    );
    rep.regular = graph.is_regular(fan.dim());
    if !rep.regular {
        rep.failures.push(format!("degrees {:?}", graph.degrees()));
    }
    rep.connected = graph.is_connected();
    if !rep.connected {
        rep.failures.push("exchange graph is disconnected".into());
    }

    let deps = dependencies(fan)?;
    rep.exchange_relations = true;
    for d in &deps {
        if !d.holds(fan) {
            rep.exchange_relations = false;
            rep.failures
                .push(format!("dependency across {:?} fails", d.wall));
        }
    }

    let from_walls: BTreeSet<(usize, usize, usize, usize)> = deps
        .iter()
        .map(|d| {
            (
                d.wall.cone_a,
                d.wall.cone_b,
                d.wall.exchanged.0,
                d.wall.exchanged.1,
            )
        })
        .collect();
    let from_edges: BTreeSet<(usize, usize, usize, usize)> = graph
        .edges()
        .iter()
        .map(|e| (e.source, e.target, e.exchanged.0, e.exchanged.1))
        .collect();
    rep.edges_match_walls = from_walls == from_edges && graph.nodes() == fan.cones();
    if !rep.edges_match_walls {
        rep.failures
            .push("exchange graph edges differ from fan walls".into());
    }
    Ok(rep)
}
