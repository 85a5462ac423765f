//! Wall dependencies, the type cone of a simplicial fan, and the polytopes
//! `Q_c` parametrized by its facets.
//!
//! For adjacent maximal cones `R`, `R′` exchanging `r ∈ R` for `r′ ∈ R′`,
//! the `n + 1` rays of `R ∪ R′` satisfy a unique relation
//! `α r + α′ r′ = Σ αᵢ sᵢ` over the shared rays `sᵢ`, scaled here so that
//! `α + α′ = 2`. Each relation gives the inequality
//! `α h_r + α′ h_{r′} > Σ αᵢ h_{sᵢ}` on height vectors; together they cut
//! out the (open) type cone, the set of `h` with `P_h` realizing the fan.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{dot, sub, Matrix};
use crate::lp::{feasible_free, feasible_point};
use crate::polyhedra::{p_h, Fan, HPolytope, PolyError};
use crate::scalar::{primitive_i64, to_field, ExactField};
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypeConeError {
    #[error("wall between cones {cone_a} and {cone_b} has no unique positive dependency")]
    DegenerateWall { cone_a: usize, cone_b: usize },
    #[error("type cone has {facets} facets, a simplicial one has {expected}")]
    NotSimplicial { facets: usize, expected: usize },
    #[error("expected {expected} parameters, got {got}")]
    ParameterCount { expected: usize, got: usize },
    #[error("parameter {index} is not positive")]
    NonPositiveParameter { index: usize },
    #[error("facet system K h = c has no solution")]
    InconsistentSystem,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Two adjacent maximal cones. `exchanged.0 ∈ cone_a`, `exchanged.1 ∈ cone_b`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Wall {
    pub cone_a: usize,
    pub cone_b: usize,
    pub shared: Vec<usize>,
    pub exchanged: (usize, usize),
}

/// All walls, ordered by `(cone_a, cone_b)` with `cone_a < cone_b`.
pub fn walls(fan: &Fan) -> Vec<Wall> {
    let cones = fan.cones();
    let mut out: Vec<Wall> = fan
        .ridge_map()
        .into_iter()
        .filter(|(_, cs)| cs.len() == 2)
        .map(|(shared, cs)| {
            let (a, b) = (cs[0].min(cs[1]), cs[0].max(cs[1]));
            let other = |c: usize| -> usize {
                *cones[c]
                    .iter()
                    .find(|r| !shared.contains(r))
                    .expect("cone has one extra ray")
            };
            Wall {
                cone_a: a,
                cone_b: b,
                exchanged: (other(a), other(b)),
                shared,
            }
        })
        .collect();
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearDependency {
    pub wall: Wall,
    pub alpha: Rat,
    pub alpha_prime: Rat,
    /// `αᵢ`, aligned with `wall.shared`.
    pub middle_coeffs: Vec<Rat>,
}

impl LinearDependency {
    /// The inequality normal over all `n_rays` coordinates: `α` at `r`,
    /// `α′` at `r′`, `−αᵢ` at `sᵢ`.
    pub fn normal(&self, n_rays: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); n_rays];
        v[self.wall.exchanged.0] = self.alpha.clone();
        v[self.wall.exchanged.1] = self.alpha_prime.clone();
        for (&s, a) in self.wall.shared.iter().zip(&self.middle_coeffs) {
            v[s] = -a.clone();
        }
        v
    }

    /// Checks `α r + α′ r′ − Σ αᵢ sᵢ = 0` and `α + α′ = 2` exactly.
    pub fn holds(&self, fan: &Fan) -> bool {
        let g = fan.ray_matrix();
        let n = self.normal(fan.n_rays());
        let two = Rat::from_int(2);
        g.transpose().mul_vec(&n).iter().all(Zero::is_zero)
            && self.alpha.clone() + self.alpha_prime.clone() == two
            && self.alpha.is_positive()
            && self.alpha_prime.is_positive()
    }
}

pub fn wall_dependency(fan: &Fan, w: &Wall) -> Result<LinearDependency, TypeConeError> {
    let degenerate = || TypeConeError::DegenerateWall {
        cone_a: w.cone_a,
        cone_b: w.cone_b,
    };
    let order: Vec<usize> = [w.exchanged.0, w.exchanged.1]
        .into_iter()
        .chain(w.shared.iter().copied())
        .collect();
    // Columns are the rays; the kernel holds the relation coefficients.
    let cols: Vec<Vec<i64>> = order.iter().map(|&r| fan.ray(r).to_vec()).collect();
    let m: Matrix<Rat> = Matrix::from_int_rows(&cols, fan.dim()).transpose();
    let ker = m.kernel();
    if ker.len() != 1 {
        return Err(degenerate());
    }
    let mut v = ker.into_iter().next().expect("one kernel vector");
    if v[0].is_negative() {
        v.iter_mut().for_each(|x| *x = -x.clone());
    }
    if !v[0].is_positive() || !v[1].is_positive() {
        return Err(degenerate());
    }
    let scale = Rat::from_int(2) / (v[0].clone() + v[1].clone());
    let v: Vec<Rat> = v.into_iter().map(|x| x * scale.clone()).collect();
    Ok(LinearDependency {
        wall: w.clone(),
        alpha: v[0].clone(),
        alpha_prime: v[1].clone(),
        middle_coeffs: v[2..].iter().map(|x| -x.clone()).collect(),
    })
}

/// All wall dependencies, in wall order.
pub fn dependencies(fan: &Fan) -> Result<Vec<LinearDependency>, TypeConeError> {
    walls(fan)
        .par_iter()
        .map(|w| wall_dependency(fan, w))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UerpViolation {
    /// The exchanged pair, smaller ray index first.
    pub pair: (usize, usize),
    pub walls: Vec<usize>,
    /// Distinct normals seen across those walls.
    pub normals: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UerpReport {
    /// Strict reading: full normalized dependency vectors agree.
    pub holds: bool,
    pub violations: Vec<UerpViolation>,
    /// Weak reading: agreement on `α`, `α′` and on the rays shared by all
    /// walls of the group.
    pub weak_holds: bool,
}

impl UerpReport {
    pub fn readings_disagree(&self) -> bool {
        self.holds != self.weak_holds
    }
}

/// Groups walls by exchanged pair and compares their dependencies.
pub fn unique_exchange_check(fan: &Fan) -> Result<UerpReport, TypeConeError> {
    let deps = dependencies(fan)?;
    Ok(uerp_from(fan, &deps))
}

fn uerp_from(fan: &Fan, deps: &[LinearDependency]) -> UerpReport {
    let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, d) in deps.iter().enumerate() {
        let (r, s) = d.wall.exchanged;
        groups.entry((r.min(s), r.max(s))).or_default().push(i);
    }
    let mut violations = Vec::new();
    let mut weak_holds = true;
    for (pair, members) in groups {
        let normals: BTreeSet<Vec<Rat>> = members
            .iter()
            .map(|&i| deps[i].normal(fan.n_rays()))
            .collect();
        if normals.len() > 1 {
            violations.push(UerpViolation {
                pair,
                walls: members.clone(),
                normals: normals
                    .iter()
                    .map(|v| v.iter().map(|x| x.to_pq()).collect())
                    .collect(),
            });
        }
        let common: BTreeSet<usize> = members
            .iter()
            .map(|&i| deps[i].wall.shared.iter().copied().collect::<BTreeSet<_>>())
            .reduce(|a, b| a.intersection(&b).copied().collect())
            .unwrap_or_default();
        let support: Vec<usize> = [pair.0, pair.1].into_iter().chain(common).collect();
        let restricted: BTreeSet<Vec<Rat>> = normals
            .iter()
            .map(|v| support.iter().map(|&j| v[j].clone()).collect())
            .collect();
        weak_holds &= restricted.len() == 1;
    }
    UerpReport {
        holds: violations.is_empty(),
        violations,
        weak_holds,
    }
}

/// Facet description of the type cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeCone {
    pub n_rays: usize,
    pub dim: usize,
    pub dependencies: Vec<LinearDependency>,
    /// One normal per wall, in wall order.
    pub raw_inequalities: Vec<Vec<Rat>>,
    /// Irredundant primitive normals, in descending lexicographic order.
    pub facets: Vec<Vec<i64>>,
    /// Per facet, a height vector on which it is the only tight inequality
    /// (all others are ≥ 1). `None` only when the cone has empty interior.
    pub certificates: Vec<Option<Vec<Rat>>>,
    /// Inequalities are strict: `h` is in the cone iff every facet is
    /// positive on it.
    pub open: bool,
}

impl TypeCone {
    pub fn k_matrix(&self) -> Vec<Vec<i64>> {
        self.facets.clone()
    }

    pub fn expected_facets(&self) -> usize {
        self.n_rays - self.dim
    }

    pub fn is_simplicial(&self) -> bool {
        self.facets.len() == self.expected_facets() && {
            let k: Matrix<Rat> = Matrix::from_int_rows(&self.facets, self.n_rays);
            k.rank() == self.expected_facets()
        }
    }

    /// Facets that are not strictly positive on `h`.
    pub fn violated_facets(&self, h: &[Rat]) -> Vec<usize> {
        self.facets
            .iter()
            .enumerate()
            .filter(|(_, f)| !dot(&to_field::<Rat>(f), h).is_positive())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn contains(&self, h: &[Rat]) -> bool {
        self.violated_facets(h).is_empty()
    }

    /// Walls whose dependency defines a facet but has a negative middle
    /// coefficient.
    pub fn negative_middle_walls(&self) -> Vec<usize> {
        let facets: BTreeSet<&Vec<i64>> = self.facets.iter().collect();
        self.dependencies
            .iter()
            .enumerate()
            .filter(|(i, d)| {
                let p = primitive_i64(&self.raw_inequalities[*i]).expect("nonzero normal");
                facets.contains(&p) && d.middle_coeffs.iter().any(Signed::is_negative)
            })
            .map(|(i, _)| i)
            .collect()
    }

    pub fn uerp(&self, fan: &Fan) -> UerpReport {
        uerp_from(fan, &self.dependencies)
    }

    pub fn to_json(&self) -> TypeConeJson {
        TypeConeJson {
            n: self.n_rays,
            walls: self
                .dependencies
                .iter()
                .map(|d| WallJson {
                    cones: [d.wall.cone_a, d.wall.cone_b],
                    shared: d.wall.shared.clone(),
                    exchanged: [d.wall.exchanged.0, d.wall.exchanged.1],
                    alpha: d.alpha.to_pq(),
                    alpha_prime: d.alpha_prime.to_pq(),
                    middle: d.middle_coeffs.iter().map(ExactField::to_pq).collect(),
                })
                .collect(),
            facets: self.facets.clone(),
            k: self.k_matrix(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallJson {
    pub cones: [usize; 2],
    pub shared: Vec<usize>,
    pub exchanged: [usize; 2],
    pub alpha: String,
    pub alpha_prime: String,
    pub middle: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeConeJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub walls: Vec<WallJson>,
    pub facets: Vec<Vec<i64>>,
    #[serde(rename = "K")]
    pub k: Vec<Vec<i64>>,
}

/// Coordinates modulo the lineality space. Every wall normal `k` satisfies
/// `kᵀG = 0`, so it is a combination of the rows of the reduced left-kernel
/// basis `B` of `G`, with coefficients `k` restricted to the pivot columns.
struct Quotient {
    pivots: Vec<usize>,
}

impl Quotient {
    fn new(fan: &Fan) -> Self {
        let basis = fan.ray_matrix().left_kernel();
        let b = Matrix::from_rows(&basis, fan.n_rays());
        Self {
            pivots: b.rref().pivots,
        }
    }

    fn coords(&self, k: &[Rat]) -> Vec<Rat> {
        self.pivots.iter().map(|&p| k[p].clone()).collect()
    }

    /// A height vector `h` with `B h = z`.
    fn lift(&self, z: &[Rat], n_rays: usize) -> Vec<Rat> {
        let mut h = vec![Rat::zero(); n_rays];
        for (&p, v) in self.pivots.iter().zip(z) {
            h[p] = v.clone();
        }
        h
    }
}

/// `v ∈ cone(gens)`.
fn in_cone(v: &[Rat], gens: &[&Vec<Rat>]) -> bool {
    if gens.is_empty() {
        return v.iter().all(Zero::is_zero);
    }
    let cols: Vec<Vec<Rat>> = gens.iter().map(|g| g.to_vec()).collect();
    let a = Matrix::from_rows(&cols, v.len()).transpose();
    feasible_point(&a, v).is_some()
}

pub fn type_cone(fan: &Fan) -> Result<TypeCone, TypeConeError> {
    let deps = dependencies(fan)?;
    let n_rays = fan.n_rays();
    let raw: Vec<Vec<Rat>> = deps.iter().map(|d| d.normal(n_rays)).collect();

    let mut distinct: Vec<Vec<i64>> = raw
        .iter()
        .map(|v| primitive_i64(v).expect("nonzero normal"))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    distinct.reverse();

    let quotient = Quotient::new(fan);
    let coords: Vec<Vec<Rat>> = distinct
        .iter()
        .map(|k| quotient.coords(&to_field::<Rat>(k)))
        .collect();

    // Drop generators of the dual cone that lie in the cone of the others.
    let mut keep = vec![true; distinct.len()];
    for i in 0..distinct.len() {
        let others: Vec<&Vec<Rat>> = (0..distinct.len())
            .filter(|&j| j != i && keep[j])
            .map(|j| &coords[j])
            .collect();
        if in_cone(&coords[i], &others) {
            keep[i] = false;
        }
    }
    let kept: Vec<usize> = (0..distinct.len()).filter(|&i| keep[i]).collect();

    let dim_q = quotient.pivots.len();
    let certificates: Vec<Option<Vec<Rat>>> = kept
        .par_iter()
        .map(|&i| {
            let ge: Vec<Vec<Rat>> = kept
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| coords[j].clone())
                .collect();
            let ones = vec![Rat::one(); ge.len()];
            feasible_free(dim_q, &[coords[i].clone()], &[Rat::zero()], &ge, &ones)
                .map(|z| quotient.lift(&z, n_rays))
        })
        .collect();

    Ok(TypeCone {
        n_rays,
        dim: fan.dim(),
        dependencies: deps,
        raw_inequalities: raw,
        facets: kept.iter().map(|&i| distinct[i].clone()).collect(),
        certificates,
        open: true,
    })
}

/// `P_h` for a solution of `K h = c`, with the slack embedding
/// `x ↦ h − Gx` into `Q_c = {q ≥ 0 : K q = c}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QcPolytope {
    pub h: Vec<Rat>,
    pub polytope: HPolytope<Rat>,
    k: Vec<Vec<i64>>,
}

impl QcPolytope {
    pub fn slack(&self, x: &[Rat]) -> Vec<Rat> {
        let gx = self.polytope.ineq_matrix().mul_vec(x);
        sub(&self.h, &gx)
    }

    /// `K (h − Gx)`; equals `c` for every `x` because `KG = 0`.
    pub fn slack_image(&self, x: &[Rat]) -> Vec<Rat> {
        let q = self.slack(x);
        self.k
            .iter()
            .map(|row| dot(&to_field::<Rat>(row), &q))
            .collect()
    }
}

pub fn qc_polytope(fan: &Fan, tc: &TypeCone, c: &[Rat]) -> Result<QcPolytope, TypeConeError> {
    if !tc.is_simplicial() {
        return Err(TypeConeError::NotSimplicial {
            facets: tc.facets.len(),
            expected: tc.expected_facets(),
        });
    }
    qc_polytope_from_k(fan, &tc.facets, c)
}

/// [`qc_polytope`] from a bare facet matrix, e.g. one read back from JSON.
pub fn qc_polytope_from_k(
    fan: &Fan,
    k: &[Vec<i64>],
    c: &[Rat],
) -> Result<QcPolytope, TypeConeError> {
    let expected = fan.n_rays() - fan.dim();
    let km: Matrix<Rat> = Matrix::from_int_rows(k, fan.n_rays());
    if k.len() != expected || km.rank() != expected {
        return Err(TypeConeError::NotSimplicial {
            facets: k.len(),
            expected,
        });
    }
    if c.len() != k.len() {
        return Err(TypeConeError::ParameterCount {
            expected: k.len(),
            got: c.len(),
        });
    }
    if let Some(index) = c.iter().position(|x| !x.is_positive()) {
        return Err(TypeConeError::NonPositiveParameter { index });
    }
    let h = km.solve(c).ok_or(TypeConeError::InconsistentSystem)?;
    let polytope = p_h(fan, &h)?;
    Ok(QcPolytope {
        h,
        polytope,
        k: k.to_vec(),
    })
}

/// `x` with `h₂ = h₁ + Gx`, so that `P_{h₂} = P_{h₁} + x`.
pub fn translation(fan: &Fan, h1: &[Rat], h2: &[Rat]) -> Option<Vec<Rat>> {
    fan.ray_matrix().solve(&sub(h2, h1))
}
