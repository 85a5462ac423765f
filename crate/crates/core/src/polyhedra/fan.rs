use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::PolyError;
use crate::linalg::Matrix;
use crate::lp;
use crate::scalar::{primitive_int_vec, to_field};
use crate::Rat;

/// Fans with at most this many maximal cones get the pairwise
/// common-face check; larger ones rely on the wall and probe checks.
pub const PAIRWISE_CONE_LIMIT: usize = 500;

/// Number of seeded pseudorandom probe points in the coverage check.
pub const RANDOM_PROBES: usize = 100;

/// A simplicial fan given by primitive integer rays and maximal cones as
/// sorted ray-index sets.
///
/// Rays keep the order they were given in; that order is the coordinate
/// order of height vectors. Maximal cones are kept sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FanRepr", into = "FanRepr")]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct FanRepr {
    dim: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
    #[serde(default)]
    labels: Vec<String>,
}

impl TryFrom<FanRepr> for Fan {
    type Error = PolyError;

    fn try_from(r: FanRepr) -> Result<Self, PolyError> {
        Fan::new(r.dim, r.rays, r.cones, r.labels)
    }
}

impl From<Fan> for FanRepr {
    fn from(f: Fan) -> Self {
        FanRepr {
            dim: f.dim,
            rays: f.rays,
            cones: f.cones,
            labels: f.labels,
        }
    }
}

pub(crate) fn ray_label(ray: &[i64]) -> String {
    let parts: Vec<String> = ray.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

impl Fan {
    /// Normalizes rays to primitive vectors and sorts the cones. An empty
    /// `labels` gets one label per ray derived from its coordinates.
    pub fn new(
        dim: usize,
        rays: Vec<Vec<i64>>,
        cones: Vec<Vec<usize>>,
        labels: Vec<String>,
    ) -> Result<Self, PolyError> {
        let mut seen: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
        let mut prim = Vec::with_capacity(rays.len());
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(PolyError::DimensionMismatch {
                    expected: dim,
                    got: r.len(),
                });
            }
            if r.iter().all(|&x| x == 0) {
                return Err(PolyError::ZeroRay(i));
            }
            let p = primitive_int_vec(r);
            if let Some(&j) = seen.get(&p) {
                return Err(PolyError::DuplicateRay(j, i));
            }
            seen.insert(p.clone(), i);
            prim.push(p);
        }
        let mut cone_set = BTreeSet::new();
        for (ci, c) in cones.into_iter().enumerate() {
            if let Some(&bad) = c.iter().find(|&&r| r >= prim.len()) {
                return Err(PolyError::BadConeIndex {
                    cone: ci,
                    ray: bad,
                    rays: prim.len(),
                });
            }
            let mut c = c;
            c.sort_unstable();
            c.dedup();
            cone_set.insert(c);
        }
        let labels = if labels.is_empty() {
            prim.iter().map(|r| ray_label(r)).collect()
        } else if labels.len() != prim.len() {
            return Err(PolyError::DimensionMismatch {
                expected: prim.len(),
                got: labels.len(),
            });
        } else {
            labels
        };
        Ok(Self {
            dim,
            rays: prim,
            cones: cone_set.into_iter().collect(),
            labels,
        })
    }

    /// Same fan with rays in descending lexicographic order.
    pub fn canonicalized(&self) -> Self {
        let mut order: Vec<usize> = (0..self.rays.len()).collect();
        order.sort_by(|&a, &b| self.rays[b].cmp(&self.rays[a]));
        let mut new_index = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let rays = order.iter().map(|&i| self.rays[i].clone()).collect();
        let labels = order.iter().map(|&i| self.labels[i].clone()).collect();
        let cones = self
            .cones
            .iter()
            .map(|c| c.iter().map(|&r| new_index[r]).collect())
            .collect();
        Fan::new(self.dim, rays, cones, labels).expect("relabeling preserves validity")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.rays.len(), "one label per ray");
        self.labels = labels;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn ray_index(&self, ray: &[i64]) -> Option<usize> {
        let p = primitive_int_vec(ray);
        self.rays.iter().position(|r| *r == p)
    }

    /// The N×n matrix G whose rows are the rays.
    pub fn ray_matrix(&self) -> Matrix<Rat> {
        Matrix::from_int_rows(&self.rays, self.dim)
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(|c| {
            c.len() == self.dim && {
                let rows: Vec<Vec<i64>> = c.iter().map(|&r| self.rays[r].clone()).collect();
                Matrix::<Rat>::from_int_rows(&rows, self.dim).rank() == self.dim
            }
        })
    }

    /// Every (n−1)-subset of a maximal cone, mapped to the cones containing it.
    pub fn ridge_map(&self) -> BTreeMap<Vec<usize>, Vec<usize>> {
        let mut map: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (ci, c) in self.cones.iter().enumerate() {
            if c.is_empty() {
                continue;
            }
            for skip in 0..c.len() {
                let mut ridge = c.clone();
                ridge.remove(skip);
                map.entry(ridge).or_default().push(ci);
            }
        }
        map
    }

    /// Runs every structural check. Completeness is certified by a proxy:
    /// walls in exactly two cones plus coverage of a probe set.
    pub fn check(&self, rng_seed: u64) -> FanCheck {
        let mut failures = Vec::new();
        let simplicial = self.is_simplicial();
        if !simplicial {
            failures.push("some maximal cone is not simplicial of full rank".to_string());
            return FanCheck {
                simplicial,
                walls_ok: false,
                pairwise_ok: None,
                probes_ok: false,
                failures,
            };
        }
        let mut walls_ok = true;
        for (ridge, owners) in self.ridge_map() {
            if owners.len() != 2 {
                walls_ok = false;
                failures.push(format!(
                    "wall {ridge:?} lies in {} maximal cones",
                    owners.len()
                ));
            }
        }
        let pairwise_ok = (self.cones.len() <= PAIRWISE_CONE_LIMIT).then(|| {
            let bad = self.improper_intersections();
            for (a, b) in &bad {
                failures.push(format!("cones {a} and {b} do not meet in a common face"));
            }
            bad.is_empty()
        });
        let uncovered = self.uncovered_probes(rng_seed);
        for p in uncovered.iter().take(5) {
            let s: Vec<String> = p.iter().map(|x| x.to_string()).collect();
            failures.push(format!("probe ({}) lies in no maximal cone", s.join(",")));
        }
        FanCheck {
            simplicial,
            walls_ok,
            pairwise_ok,
            probes_ok: uncovered.is_empty(),
            failures,
        }
    }

    /// Pairs of maximal cones whose intersection is not the cone over their
    /// common rays.
    fn improper_intersections(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for a in 0..self.cones.len() {
            for b in a + 1..self.cones.len() {
                if !self.meet_properly(a, b) {
                    bad.push((a, b));
                }
            }
        }
        bad
    }

    /// Simplicial cones `cone(S ∪ A)` and `cone(S ∪ B)` meet in `cone(S)` iff no
    /// nonzero `λ, μ ≥ 0` has `Aλ − Bμ ∈ span(S)`.
    fn meet_properly(&self, a: usize, b: usize) -> bool {
        let ca = &self.cones[a];
        let cb = &self.cones[b];
        let shared: Vec<usize> = ca.iter().copied().filter(|r| cb.contains(r)).collect();
        let only_a: Vec<usize> = ca.iter().copied().filter(|r| !cb.contains(r)).collect();
        let only_b: Vec<usize> = cb.iter().copied().filter(|r| !ca.contains(r)).collect();
        let n = self.dim;
        let cols = only_a.len() + only_b.len() + 2 * shared.len();
        let mut m: Matrix<Rat> = Matrix::zeros(n + 1, cols);
        let mut col = 0;
        let mut put = |m: &mut Matrix<Rat>, ray: usize, sign: i64, normalize: bool| {
            for i in 0..n {
                m[(i, col)] = Rat::from_integer((sign * self.rays[ray][i]).into());
            }
            if normalize {
                m[(n, col)] = Rat::from_integer(1.into());
            }
            col += 1;
        };
        for &r in &only_a {
            put(&mut m, r, 1, true);
        }
        for &r in &only_b {
            put(&mut m, r, -1, true);
        }
        for &r in &shared {
            put(&mut m, r, 1, false);
            put(&mut m, r, -1, false);
        }
        let mut rhs = vec![Rat::from_integer(0.into()); n + 1];
        rhs[n] = Rat::from_integer(1.into());
        lp::feasible_point(&m, &rhs).is_none()
    }

    fn probe_points(&self, rng_seed: u64) -> Vec<Vec<Rat>> {
        let mut probes: Vec<Vec<Rat>> = self.rays.iter().map(|r| to_field(r)).collect();
        for i in 0..self.rays.len() {
            for j in i + 1..self.rays.len() {
                let s: Vec<i64> = (0..self.dim)
                    .map(|k| self.rays[i][k] + self.rays[j][k])
                    .collect();
                let d: Vec<i64> = (0..self.dim)
                    .map(|k| self.rays[i][k] - self.rays[j][k])
                    .collect();
                probes.push(to_field(&s));
                probes.push(to_field(&d));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        for _ in 0..RANDOM_PROBES {
            let p = (0..self.dim)
                .map(|_| {
                    let num: i64 = rng.gen_range(-1000..=1000);
                    let den: i64 = rng.gen_range(1..=97);
                    Rat::new(num.into(), den.into())
                })
                .collect();
            probes.push(p);
        }
        probes
    }

    /// Probe points not contained in any maximal cone.
    pub fn uncovered_probes(&self, rng_seed: u64) -> Vec<Vec<Rat>> {
        let inverses: Vec<Matrix<Rat>> = self
            .cones
            .iter()
            .filter_map(|c| {
                let cols: Vec<Vec<i64>> = c.iter().map(|&r| self.rays[r].clone()).collect();
                Matrix::<Rat>::from_int_rows(&cols, self.dim)
                    .transpose()
                    .inverse()
            })
            .collect();
        self.probe_points(rng_seed)
            .into_iter()
            .filter(|p| {
                !inverses.iter().any(|inv| {
                    inv.mul_vec(p)
                        .iter()
                        .all(|x| *x >= Rat::from_integer(0.into()))
                })
            })
            .collect()
    }

    /// Indices of maximal cones containing a point.
    pub fn cones_containing(&self, p: &[Rat]) -> Vec<usize> {
        let zero = Rat::from_integer(0.into());
        self.cones
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                let cols: Vec<Vec<i64>> = c.iter().map(|&r| self.rays[r].clone()).collect();
                Matrix::<Rat>::from_int_rows(&cols, self.dim)
                    .transpose()
                    .inverse()
                    .is_some_and(|inv| inv.mul_vec(p).iter().all(|x| *x >= zero))
            })
            .map(|(i, _)| i)
            .collect()
    }
}

/// Outcome of [`Fan::check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanCheck {
    pub simplicial: bool,
    pub walls_ok: bool,
    /// `None` when the fan is above [`PAIRWISE_CONE_LIMIT`].
    pub pairwise_ok: Option<bool>,
    pub probes_ok: bool,
    pub failures: Vec<String>,
}

impl FanCheck {
    pub fn is_valid(&self) -> bool {
        self.simplicial && self.walls_ok && self.pairwise_ok != Some(false) && self.probes_ok
    }
}

/// Equal primitive ray sets, and the induced bijection maps maximal cones
/// onto maximal cones.
pub fn fan_eq(f1: &Fan, f2: &Fan) -> bool {
    if f1.dim != f2.dim || f1.rays.len() != f2.rays.len() || f1.cones.len() != f2.cones.len() {
        return false;
    }
    let rays1: BTreeSet<&Vec<i64>> = f1.rays.iter().collect();
    let rays2: BTreeSet<&Vec<i64>> = f2.rays.iter().collect();
    if rays1 != rays2 {
        return false;
    }
    let as_sets = |f: &Fan| -> BTreeSet<BTreeSet<Vec<i64>>> {
        f.cones
            .iter()
            .map(|c| c.iter().map(|&r| f.rays[r].clone()).collect())
            .collect()
    };
    as_sets(f1) == as_sets(f2)
}
