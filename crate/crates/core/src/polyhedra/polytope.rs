use std::collections::{BTreeMap, BTreeSet};

use super::hull::{affine_rank, hull_facets, HullFacet};
use super::{for_each_subset, intvert, Fan, PolyError};
use crate::linalg::{dot, Matrix};
use crate::lp::feasible_point;
use crate::scalar::{primitive_i64, ExactField};

/// `{x : Ax ≤ b}`; rows of `A` are outer normals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolytope<F> {
    ineq: Matrix<F>,
    bounds: Vec<F>,
}

impl<F: ExactField> HPolytope<F> {
    pub fn new(ineq: Matrix<F>, bounds: Vec<F>) -> Result<Self, PolyError> {
        if ineq.nrows() != bounds.len() {
            return Err(PolyError::DimensionMismatch {
                expected: ineq.nrows(),
                got: bounds.len(),
            });
        }
        Ok(Self { ineq, bounds })
    }

    pub fn dim(&self) -> usize {
        self.ineq.ncols()
    }

    pub fn ineq_matrix(&self) -> &Matrix<F> {
        &self.ineq
    }

    pub fn bounds(&self) -> &[F] {
        &self.bounds
    }

    pub fn contains(&self, x: &[F]) -> bool {
        self.ineq
            .rows()
            .zip(&self.bounds)
            .all(|(row, b)| dot(row, x) <= *b)
    }

    /// Rows tight at `x`.
    pub fn tight_rows(&self, x: &[F]) -> Vec<usize> {
        self.ineq
            .rows()
            .zip(&self.bounds)
            .enumerate()
            .filter(|(_, (row, b))| dot(row, x) == **b)
            .map(|(i, _)| i)
            .collect()
    }

    /// The same set with the inequalities as a set: rows and bounds scaled to
    /// primitive integer form and sorted. Used to compare descriptions.
    pub fn normalized_rows(&self) -> BTreeSet<Vec<num_bigint::BigInt>> {
        self.ineq
            .rows()
            .zip(&self.bounds)
            .map(|(row, b)| {
                let mut v = row.to_vec();
                v.push(b.clone());
                crate::scalar::primitive_integer(&v).unwrap_or_default()
            })
            .collect()
    }
}

/// A polytope as its (irredundant, lexicographically sorted) vertex list.
///
/// A polytope computed from inequalities remembers them, so its facets are
/// read off the tight rows instead of being recomputed by a hull.
#[derive(Clone, Debug)]
pub struct VPolytope<F> {
    dim: usize,
    vertices: Vec<Vec<F>>,
    source: Option<HPolytope<F>>,
}

impl<F: PartialEq> PartialEq for VPolytope<F> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl<F: Eq> Eq for VPolytope<F> {}

impl<F: ExactField> VPolytope<F> {
    /// Convex hull of a point set; non-vertices are dropped.
    pub fn from_points(dim: usize, points: Vec<Vec<F>>) -> Result<Self, PolyError> {
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(PolyError::DimensionMismatch {
                expected: dim,
                got: p.len(),
            });
        }
        let pts: Vec<Vec<F>> = points
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if pts.is_empty() {
            return Err(PolyError::Empty);
        }
        if affine_rank(&pts) < dim {
            // Irredundancy cannot be decided by the hull here; keep distinct points.
            return Ok(Self::from_sorted_vertices(dim, pts));
        }
        let facets = hull_facets(&pts)?;
        let keep: BTreeSet<usize> = (0..pts.len())
            .filter(|i| {
                let on: Vec<Vec<F>> = facets
                    .iter()
                    .filter(|f| f.vertices.contains(i))
                    .map(|f| f.normal.clone())
                    .collect();
                !on.is_empty() && Matrix::from_rows(&on, dim).rank() == dim
            })
            .collect();
        let vertices = keep.into_iter().map(|i| pts[i].clone()).collect();
        Ok(Self::from_sorted_vertices(dim, vertices))
    }

    pub(crate) fn from_sorted_vertices(dim: usize, vertices: Vec<Vec<F>>) -> Self {
        Self {
            dim,
            vertices,
            source: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<F>] {
        &self.vertices
    }

    pub fn is_full_dimensional(&self) -> bool {
        !self.vertices.is_empty() && affine_rank(&self.vertices) == self.dim
    }

    pub fn facets(&self) -> Result<Vec<HullFacet<F>>, PolyError> {
        match &self.source {
            Some(h) if self.is_full_dimensional() => Ok(self.facets_from_rows(h)),
            _ => hull_facets(&self.vertices),
        }
    }

    /// A valid inequality is facet-defining iff its tight vertices span a
    /// hyperplane, and every facet is cut out by some row.
    fn facets_from_rows(&self, h: &HPolytope<F>) -> Vec<HullFacet<F>> {
        let mut found: BTreeMap<Vec<usize>, HullFacet<F>> = BTreeMap::new();
        for (row, b) in h.ineq.rows().zip(&h.bounds) {
            let on: Vec<usize> = (0..self.vertices.len())
                .filter(|&i| dot(row, &self.vertices[i]) == *b)
                .collect();
            if found.contains_key(&on) {
                continue;
            }
            let pts: Vec<Vec<F>> = on.iter().map(|&i| self.vertices[i].clone()).collect();
            if pts.len() < self.dim || affine_rank(&pts) != self.dim - 1 {
                continue;
            }
            let lead = row
                .iter()
                .find(|x| !x.is_zero())
                .expect("nonzero facet row")
                .abs();
            found.insert(
                on.clone(),
                HullFacet {
                    normal: row.iter().map(|x| x.clone() / lead.clone()).collect(),
                    offset: b.clone() / lead,
                    vertices: on,
                },
            );
        }
        found.into_values().collect()
    }

    /// H-representation by facets.
    pub fn to_h(&self) -> Result<HPolytope<F>, PolyError> {
        let facets = self.facets()?;
        let rows: Vec<Vec<F>> = facets.iter().map(|f| f.normal.clone()).collect();
        let bounds = facets.into_iter().map(|f| f.offset).collect();
        HPolytope::new(Matrix::from_rows(&rows, self.dim), bounds)
    }
}

/// All vertices of `{x : Ax ≤ b}` by scanning n-subsets of rows.
///
/// Emptiness is decided first, then boundedness, then full-dimensionality.
pub fn vertices<F: ExactField>(p: &HPolytope<F>) -> Result<VPolytope<F>, PolyError> {
    let n = p.dim();
    let a = &p.ineq;
    let m = a.nrows();
    let rank = a.rank();
    if rank < n {
        // Lineality: nonempty means unbounded. Feasibility is decided on the
        // orthogonal complement of the lineality space.
        let lineality = a.kernel();
        let mut nonempty = false;
        for_each_subset(m, rank, |rows| {
            let mut sys = a.select_rows(rows).to_rows();
            let mut rhs: Vec<F> = rows.iter().map(|&r| p.bounds[r].clone()).collect();
            for k in &lineality {
                sys.push(k.clone());
                rhs.push(F::zero());
            }
            let sys = Matrix::from_rows(&sys, n);
            if sys.rank() == n {
                let x = sys.solve(&rhs).expect("square invertible system");
                if p.contains(&x) {
                    nonempty = true;
                    return false;
                }
            }
            true
        });
        return Err(if nonempty {
            PolyError::Unbounded
        } else {
            PolyError::Empty
        });
    }

    let rows = a.to_rows();
    let verts = intvert::basic_solutions(&rows, &p.bounds, n).unwrap_or_else(|| {
        let mut found = BTreeSet::new();
        for_each_subset(m, n, |idx| {
            let sub = a.select_rows(idx);
            let rhs: Vec<F> = idx.iter().map(|&r| p.bounds[r].clone()).collect();
            if let Some(x) = sub.solve(&rhs) {
                if sub.rank() == n && p.contains(&x) {
                    found.insert(x);
                }
            }
            true
        });
        found.into_iter().collect()
    });
    if verts.is_empty() {
        return Err(PolyError::Empty);
    }
    // Pointed and nonempty: bounded iff the rows positively span, i.e. some
    // y > 0 has yᵀA = 0. With y = 1 + z, z ≥ 0: Aᵀz = −Aᵀ1.
    let at = a.transpose();
    let rhs: Vec<F> = at
        .rows()
        .map(|r| -r.iter().fold(F::zero(), |s, x| s + x.clone()))
        .collect();
    if feasible_point(&at, &rhs).is_none() {
        return Err(PolyError::Unbounded);
    }

    if affine_rank(&verts) < n {
        return Err(PolyError::DimensionDeficient);
    }
    Ok(VPolytope {
        dim: n,
        vertices: verts,
        source: Some(p.clone()),
    })
}

/// `P_h = {x : Gx ≤ h}` with the rays of `fan` as rows of `G`, in fan order.
pub fn p_h<F: ExactField>(fan: &Fan, h: &[F]) -> Result<HPolytope<F>, PolyError> {
    if h.len() != fan.n_rays() {
        return Err(PolyError::DimensionMismatch {
            expected: fan.n_rays(),
            got: h.len(),
        });
    }
    HPolytope::new(Matrix::from_int_rows(fan.rays(), fan.dim()), h.to_vec())
}

/// Outer normal fan: rays are primitive facet normals, and each vertex gives
/// the cone of the facets through it. The result is in canonical ray order.
/// For a non-simple polytope some cones have more than n rays.
pub fn normal_fan<F: ExactField>(p: &VPolytope<F>) -> Result<Fan, PolyError> {
    if !p.is_full_dimensional() {
        return Err(PolyError::DimensionDeficient);
    }
    let facets = p.facets()?;
    let rays: Vec<Vec<i64>> = facets
        .iter()
        .map(|f| primitive_i64(&f.normal).expect("nonzero facet normal"))
        .collect();
    let cones: Vec<Vec<usize>> = (0..p.vertices.len())
        .map(|v| {
            facets
                .iter()
                .enumerate()
                .filter(|(_, f)| f.vertices.contains(&v))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    Ok(Fan::new(p.dim, rays, cones, vec![])?.canonicalized())
}
