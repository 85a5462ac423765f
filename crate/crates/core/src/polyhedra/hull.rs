//! Facet enumeration of a full-dimensional point set by gift wrapping.
//!
//! Starting from one facet, each ridge (a facet of the facet, found by
//! recursing one dimension down) is rotated about until the hyperplane hits
//! the next point set, which is the neighbouring facet.

use std::collections::{BTreeMap, VecDeque};

use super::PolyError;
use crate::linalg::{dot, rank_of, sub, Matrix};
use crate::scalar::ExactField;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullFacet<F> {
    /// Outer normal: `normal · x ≤ offset` on the whole point set.
    pub normal: Vec<F>,
    pub offset: F,
    /// Sorted indices of the input points lying on the facet.
    pub vertices: Vec<usize>,
}

pub(crate) fn affine_rank<F: ExactField>(pts: &[Vec<F>]) -> usize {
    match pts.split_first() {
        None => 0,
        Some((p0, rest)) => {
            let diffs: Vec<Vec<F>> = rest.iter().map(|p| sub(p, p0)).collect();
            rank_of(&diffs, p0.len())
        }
    }
}

/// Facets of `conv(pts)`, sorted by vertex set. The points must span their
/// ambient space affinely.
pub fn hull_facets<F: ExactField>(pts: &[Vec<F>]) -> Result<Vec<HullFacet<F>>, PolyError> {
    let Some(d) = pts.first().map(Vec::len) else {
        return Err(PolyError::Empty);
    };
    if d == 0 || affine_rank(pts) < d {
        return Err(PolyError::DimensionDeficient);
    }
    let mut facets = wrap(pts, d);
    facets.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    Ok(facets)
}

fn tight<F: ExactField>(pts: &[Vec<F>], normal: &[F], offset: &F) -> Vec<usize> {
    (0..pts.len())
        .filter(|&i| dot(normal, &pts[i]) == *offset)
        .collect()
}

/// Rotate the supporting hyperplane `normal` about the points it shares with
/// `pivot` in the direction `w` (orthogonal to those points) until it hits
/// another point. Each candidate is the hyperplane through the hinge and one
/// point; a candidate with some point beyond it is superseded, as in planar
/// gift wrapping.
fn rotate<F: ExactField>(pts: &[Vec<F>], normal: &[F], w: &[F], pivot: &[F]) -> Option<Vec<F>> {
    let mut best: Option<Vec<F>> = None;
    for x in pts {
        let diff = sub(x, pivot);
        let nd = dot(normal, &diff);
        if !nd.is_negative() {
            continue;
        }
        if best.as_ref().is_none_or(|b| dot(b, &diff).is_positive()) {
            let wd = dot(w, &diff);
            let cand: Vec<F> = normal
                .iter()
                .zip(w)
                .map(|(a, b)| a.clone() * wd.clone() - nd.clone() * b.clone())
                .collect();
            best = Some(cand);
        }
    }
    best.map(|b| {
        let lead = b
            .iter()
            .find(|x| !x.is_zero())
            .expect("nonzero normal")
            .abs();
        b.into_iter().map(|x| x / lead.clone()).collect()
    })
}

fn first_facet<F: ExactField>(pts: &[Vec<F>], d: usize) -> (Vec<F>, F) {
    let mut normal = vec![F::zero(); d];
    normal[0] = -F::one();
    let mut offset = pts.iter().map(|p| dot(&normal, p)).max().expect("nonempty");
    loop {
        let face = tight(pts, &normal, &offset);
        let face_pts: Vec<Vec<F>> = face.iter().map(|&i| pts[i].clone()).collect();
        if affine_rank(&face_pts) == d - 1 {
            return (normal, offset);
        }
        let f0 = &face_pts[0];
        let mut rows: Vec<Vec<F>> = face_pts[1..].iter().map(|p| sub(p, f0)).collect();
        rows.push(normal.clone());
        let mut w = Matrix::from_rows(&rows, d)
            .kernel()
            .into_iter()
            .next()
            .expect("a lower-dimensional face leaves a free direction");
        if !pts.iter().any(|x| dot(&w, &sub(x, f0)).is_positive()) {
            w = w.into_iter().map(|v| -v).collect();
        }
        normal = rotate(pts, &normal, &w, f0).expect("full-dimensional point set");
        offset = dot(&normal, f0);
    }
}

fn wrap<F: ExactField>(pts: &[Vec<F>], d: usize) -> Vec<HullFacet<F>> {
    if d == 1 {
        let lo = pts.iter().map(|p| p[0].clone()).min().expect("nonempty");
        let hi = pts.iter().map(|p| p[0].clone()).max().expect("nonempty");
        let lo_n = vec![-F::one()];
        let hi_n = vec![F::one()];
        return vec![
            HullFacet {
                vertices: tight(pts, &lo_n, &-lo.clone()),
                normal: lo_n,
                offset: -lo,
            },
            HullFacet {
                vertices: tight(pts, &hi_n, &hi),
                normal: hi_n,
                offset: hi,
            },
        ];
    }

    let (n0, o0) = first_facet(pts, d);
    let mut found: BTreeMap<Vec<usize>, HullFacet<F>> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let v0 = tight(pts, &n0, &o0);
    found.insert(
        v0.clone(),
        HullFacet {
            normal: n0,
            offset: o0,
            vertices: v0.clone(),
        },
    );
    queue.push_back(v0);

    while let Some(key) = queue.pop_front() {
        let facet = found[&key].clone();
        // Chart for the facet hyperplane: drop a coordinate the normal depends on.
        let drop = facet
            .normal
            .iter()
            .position(|x| !x.is_zero())
            .expect("nonzero facet normal");
        let projected: Vec<Vec<F>> = facet
            .vertices
            .iter()
            .map(|&i| {
                let mut p = pts[i].clone();
                p.remove(drop);
                p
            })
            .collect();
        for ridge in wrap(&projected, d - 1) {
            let mut w = ridge.normal.clone();
            w.insert(drop, F::zero());
            let pivot = &pts[facet.vertices[ridge.vertices[0]]];
            let normal = rotate(pts, &facet.normal, &w, pivot)
                .expect("every ridge of a polytope borders two facets");
            let offset = dot(&normal, pivot);
            let verts = tight(pts, &normal, &offset);
            if !found.contains_key(&verts) {
                found.insert(
                    verts.clone(),
                    HullFacet {
                        normal,
                        offset,
                        vertices: verts.clone(),
                    },
                );
                queue.push_back(verts);
            }
        }
    }
    found.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::for_each_subset;
    use crate::Rat;
    use num_traits::Zero;

    fn pts(v: &[&[i64]]) -> Vec<Vec<Rat>> {
        v.iter()
            .map(|p| p.iter().map(|&x| Rat::from_int(x)).collect())
            .collect()
    }

    /// Brute force: hyperplanes through d affinely independent points with all
    /// points on one side.
    fn brute_facets(p: &[Vec<Rat>]) -> Vec<Vec<usize>> {
        let d = p[0].len();
        let mut out = std::collections::BTreeSet::new();
        for_each_subset(p.len(), d, |s| {
            let sel: Vec<Vec<Rat>> = s.iter().map(|&i| p[i].clone()).collect();
            if affine_rank(&sel) == d - 1 {
                let rows: Vec<Vec<Rat>> = sel[1..].iter().map(|q| sub(q, &sel[0])).collect();
                let nrm = Matrix::from_rows(&rows, d).kernel().remove(0);
                let vals: Vec<Rat> = p.iter().map(|q| dot(&nrm, &sub(q, &sel[0]))).collect();
                let zero = Rat::from_int(0);
                if vals.iter().all(|v| *v <= zero) || vals.iter().all(|v| *v >= zero) {
                    let on: Vec<usize> = (0..p.len()).filter(|&i| vals[i].is_zero()).collect();
                    out.insert(on);
                }
            }
            true
        });
        out.into_iter().collect()
    }

    #[test]
    fn square_and_pentagon() {
        let sq = pts(&[&[-1, -1], &[-1, 1], &[1, -1], &[1, 1]]);
        let f = hull_facets(&sq).unwrap();
        assert_eq!(f.len(), 4);
        let pent = pts(&[&[0, 0], &[0, 1], &[1, 2], &[2, 0], &[2, 2]]);
        let f = hull_facets(&pent).unwrap();
        let vs: Vec<Vec<usize>> = f.iter().map(|x| x.vertices.clone()).collect();
        assert_eq!(vs, brute_facets(&pent));
    }

    #[test]
    fn cube_with_interior_and_face_points() {
        let mut p = Vec::new();
        for x in [0, 2] {
            for y in [0, 2] {
                for z in [0, 2] {
                    p.push(vec![x, y, z]);
                }
            }
        }
        p.push(vec![1, 1, 1]);
        p.push(vec![1, 1, 2]);
        let p: Vec<Vec<Rat>> = p
            .iter()
            .map(|q| q.iter().map(|&x| Rat::from_int(x)).collect())
            .collect();
        let f = hull_facets(&p).unwrap();
        assert_eq!(f.len(), 6);
        let vs: Vec<Vec<usize>> = f.iter().map(|x| x.vertices.clone()).collect();
        assert_eq!(vs, brute_facets(&p));
    }

    #[test]
    fn degenerate_input() {
        let line = pts(&[&[0, 0], &[1, 1], &[2, 2]]);
        assert_eq!(hull_facets(&line), Err(PolyError::DimensionDeficient));
    }
}
