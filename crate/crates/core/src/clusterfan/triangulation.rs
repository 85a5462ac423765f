//! Triangulations of a convex polygon: the combinatorial model of type A.
//!
//! Polygon vertices are numbered `1..=m` counterclockwise. A triangulation of
//! an `(n+3)`-gon has `n` diagonals; its diagonal order is the variable order
//! of the associated seed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ClusterError, Seed};

/// A chord `{a, b}` with `a < b`, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[usize; 2]", try_from = "[usize; 2]")]
pub struct Diagonal {
    a: usize,
    b: usize,
}

impl From<Diagonal> for [usize; 2] {
    fn from(d: Diagonal) -> Self {
        [d.a, d.b]
    }
}

impl TryFrom<[usize; 2]> for Diagonal {
    type Error = ClusterError;

    fn try_from([a, b]: [usize; 2]) -> Result<Self, ClusterError> {
        if a == b {
            return Err(ClusterError::InvalidTriangulation(format!(
                "degenerate chord {a}-{b}"
            )));
        }
        Ok(Diagonal::new(a, b))
    }
}

impl fmt::Display for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

impl Diagonal {
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "a diagonal needs two endpoints");
        Self {
            a: a.min(b),
            b: a.max(b),
        }
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.a, self.b)
    }

    /// A proper diagonal of the `m`-gon: endpoints in range, not a side.
    pub fn is_valid(&self, m: usize) -> bool {
        self.a >= 1 && self.b <= m && self.b - self.a >= 2 && !(self.a == 1 && self.b == m)
    }

    /// Strict interior crossing.
    pub fn crosses(&self, other: &Diagonal) -> bool {
        let (a, b, c, d) = (self.a, self.b, other.a, other.b);
        (a < c && c < b && b < d) || (c < a && a < d && d < b)
    }

    /// Rotate both endpoints by `step` positions of the `m`-gon.
    pub fn rotate(&self, m: usize, step: isize) -> Diagonal {
        let shift = |v: usize| -> usize {
            let m = m as isize;
            ((v as isize - 1 + step).rem_euclid(m) + 1) as usize
        };
        Diagonal::new(shift(self.a), shift(self.b))
    }
}

fn is_side(m: usize, a: usize, b: usize) -> bool {
    let (a, b) = (a.min(b), a.max(b));
    b - a == 1 || (a == 1 && b == m)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triangulation {
    polygon_size: usize,
    diagonals: Vec<Diagonal>,
}

impl Triangulation {
    pub fn new(polygon_size: usize, diagonals: Vec<Diagonal>) -> Result<Self, ClusterError> {
        let bad = |msg: String| Err(ClusterError::InvalidTriangulation(msg));
        if polygon_size < 4 {
            return bad(format!("polygon size {polygon_size} < 4"));
        }
        if diagonals.len() != polygon_size - 3 {
            return bad(format!(
                "{} diagonals given, a {polygon_size}-gon needs {}",
                diagonals.len(),
                polygon_size - 3
            ));
        }
        if let Some(d) = diagonals.iter().find(|d| !d.is_valid(polygon_size)) {
            return bad(format!("{d} is not a diagonal of the {polygon_size}-gon"));
        }
        for (i, d) in diagonals.iter().enumerate() {
            for e in &diagonals[i + 1..] {
                if d == e {
                    return bad(format!("{d} repeated"));
                }
                if d.crosses(e) {
                    return bad(format!("{d} crosses {e}"));
                }
            }
        }
        Ok(Self {
            polygon_size,
            diagonals,
        })
    }

    /// All diagonals from vertex 1.
    pub fn fan(polygon_size: usize) -> Self {
        let diagonals = (3..polygon_size).map(|b| Diagonal::new(1, b)).collect();
        Self::new(polygon_size, diagonals).expect("fan triangulation is valid")
    }

    /// Zigzag triangulation `{2,m}, {2,m−1}, {3,m−1}, {3,m−2}, …`: every
    /// triangle has a polygon side, and consecutive diagonals share one.
    pub fn snake(polygon_size: usize) -> Self {
        let (mut lo, mut hi) = (2, polygon_size);
        let mut diagonals = Vec::new();
        for step in 0..polygon_size - 3 {
            diagonals.push(Diagonal::new(lo, hi));
            if step % 2 == 0 {
                hi -= 1;
            } else {
                lo += 1;
            }
        }
        Self::new(polygon_size, diagonals).expect("snake triangulation is valid")
    }

    pub fn polygon_size(&self) -> usize {
        self.polygon_size
    }

    pub fn rank(&self) -> usize {
        self.diagonals.len()
    }

    pub fn diagonals(&self) -> &[Diagonal] {
        &self.diagonals
    }

    pub fn sorted_diagonals(&self) -> Vec<Diagonal> {
        let mut d = self.diagonals.clone();
        d.sort_unstable();
        d
    }

    fn is_edge(&self, a: usize, b: usize) -> bool {
        is_side(self.polygon_size, a, b) || self.diagonals.contains(&Diagonal::new(a, b))
    }

    /// The `n + 1` triangles as increasing vertex triples.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let m = self.polygon_size;
        let mut out = Vec::new();
        for a in 1..=m {
            for b in a + 1..=m {
                if !self.is_edge(a, b) {
                    continue;
                }
                for c in b + 1..=m {
                    if self.is_edge(b, c) && self.is_edge(a, c) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    /// Replace diagonal `k` (0-based position) by the other diagonal of its
    /// quadrilateral, keeping the position.
    pub fn flip(&self, k: usize) -> Self {
        let d = self.diagonals[k];
        let apexes: Vec<usize> = self
            .triangles()
            .into_iter()
            .filter(|t| t.contains(&d.a) && t.contains(&d.b))
            .map(|t| {
                t.into_iter()
                    .find(|&v| v != d.a && v != d.b)
                    .expect("triangle apex")
            })
            .collect();
        assert_eq!(apexes.len(), 2, "an inner diagonal borders two triangles");
        let mut diagonals = self.diagonals.clone();
        diagonals[k] = Diagonal::new(apexes[0], apexes[1]);
        Self {
            polygon_size: self.polygon_size,
            diagonals,
        }
    }

    /// True when some triangle has no polygon side.
    pub fn has_internal_triangle(&self) -> bool {
        self.triangles().iter().any(|&[a, b, c]| {
            !is_side(self.polygon_size, a, b)
                && !is_side(self.polygon_size, b, c)
                && !is_side(self.polygon_size, a, c)
        })
    }
}

/// The seed of a triangulation: `b_ij = +1` when, walking counterclockwise
/// around a triangle, diagonal `j` comes right after diagonal `i` (summed over
/// triangles); `g = c = identity`.
pub fn seed_from_triangulation(t: &Triangulation) -> Seed {
    let n = t.rank();
    let pos: BTreeMap<Diagonal, usize> = t
        .diagonals
        .iter()
        .enumerate()
        .map(|(i, &d)| (d, i))
        .collect();
    let mut b = vec![vec![0i64; n]; n];
    for [p, q, r] in t.triangles() {
        let sides = [
            Diagonal::new(p, q),
            Diagonal::new(q, r),
            Diagonal::new(r, p),
        ];
        for s in 0..3 {
            if let (Some(&i), Some(&j)) = (pos.get(&sides[s]), pos.get(&sides[(s + 1) % 3])) {
                b[i][j] += 1;
                b[j][i] -= 1;
            }
        }
    }
    Seed::new(b).expect("triangulation quivers are skew-symmetric")
}

/// All triangulations of a polygon and their flips.
#[derive(Clone, Debug)]
pub struct FlipGraph {
    pub polygon_size: usize,
    /// Sorted diagonal sets, in increasing order.
    pub nodes: Vec<Vec<Diagonal>>,
    /// `(i, j)` with `i < j`, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl FlipGraph {
    pub fn index_of(&self, diagonals: &[Diagonal]) -> Option<usize> {
        let mut key = diagonals.to_vec();
        key.sort_unstable();
        self.nodes.binary_search(&key).ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    pub fn triangulation(&self, i: usize) -> Triangulation {
        Triangulation::new(self.polygon_size, self.nodes[i].clone())
            .expect("stored nodes are valid")
    }
}

/// Depth-first generation of every triangulation from the fan
/// triangulation, closing under flips.
pub fn flip_graph(polygon_size: usize) -> FlipGraph {
    assert!(polygon_size >= 4, "flip graphs start at the square");
    let start = Triangulation::fan(polygon_size);
    let mut seen: BTreeSet<Vec<Diagonal>> = BTreeSet::new();
    let mut raw_edges = BTreeSet::new();
    let mut stack = vec![start];
    seen.insert(stack[0].sorted_diagonals());
    while let Some(t) = stack.pop() {
        let key = t.sorted_diagonals();
        for k in 0..t.rank() {
            let u = t.flip(k);
            let ukey = u.sorted_diagonals();
            raw_edges.insert(if key < ukey {
                (key.clone(), ukey.clone())
            } else {
                (ukey.clone(), key.clone())
            });
            if seen.insert(ukey) {
                stack.push(u);
            }
        }
    }
    let nodes: Vec<Vec<Diagonal>> = seen.into_iter().collect();
    let idx = |k: &Vec<Diagonal>| nodes.binary_search(k).expect("seen node");
    let mut edges: Vec<(usize, usize)> = raw_edges.iter().map(|(a, b)| (idx(a), idx(b))).collect();
    edges.sort_unstable();
    FlipGraph {
        polygon_size,
        nodes,
        edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalan(k: usize) -> usize {
        (0..k).fold(1, |c, i| c * 2 * (2 * i + 1) / (i + 2))
    }

    #[test]
    fn crossing_predicate() {
        assert!(Diagonal::new(1, 3).crosses(&Diagonal::new(2, 4)));
        assert!(!Diagonal::new(1, 3).crosses(&Diagonal::new(3, 5)));
        assert!(!Diagonal::new(1, 4).crosses(&Diagonal::new(2, 3)));
        assert!(Diagonal::new(2, 5).crosses(&Diagonal::new(1, 3)));
    }

    #[test]
    fn validation() {
        let d = |a, b| Diagonal::new(a, b);
        assert!(Triangulation::new(5, vec![d(1, 3), d(1, 4)]).is_ok());
        assert!(Triangulation::new(5, vec![d(1, 3), d(2, 4)]).is_err());
        assert!(Triangulation::new(5, vec![d(1, 3)]).is_err());
        assert!(Triangulation::new(5, vec![d(1, 5), d(1, 3)]).is_err());
        assert!(Triangulation::new(3, vec![]).is_err());
    }

    #[test]
    fn rotation_has_polygon_order() {
        let d = Diagonal::new(1, 3);
        assert_eq!(d.rotate(6, 1), Diagonal::new(2, 4));
        assert_eq!(d.rotate(6, -1), Diagonal::new(6, 2));
        let mut e = d;
        for _ in 0..6 {
            e = e.rotate(6, 1);
        }
        assert_eq!(e, d);
    }

    #[test]
    fn seeds_of_small_triangulations() {
        let s = seed_from_triangulation(&Triangulation::fan(5));
        let b = s.b_matrix();
        assert!(b == [vec![0, 1], vec![-1, 0]] || b == [vec![0, -1], vec![1, 0]]);

        let snake = Triangulation::snake(6);
        assert!(!snake.has_internal_triangle());
        let b = seed_from_triangulation(&snake).b_matrix().to_vec();
        // Path 0 — 1 — 2 with no 3-cycle.
        assert_eq!(b[0][2], 0);
        assert_eq!(b[0][1].abs(), 1);
        assert_eq!(b[1][2].abs(), 1);

        let d = |a, c| Diagonal::new(a, c);
        let inner = Triangulation::new(6, vec![d(1, 3), d(3, 5), d(1, 5)]).unwrap();
        assert!(inner.has_internal_triangle());
        let b = seed_from_triangulation(&inner).b_matrix().to_vec();
        assert!(b[0][1] == b[1][2] && b[1][2] == b[2][0] && b[0][1].abs() == 1);
    }

    #[test]
    fn flips_commute_with_seed_mutation() {
        for t in flip_graph(7)
            .nodes
            .iter()
            .map(|d| Triangulation::new(7, d.clone()).unwrap())
        {
            let s = seed_from_triangulation(&t);
            for k in 0..t.rank() {
                let lhs = seed_from_triangulation(&t.flip(k));
                assert_eq!(s.mutate(k + 1).unwrap().b_matrix(), lhs.b_matrix());
            }
        }
    }

    #[test]
    fn catalan_counts() {
        let sq = flip_graph(4);
        assert_eq!((sq.nodes.len(), sq.edges.len()), (2, 1));
        let pent = flip_graph(5);
        assert_eq!((pent.nodes.len(), pent.edges.len()), (5, 5));
        assert!(pent.degrees().iter().all(|&d| d == 2));
        let hex = flip_graph(6);
        assert_eq!((hex.nodes.len(), hex.edges.len()), (14, 21));
        assert!(hex.degrees().iter().all(|&d| d == 3));
        for m in 4..=9 {
            let g = flip_graph(m);
            assert_eq!(g.nodes.len(), catalan(m - 2));
            assert_eq!(g.edges.len(), catalan(m - 2) * (m - 3) / 2);
        }
    }
}
