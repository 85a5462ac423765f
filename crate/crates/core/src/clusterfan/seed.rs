use std::collections::BTreeMap;

use num_rational::Ratio;

use super::ClusterError;
use crate::linalg::Matrix;
use crate::polyhedra::ray_label;
use crate::Rat;

/// Exchange matrix plus principal-coefficient data.
///
/// `g` and `c` are stored row-major with one column per cluster variable:
/// `g[i][j]` is the i-th coordinate of the j-th g-vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Seed {
    b: Vec<Vec<i64>>,
    g: Vec<Vec<i64>>,
    c: Vec<Vec<i64>>,
    cluster_ids: Vec<String>,
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// Positive `d` with `d_i b_ij = −d_j b_ji`, if it exists.
fn symmetrizer(b: &[Vec<i64>]) -> Option<Vec<Ratio<i64>>> {
    let n = b.len();
    let mut d: Vec<Option<Ratio<i64>>> = vec![None; n];
    for root in 0..n {
        if d[root].is_some() {
            continue;
        }
        d[root] = Some(Ratio::from_integer(1));
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            let di = d[i].expect("visited");
            for j in 0..n {
                let (bij, bji) = (b[i][j], b[j][i]);
                if bij == 0 && bji == 0 {
                    continue;
                }
                if bij.signum() != -bji.signum() {
                    return None;
                }
                let dj = di * Ratio::new(bij, -bji);
                match d[j] {
                    None => {
                        d[j] = Some(dj);
                        stack.push(j);
                    }
                    Some(old) if old != dj => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(d.into_iter().map(|x| x.expect("all visited")).collect())
}

impl Seed {
    /// Initial seed with exchange matrix `b`: g- and c-matrices are the
    /// identity, so the initial cone is the positive orthant.
    pub fn new(b: Vec<Vec<i64>>) -> Result<Self, ClusterError> {
        let n = b.len();
        if n == 0 || b.iter().any(|r| r.len() != n) {
            return Err(ClusterError::NotSquare);
        }
        if (0..n).any(|i| b[i][i] != 0) || symmetrizer(&b).is_none() {
            return Err(ClusterError::NotSkewSymmetrizable);
        }
        let g = identity(n);
        let cluster_ids = (0..n).map(|j| column_id(&g, j)).collect();
        Ok(Self {
            b,
            c: identity(n),
            g,
            cluster_ids,
        })
    }

    pub fn rank(&self) -> usize {
        self.b.len()
    }

    pub fn b_matrix(&self) -> &[Vec<i64>] {
        &self.b
    }

    pub fn g_matrix(&self) -> &[Vec<i64>] {
        &self.g
    }

    pub fn c_matrix(&self) -> &[Vec<i64>] {
        &self.c
    }

    pub fn cluster_ids(&self) -> &[String] {
        &self.cluster_ids
    }

    pub fn g_vector(&self, j: usize) -> Vec<i64> {
        self.g.iter().map(|row| row[j]).collect()
    }

    pub fn g_vectors(&self) -> Vec<Vec<i64>> {
        (0..self.rank()).map(|j| self.g_vector(j)).collect()
    }

    /// Cluster identity: the sorted g-vectors.
    pub fn cluster_key(&self) -> Vec<Vec<i64>> {
        let mut v = self.g_vectors();
        v.sort_unstable();
        v
    }

    pub fn c_vector_sign(&self, j: usize) -> Option<i64> {
        let col: Vec<i64> = self.c.iter().map(|row| row[j]).collect();
        if col.iter().all(|&x| x >= 0) && col.iter().any(|&x| x > 0) {
            Some(1)
        } else if col.iter().all(|&x| x <= 0) && col.iter().any(|&x| x < 0) {
            Some(-1)
        } else {
            None
        }
    }

    pub fn g_determinant(&self) -> i64 {
        let m: Matrix<Rat> = Matrix::from_int_rows(&self.g, self.rank());
        let det = m.determinant();
        assert!(det.is_integer(), "integer matrix has integer determinant");
        num_traits::ToPrimitive::to_i64(&det.to_integer()).expect("small determinant")
    }

    /// Mutation in direction `k` (1-based).
    pub fn mutate(&self, k: usize) -> Result<Self, ClusterError> {
        let n = self.rank();
        if k == 0 || k > n {
            return Err(ClusterError::Direction { k, n });
        }
        let k = k - 1;
        let eps = self
            .c_vector_sign(k)
            .ok_or(ClusterError::NotSignCoherent(k + 1))?;

        // [B; C] mutates as one extended exchange matrix.
        let ext: Vec<&Vec<i64>> = self.b.iter().chain(self.c.iter()).collect();
        let mutated: Vec<Vec<i64>> = ext
            .iter()
            .enumerate()
            .map(|(i, row)| {
                (0..n)
                    .map(|j| {
                        if i == k || j == k {
                            -row[j]
                        } else {
                            let bik = row[k];
                            let bkj = self.b[k][j];
                            row[j] + bik.signum() * (bik * bkj).max(0)
                        }
                    })
                    .collect()
            })
            .collect();
        let (b, c) = (mutated[..n].to_vec(), mutated[n..].to_vec());

        // g'_k = −g_k + Σ_i [−ε b_ik]_+ g_i
        let mut g = self.g.clone();
        for (row, new_row) in self.g.iter().zip(g.iter_mut()) {
            new_row[k] = -row[k]
                + row
                    .iter()
                    .zip(&self.b)
                    .map(|(g_i, b_i)| (-eps * b_i[k]).max(0) * g_i)
                    .sum::<i64>();
        }
        let mut cluster_ids = self.cluster_ids.clone();
        cluster_ids[k] = column_id(&g, k);
        Ok(Self {
            b,
            g,
            c,
            cluster_ids,
        })
    }

    /// Same seed with cluster variables reordered: new position `i` holds
    /// old variable `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.rank();
        assert_eq!(perm.len(), n, "permutation length");
        let b = (0..n)
            .map(|i| (0..n).map(|j| self.b[perm[i]][perm[j]]).collect())
            .collect();
        let cols = |m: &[Vec<i64>]| -> Vec<Vec<i64>> {
            m.iter()
                .map(|row| perm.iter().map(|&p| row[p]).collect())
                .collect()
        };
        Self {
            b,
            g: cols(&self.g),
            c: cols(&self.c),
            cluster_ids: perm.iter().map(|&p| self.cluster_ids[p].clone()).collect(),
        }
    }

    /// Map from g-vector to the position of that variable.
    pub(crate) fn positions(&self) -> BTreeMap<Vec<i64>, usize> {
        (0..self.rank()).map(|j| (self.g_vector(j), j)).collect()
    }
}

fn column_id(g: &[Vec<i64>], j: usize) -> String {
    let col: Vec<i64> = g.iter().map(|row| row[j]).collect();
    ray_label(&col)
}

/// Free-function form of [`Seed::mutate`].
pub fn mutate_seed(s: &Seed, k: usize) -> Result<Seed, ClusterError> {
    s.mutate(k)
}
