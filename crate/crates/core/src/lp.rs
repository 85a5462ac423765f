//! Exact phase-one simplex, used as a feasibility oracle.
//!
//! Bland's rule guarantees termination; instances are small enough that a
//! dense tableau is fine.

use crate::linalg::Matrix;
use crate::scalar::ExactField;

/// A point of `{x ≥ 0 : Ax = b}`, or `None` if the set is empty.
pub fn feasible_point<F: ExactField>(a: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    let m = a.nrows();
    let n = a.ncols();
    assert_eq!(b.len(), m, "right-hand side length mismatch");
    if m == 0 {
        return Some(vec![F::zero(); n]);
    }
    // Tableau columns: n structural, m artificial, then rhs.
    let width = n + m + 1;
    let mut t = vec![vec![F::zero(); width]; m];
    for r in 0..m {
        let flip = b[r].is_negative();
        for c in 0..n {
            let v = a[(r, c)].clone();
            t[r][c] = if flip { -v } else { v };
        }
        t[r][n + r] = F::one();
        t[r][width - 1] = if flip { -b[r].clone() } else { b[r].clone() };
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Reduced costs of minimizing the artificial sum.
    let mut cost = vec![F::zero(); width];
    for row in &t {
        for c in 0..n {
            cost[c] = cost[c].clone() - row[c].clone();
        }
        cost[width - 1] = cost[width - 1].clone() - row[width - 1].clone();
    }

    while let Some(enter) = (0..n + m).find(|&c| cost[c].is_negative()) {
        let mut leave: Option<(usize, F)> = None;
        for r in 0..m {
            if t[r][enter].is_positive() {
                let ratio = t[r][width - 1].clone() / t[r][enter].clone();
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            // Phase one objective is bounded below by zero.
            unreachable!("unbounded phase-one simplex");
        };
        pivot(&mut t, &mut cost, pr, enter);
        basis[pr] = enter;
    }

    if !cost[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![F::zero(); n];
    for (r, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[r][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot<F: ExactField>(t: &mut [Vec<F>], cost: &mut [F], pr: usize, pc: usize) {
    let inv = F::one() / t[pr][pc].clone();
    for v in t[pr].iter_mut() {
        *v = v.clone() * inv.clone();
    }
    let prow = t[pr].clone();
    for (r, row) in t.iter_mut().enumerate() {
        if r == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for (v, p) in row.iter_mut().zip(&prow) {
            *v = v.clone() - f.clone() * p.clone();
        }
    }
    if !cost[pc].is_zero() {
        let f = cost[pc].clone();
        for (v, p) in cost.iter_mut().zip(&prow) {
            *v = v.clone() - f.clone() * p.clone();
        }
    }
}

/// Feasibility of a mixed system: `eq · y = eq_rhs`, `ge · y ≥ ge_rhs`,
/// with `y` free. Returns a witness.
pub fn feasible_free<F: ExactField>(
    dim: usize,
    eq: &[Vec<F>],
    eq_rhs: &[F],
    ge: &[Vec<F>],
    ge_rhs: &[F],
) -> Option<Vec<F>> {
    // y = y⁺ − y⁻; one surplus per ≥ row.
    let rows = eq.len() + ge.len();
    let cols = 2 * dim + ge.len();
    let mut a = Matrix::zeros(rows, cols);
    let mut b = Vec::with_capacity(rows);
    for (r, row) in eq.iter().chain(ge.iter()).enumerate() {
        for (c, v) in row.iter().enumerate() {
            a[(r, c)] = v.clone();
            a[(r, dim + c)] = -v.clone();
        }
        if r >= eq.len() {
            a[(r, 2 * dim + r - eq.len())] = -F::one();
        }
    }
    b.extend(eq_rhs.iter().cloned());
    b.extend(ge_rhs.iter().cloned());
    let z = feasible_point(&a, &b)?;
    Some(
        (0..dim)
            .map(|i| z[i].clone() - z[dim + i].clone())
            .collect(),
    )
}
