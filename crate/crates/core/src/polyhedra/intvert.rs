//! Vertex scan in fixed-width integers.
//!
//! Each row of `Ax ≤ b` is scaled to integers; each basic solution is then
//! `x = N / D` by Cramer's rule with Bareiss determinants. Every operation is
//! checked, and any overflow abandons the fast path as a whole.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::for_each_subset;
use crate::scalar::ExactField;

fn to_int_rows<F: ExactField>(rows: &[Vec<F>], bounds: &[F]) -> Option<Vec<Vec<i128>>> {
    rows.iter()
        .zip(bounds)
        .map(|(row, b)| {
            let all: Vec<&F> = row.iter().chain(std::iter::once(b)).collect();
            let lcm = all
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(&x.denom_bigint()));
            all.iter()
                .map(|x| (x.numer_bigint() * (&lcm / x.denom_bigint())).to_i128())
                .collect()
        })
        .collect()
}

/// Fraction-free determinant of a square matrix.
fn bareiss(mut m: Vec<Vec<i128>>) -> Option<i128> {
    let n = m.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                return Some(0);
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j]
                    .checked_mul(m[k][k])?
                    .checked_sub(m[i][k].checked_mul(m[k][j])?)?;
                m[i][j] = v / prev;
            }
        }
        prev = m[k][k];
    }
    m[n - 1][n - 1].checked_mul(sign)
}

fn gcd(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

/// Distinct feasible basic solutions as `(numerators, denominator)` in lowest
/// terms, or `None` on overflow.
fn scan(rows: &[Vec<i128>], n: usize) -> Option<BTreeSet<(Vec<i128>, i128)>> {
    let mut found = BTreeSet::new();
    let mut overflow = false;
    for_each_subset(rows.len(), n, |idx| {
        let step = || -> Option<Option<(Vec<i128>, i128)>> {
            let sub: Vec<Vec<i128>> = idx.iter().map(|&r| rows[r][..n].to_vec()).collect();
            let mut d = bareiss(sub.clone())?;
            if d == 0 {
                return Some(None);
            }
            let mut num = (0..n)
                .map(|c| {
                    let mut s = sub.clone();
                    for (row, &r) in s.iter_mut().zip(idx) {
                        row[c] = rows[r][n];
                    }
                    bareiss(s)
                })
                .collect::<Option<Vec<i128>>>()?;
            if d < 0 {
                d = -d;
                num.iter_mut().for_each(|x| *x = -*x);
            }
            for row in rows {
                let mut lhs = 0i128;
                for (a, x) in row[..n].iter().zip(&num) {
                    lhs = lhs.checked_add(a.checked_mul(*x)?)?;
                }
                if lhs > row[n].checked_mul(d)? {
                    return Some(None);
                }
            }
            let g = num.iter().fold(d, |g, &x| gcd(g, x));
            Some(Some((num.into_iter().map(|x| x / g).collect(), d / g)))
        };
        match step() {
            None => {
                overflow = true;
                false
            }
            Some(Some(v)) => {
                found.insert(v);
                true
            }
            Some(None) => true,
        }
    });
    (!overflow).then_some(found)
}

/// Feasible basic solutions of `Ax ≤ b`, sorted, or `None` if the data do not
/// fit the integer path.
pub(crate) fn basic_solutions<F: ExactField>(
    rows: &[Vec<F>],
    bounds: &[F],
    n: usize,
) -> Option<Vec<Vec<F>>> {
    if n == 0 {
        return None;
    }
    let int_rows = to_int_rows(rows, bounds)?;
    let found = scan(&int_rows, n)?;
    let verts: BTreeSet<Vec<F>> = found
        .into_iter()
        .map(|(num, d)| {
            num.into_iter()
                .map(|x| {
                    if x.is_zero() {
                        F::zero()
                    } else {
                        F::from_bigints(BigInt::from(x), BigInt::from(d))
                    }
                })
                .collect()
        })
        .collect();
    Some(verts.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        assert_eq!(bareiss(vec![vec![2, 1], vec![1, 3]]), Some(5));
        assert_eq!(bareiss(vec![vec![0, 1], vec![1, 0]]), Some(-1));
        assert_eq!(bareiss(vec![vec![1, 2], vec![2, 4]]), Some(0));
        assert_eq!(
            bareiss(vec![vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]),
            Some(6)
        );
        assert_eq!(bareiss(vec![vec![i128::MAX, 2], vec![2, i128::MAX]]), None);
    }
}
