//! The exact scalar field every geometric computation is generic over.
//!
//! Only ordered fields with exact arithmetic qualify: comparisons are used as
//! decisions (feasibility, sign of a dependency), so tolerance is identically
//! zero. [`num_rational::Ratio`] over `i64` or [`BigInt`] both satisfy the
//! bound; the crate root fixes [`crate::Rat`] as the default.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

pub trait ExactField: Clone + Debug + Display + Ord + Hash + Num + Signed + Send + Sync {
    fn from_int(v: i64) -> Self;

    fn numer_bigint(&self) -> BigInt;

    fn denom_bigint(&self) -> BigInt;

    fn from_bigints(numer: BigInt, denom: BigInt) -> Self;

    /// `p/q` form, always with an explicit denominator (`3/1`, `-1/2`).
    fn to_pq(&self) -> String {
        format!("{}/{}", self.numer_bigint(), self.denom_bigint())
    }
}

impl<I> ExactField for Ratio<I>
where
    I: Clone
        + Debug
        + Display
        + Integer
        + Signed
        + Hash
        + FromPrimitive
        + Into<BigInt>
        + TryFrom<BigInt>
        + Send
        + Sync,
{
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(I::from_i64(v).expect("integer out of range for scalar type"))
    }

    fn numer_bigint(&self) -> BigInt {
        self.numer().clone().into()
    }

    fn denom_bigint(&self) -> BigInt {
        self.denom().clone().into()
    }

    fn from_bigints(numer: BigInt, denom: BigInt) -> Self {
        let n = I::try_from(numer)
            .ok()
            .expect("numerator out of range for scalar type");
        let d = I::try_from(denom)
            .ok()
            .expect("denominator out of range for scalar type");
        Ratio::new(n, d)
    }
}

/// Parse `p/q`, `p`, or `-p/q`.
pub fn parse_rational<F: ExactField>(s: &str) -> Option<F> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(F::from_bigints(n, d))
}

/// Scale a rational vector to the primitive integer vector with the same
/// direction. Returns `None` for the zero vector.
pub fn primitive_integer<F: ExactField>(v: &[F]) -> Option<Vec<BigInt>> {
    if v.iter().all(Zero::is_zero) {
        return None;
    }
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(&x.denom_bigint()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer_bigint() * (&lcm / x.denom_bigint()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Some(ints.into_iter().map(|x| x / &g).collect())
}

/// Primitive normalization narrowed to machine integers.
pub fn primitive_i64<F: ExactField>(v: &[F]) -> Option<Vec<i64>> {
    primitive_integer(v).map(|p| {
        p.iter()
            .map(|x| x.to_i64().expect("primitive vector entry exceeds i64"))
            .collect()
    })
}

/// gcd-normalize an integer vector without flipping its sign.
pub fn primitive_int_vec(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |acc, x| acc.gcd(x));
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

pub fn to_field<F: ExactField>(v: &[i64]) -> Vec<F> {
    v.iter().map(|&x| F::from_int(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    #[test]
    fn primitive_keeps_sign() {
        let v: Vec<Rat> = vec![Rat::new(2.into(), 3.into()), Rat::from_int(-4), Rat::zero()];
        assert_eq!(primitive_i64(&v), Some(vec![1, -6, 0]));
        assert_eq!(primitive_int_vec(&[-2, 4, 0]), vec![-1, 2, 0]);
        assert_eq!(primitive_i64::<Rat>(&[Rat::zero()]), None);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(
            parse_rational::<Rat>("3/2"),
            Some(Rat::new(3.into(), 2.into()))
        );
        assert_eq!(parse_rational::<Rat>("-4"), Some(Rat::from_int(-4)));
        assert_eq!(parse_rational::<Rat>("1/0"), None);
        assert_eq!(parse_rational::<Rat>("x"), None);
        assert_eq!(Rat::from_int(3).to_pq(), "3/1");
        assert_eq!(Rat::new((-6).into(), 4.into()).to_pq(), "-3/2");
    }

    #[test]
    fn small_ratio_is_exact_field() {
        type Small = Ratio<i64>;
        let x = Small::from_int(5) / Small::from_int(10);
        assert_eq!(x.to_pq(), "1/2");
    }
}
