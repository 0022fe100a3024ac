//! Exact nonnegative rationals extended with `∞`.
//!
//! Every quantity in the crate (masses, function values, integrals) lives in
//! [`ExtRat`]. Arithmetic is exact. The infinite element absorbs addition,
//! and `0 · ∞ = ∞ · 0 = 0`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact rational scalar. Values handled by the crate are always nonnegative.
pub type Rational = BigRational;

/// Builds the rational `n/d`. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q` or an integer into a nonnegative rational.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let text = text.trim();
    let bad = || Error::BadNumber(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if num.starts_with('-') {
        return Err(Error::NegativeNumber(text.to_string()));
    }
    if !digits(num) || !digits(den) {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Renders a rational as `p/q`, or as a bare integer when `q == 1`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// An element of the extended nonnegative rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRat {
    Fin(Rational),
    Inf,
}

impl ExtRat {
    pub fn zero() -> Self {
        ExtRat::Fin(Rational::zero())
    }

    pub fn one() -> Self {
        ExtRat::Fin(Rational::one())
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        ExtRat::Fin(rat(n, d))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtRat::Fin(r) if r.is_zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRat::Inf)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRat::Fin(r) => Some(r),
            ExtRat::Inf => None,
        }
    }

    /// Multiplication by a finite scalar, with `0 · ∞ = 0`.
    pub fn scale(&self, r: &Rational) -> ExtRat {
        match self {
            ExtRat::Fin(x) => ExtRat::Fin(x * r),
            ExtRat::Inf if r.is_zero() => ExtRat::zero(),
            ExtRat::Inf => ExtRat::Inf,
        }
    }

    /// `self - other` for `other <= self`, where `other` is finite.
    /// `∞ - r = ∞`.
    pub fn sub_finite(&self, other: &Rational) -> ExtRat {
        match self {
            ExtRat::Fin(x) => {
                let d = x - other;
                debug_assert!(!d.is_negative(), "sub_finite underflow");
                ExtRat::Fin(d)
            }
            ExtRat::Inf => ExtRat::Inf,
        }
    }
}

impl From<Rational> for ExtRat {
    fn from(r: Rational) -> Self {
        ExtRat::Fin(r)
    }
}

impl From<i64> for ExtRat {
    fn from(n: i64) -> Self {
        ExtRat::Fin(rat(n, 1))
    }
}

impl Default for ExtRat {
    fn default() -> Self {
        ExtRat::zero()
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRat::Fin(a), ExtRat::Fin(b)) => a.cmp(b),
            (ExtRat::Fin(_), ExtRat::Inf) => Ordering::Less,
            (ExtRat::Inf, ExtRat::Fin(_)) => Ordering::Greater,
            (ExtRat::Inf, ExtRat::Inf) => Ordering::Equal,
        }
    }
}

impl Add for &ExtRat {
    type Output = ExtRat;

    fn add(self, rhs: &ExtRat) -> ExtRat {
        match (self, rhs) {
            (ExtRat::Fin(a), ExtRat::Fin(b)) => ExtRat::Fin(a + b),
            _ => ExtRat::Inf,
        }
    }
}

impl Add for ExtRat {
    type Output = ExtRat;

    fn add(self, rhs: ExtRat) -> ExtRat {
        &self + &rhs
    }
}

impl AddAssign<&ExtRat> for ExtRat {
    fn add_assign(&mut self, rhs: &ExtRat) {
        match (&mut *self, rhs) {
            (ExtRat::Fin(a), ExtRat::Fin(b)) => *a += b,
            _ => *self = ExtRat::Inf,
        }
    }
}

impl Mul for &ExtRat {
    type Output = ExtRat;

    fn mul(self, rhs: &ExtRat) -> ExtRat {
        match (self, rhs) {
            (ExtRat::Fin(a), ExtRat::Fin(b)) => ExtRat::Fin(a * b),
            (ExtRat::Fin(a), ExtRat::Inf) | (ExtRat::Inf, ExtRat::Fin(a)) => {
                if a.is_zero() {
                    ExtRat::zero()
                } else {
                    ExtRat::Inf
                }
            }
            (ExtRat::Inf, ExtRat::Inf) => ExtRat::Inf,
        }
    }
}

impl Mul for ExtRat {
    type Output = ExtRat;

    fn mul(self, rhs: ExtRat) -> ExtRat {
        &self * &rhs
    }
}

impl Sum for ExtRat {
    fn sum<I: Iterator<Item = ExtRat>>(iter: I) -> ExtRat {
        let mut acc = ExtRat::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

impl<'a> Sum<&'a ExtRat> for ExtRat {
    fn sum<I: Iterator<Item = &'a ExtRat>>(iter: I) -> ExtRat {
        let mut acc = ExtRat::zero();
        for x in iter {
            acc += x;
        }
        acc
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Fin(r) => f.write_str(&fmt_rational(r)),
            ExtRat::Inf => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtRat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "inf" | "∞" => Ok(ExtRat::Inf),
            other => parse_rational(other).map(ExtRat::Fin),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> ExtRat {
        ExtRat::from_ratio(n, d)
    }

    #[test]
    fn infinity_absorbs_addition() {
        assert_eq!(&q(3, 2) + &ExtRat::Inf, ExtRat::Inf);
        assert_eq!(&ExtRat::Inf + &q(3, 2), ExtRat::Inf);
        assert_eq!(&ExtRat::Inf + &ExtRat::Inf, ExtRat::Inf);
    }

    #[test]
    fn zero_times_infinity_is_zero() {
        assert_eq!(&ExtRat::zero() * &ExtRat::Inf, ExtRat::zero());
        assert_eq!(&ExtRat::Inf * &ExtRat::zero(), ExtRat::zero());
        assert_eq!(ExtRat::Inf.scale(&rat(0, 1)), ExtRat::zero());
        assert_eq!(&q(1, 7) * &ExtRat::Inf, ExtRat::Inf);
    }

    #[test]
    fn parse_and_print() {
        assert_eq!("1/2".parse::<ExtRat>().unwrap(), q(1, 2));
        assert_eq!("2/4".parse::<ExtRat>().unwrap().to_string(), "1/2");
        assert_eq!("6/3".parse::<ExtRat>().unwrap().to_string(), "2");
        assert_eq!("inf".parse::<ExtRat>().unwrap(), ExtRat::Inf);
        assert!("1/0".parse::<ExtRat>().is_err());
        assert!(matches!(
            "-1".parse::<ExtRat>(),
            Err(Error::NegativeNumber(_))
        ));
        assert!("x".parse::<ExtRat>().is_err());
        assert!("".parse::<ExtRat>().is_err());
    }

    #[test]
    fn infinity_is_top() {
        assert!(q(1_000_000, 1) < ExtRat::Inf);
        assert!(ExtRat::zero() < q(1, 1000));
    }

    fn ext() -> impl Strategy<Value = ExtRat> {
        prop_oneof![
            4 => (0i64..20, 1i64..9).prop_map(|(n, d)| q(n, d)),
            1 => Just(ExtRat::Inf),
        ]
    }

    proptest! {
        #[test]
        fn semiring_laws(a in ext(), b in ext(), c in ext()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn addition_is_monotone(a in ext(), b in ext(), c in ext()) {
            if a <= b {
                prop_assert!(&a + &c <= &b + &c);
            }
        }
    }
}
