//! Exact rational tolerances.
//!
//! Every density threshold in the crate is compared exactly: a degree `deg`
//! satisfies `deg <= eps * n` iff `deg <= floor(eps * n)`, so the comparisons
//! reduce to integer arithmetic once [`Rational::floor_mul`] is evaluated.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::input("zero denominator"));
        }
        Ok(Rational(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        )))
    }

    /// `num / den` for statically known non-zero denominators.
    pub fn ratio(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn half() -> Self {
        Rational::ratio(1, 2)
    }

    pub fn from_integer(n: u64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// True iff `0 < self < 1/2`.
    pub fn in_open_half(&self) -> bool {
        self.is_positive() && *self < Rational::half()
    }

    /// True iff `0 < self < 1`.
    pub fn in_open_unit(&self) -> bool {
        self.is_positive() && *self < Rational::one()
    }

    pub fn pow(&self, e: u32) -> Self {
        Rational(num::pow(self.0.clone(), e as usize))
    }

    pub fn mul(&self, other: &Rational) -> Self {
        Rational(&self.0 * &other.0)
    }

    pub fn add(&self, other: &Rational) -> Self {
        Rational(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Rational) -> Self {
        Rational(&self.0 - &other.0)
    }

    pub fn mul_int(&self, n: usize) -> Self {
        Rational(&self.0 * BigInt::from(n))
    }

    pub fn div_int(&self, n: usize) -> Self {
        assert!(n != 0, "division by zero");
        Rational(&self.0 / BigInt::from(n))
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    /// `floor(self * n)`, saturating at `usize::MAX`; zero for negative values.
    pub fn floor_mul(&self, n: usize) -> usize {
        let v = (&self.0 * BigInt::from(n)).floor().to_integer();
        if v.is_negative() {
            0
        } else {
            v.to_usize().unwrap_or(usize::MAX)
        }
    }

    /// `ceil(self * n)`, saturating at `usize::MAX`.
    pub fn ceil_mul(&self, n: usize) -> usize {
        let v = (&self.0 * BigInt::from(n)).ceil().to_integer();
        if v.is_negative() {
            0
        } else {
            v.to_usize().unwrap_or(usize::MAX)
        }
    }

    /// `ceil(1 / self)`, saturating at `usize::MAX`. Requires a positive value.
    pub fn ceil_recip(&self) -> usize {
        assert!(self.is_positive(), "ceil_recip of non-positive rational");
        self.0
            .recip()
            .ceil()
            .to_integer()
            .to_usize()
            .unwrap_or(usize::MAX)
    }

    /// Smallest integer `k >= 1` with `k^2 * self >= 1`, i.e. `ceil(self^{-1/2})`.
    pub fn ceil_inv_sqrt(&self) -> usize {
        assert!(self.is_positive(), "ceil_inv_sqrt of non-positive rational");
        let inv = self.0.recip();
        let approx = inv.to_f64().unwrap_or(f64::MAX).sqrt().ceil().max(1.0);
        let mut k = if approx.is_finite() && approx < 1e15 {
            approx as usize
        } else {
            usize::MAX / 4
        };
        let sq = |k: usize| BigRational::from_integer(BigInt::from(k) * BigInt::from(k));
        while k > 1 && sq(k - 1) >= inv {
            k -= 1;
        }
        while sq(k) < inv {
            k += 1;
        }
        k
    }

    /// A rational `r >= sqrt(self)` within `2^-20` relative slack.
    pub fn sqrt_upper(&self) -> Self {
        if !self.is_positive() {
            return Rational::zero();
        }
        let scale: u64 = 1 << 20;
        let scaled = (&self.0 * BigInt::from(scale) * BigInt::from(scale))
            .ceil()
            .to_integer();
        let mut root = scaled.sqrt();
        if &root * &root < scaled {
            root += 1;
        }
        Rational(BigRational::new(root, BigInt::from(scale)))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }

    pub fn min(self, other: Rational) -> Rational {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Rational) -> Rational {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Compares `count / total` against `self` exactly.
    pub fn cmp_fraction(&self, count: usize, total: usize) -> Ordering {
        assert!(total != 0, "empty fraction");
        let frac = BigRational::new(BigInt::from(count), BigInt::from(total));
        frac.cmp(&self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: i64 = num
            .parse()
            .map_err(|_| Error::input(format!("bad rational `{s}`")))?;
        let den: i64 = den
            .parse()
            .map_err(|_| Error::input(format!("bad rational `{s}`")))?;
        Rational::new(num, den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_and_ceil() {
        let r = Rational::ratio(2, 5);
        assert_eq!(r.floor_mul(5), 2);
        assert_eq!(r.floor_mul(4), 1);
        assert_eq!(r.ceil_mul(4), 2);
        assert_eq!(Rational::ratio(1, 10).ceil_recip(), 10);
        assert_eq!(Rational::ratio(3, 10).ceil_recip(), 4);
    }

    #[test]
    fn inverse_square_roots() {
        assert_eq!(Rational::ratio(1, 25).ceil_inv_sqrt(), 5);
        assert_eq!(Rational::ratio(1, 26).ceil_inv_sqrt(), 6);
        assert_eq!(Rational::ratio(1, 4).ceil_inv_sqrt(), 2);
        assert_eq!(Rational::ratio(1, 1).ceil_inv_sqrt(), 1);
        let r = Rational::ratio(1, 4).sqrt_upper();
        assert!(r >= Rational::half());
        assert!(r.to_f64() - 0.5 < 1e-5);
        let s = Rational::ratio(1, 3).sqrt_upper();
        assert!(s.mul(&s) >= Rational::ratio(1, 3));
    }

    #[test]
    fn parse_round_trip() {
        let r: Rational = "6/8".parse().unwrap();
        assert_eq!(r, Rational::ratio(3, 4));
        assert_eq!(r.to_string(), "3/4");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn powers_stay_exact() {
        let r = Rational::ratio(1, 20).pow(48);
        assert!(r.is_positive());
        assert_eq!(r.floor_mul(1_000_000), 0);
    }
}
