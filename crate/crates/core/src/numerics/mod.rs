//! Precision kernel: the scalar abstraction shared by every evaluator,
//! arbitrary-precision reals, exact rationals and exact determinants.

mod det;
mod real;

use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{Num, NumRef, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use det::exact_det;
pub use real::Real;

/// Exact rational; always normalized with a positive denominator.
pub type Rat = num_rational::BigRational;

/// Working precision in significant decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision(u32);

impl Precision {
    pub const MIN: u32 = 30;
    pub const MAX: u32 = 200;
    pub const DEFAULT: Precision = Precision(50);

    pub fn new(digits: u32) -> Result<Self> {
        if (Self::MIN..=Self::MAX).contains(&digits) {
            Ok(Precision(digits))
        } else {
            Err(Error::InvalidPrecision(digits))
        }
    }

    pub fn digits(self) -> u32 {
        self.0
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::DEFAULT
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Exact ring/field operations. Everything built from `+ - * /` and integer
/// powers (Pochhammer products, continued-fraction coefficients, convergent
/// recurrences) is written against this bound so it runs unchanged on
/// [`Rat`], [`Real`] and `f64`.
pub trait Field:
    Clone + fmt::Debug + PartialEq + Num + NumRef + Neg<Output = Self> + Send + Sync
{
}

impl<T> Field for T where
    T: Clone + fmt::Debug + PartialEq + Num + NumRef + Neg<Output = T> + Send + Sync
{
}

/// An ordered scalar with a notion of working precision.
pub trait Scalar: Field + PartialOrd + Signed + fmt::Display {
    fn from_rat(r: &Rat, prec: Precision) -> Self;

    fn from_i64(n: i64, prec: Precision) -> Self {
        Self::from_rat(&Rat::from_integer(n.into()), prec)
    }

    /// Significant decimal digits this scalar actually carries at `prec`.
    fn significant_digits(prec: Precision) -> i32;

    /// `10^k`.
    fn pow10(k: i32, prec: Precision) -> Self;

    /// Integer power; negative exponents invert.
    fn powi(&self, exp: &BigInt) -> Self;

    fn to_f64(&self) -> f64;

    /// Decimal rendering with exactly `places` fractional digits.
    fn to_fixed(&self, places: usize) -> String;

    /// For values whose magnitude leaves `[1e-100, 1e100]`, an exactly
    /// representable factor that brings it back near 1.
    fn renormalizer(&self) -> Option<Self>;

    fn powu(&self, exp: u64) -> Self {
        self.powi(&BigInt::from(exp))
    }
}

/// Threshold below which a term counts as negligible: `10^-(D+10)`.
pub fn negligible<S: Scalar>(prec: Precision) -> S {
    S::pow10(-(S::significant_digits(prec) + 10), prec)
}

/// Agreement tolerance between independent routes: `10^-(D-10)`.
pub fn agreement<S: Scalar>(prec: Precision) -> S {
    S::pow10(-(S::significant_digits(prec) - 10), prec)
}

impl Scalar for Real {
    fn from_rat(r: &Rat, prec: Precision) -> Self {
        Real::from_rat(r, prec)
    }

    fn from_i64(n: i64, prec: Precision) -> Self {
        Real::from_i64(n, prec)
    }

    fn significant_digits(prec: Precision) -> i32 {
        prec.digits() as i32
    }

    fn pow10(k: i32, prec: Precision) -> Self {
        Real::pow10(k, prec)
    }

    fn powi(&self, exp: &BigInt) -> Self {
        Real::powi(self, exp)
    }

    fn to_f64(&self) -> f64 {
        Real::to_f64(self)
    }

    fn to_fixed(&self, places: usize) -> String {
        Real::to_fixed(self, places)
    }

    fn renormalizer(&self) -> Option<Self> {
        let e = self.decimal_exponent()?;
        if (-100..100).contains(&e) {
            return None;
        }
        Some(Real::pow10(-(e as i32), Precision(1)))
    }
}

impl Scalar for f64 {
    fn from_rat(r: &Rat, _prec: Precision) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn from_i64(n: i64, _prec: Precision) -> Self {
        n as f64
    }

    fn significant_digits(_prec: Precision) -> i32 {
        15
    }

    fn pow10(k: i32, _prec: Precision) -> Self {
        10f64.powi(k)
    }

    fn powi(&self, exp: &BigInt) -> Self {
        match exp.to_i32() {
            Some(e) => f64::powi(*self, e),
            None => self.powf(exp.to_f64().unwrap_or(f64::INFINITY)),
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_fixed(&self, places: usize) -> String {
        format!("{self:.places$}")
    }

    fn renormalizer(&self) -> Option<Self> {
        let a = self.abs();
        if a == 0.0 || (1e-100..=1e100).contains(&a) {
            return None;
        }
        Some(2f64.powi(-(a.log2().floor() as i32)))
    }
}

impl Scalar for Rat {
    fn from_rat(r: &Rat, _prec: Precision) -> Self {
        r.clone()
    }

    fn significant_digits(prec: Precision) -> i32 {
        prec.digits() as i32
    }

    fn pow10(k: i32, _prec: Precision) -> Self {
        Rat::from_integer(BigInt::from(10)).pow(k)
    }

    fn powi(&self, exp: &BigInt) -> Self {
        let e = exp
            .to_i32()
            .expect("exact rational powers are limited to i32 exponents");
        self.pow(e)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_fixed(&self, places: usize) -> String {
        let scaled = self.numer() * BigInt::from(10).pow(places as u32);
        let rounded = real::round_half_away(&scaled, self.denom());
        real::format_scaled(&rounded, places)
    }

    fn renormalizer(&self) -> Option<Self> {
        None
    }
}

/// Rounds an exact rational to a `Real` at `prec` digits.
pub fn real_from_rat(r: &Rat, prec: Precision) -> Real {
    Real::from_rat(r, prec)
}

/// `|a - b| <= tol`.
pub fn approx_equal<S: Scalar>(a: &S, b: &S, tol: &S) -> bool {
    (a.clone() - b).abs() <= *tol
}

/// Parses `a/b`, an integer, or a decimal literal with optional exponent
/// into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational literal: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rat::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}0").parse().map_err(|_| bad())?;
    let digits = digits / 10;
    let scale = exp - frac.len() as i32;
    let mut r = Rat::from_integer(digits) * Rat::from_integer(BigInt::from(10)).pow(scale);
    if negative {
        r = -r;
    }
    Ok(r)
}

/// `x^e` for any field element; negative exponents invert.
pub fn ipow<T: Field>(x: &T, e: i64) -> T {
    let v = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        T::one() / v
    } else {
        v
    }
}

/// Builds a rational from a numerator/denominator pair of machine integers.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}
