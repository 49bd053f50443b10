//! Arbitrary-precision decimal reals.
//!
//! [`Real`] wraps a decimal big float that rounds to nearest at a fixed
//! number of significant digits. Every value carries its own precision;
//! binary operations produce the larger precision of the two operands.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::str::FromStr;

use dashu_float::DBig;
use dashu_int::IBig;
use num_bigint::BigInt;
use num_traits::{Num, One, Signed, Zero};

use super::{Precision, Rat};
use crate::error::{Error, Result};

/// Arbitrary-precision real number with an explicit decimal-digit precision.
#[derive(Clone, Debug)]
pub struct Real(DBig);

pub(crate) fn bigint_to_ibig(n: &BigInt) -> IBig {
    IBig::from_le_bytes(&n.to_signed_bytes_le())
}

pub(crate) fn ibig_to_bigint(n: &IBig) -> BigInt {
    BigInt::from_signed_bytes_le(&n.to_le_bytes())
}

impl Real {
    fn rounded(value: DBig, prec: Precision) -> Self {
        Real(value.with_precision(prec.digits() as usize).value())
    }

    /// Rounds an exact rational to `prec` significant digits.
    pub fn from_rat(r: &Rat, prec: Precision) -> Self {
        let digits = prec.digits() as usize;
        let numer = DBig::from(bigint_to_ibig(r.numer()))
            .with_precision(digits)
            .value();
        let denom = DBig::from(bigint_to_ibig(r.denom()));
        Self::rounded(numer / denom, prec)
    }

    pub fn from_i64(n: i64, prec: Precision) -> Self {
        Self::rounded(DBig::from(n), prec)
    }

    /// Parses a decimal literal (`0.5`, `-2.625`, `1e-3`) or a ratio of
    /// integers (`1/3`).
    pub fn parse(s: &str, prec: Precision) -> Result<Self> {
        let s = s.trim();
        if s.contains('/') {
            let r = super::parse_rat(s)?;
            return Ok(Self::from_rat(&r, prec));
        }
        let value = DBig::from_str(s).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        Ok(Self::rounded(value, prec))
    }

    /// Number of significant digits carried; 0 marks an exact constant.
    pub fn precision(&self) -> usize {
        self.0.precision()
    }

    /// Re-rounds to a new precision.
    pub fn with_precision(&self, prec: Precision) -> Self {
        Self::rounded(self.0.clone(), prec)
    }

    /// `floor(log10 |x|)` for non-zero `x`.
    pub fn decimal_exponent(&self) -> Option<isize> {
        let repr = self.0.repr();
        if repr.significand().is_zero() {
            return None;
        }
        Some(repr.exponent() + repr.digits() as isize - 1)
    }

    /// Exact power of ten at the given precision.
    pub fn pow10(k: i32, prec: Precision) -> Self {
        let v = DBig::from_parts(IBig::ONE, k as isize);
        Self::rounded(v, prec)
    }

    pub fn powi(&self, exp: &BigInt) -> Self {
        if exp.is_zero() {
            return Real::one();
        }
        Real(self.0.powi(bigint_to_ibig(exp)))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    /// Formats with exactly `places` digits after the decimal point,
    /// rounding half away from zero.
    pub fn to_fixed(&self, places: usize) -> String {
        let repr = self.0.repr();
        let sig = ibig_to_bigint(repr.significand());
        let shift = repr.exponent() + places as isize;
        let scaled = if shift >= 0 {
            sig * BigInt::from(10).pow(shift as u32)
        } else {
            let div = BigInt::from(10).pow((-shift) as u32);
            round_half_away(&sig, &div)
        };
        format_scaled(&scaled, places)
    }

    pub fn as_dbig(&self) -> &DBig {
        &self.0
    }
}

/// `round(n / d)` with ties away from zero, for `d > 0`.
pub(crate) fn round_half_away(n: &BigInt, d: &BigInt) -> BigInt {
    use num_integer::Integer;
    let (q, r) = n.abs().div_rem(d);
    let twice = r * 2;
    let q = if &twice >= d { q + 1 } else { q };
    if n.is_negative() {
        -q
    } else {
        q
    }
}

/// Renders `scaled / 10^places` in plain positional notation.
pub(crate) fn format_scaled(scaled: &BigInt, places: usize) -> String {
    let negative = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if places == 0 {
        out.push_str(&digits);
        return out;
    }
    if digits.len() <= places {
        out.push_str("0.");
        out.push_str(&"0".repeat(places - digits.len()));
        out.push_str(&digits);
    } else {
        let (int, frac) = digits.split_at(digits.len() - places);
        out.push_str(int);
        out.push('.');
        out.push_str(frac);
    }
    out
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.0.partial_cmp(&other.0) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-&self.0)
    }
}

// Exact constants (0, 1) carry precision 0; a quotient of two such values
// would have no rounding target, so it is computed at the default precision.
fn div_dbig(a: &DBig, b: &DBig) -> DBig {
    if a.precision() == 0 && b.precision() == 0 {
        let digits = Precision::DEFAULT.digits() as usize;
        a.clone().with_precision(digits).value() / b
    } else {
        a / b
    }
}

fn rem_dbig(a: &DBig, b: &DBig) -> DBig {
    let quotient = div_dbig(a, b).trunc();
    a - quotient * b
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let ($a, $b) = (&self.0, &rhs.0);
                Real($body)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a + b);
forward_binop!(Sub, sub, |a, b| a - b);
forward_binop!(Mul, mul, |a, b| a * b);
forward_binop!(Div, div, |a, b| div_dbig(a, b));
forward_binop!(Rem, rem, |a, b| rem_dbig(a, b));

impl Zero for Real {
    fn zero() -> Self {
        Real(DBig::ZERO)
    }
    fn is_zero(&self) -> bool {
        self.0.repr().significand().is_zero()
    }
}

impl One for Real {
    fn one() -> Self {
        Real(DBig::ONE)
    }
}

impl Num for Real {
    type FromStrRadixErr = Error;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self> {
        if radix != 10 {
            return Err(Error::Parse(format!("unsupported radix {radix}")));
        }
        Real::parse(s, Precision::DEFAULT)
    }
}

impl Signed for Real {
    fn abs(&self) -> Self {
        if *self.0.repr().significand() < IBig::ZERO {
            -self
        } else {
            self.clone()
        }
    }

    fn abs_sub(&self, other: &Self) -> Self {
        if self <= other {
            Real::zero()
        } else {
            self - other
        }
    }

    fn signum(&self) -> Self {
        Real(self.0.signum())
    }

    fn is_positive(&self) -> bool {
        *self.0.repr().significand() > IBig::ZERO
    }

    fn is_negative(&self) -> bool {
        *self.0.repr().significand() < IBig::ZERO
    }
}
