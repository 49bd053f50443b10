//! q-Pochhammer symbols and polygonal-number exponents.

use num_bigint::{BigInt, BigUint};

use crate::error::{Error, Result};
use crate::numerics::{negligible, Field, Precision, Rat, Scalar};

/// Factor cap for infinite products; reached only for `|q|` extremely close to 1.
const MAX_PRODUCT_FACTORS: usize = 10_000_000;

/// The base `q` of a series together with its reciprocal `p = 1/q`.
#[derive(Clone, Debug, PartialEq)]
pub struct QParam<S> {
    q: S,
    p: S,
}

impl<S: Scalar> QParam<S> {
    /// Accepts `q > 0` with `|q - 1| > 10^-(P-5)`.
    pub fn new(q: S, prec: Precision) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::Domain(format!("q must be positive, got {q}")));
        }
        let guard = S::pow10(-(S::significant_digits(prec) - 5), prec);
        if (q.clone() - S::one()).abs() <= guard {
            return Err(Error::SingularParameter(q.to_string()));
        }
        let p = S::one() / &q;
        Ok(QParam { q, p })
    }

    pub fn q(&self) -> &S {
        &self.q
    }

    pub fn p(&self) -> &S {
        &self.p
    }

    pub fn is_below_one(&self) -> bool {
        self.q < S::one()
    }
}

/// `(alpha; q)_n = prod_{k=0}^{n-1} (1 - alpha q^k)`, with `(alpha; q)_0 = 1`.
pub fn qpoch<T: Field>(alpha: &T, q: &T, n: usize) -> T {
    let mut acc = T::one();
    let mut alpha_qk = alpha.clone();
    for _ in 0..n {
        acc = acc * (T::one() - &alpha_qk);
        alpha_qk = alpha_qk * q;
    }
    acc
}

/// Exact `(alpha; q)_n` over the rationals.
pub fn qpoch_rat(alpha: &Rat, q: &Rat, n: usize) -> Rat {
    qpoch(alpha, q, n)
}

/// `(alpha; q)_inf` for `|q| < 1`, truncated once `|alpha q^n| < 10^-(P+10)`.
pub fn qpoch_inf<S: Scalar>(alpha: &S, q: &S, prec: Precision) -> Result<S> {
    if q.abs() >= S::one() {
        return Err(Error::Domain(format!(
            "infinite q-Pochhammer product needs |q| < 1, got q = {q}"
        )));
    }
    let tiny: S = negligible(prec);
    let mut acc = S::one();
    let mut alpha_qn = alpha.clone();
    for _ in 0..MAX_PRODUCT_FACTORS {
        if alpha_qn.abs() < tiny {
            return Ok(acc);
        }
        acc = acc * (S::one() - &alpha_qn);
        alpha_qn = alpha_qn * q;
    }
    Err(Error::BudgetExceeded {
        max_terms: MAX_PRODUCT_FACTORS,
    })
}

/// Exponent `n[(rho-2)n - (rho-4)]/2` of the `rho`-gonal number series.
pub fn polygonal_exponent(rho: u32, n: u64) -> Result<BigUint> {
    if rho < 3 {
        return Err(Error::Domain(format!("rho must be at least 3, got {rho}")));
    }
    let n = BigInt::from(n);
    let rho = BigInt::from(rho);
    let twice = &n * ((&rho - 2u32) * &n - (&rho - 4u32));
    // The product is always even: for odd n the second factor is even.
    let e = twice / 2u32;
    Ok(e.to_biguint().expect("polygonal numbers are non-negative"))
}
