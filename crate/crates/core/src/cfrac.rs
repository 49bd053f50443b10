//! Continued fractions: evaluation, the Muir–Rogers construction from
//! power-series coefficients, Ramanujan's coefficient family and the
//! Entry-7 generators.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numerics::{agreement, exact_det, ipow, Field, Precision, Rat, Scalar};

/// Largest index accepted by [`muir_rogers`]; keeps Hankel minors at order ≤ 9.
pub const MUIR_ROGERS_MAX: usize = 16;

/// Sign between the `1` and the next partial numerator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfSign {
    /// `d0/(1 + d1/(1 + d2/(1 + ...)))`
    Plus,
    /// `d0/(1 - d1/(1 - d2/(1 - ...)))`
    Minus,
}

/// A continued fraction `d0/(1 ± d1/(1 ± ...))`.
#[derive(Clone, Debug, PartialEq)]
pub struct CFrac<T> {
    sign: CfSign,
    coeffs: Vec<T>,
}

impl<T: Field> CFrac<T> {
    /// Requires at least one coefficient and `d0 != 0`.
    pub fn new(sign: CfSign, coeffs: Vec<T>) -> Result<Self> {
        match coeffs.first() {
            None => Err(Error::InvalidArgument("continued fraction needs d0".into())),
            Some(d0) if d0.is_zero() => {
                Err(Error::InvalidArgument("continued fraction needs d0 != 0".into()))
            }
            Some(_) => Ok(CFrac { sign, coeffs }),
        }
    }

    pub fn plus(coeffs: Vec<T>) -> Result<Self> {
        Self::new(CfSign::Plus, coeffs)
    }

    pub fn minus(coeffs: Vec<T>) -> Result<Self> {
        Self::new(CfSign::Minus, coeffs)
    }

    pub fn sign(&self) -> CfSign {
        self.sign
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// The same fraction written in Plus form: `d_n -> -d_n` for `n >= 1`.
    pub fn to_plus(&self) -> Self {
        match self.sign {
            CfSign::Plus => self.clone(),
            CfSign::Minus => CFrac {
                sign: CfSign::Plus,
                coeffs: negate_tail(&self.coeffs),
            },
        }
    }

    /// The same fraction written in Minus form.
    pub fn to_minus(&self) -> Self {
        match self.sign {
            CfSign::Minus => self.clone(),
            CfSign::Plus => CFrac {
                sign: CfSign::Minus,
                coeffs: negate_tail(&self.coeffs),
            },
        }
    }

    /// Partial numerator entering the recurrence at depth `j`; zero past the end.
    fn numerator(&self, j: usize) -> T {
        match self.coeffs.get(j) {
            None => T::zero(),
            Some(d) if j >= 1 && self.sign == CfSign::Minus => -d.clone(),
            Some(d) => d.clone(),
        }
    }
}

fn negate_tail<T: Field>(coeffs: &[T]) -> Vec<T> {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, d)| if i == 0 { d.clone() } else { -d.clone() })
        .collect()
}

/// Even- and odd-depth convergents of a continued fraction.
#[derive(Clone, Debug, PartialEq)]
pub struct Convergents<T> {
    pub even: T,
    pub odd: T,
    pub even_depth: usize,
    pub odd_depth: usize,
    pub converged: bool,
}

/// Every convergent `C_0..=C_depth`, where `C_j` uses `d_0..=d_j`.
///
/// Runs the three-term recurrence and rescales the state whenever `|B_j|`
/// leaves `[1e-100, 1e100]`.
pub fn convergents<S: Scalar>(cf: &CFrac<S>, depth: usize) -> Result<Vec<S>> {
    let (mut a_prev, mut a_cur) = (S::one(), S::zero());
    let (mut b_prev, mut b_cur) = (S::zero(), S::one());
    let mut out = Vec::with_capacity(depth + 1);
    for j in 0..=depth {
        let d = cf.numerator(j);
        let a_next = a_cur.clone() + d.clone() * &a_prev;
        let b_next = b_cur.clone() + d * &b_prev;
        if b_next.is_zero() {
            return Err(Error::IndeterminateConvergent { depth: j });
        }
        out.push(a_next.clone() / &b_next);
        a_prev = a_cur;
        b_prev = b_cur;
        a_cur = a_next;
        b_cur = b_next;
        if let Some(f) = b_cur.renormalizer() {
            a_prev = a_prev * &f;
            b_prev = b_prev * &f;
            a_cur = a_cur * &f;
            b_cur = b_cur * f;
        }
    }
    Ok(out)
}

/// Evaluates the convergents up to `depth` and reports the last even and
/// odd ones. `converged` is `|C_even - C_odd| < 10^-(P-10) * max(1, |C_even|)`.
pub fn eval_cfrac<S: Scalar>(cf: &CFrac<S>, depth: usize, prec: Precision) -> Result<Convergents<S>> {
    if depth < 2 {
        return Err(Error::InvalidArgument(format!(
            "continued fraction depth must be at least 2, got {depth}"
        )));
    }
    let c = convergents(cf, depth)?;
    let even_depth = depth - depth % 2;
    let odd_depth = if depth % 2 == 1 { depth } else { depth - 1 };
    let even = c[even_depth].clone();
    let odd = c[odd_depth].clone();
    let scale = if even.abs() > S::one() { even.abs() } else { S::one() };
    let converged = (even.clone() - &odd).abs() < agreement::<S>(prec) * scale;
    Ok(Convergents {
        even,
        odd,
        even_depth,
        odd_depth,
        converged,
    })
}

/// Truncated power series `c0 + c1 x + c2 x^2 + ...` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Rat>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        PowerSeries { coeffs }
    }

    /// `c_n = f(n)` for `n = 0..len`.
    pub fn from_fn(len: usize, f: impl FnMut(usize) -> Rat) -> Self {
        PowerSeries {
            coeffs: (0..len).map(f).collect(),
        }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rat> {
        self.coeffs
    }
}

/// The Hankel minors `alpha_0..=alpha_m`.
pub fn hankel_minors(ps: &PowerSeries, m: usize) -> Result<Vec<Rat>> {
    let c = ps.coeffs();
    if c.len() < m + 1 {
        return Err(Error::InsufficientCoefficients {
            needed: m + 1,
            have: c.len(),
        });
    }
    (0..=m)
        .map(|n| {
            let (order, shift) = (n / 2 + 1, n % 2);
            let matrix: Vec<Vec<Rat>> = (0..order)
                .map(|i| (0..order).map(|j| c[shift + i + j].clone()).collect())
                .collect();
            exact_det(&matrix)
        })
        .collect()
}

/// Coefficients `e_0..=e_m` of the Minus-form fraction
/// `e0/(1 - e1 x/(1 - e2 x/(1 - ...)))` equal to the power series `ps`.
///
/// Requires `c_0..=c_m`. Fails if a Hankel minor used as a divisor vanishes.
pub fn muir_rogers(ps: &PowerSeries, m: usize) -> Result<Vec<Rat>> {
    if m > MUIR_ROGERS_MAX {
        return Err(Error::InvalidArgument(format!(
            "Muir-Rogers index {m} exceeds the cap of {MUIR_ROGERS_MAX}"
        )));
    }
    let alpha = hankel_minors(ps, m)?;
    if let Some(k) = alpha.iter().take(m.max(1)).position(Zero::is_zero) {
        return Err(Error::DegenerateHankel { index: k });
    }
    // alpha_{-1} = alpha_{-2} = alpha_{-3} = 1
    let at = |k: isize| -> Rat {
        if k < 0 {
            Rat::from_integer(1.into())
        } else {
            alpha[k as usize].clone()
        }
    };
    let mut e = Vec::with_capacity(m + 1);
    e.push(alpha[0].clone());
    for n in 1..=m as isize {
        e.push(at(n) * at(n - 3) / (at(n - 1) * at(n - 2)));
    }
    Ok(e)
}

/// Closed form of the Muir–Rogers coefficients of `sum (q; q^kappa)_n x^n`.
pub fn closed_form_e<T: Field>(kappa: u32, q: &T, n: usize) -> T {
    let k = kappa as i64;
    let m = (n / 2) as i64;
    match n {
        0 => T::one(),
        1 => T::one() - q,
        _ if n.is_multiple_of(2) => ipow(q, k * m + 1 - k) * (T::one() - ipow(q, k * m)),
        _ => ipow(q, k * m) * (T::one() - ipow(q, k * m + 1)),
    }
}

/// Expands the depth-`depth` convergent of the Minus-form fraction
/// `e0/(1 - e1 x/(1 - ...))` to order `order` by exact series division.
/// Coefficients past the end of `e` are zero.
pub fn cfrac_to_series(e: &[Rat], depth: usize, order: usize) -> Result<PowerSeries> {
    if depth < order + 1 {
        return Err(Error::InvalidArgument(format!(
            "depth {depth} cannot determine {} coefficients",
            order + 1
        )));
    }
    let len = order + 1;
    let zero = vec![Rat::zero(); len];
    let mut one = zero.clone();
    one[0] = Rat::from_integer(1.into());
    let (mut a_prev, mut a_cur) = (one.clone(), zero.clone());
    let (mut b_prev, mut b_cur) = (zero, one);
    for j in 0..=depth {
        let ej = e.get(j).cloned().unwrap_or_else(Rat::zero);
        // depth 0 contributes e0; later depths contribute -e_j x
        let step = |cur: &[Rat], prev: &[Rat]| -> Vec<Rat> {
            let mut next = cur.to_vec();
            if ej.is_zero() {
                return next;
            }
            if j == 0 {
                for (n, p) in next.iter_mut().zip(prev) {
                    *n += &ej * p;
                }
            } else {
                for i in 1..len {
                    next[i] -= &ej * &prev[i - 1];
                }
            }
            next
        };
        let a_next = step(&a_cur, &a_prev);
        let b_next = step(&b_cur, &b_prev);
        a_prev = std::mem::replace(&mut a_cur, a_next);
        b_prev = std::mem::replace(&mut b_cur, b_next);
    }
    if b_cur[0].is_zero() {
        return Err(Error::Pole(
            "convergent denominator has zero constant term".into(),
        ));
    }
    let mut c = vec![Rat::zero(); len];
    for n in 0..len {
        let mut acc = a_cur[n].clone();
        for k in 1..=n {
            acc -= &b_cur[k] * &c[n - k];
        }
        c[n] = acc / &b_cur[0];
    }
    Ok(PowerSeries::new(c))
}

/// Parameters of Ramanujan's fraction for `G(aq, lambda q; b, q) / G(a, lambda; b, q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RamanujanParams<T> {
    pub a: T,
    pub lambda: T,
    pub b: T,
    pub q: T,
}

/// `d0 = 1`, `d_{2m} = b q^m + lambda q^{2m}`, `d_{2m+1} = a q^{m+1} + lambda q^{2m+1}`.
pub fn ramanujan_cf_coeffs<T: Field>(rp: &RamanujanParams<T>, n: usize) -> Vec<T> {
    let q = &rp.q;
    (0..=n)
        .map(|i| {
            if i == 0 {
                return T::one();
            }
            let m = (i / 2) as i64;
            let lam = rp.lambda.clone() * ipow(q, i as i64);
            if i % 2 == 0 {
                rp.b.clone() * ipow(q, m) + lam
            } else {
                rp.a.clone() * ipow(q, m + 1) + lam
            }
        })
        .collect()
}

/// Parameters that turn Ramanujan's fraction into the one for
/// `sum q^n (q; q^kappa)_n`: base `q^kappa`, `a = -q^{1-kappa}`,
/// `lambda = q^{2-kappa}`, `b = -q^{2-kappa}`.
pub fn second_gauss_params<T: Field>(kappa: u32, q: &T) -> RamanujanParams<T> {
    let k = kappa as i64;
    RamanujanParams {
        a: -ipow(q, 1 - k),
        lambda: ipow(q, 2 - k),
        b: -ipow(q, 2 - k),
        q: ipow(q, k),
    }
}

/// `d0 = 1`, `d_{2m} = q^{2 kappa m + 2 - kappa} - q^{kappa m + 2 - kappa}`,
/// `d_{2m+1} = q^{2 kappa m + 2} - q^{kappa m + 1}`.
pub fn gauss4_coeffs<T: Field>(kappa: u32, q: &T, n: usize) -> Vec<T> {
    let k = kappa as i64;
    (0..=n)
        .map(|i| {
            if i == 0 {
                return T::one();
            }
            let m = (i / 2) as i64;
            if i % 2 == 0 {
                ipow(q, 2 * k * m + 2 - k) - ipow(q, k * m + 2 - k)
            } else {
                ipow(q, 2 * k * m + 2) - ipow(q, k * m + 1)
            }
        })
        .collect()
}

/// The two Entry-7 fractions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Entry7 {
    /// `1/(1+ q/(1+ (q^2-q)/(1+ q^3/(1+ (q^4-q^2)/...))))`, the fraction for `sum (-1)^n q^{n(n+1)/2}`.
    First,
    /// `1/(1+ (q-1)/(1+ (q^2-q)/(1+ (q^3-q)/(1+ (q^4-q^2)/...))))`, paired with `sum (q; q)_n`.
    Second,
}

/// Coefficients `d_0..=d_n` of an Entry-7 fraction.
pub fn gauss_entry7_coeffs<T: Field>(which: Entry7, q: &T, n: usize) -> Vec<T> {
    (0..=n)
        .map(|i| {
            if i == 0 {
                return T::one();
            }
            let k = (i / 2) as i64;
            let qi = ipow(q, i as i64);
            match (which, i % 2) {
                (_, 0) => qi - ipow(q, k),
                (Entry7::First, _) => qi,
                (Entry7::Second, _) => qi - ipow(q, k),
            }
        })
        .collect()
}
