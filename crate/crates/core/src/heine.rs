//! Basic hypergeometric `2phi1`, Heine's transformations, the Rogers–Fine
//! identity and Ramanujan's `G` functions.

use crate::cfrac::RamanujanParams;
use crate::error::{Error, Result};
use crate::numerics::{ipow, negligible, Precision, Scalar};
use crate::qcore::{qpoch_inf, QParam};
use crate::series::{s2_terms, sum_terms, Line, SumConfig};

/// Hard cap on terms for the series in this module.
const MAX_TERMS: usize = 1_000_000;
const QUIET_WINDOW: usize = 5;

/// Sums `term(0), term(1), ...` until five consecutive terms are negligible.
/// The closure carries its own recurrence state.
fn sum_until_quiet<S: Scalar>(
    prec: Precision,
    mut term: impl FnMut(usize) -> Result<S>,
) -> Result<S> {
    let tiny: S = negligible(prec);
    let mut acc = S::zero();
    let mut quiet = 0;
    for n in 0..MAX_TERMS {
        let t = term(n)?;
        quiet = if t.abs() < tiny { quiet + 1 } else { 0 };
        acc = acc + t;
        if quiet == QUIET_WINDOW {
            return Ok(acc);
        }
    }
    Err(Error::BudgetExceeded {
        max_terms: MAX_TERMS,
    })
}

fn is_tiny<S: Scalar>(x: &S, prec: Precision) -> bool {
    x.abs() <= negligible::<S>(prec)
}

/// Arguments of `2phi1(alpha, beta; gamma; q, tau)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Phi21Params<S> {
    pub alpha: S,
    pub beta: S,
    pub gamma: S,
    pub q: S,
    pub tau: S,
}

impl<S: Scalar> Phi21Params<S> {
    pub fn new(alpha: S, beta: S, gamma: S, q: S, tau: S) -> Self {
        Phi21Params {
            alpha,
            beta,
            gamma,
            q,
            tau,
        }
    }
}

/// `sum (alpha; q)_n (beta; q)_n / ((gamma; q)_n (q; q)_n) tau^n` for `|q|, |tau| < 1`.
pub fn phi21<S: Scalar>(p: &Phi21Params<S>, prec: Precision) -> Result<S> {
    if p.q.abs() >= S::one() || p.tau.abs() >= S::one() {
        return Err(Error::Domain(format!(
            "2phi1 needs |q| < 1 and |tau| < 1, got q = {}, tau = {}",
            p.q, p.tau
        )));
    }
    let mut t = S::one();
    // qk = q^{n-1} before the update of term n
    let mut qk = S::one();
    sum_until_quiet(prec, |n| {
        if n > 0 {
            let den = S::one() - p.gamma.clone() * &qk;
            if is_tiny(&den, prec) {
                return Err(Error::Pole(format!(
                    "(gamma; q)_n vanishes at n = {n} for gamma = {}",
                    p.gamma
                )));
            }
            let qn = qk.clone() * &p.q;
            t = t.clone() * (S::one() - p.alpha.clone() * &qk) * (S::one() - p.beta.clone() * &qk)
                * &p.tau
                / (den * (S::one() - &qn));
            qk = qn;
        }
        Ok(t.clone())
    })
}

fn inapplicable(relation: u8, reason: impl Into<String>) -> Error {
    Error::InapplicableTransform {
        relation,
        reason: reason.into(),
    }
}

/// Heine relation `k` (1..=5): returns `(c, p')` with `phi21(p) = c * phi21(p')`.
///
/// 1. `(beta)(alpha tau)/((gamma)(tau)) * 2phi1(gamma/beta, tau; alpha tau; q, beta)`
/// 2. `(gamma/beta)(beta tau)/((gamma)(tau)) * 2phi1(alpha beta tau/gamma, beta; beta tau; q, gamma/beta)`
/// 3. `(alpha beta tau/gamma)/(tau) * 2phi1(gamma/alpha, gamma/beta; gamma; q, alpha beta tau/gamma)`
/// 4. relation 1 with `alpha` and `beta` exchanged
/// 5. relation 2 with `alpha` and `beta` exchanged
///
/// where `(x)` is `(x; q)_inf`. The new argument must have modulus below 1.
pub fn heine_transform<S: Scalar>(
    k: u8,
    p: &Phi21Params<S>,
    prec: Precision,
) -> Result<(S, Phi21Params<S>)> {
    let inf = |x: &S| qpoch_inf(x, &p.q, prec);
    let div = |num: &S, den: &S, what: &str| -> Result<S> {
        if is_tiny(den, prec) {
            Err(inapplicable(k, format!("{what} vanishes")))
        } else {
            Ok(num.clone() / den)
        }
    };
    let Phi21Params {
        alpha: a,
        beta: b,
        gamma: c,
        q,
        tau: t,
    } = p;
    let (num, den, new) = match k {
        1 | 4 => {
            let (x, y) = if k == 1 { (b, a) } else { (a, b) };
            let yt = y.clone() * t;
            let num = inf(x)? * inf(&yt)?;
            let name = if k == 1 { "beta" } else { "alpha" };
            let new = Phi21Params::new(div(c, x, name)?, t.clone(), yt, q.clone(), x.clone());
            (num, inf(c)? * inf(t)?, new)
        }
        2 | 5 => {
            let x = if k == 2 { b } else { a };
            let ratio = div(c, x, if k == 2 { "beta" } else { "alpha" })?;
            let xt = x.clone() * t;
            let abt = div(&(a.clone() * b * t), c, "gamma")?;
            let num = inf(&ratio)? * inf(&xt)?;
            let new = Phi21Params::new(abt, x.clone(), xt, q.clone(), ratio);
            (num, inf(c)? * inf(t)?, new)
        }
        3 => {
            let abt = div(&(a.clone() * b * t), c, "gamma")?;
            let new = Phi21Params::new(
                div(c, a, "alpha")?,
                div(c, b, "beta")?,
                c.clone(),
                q.clone(),
                abt.clone(),
            );
            (inf(&abt)?, inf(t)?, new)
        }
        _ => return Err(Error::InvalidArgument(format!("Heine relation {k} does not exist"))),
    };
    if new.tau.abs() >= S::one() {
        return Err(inapplicable(
            k,
            format!("new argument {} has modulus >= 1", new.tau),
        ));
    }
    if is_tiny(&den, prec) {
        return Err(inapplicable(k, "prefactor denominator vanishes"));
    }
    Ok((num / den, new))
}

/// `sum x^n q^{n(n+1)/2}` for `|q| < 1`.
pub fn rogers_fine_lhs<S: Scalar>(x: &S, q: &S, prec: Precision) -> Result<S> {
    rogers_fine_general_lhs(1, 0, x, q, prec)
}

/// `sum (xq; q^2)_n / (xq^2; q^2)_n (xq)^n` for `|q| < 1`, `|xq| < 1`.
pub fn rogers_fine_rhs<S: Scalar>(x: &S, q: &S, prec: Precision) -> Result<S> {
    rogers_fine_general(1, 0, x, q, prec)
}

/// `sum x^n q^{a n(n+1)/2 - b n}` for `|q| < 1`.
pub fn rogers_fine_general_lhs<S: Scalar>(a: u32, b: u32, x: &S, q: &S, prec: Precision) -> Result<S> {
    check_base(q)?;
    let qa = q.powu(a as u64);
    // g = q^{a n - b} at step n
    let mut g = ipow(q, a as i64 - b as i64);
    let mut t = S::one();
    sum_until_quiet(prec, |n| {
        if n > 0 {
            t = t.clone() * x * &g;
            g = g.clone() * &qa;
        }
        Ok(t.clone())
    })
}

/// `sum x^n q^{(a-b)n} (x q^{a-b}; q^{2a})_n / (x q^{2a-b}; q^{2a})_n`,
/// the Rogers–Fine right side after `q -> q^a`, `x -> x q^{-b}`.
///
/// Requires `|q| < 1` and `|x q^{a-b}| < 1`, the ratio the terms decay by.
pub fn rogers_fine_general<S: Scalar>(a: u32, b: u32, x: &S, q: &S, prec: Precision) -> Result<S> {
    if a < 1 {
        return Err(Error::Domain("Rogers-Fine substitution needs a >= 1".into()));
    }
    check_base(q)?;
    let (a, b) = (a as i64, b as i64);
    let step = x.clone() * ipow(q, a - b);
    if step.abs() >= S::one() {
        return Err(Error::Domain(format!(
            "Rogers-Fine series needs |x q^(a-b)| < 1, got {step}"
        )));
    }
    let base = ipow(q, 2 * a);
    let mut num = step.clone();
    let mut den = x.clone() * ipow(q, 2 * a - b);
    let mut t = S::one();
    sum_until_quiet(prec, |n| {
        if n > 0 {
            let d = S::one() - &den;
            if is_tiny(&d, prec) {
                return Err(Error::Pole(format!("denominator factor vanishes at n = {n}")));
            }
            t = t.clone() * &step * (S::one() - &num) / d;
            num = num.clone() * &base;
            den = den.clone() * &base;
        }
        Ok(t.clone())
    })
}

fn check_base<S: Scalar>(q: &S) -> Result<()> {
    if q.abs() >= S::one() {
        Err(Error::Domain(format!("series needs |q| < 1, got q = {q}")))
    } else {
        Ok(())
    }
}

/// Parameters of Ramanujan's
/// `G(a, lambda; b, q) = 1 + sum q^{n(n+1)/2}/(q; q)_n * prod_{k<n} (a + lambda q^k) / prod_{k=1..n} (1 + b q^k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GParams<S> {
    pub a: S,
    pub lambda: S,
    pub b: S,
    pub q: S,
}

impl<S> From<RamanujanParams<S>> for GParams<S> {
    fn from(r: RamanujanParams<S>) -> Self {
        GParams {
            a: r.a,
            lambda: r.lambda,
            b: r.b,
            q: r.q,
        }
    }
}

fn g_series<S: Scalar>(gp: &GParams<S>, shift: bool, prec: Precision) -> Result<S> {
    check_base(&gp.q)?;
    let q = &gp.q;
    let mut t = S::one();
    let mut qn = S::one();
    sum_until_quiet(prec, |n| {
        if n > 0 {
            let prev = qn.clone();
            qn = qn.clone() * q;
            let den = S::one() + gp.b.clone() * &qn;
            if is_tiny(&den, prec) {
                return Err(Error::Pole(format!("1 + b q^{n} vanishes")));
            }
            let power = if shift { qn.clone() * q } else { qn.clone() };
            t = t.clone() * power * (gp.a.clone() + gp.lambda.clone() * prev)
                / ((S::one() - &qn) * den);
        }
        Ok(t.clone())
    })
}

/// `G(a, lambda; b, q)`.
pub fn g0<S: Scalar>(gp: &GParams<S>, prec: Precision) -> Result<S> {
    g_series(gp, false, prec)
}

/// `G(aq, lambda q; b, q)`: the `G` series with `q^{n(n+3)/2}` in place of `q^{n(n+1)/2}`.
pub fn g1<S: Scalar>(gp: &GParams<S>, prec: Precision) -> Result<S> {
    g_series(gp, true, prec)
}

/// `2phi1(-aq/tau, -lambda/a; -bq; q, tau)`, which tends to `G(a, lambda; b, q)`
/// as `tau -> 0`. Needs `a != 0`.
pub fn g0_phi21_approx<S: Scalar>(gp: &GParams<S>, tau: &S, prec: Precision) -> Result<S> {
    if gp.a.is_zero() {
        return Err(Error::InvalidArgument("the 2phi1 form of G needs a != 0".into()));
    }
    let q = &gp.q;
    let p = Phi21Params::new(
        -(gp.a.clone() * q / tau),
        -(gp.lambda.clone() / &gp.a),
        -(gp.b.clone() * q),
        q.clone(),
        tau.clone(),
    );
    phi21(&p, prec)
}

/// `sum (-1)^n q^{n(kappa n + 4 - kappa)/2} / (q; q^kappa)_{n+1}` for `0 < q < 1`.
pub fn s2_closed_form<S: Scalar>(kappa: u32, q: &S, prec: Precision) -> Result<S> {
    if kappa < 1 {
        return Err(Error::Domain("kappa must be at least 1".into()));
    }
    let qp = QParam::new(q.clone(), prec)?;
    if !qp.is_below_one() {
        return Err(Error::Domain(format!(
            "the closed form converges only for 0 < q < 1, got q = {q}"
        )));
    }
    let cfg = SumConfig::with_precision(prec);
    let r = sum_terms(s2_terms(kappa, Line::QForm, q), &cfg)?;
    r.value()
        .cloned()
        .ok_or_else(|| Error::Domain(format!("closed form did not converge at q = {q}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfrac::second_gauss_params;
    use crate::numerics::{agreement, Real};
    use num_traits::Signed;

    fn p50() -> Precision {
        Precision::DEFAULT
    }

    fn real(s: &str) -> Real {
        Real::parse(s, p50()).unwrap()
    }

    fn tol() -> Real {
        agreement(p50())
    }

    fn sample() -> Phi21Params<Real> {
        Phi21Params::new(real("0.5"), real("0.3"), real("0.7"), real("0.4"), real("0.2"))
    }

    #[test]
    fn phi21_trivial_cases() {
        let mut p = sample();
        p.tau = real("0");
        assert_eq!(phi21(&p, p50()).unwrap(), real("1"));
        let mut p = sample();
        p.beta = real("1");
        assert_eq!(phi21(&p, p50()).unwrap(), real("1"));
    }

    #[test]
    fn phi21_matches_brute_force() {
        let p = sample();
        // term n from scratch, 200 terms
        let mut direct = real("0");
        for n in 0..200 {
            let poch = |x: &Real| crate::qcore::qpoch(x, &p.q, n);
            let t = poch(&p.alpha) * poch(&p.beta) / (poch(&p.gamma) * poch(&p.q))
                * p.tau.powu(n as u64);
            direct = direct + t;
        }
        let v = phi21(&p, p50()).unwrap();
        assert!((v - direct).abs() < tol());
    }

    #[test]
    fn phi21_domain_and_poles() {
        let mut p = sample();
        p.tau = real("1.5");
        assert!(matches!(phi21(&p, p50()), Err(Error::Domain(_))));
        let mut p = sample();
        p.gamma = real("6.25"); // q^{-2}
        assert!(matches!(phi21(&p, p50()), Err(Error::Pole(_))));
    }

    #[test]
    fn heine_on_the_sample_tuple() {
        let p = sample();
        let lhs = phi21(&p, p50()).unwrap();
        for k in [1u8, 3, 4] {
            let (c, np) = heine_transform(k, &p, p50()).unwrap();
            let rhs = c * phi21(&np, p50()).unwrap();
            assert!((lhs.clone() - rhs).abs() < Real::pow10(-40, p50()), "relation {k}");
        }
        for k in [2u8, 5] {
            assert!(matches!(
                heine_transform(k, &p, p50()),
                Err(Error::InapplicableTransform { relation, .. }) if relation == k
            ));
        }
        assert!(heine_transform(6, &p, p50()).is_err());
    }

    #[test]
    fn heine_at_zero_argument() {
        let mut p = sample();
        p.tau = real("0");
        let (c, np) = heine_transform(1, &p, p50()).unwrap();
        assert!((c * phi21(&np, p50()).unwrap() - real("1")).abs() < tol());
    }

    #[test]
    fn relation_two_collapses_g0() {
        let q = real("0.3");
        let tau = Real::pow10(-30, p50());
        let p = Phi21Params::new(q.clone() / &tau, q.clone(), q.clone() * &q, q.clone(), tau);
        let (c, np) = heine_transform(2, &p, p50()).unwrap();
        assert!((np.alpha.clone() - real("1")).abs() < tol());
        assert!((c - real("0.7")).abs() < Real::pow10(-28, p50()));
    }

    #[test]
    fn rogers_fine_base_cases() {
        let q = real("0.5");
        assert_eq!(rogers_fine_rhs(&real("0"), &q, p50()).unwrap(), real("1"));
        let v = rogers_fine_rhs(&real("-1"), &q, p50()).unwrap();
        assert!((v - real("0.610321518048266")).abs() < Real::pow10(-14, p50()));
        let (x, q) = (real("0.3"), real("0.4"));
        let l = rogers_fine_lhs(&x, &q, p50()).unwrap();
        let r = rogers_fine_rhs(&x, &q, p50()).unwrap();
        assert!((l - r).abs() < tol());
        assert!(rogers_fine_rhs(&real("3"), &q, p50()).is_err());
    }

    #[test]
    fn rogers_fine_general_reduces() {
        let (x, q) = (real("0.3"), real("0.6"));
        assert_eq!(
            rogers_fine_general(1, 0, &x, &q, p50()).unwrap(),
            rogers_fine_rhs(&x, &q, p50()).unwrap()
        );
        let m1 = real("-1");
        let v = rogers_fine_general(2, 1, &m1, &real("0.5"), p50()).unwrap();
        assert!((v - real("0.56056210400129")).abs() < Real::pow10(-13, p50()));
        let v = rogers_fine_general(3, 2, &m1, &real("0.5"), p50()).unwrap();
        assert!((v - real("0.531006097764476")).abs() < Real::pow10(-14, p50()));
    }

    #[test]
    fn g_functions() {
        let zero = GParams {
            a: real("0"),
            lambda: real("0"),
            b: real("0.2"),
            q: real("0.5"),
        };
        assert_eq!(g0(&zero, p50()).unwrap(), real("1"));
        let q = real("0.3");
        let gp = GParams {
            a: real("-1"),
            lambda: q.clone(),
            b: -q.clone(),
            q: q.clone(),
        };
        assert!((g0(&gp, p50()).unwrap() - real("0.7")).abs() < tol());
    }

    #[test]
    fn g0_for_general_kappa_is_a_product_ratio() {
        let q = real("0.4");
        for kappa in 1..=4 {
            let gp: GParams<Real> = second_gauss_params(kappa, &q).into();
            let qk = q.powu(kappa as u64);
            let expected = qpoch_inf(&q, &qk, p50()).unwrap()
                / qpoch_inf(&(q.clone() * &q), &qk, p50()).unwrap();
            assert!((g0(&gp, p50()).unwrap() - expected).abs() < tol(), "kappa {kappa}");
        }
    }

    #[test]
    fn g_pole_is_reported() {
        let gp = GParams {
            a: real("1"),
            lambda: real("1"),
            b: real("-2"),
            q: real("0.5"),
        };
        assert!(matches!(g0(&gp, p50()), Err(Error::Pole(_))));
    }

    #[test]
    fn s2_closed_form_values() {
        let v = s2_closed_form(1, &real("0.5"), p50()).unwrap();
        assert!((v - real("1.4224238098268")).abs() < Real::pow10(-12, p50()));
        let v = s2_closed_form(2, &real("0.5"), p50()).unwrap();
        assert!((v - real("1.4648594855089")).abs() < Real::pow10(-12, p50()));
        assert!(s2_closed_form(2, &real("2"), p50()).is_err());
    }
}
