//! Summation of the polygonal series `S1_rho(q)` and the Pochhammer series
//! `S2_kappa(q)` for `q` on either side of 1.
//!
//! For `q < 1` the defining series is summed directly and cross-checked
//! against its ratio form. For `q > 1` the ratio form is rewritten in
//! `p = 1/q`, where it converges (or, for `rho = 3`, oscillates between two
//! accumulation points that are pair-averaged).

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::numerics::{agreement, negligible, Precision, Scalar};
use crate::qcore::{polygonal_exponent, qpoch, qpoch_inf, QParam};

/// Default cap on the number of terms a single summation may consume.
pub const DEFAULT_MAX_TERMS: usize = 100_000;

/// Consecutive negligible terms required before a sum is truncated.
const QUIET_WINDOW: usize = 5;
/// Window length of the divergence detector; it needs two full windows.
const DETECTOR_WINDOW: usize = 20;
/// Samples of `|S_N - S_{N-2}|` that must all be small (10 per parity).
const CESARO_WINDOW: usize = 20;
/// Terms examined when a series is known not to decay.
const DIVERGENCE_PROBE: usize = 200;
/// Factor cap for `q_infinity`.
const MAX_PRODUCT_FACTORS: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SumConfig {
    pub precision: Precision,
    pub max_terms: usize,
}

impl Default for SumConfig {
    fn default() -> Self {
        SumConfig {
            precision: Precision::DEFAULT,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }
}

impl SumConfig {
    pub fn with_precision(precision: Precision) -> Self {
        SumConfig {
            precision,
            ..Self::default()
        }
    }
}

/// Which of the three equivalent forms of a series to sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Line {
    /// The defining series in `q`.
    Direct,
    /// The ratio form in `q`.
    QForm,
    /// The ratio form rewritten in `p = 1/q`.
    PForm,
}

/// How a divergent series runs away.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    PlusInfinity,
    MinusInfinity,
    Oscillating,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::PlusInfinity => "+inf",
            Direction::MinusInfinity => "-inf",
            Direction::Oscillating => "oscillating",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Converged,
    CesaroAveraged,
    Divergent,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Converged => "converged",
            Status::CesaroAveraged => "cesaro",
            Status::Divergent => "divergent",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome<S> {
    Converged { value: S },
    /// Mean of the two accumulation points; `gap` is their distance.
    CesaroAveraged { value: S, gap: S },
    Divergent { direction: Direction },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SumResult<S> {
    pub outcome: Outcome<S>,
    pub terms_used: usize,
    /// Size of the last accepted correction; absent for divergent results.
    pub error_estimate: Option<S>,
}

impl<S> SumResult<S> {
    pub fn value(&self) -> Option<&S> {
        match &self.outcome {
            Outcome::Converged { value } | Outcome::CesaroAveraged { value, .. } => Some(value),
            Outcome::Divergent { .. } => None,
        }
    }

    pub fn gap(&self) -> Option<&S> {
        match &self.outcome {
            Outcome::CesaroAveraged { gap, .. } => Some(gap),
            _ => None,
        }
    }

    pub fn direction(&self) -> Option<Direction> {
        match self.outcome {
            Outcome::Divergent { direction } => Some(direction),
            _ => None,
        }
    }

    pub fn status(&self) -> Status {
        match self.outcome {
            Outcome::Converged { .. } => Status::Converged,
            Outcome::CesaroAveraged { .. } => Status::CesaroAveraged,
            Outcome::Divergent { .. } => Status::Divergent,
        }
    }
}

/// The two series families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `sum (-1)^n q^{n[(rho-2)n-(rho-4)]/2}`, `rho >= 3`.
    S1 { rho: u32 },
    /// `sum q^n (q; q^kappa)_n`, `kappa >= 1`.
    S2 { kappa: u32 },
}

impl Family {
    pub fn validate(self) -> Result<Self> {
        match self {
            Family::S1 { rho } if rho < 3 => {
                Err(Error::Domain(format!("rho must be at least 3, got {rho}")))
            }
            Family::S2 { kappa } if kappa < 1 => {
                Err(Error::Domain("kappa must be at least 1".into()))
            }
            f => Ok(f),
        }
    }

    pub fn param(self) -> u32 {
        match self {
            Family::S1 { rho } => rho,
            Family::S2 { kappa } => kappa,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Family::S1 { .. } => "s1",
            Family::S2 { .. } => "s2",
        }
    }
}

/// A series family together with a validated base `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSpec<S> {
    pub family: Family,
    pub q: QParam<S>,
}

impl<S: Scalar> SeriesSpec<S> {
    pub fn new(family: Family, q: S, prec: Precision) -> Result<Self> {
        Ok(SeriesSpec {
            family: family.validate()?,
            q: QParam::new(q, prec)?,
        })
    }

    pub fn sum(&self, cfg: &SumConfig) -> Result<SumResult<S>> {
        match self.family {
            Family::S1 { rho } => sum_s1(rho, self.q.q(), cfg),
            Family::S2 { kappa } => sum_s2(kappa, self.q.q(), cfg),
        }
    }
}

fn pow_u<S: Scalar>(x: &S, e: u64) -> S {
    x.powu(e)
}

/// Terms of one line of the `S1_rho` identity in the variable `x`
/// (`x = q` for `Direct`/`QForm`, `x = p` for `PForm`).
pub fn s1_terms<S: Scalar>(rho: u32, line: Line, x: &S) -> impl Iterator<Item = S> {
    let r = rho as u64;
    let x = x.clone();
    let step = pow_u(&x, 2 * r - 4);
    let mut t = S::one();
    let mut n = 0u64;
    // Direct: g = x^{(rho-2)n-(rho-3)}. Ratio forms: xa = x^{1+(2rho-4)(n-1)},
    // xb = x^{rho-1+(2rho-4)(n-1)}.
    let mut g = x.clone();
    let g_step = pow_u(&x, r - 2);
    let mut xa = x.clone();
    let mut xb = pow_u(&x, r - 1);
    let pref = match line {
        Line::PForm => pow_u(&x, r - 3),
        _ => x.clone(),
    };
    std::iter::from_fn(move || {
        if n > 0 {
            match line {
                Line::Direct => {
                    t = -(t.clone() * &g);
                    g = g.clone() * &g_step;
                }
                Line::QForm | Line::PForm => {
                    let f = (S::one() + &xa) / (S::one() + &xb);
                    t = -(t.clone() * &pref * f);
                    xa = xa.clone() * &step;
                    xb = xb.clone() * &step;
                }
            }
        }
        n += 1;
        Some(t.clone())
    })
}

/// Terms of one line of the `S2_kappa` identity in the variable `x`.
pub fn s2_terms<S: Scalar>(kappa: u32, line: Line, x: &S) -> impl Iterator<Item = S> {
    let k = kappa as u64;
    let x = x.clone();
    let step = pow_u(&x, k);
    let mut n = 0u64;
    let mut t = match line {
        Line::Direct => S::one(),
        Line::QForm => S::one() / (S::one() - &x),
        Line::PForm => -(x.clone() / (S::one() - &x)),
    };
    // Direct: u = x^{1+kappa(n-1)}. QForm: u = x^{kappa n - kappa + 2}.
    // Ratio forms: v = x^{1+kappa n}.
    let mut u = match line {
        Line::Direct => x.clone(),
        _ => x.clone() * &x,
    };
    let mut v = x.clone() * &step;
    let pref = pow_u(&x, k - 1);
    std::iter::from_fn(move || {
        if n > 0 {
            match line {
                Line::Direct => {
                    t = t.clone() * &x * (S::one() - &u);
                    u = u.clone() * &step;
                }
                Line::QForm => {
                    t = -(t.clone() * &u) / (S::one() - &v);
                    u = u.clone() * &step;
                    v = v.clone() * &step;
                }
                Line::PForm => {
                    t = t.clone() * &pref / (S::one() - &v);
                    v = v.clone() * &step;
                }
            }
        }
        n += 1;
        Some(t.clone())
    })
}

/// The `n`-th term of a line of the `S1_rho` identity, computed from scratch.
pub fn s1_term<S: Scalar>(rho: u32, line: Line, n: u64, x: &S) -> Result<S> {
    Family::S1 { rho }.validate()?;
    let sign = if n.is_multiple_of(2) { S::one() } else { -S::one() };
    let r = rho as u64;
    Ok(match line {
        Line::Direct => sign * x.powi(&BigInt::from(polygonal_exponent(rho, n)?)),
        Line::QForm | Line::PForm => {
            let pref = if line == Line::QForm { x.powu(n) } else { x.powu((r - 3) * n) };
            let mut ratio = S::one();
            for k in 0..n {
                let base = (2 * r - 4) * k;
                ratio = ratio * (S::one() + x.powu(1 + base)) / (S::one() + x.powu(r - 1 + base));
            }
            sign * pref * ratio
        }
    })
}

/// The `n`-th term of a line of the `S2_kappa` identity, computed from scratch.
pub fn s2_term<S: Scalar>(kappa: u32, line: Line, n: u64, x: &S) -> Result<S> {
    Family::S2 { kappa }.validate()?;
    let k = kappa as u64;
    let xk = x.powu(k);
    Ok(match line {
        Line::Direct => x.powu(n) * qpoch(x, &xk, n as usize),
        Line::QForm => {
            let e = if n == 0 { 0 } else { n * (k * (n - 1) + 4) / 2 };
            let sign = if n.is_multiple_of(2) { S::one() } else { -S::one() };
            sign * x.powu(e) / qpoch(x, &xk, n as usize + 1)
        }
        Line::PForm => -(x.powu((k - 1) * n + 1) / qpoch(x, &xk, n as usize + 1)),
    })
}

/// Direction of a non-decaying tail, read from the signs of its terms.
fn tail_direction<S: Scalar>(tail: &[S]) -> Direction {
    if tail.iter().all(|t| t.is_positive()) {
        Direction::PlusInfinity
    } else if tail.iter().all(|t| t.is_negative()) {
        Direction::MinusInfinity
    } else {
        Direction::Oscillating
    }
}

/// Flags a term sequence as non-decaying.
///
/// Needs at least 40 terms. The smallest `|t|` over the last 20 terms must
/// not have dropped, up to a relative `10^-(D-10)`, from the smallest over
/// the 20 before, and the last term must not be negligible.
pub fn detect_divergence<S: Scalar>(terms: &[S], prec: Precision) -> Option<Direction> {
    let n = terms.len();
    if n < 2 * DETECTOR_WINDOW {
        return None;
    }
    let min_abs = |w: &[S]| {
        w.iter()
            .map(|t| t.abs())
            .reduce(|a, b| if b < a { b } else { a })
            .expect("window is non-empty")
    };
    let recent = &terms[n - DETECTOR_WINDOW..];
    let earlier = &terms[n - 2 * DETECTOR_WINDOW..n - DETECTOR_WINDOW];
    let slack = S::one() - agreement::<S>(prec);
    let last = terms[n - 1].abs();
    if last > negligible::<S>(prec) && min_abs(recent) >= min_abs(earlier) * slack {
        Some(tail_direction(recent))
    } else {
        None
    }
}

/// Sums terms until five consecutive ones are negligible.
///
/// When the budget runs out the tail is handed to [`detect_divergence`]: a
/// non-decaying tail gives a divergent result, anything else a budget error.
pub fn sum_terms<S: Scalar>(
    terms: impl IntoIterator<Item = S>,
    cfg: &SumConfig,
) -> Result<SumResult<S>> {
    let tiny: S = negligible(cfg.precision);
    let mut acc = S::zero();
    let mut quiet = 0;
    let mut used = 0;
    let mut last_big = S::zero();
    let mut tail: VecDeque<S> = VecDeque::with_capacity(2 * DETECTOR_WINDOW);
    for t in terms.into_iter().take(cfg.max_terms) {
        used += 1;
        let small = t.abs() < tiny;
        acc = acc + &t;
        if tail.len() == 2 * DETECTOR_WINDOW {
            tail.pop_front();
        }
        tail.push_back(t.clone());
        if small {
            quiet += 1;
            if quiet == QUIET_WINDOW {
                return Ok(SumResult {
                    outcome: Outcome::Converged { value: acc },
                    terms_used: used,
                    error_estimate: Some(last_big.abs()),
                });
            }
        } else {
            quiet = 0;
            last_big = t;
        }
    }
    if used < cfg.max_terms {
        // Finite series.
        return Ok(SumResult {
            outcome: Outcome::Converged { value: acc },
            terms_used: used,
            error_estimate: Some(S::zero()),
        });
    }
    let tail: Vec<S> = tail.into();
    match detect_divergence(&tail, cfg.precision) {
        Some(direction) => Ok(SumResult {
            outcome: Outcome::Divergent { direction },
            terms_used: used,
            error_estimate: None,
        }),
        None => Err(Error::BudgetExceeded {
            max_terms: cfg.max_terms,
        }),
    }
}

/// Outcome of pair-averaging an oscillating sequence of partial sums.
#[derive(Clone, Debug, PartialEq)]
pub struct CesaroResult<S> {
    /// `(S_N + S_{N-1}) / 2`.
    pub lim: S,
    /// `|S_N - S_{N-1}|`.
    pub gap: S,
    /// Index `N` of the last partial sum used.
    pub n_used: usize,
    /// Largest `|S_M - S_{M-2}|` over the final window.
    pub error_estimate: S,
}

/// Pair-averages the partial sums `S_N = t_0 + ... + t_N`.
///
/// Stops once the last 20 differences `|S_M - S_{M-2}|` (10 per parity) are
/// all below `10^-(D-10)`. A finite generator is padded with zeros.
pub fn cesaro_pair_average<S: Scalar>(
    terms: impl IntoIterator<Item = S>,
    cfg: &SumConfig,
) -> Result<CesaroResult<S>> {
    let tol: S = agreement(cfg.precision);
    let mut terms = terms.into_iter();
    // sums[0] = S_{N-2}, sums[1] = S_{N-1}
    let mut sums: [Option<S>; 2] = [None, None];
    let mut acc = S::zero();
    let mut diffs: VecDeque<S> = VecDeque::with_capacity(CESARO_WINDOW);
    for n in 0..cfg.max_terms {
        acc = acc + terms.next().unwrap_or_else(S::zero);
        if let Some(two_back) = &sums[0] {
            if diffs.len() == CESARO_WINDOW {
                diffs.pop_front();
            }
            diffs.push_back((acc.clone() - two_back).abs());
        }
        if diffs.len() == CESARO_WINDOW && diffs.iter().all(|d| *d < tol) {
            let prev = sums[1].clone().expect("window implies history");
            let error_estimate = diffs
                .iter()
                .cloned()
                .reduce(|a, b| if b > a { b } else { a })
                .expect("window is non-empty");
            return Ok(CesaroResult {
                lim: (acc.clone() + &prev) / S::from_i64(2, cfg.precision),
                gap: (acc - prev).abs(),
                n_used: n,
                error_estimate,
            });
        }
        sums = [sums[1].take(), Some(acc.clone())];
    }
    Err(Error::NonBiConvergentTail {
        max_terms: cfg.max_terms,
    })
}

/// Partial sums `S_0..=S_n` of a term sequence.
pub fn partial_sums<S: Scalar>(terms: impl IntoIterator<Item = S>, n: usize) -> Vec<S> {
    let mut acc = S::zero();
    terms
        .into_iter()
        .take(n + 1)
        .map(|t| {
            acc = acc.clone() + t;
            acc.clone()
        })
        .collect()
}

/// Sums one line of the `S1_rho` identity at base `q` (the `PForm` line is
/// evaluated at `p = 1/q`). No branch selection or cross-check.
pub fn sum_s1_line<S: Scalar>(rho: u32, q: &S, line: Line, cfg: &SumConfig) -> Result<SumResult<S>> {
    let qp = QParam::new(q.clone(), cfg.precision)?;
    Family::S1 { rho }.validate()?;
    let x = if line == Line::PForm { qp.p() } else { qp.q() };
    sum_terms(s1_terms(rho, line, x), cfg)
}

/// Sums one line of the `S2_kappa` identity at base `q`.
pub fn sum_s2_line<S: Scalar>(kappa: u32, q: &S, line: Line, cfg: &SumConfig) -> Result<SumResult<S>> {
    let qp = QParam::new(q.clone(), cfg.precision)?;
    Family::S2 { kappa }.validate()?;
    let x = if line == Line::PForm { qp.p() } else { qp.q() };
    sum_terms(s2_terms(kappa, line, x), cfg)
}

/// Sums the defining series and checks it against the ratio form.
fn cross_checked<S: Scalar>(direct: SumResult<S>, ratio: SumResult<S>, prec: Precision) -> Result<SumResult<S>> {
    let (Some(a), Some(b)) = (direct.value(), ratio.value()) else {
        return Err(Error::BranchMismatch {
            line1: format!("{:?}", direct.status()),
            line2: format!("{:?}", ratio.status()),
        });
    };
    let diff = (a.clone() - b).abs();
    if diff >= agreement::<S>(prec) {
        return Err(Error::BranchMismatch {
            line1: a.to_string(),
            line2: b.to_string(),
        });
    }
    let estimate = match &direct.error_estimate {
        Some(e) if *e > diff => e.clone(),
        _ => diff,
    };
    Ok(SumResult {
        error_estimate: Some(estimate),
        ..direct
    })
}

/// `S1_rho(q) = sum (-1)^n q^{n[(rho-2)n-(rho-4)]/2}`.
///
/// `q < 1`: the defining series, cross-checked against the ratio form.
/// `q > 1`, `rho >= 4`: the ratio form in `p = 1/q`.
/// `q > 1`, `rho = 3`: the `p` form oscillates; its partial sums are pair-averaged.
pub fn sum_s1<S: Scalar>(rho: u32, q: &S, cfg: &SumConfig) -> Result<SumResult<S>> {
    Family::S1 { rho }.validate()?;
    let qp = QParam::new(q.clone(), cfg.precision)?;
    if qp.is_below_one() {
        let direct = sum_terms(s1_terms(rho, Line::Direct, qp.q()), cfg)?;
        let ratio = sum_terms(s1_terms(rho, Line::QForm, qp.q()), cfg)?;
        return cross_checked(direct, ratio, cfg.precision);
    }
    if rho >= 4 {
        return sum_terms(s1_terms(rho, Line::PForm, qp.p()), cfg);
    }
    let c = cesaro_pair_average(s1_terms(rho, Line::PForm, qp.p()), cfg)?;
    Ok(SumResult {
        outcome: Outcome::CesaroAveraged {
            value: c.lim,
            gap: c.gap,
        },
        terms_used: c.n_used + 1,
        error_estimate: Some(c.error_estimate),
    })
}

/// `S2_kappa(q) = sum q^n (q; q^kappa)_n`.
///
/// `q < 1`: the defining series, cross-checked against the alternating form.
/// `q > 1`, `kappa >= 2`: `-sum p^{(kappa-1)n+1} / (p; p^kappa)_{n+1}`.
/// `q > 1`, `kappa = 1`: divergent; the terms tend to `-p/(p; p)_inf`.
pub fn sum_s2<S: Scalar>(kappa: u32, q: &S, cfg: &SumConfig) -> Result<SumResult<S>> {
    Family::S2 { kappa }.validate()?;
    let qp = QParam::new(q.clone(), cfg.precision)?;
    if qp.is_below_one() {
        let direct = sum_terms(s2_terms(kappa, Line::Direct, qp.q()), cfg)?;
        let ratio = sum_terms(s2_terms(kappa, Line::QForm, qp.q()), cfg)?;
        return cross_checked(direct, ratio, cfg.precision);
    }
    if kappa >= 2 {
        return sum_terms(s2_terms(kappa, Line::PForm, qp.p()), cfg);
    }
    let probe: Vec<S> = s2_terms(kappa, Line::PForm, qp.p())
        .take(DIVERGENCE_PROBE.min(cfg.max_terms))
        .collect();
    let direction = detect_divergence(&probe, cfg.precision).unwrap_or(Direction::MinusInfinity);
    Ok(SumResult {
        outcome: Outcome::Divergent { direction },
        terms_used: probe.len(),
        error_estimate: None,
    })
}

/// `sum (q; q)_n`, which diverges for every `q > 0`, `q != 1`.
///
/// For `q < 1` the terms tend to `(q; q)_inf > 0`; for `q > 1` they alternate
/// in sign and grow without bound. The first `n` terms are generated and
/// their count reported.
pub fn gauss_problem2<S: Scalar>(q: &S, n: usize, cfg: &SumConfig) -> Result<SumResult<S>> {
    let qp = QParam::new(q.clone(), cfg.precision)?;
    let q = qp.q();
    let mut terms = Vec::with_capacity(n);
    let mut t = S::one();
    let mut qk = q.clone();
    for _ in 0..n {
        terms.push(t.clone());
        t = t * (S::one() - &qk);
        qk = qk * q;
    }
    let direction = if qp.is_below_one() {
        let limit = qpoch_inf(q, q, cfg.precision)?;
        if limit.abs() <= negligible::<S>(cfg.precision) {
            return Err(Error::Domain(format!("term limit vanishes at q = {q}")));
        }
        Direction::PlusInfinity
    } else {
        Direction::Oscillating
    };
    Ok(SumResult {
        outcome: Outcome::Divergent { direction },
        terms_used: n,
        error_estimate: None,
    })
}

/// `Q_inf(p) = prod_{n>=1} (1 + p^{2n-1}) / (1 + p^{2n})` for `0 <= p < 1`.
pub fn q_infinity<S: Scalar>(p: &S, prec: Precision) -> Result<S> {
    if p.is_negative() || *p >= S::one() {
        return Err(Error::Domain(format!("Q_inf needs 0 <= p < 1, got {p}")));
    }
    let tiny: S = negligible(prec);
    let p2 = p.clone() * p;
    let mut odd = p.clone();
    let mut acc = S::one();
    for _ in 0..MAX_PRODUCT_FACTORS {
        if odd.abs() < tiny {
            return Ok(acc);
        }
        let even = odd.clone() * p;
        acc = acc * (S::one() + &odd) / (S::one() + even);
        odd = odd * &p2;
    }
    Err(Error::BudgetExceeded {
        max_terms: MAX_PRODUCT_FACTORS,
    })
}

/// `lim_{rho -> inf} S1_rho(q)`: `1 - q` for `q < 1`, `1` for `q > 1`.
pub fn s1_limit<S: Scalar>(q: &S, prec: Precision) -> Result<S> {
    let qp = QParam::new(q.clone(), prec)?;
    Ok(if qp.is_below_one() {
        S::one() - q
    } else {
        S::one()
    })
}

/// `lim_{kappa -> inf} S2_kappa(q)`: `1 + q` for `q < 1`, `1/(1 - q)` for `q > 1`.
pub fn s2_limit<S: Scalar>(q: &S, prec: Precision) -> Result<S> {
    let qp = QParam::new(q.clone(), prec)?;
    Ok(if qp.is_below_one() {
        S::one() + q
    } else {
        S::one() / (S::one() - q)
    })
}
