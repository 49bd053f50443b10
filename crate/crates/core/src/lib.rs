//! Sums of the divergent q-series `1 - 2 + 8 - 64 + ...` and
//! `sum (q; q)_n`, and of their two families of extensions:
//!
//! * `S1_rho(q) = sum (-1)^n q^{n[(rho-2)n-(rho-4)]/2}` (polygonal exponents),
//! * `S2_kappa(q) = sum q^n (q; q^kappa)_n` (Pochhammer products).
//!
//! For `q > 1` both are evaluated through equivalent series in `p = 1/q`.
//! The crate also carries the continued-fraction, basic-hypergeometric and
//! exact-arithmetic machinery behind those equivalences.
//!
//! Every numeric routine is generic over [`Scalar`], implemented by the
//! decimal [`Real`], the exact [`Rat`] (where only field operations are
//! needed) and `f64`.
//!
//! ```
//! use entry7::{sum_s1, Real, SumConfig, Status};
//!
//! let cfg = SumConfig::default();
//! let q = Real::parse("2", cfg.precision).unwrap();
//! let r = sum_s1(3, &q, &cfg).unwrap();
//! assert_eq!(r.status(), Status::CesaroAveraged);
//! assert_eq!(r.value().unwrap().to_fixed(12), "0.427525130255");
//! ```

pub mod cfrac;
pub mod error;
pub mod heine;
pub mod numerics;
pub mod qcore;
pub mod series;

pub use cfrac::{
    cfrac_to_series, closed_form_e, convergents, eval_cfrac, gauss4_coeffs, gauss_entry7_coeffs,
    hankel_minors, muir_rogers, ramanujan_cf_coeffs, second_gauss_params, CFrac, CfSign,
    Convergents, Entry7, PowerSeries, RamanujanParams,
};
pub use error::{Error, Result};
pub use heine::{
    g0, g0_phi21_approx, g1, heine_transform, phi21, rogers_fine_general, rogers_fine_general_lhs,
    rogers_fine_lhs, rogers_fine_rhs, s2_closed_form, GParams, Phi21Params,
};
pub use numerics::{
    agreement, approx_equal, exact_det, ipow, negligible, parse_rat, rat, real_from_rat, Field,
    Precision, Rat, Real, Scalar,
};
pub use qcore::{polygonal_exponent, qpoch, qpoch_inf, qpoch_rat, QParam};
pub use series::{
    cesaro_pair_average, detect_divergence, gauss_problem2, partial_sums, q_infinity, s1_limit,
    s1_term, s1_terms, s2_limit, s2_term, s2_terms, sum_s1, sum_s1_line, sum_s2, sum_s2_line,
    sum_terms, CesaroResult, Direction, Family, Line, Outcome, SeriesSpec, Status, SumConfig,
    SumResult,
};

/// Results and fractions over the decimal [`Real`].
pub type SumResultReal = SumResult<Real>;
pub type CFracReal = CFrac<Real>;
/// Machine-precision counterparts.
pub type SumResult64 = SumResult<f64>;
pub type CFrac64 = CFrac<f64>;
/// Continued fraction with exact rational coefficients.
pub type ExactCFrac = CFrac<Rat>;
