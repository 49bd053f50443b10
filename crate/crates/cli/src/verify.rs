use entry7::*;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{Format, Suite};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{decimal_label, emit, meta_lines};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub check: String,
    pub pass: bool,
    pub deviation: Option<f64>,
}

struct Battery<'a> {
    suite: &'static str,
    out: &'a mut Vec<Check>,
}

impl Battery<'_> {
    fn ok(&mut self, pass: bool, check: impl Into<String>) {
        self.out.push(Check {
            suite: self.suite,
            check: check.into(),
            pass,
            deviation: None,
        });
    }

    fn close(&mut self, a: &Real, b: &Real, tol: &Real, check: impl Into<String>) {
        let d = (a.clone() - b).abs();
        self.out.push(Check {
            suite: self.suite,
            check: check.into(),
            pass: d <= *tol,
            deviation: Some(d.to_f64()),
        });
    }

    fn fail(&mut self, check: impl Into<String>, e: &Error) {
        self.ok(false, format!("{}: {e}", check.into()));
    }
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
}

impl Ctx<'_> {
    fn p(&self) -> Precision {
        self.cfg.precision
    }

    fn real(&self, s: &str) -> Real {
        Real::parse(s, self.p()).expect("literal")
    }

    fn rat(&self, r: &Rat) -> Real {
        Real::from_rat(r, self.p())
    }
}

const ALL: [Suite; 7] = [
    Suite::Heine,
    Suite::Rogersfine,
    Suite::Muir,
    Suite::Ramanujan,
    Suite::Duality,
    Suite::Cesaro,
    Suite::Limits,
];

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Heine => "heine",
        Suite::Rogersfine => "rogersfine",
        Suite::Muir => "muir",
        Suite::Ramanujan => "ramanujan",
        Suite::Duality => "duality",
        Suite::Cesaro => "cesaro",
        Suite::Limits => "limits",
        Suite::All => "all",
    }
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let ctx = Ctx { cfg };
    let suites: Vec<Suite> = if suite == Suite::All { ALL.to_vec() } else { vec![suite] };
    for s in suites {
        let mut b = Battery {
            suite: suite_name(s),
            out: &mut out,
        };
        match s {
            Suite::Heine => heine(&ctx, &mut b),
            Suite::Rogersfine => rogers_fine(&ctx, &mut b),
            Suite::Muir => muir(&mut b),
            Suite::Ramanujan => ramanujan(&ctx, &mut b),
            Suite::Duality => duality(&ctx, &mut b),
            Suite::Cesaro => cesaro(&ctx, &mut b),
            Suite::Limits => limits(&ctx, &mut b),
            Suite::All => unreachable!(),
        }
    }
    out
}

pub fn cmd_verify(suite: Suite, cfg: &RunConfig) -> CliResult<u8> {
    let checks = run_suite(suite, cfg);
    let all_pass = checks.iter().all(|c| c.pass);
    let text = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&checks)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for c in &checks {
                w.serialize(c)?;
            }
            let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
            String::from_utf8(bytes).expect("csv output is UTF-8")
        }
        Format::Text => render_text(&checks, cfg),
    };
    emit(&text, cfg)?;
    Ok(if all_pass { 0 } else { 1 })
}

fn fmt_dev(d: Option<f64>) -> String {
    d.map(|d| format!("{d:.2e}")).unwrap_or_else(|| "exact".into())
}

fn render_text(checks: &[Check], cfg: &RunConfig) -> String {
    let mut out = String::new();
    if !cfg.no_meta {
        out.push_str(&meta_lines(cfg));
        out.push_str(&format!("# identity tolerance {:.2e}\n", cfg.tol.to_f64()));
    }
    for c in checks {
        out.push_str(&format!(
            "{} {:<10} {} ({})\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.suite,
            c.check,
            fmt_dev(c.deviation)
        ));
    }
    let mut names: Vec<&str> = checks.iter().map(|c| c.suite).collect();
    names.dedup();
    for name in names {
        let group: Vec<&Check> = checks.iter().filter(|c| c.suite == name).collect();
        let passed = group.iter().filter(|c| c.pass).count();
        let worst = group
            .iter()
            .filter_map(|c| c.deviation)
            .fold(None, |m: Option<f64>, d| Some(m.map_or(d, |m| m.max(d))));
        out.push_str(&format!(
            "suite {name}: {passed}/{} passed, max deviation {}\n",
            group.len(),
            fmt_dev(worst)
        ));
    }
    out
}

fn sample(rng: &mut ChaCha8Rng, lo: i64, hi: i64, signed: bool) -> Rat {
    let k = rng.gen_range(lo..=hi);
    let r = rat(k, 10_000);
    if signed && rng.gen_bool(0.5) {
        -r
    } else {
        r
    }
}

/// Random rational tuple on which all five relations apply with every new
/// argument of modulus at most 0.9.
fn admissible_tuple(rng: &mut ChaCha8Rng) -> [Rat; 5] {
    let cap = rat(9, 10);
    loop {
        let alpha = sample(rng, 3000, 9500, true);
        let beta = sample(rng, 3000, 9500, true);
        let gamma = sample(rng, 500, 9000, true);
        let q = sample(rng, 500, 8500, false);
        let tau = sample(rng, 500, 9000, true);
        let args = [
            beta.clone(),
            &gamma / &beta,
            &alpha * &beta * &tau / &gamma,
            alpha.clone(),
            &gamma / &alpha,
        ];
        if args.iter().all(|a| a.abs() <= cap) {
            return [alpha, beta, gamma, q, tau];
        }
    }
}

fn heine(ctx: &Ctx, b: &mut Battery) {
    let p = ctx.p();
    let mut rng = ChaCha8Rng::seed_from_u64(20_260_101);
    for i in 0..25 {
        let [alpha, beta, gamma, q, tau] = admissible_tuple(&mut rng).map(|r| ctx.rat(&r));
        let prm = Phi21Params::new(alpha, beta, gamma, q, tau);
        let lhs = match phi21(&prm, p) {
            Ok(v) => v,
            Err(e) => {
                b.fail(format!("tuple {i}"), &e);
                continue;
            }
        };
        for k in 1..=5u8 {
            let name = format!("tuple {i} relation {k}");
            match heine_transform(k, &prm, p).and_then(|(f, np)| Ok(f * phi21(&np, p)?)) {
                Ok(rhs) => b.close(&lhs, &rhs, &ctx.cfg.tol, name),
                Err(e) => b.fail(name, &e),
            }
        }
    }
}

fn rogers_fine(ctx: &Ctx, b: &mut Battery) {
    let p = ctx.p();
    for q in ["0.2", "0.5", "0.8"] {
        for x in ["-1", "0.3"] {
            let (qr, xr) = (ctx.real(q), ctx.real(x));
            let name = format!("base x={x} q={q}");
            match (rogers_fine_lhs(&xr, &qr, p), rogers_fine_rhs(&xr, &qr, p)) {
                (Ok(l), Ok(r)) => b.close(&l, &r, &ctx.cfg.tol, name),
                (Err(e), _) | (_, Err(e)) => b.fail(name, &e),
            }
            for (a, c) in [(2, 1), (3, 2), (4, 3), (3, 1), (2, 0)] {
                let name = format!("(a,b)=({a},{c}) x={x} q={q}");
                let pair = (
                    rogers_fine_general_lhs(a, c, &xr, &qr, p),
                    rogers_fine_general(a, c, &xr, &qr, p),
                );
                match pair {
                    (Ok(l), Ok(r)) => b.close(&l, &r, &ctx.cfg.tol, name),
                    (Err(e), _) | (_, Err(e)) => b.fail(name, &e),
                }
            }
        }
    }
}

fn muir(b: &mut Battery) {
    for q in [rat(1, 2), rat(1, 3), rat(2, 5)] {
        for kappa in 1..=3u32 {
            let qk = ipow(&q, kappa as i64);
            let ps = PowerSeries::from_fn(12, |n| qpoch_rat(&q, &qk, n));
            let name = format!("q={q} kappa={kappa}");
            match muir_rogers(&ps, 9) {
                Ok(e) => {
                    let exact = e
                        .iter()
                        .enumerate()
                        .all(|(n, en)| *en == closed_form_e(kappa, &q, n));
                    b.ok(exact, format!("{name} e_0..e_9 closed form"));
                    match cfrac_to_series(&e, 10, 8) {
                        Ok(back) => b.ok(
                            back.coeffs() == &ps.coeffs()[..9],
                            format!("{name} round trip c_0..c_8"),
                        ),
                        Err(err) => b.fail(format!("{name} round trip"), &err),
                    }
                }
                Err(e) => b.fail(name, &e),
            }
        }
        let tri = PowerSeries::from_fn(12, |n| ipow(&q, (n * (n + 1) / 2) as i64));
        match muir_rogers(&tri, 9) {
            Ok(e) => b.ok(
                e == gauss_entry7_coeffs(Entry7::First, &q, 9),
                format!("q={q} triangular series gives the first Entry-7 fraction"),
            ),
            Err(e) => b.fail(format!("q={q} triangular"), &e),
        }
    }
}

fn ramanujan(ctx: &Ctx, b: &mut Battery) {
    let p = ctx.p();
    let tol = &ctx.cfg.tol;
    for q in [rat(1, 2), rat(1, 3), rat(2, 5), rat(3, 1)] {
        for kappa in 1..=3 {
            b.ok(
                ramanujan_cf_coeffs(&second_gauss_params(kappa, &q), 21)
                    == gauss4_coeffs(kappa, &q, 21),
                format!("substitution q={q} kappa={kappa}"),
            );
        }
        let rr = RamanujanParams {
            a: rat(0, 1),
            lambda: rat(1, 1),
            b: rat(0, 1),
            q: q.clone(),
        };
        let d = ramanujan_cf_coeffs(&rr, 20);
        b.ok(
            d.iter().enumerate().skip(1).all(|(n, dn)| *dn == ipow(&q, n as i64)),
            format!("a=b=0 lambda=1 gives q^n at q={q}"),
        );
    }
    for i in 1..=20 {
        let q = ctx.rat(&rat(95 * i, 2000));
        let gp = GParams {
            a: ctx.real("-1"),
            lambda: q.clone(),
            b: -q.clone(),
            q: q.clone(),
        };
        let name = format!("G(-1, q; -q, q) = 1 - q at q={}", decimal_label(&q, 6));
        match g0(&gp, p) {
            Ok(g) => b.close(&g, &(Real::from_i64(1, p) - &q), tol, name),
            Err(e) => b.fail(name, &e),
        }
    }
    let cfg = ctx.cfg.sum_config();
    for q in ["0.3", "0.5"] {
        let qr = ctx.real(q);
        for kappa in 1..=3 {
            let name = format!("G1/G0 vs S2 kappa={kappa} q={q}");
            let gp: GParams<Real> = second_gauss_params(kappa, &qr).into();
            let res = (|| -> Result<(Real, Real)> {
                let ratio = g1(&gp, p)? / g0(&gp, p)?;
                let s = sum_s2(kappa, &qr, &cfg)?;
                Ok((ratio, s.value().cloned().unwrap_or_else(|| Real::from_i64(0, p))))
            })();
            match res {
                Ok((a, s)) => b.close(&a, &s, tol, name),
                Err(e) => b.fail(name, &e),
            }
        }
    }
}

fn value_of(r: Result<SumResult<Real>>) -> Result<Real> {
    let r = r?;
    r.value()
        .cloned()
        .ok_or(Error::InvalidArgument("series diverged".into()))
}

fn duality(ctx: &Ctx, b: &mut Battery) {
    let p = ctx.p();
    let cfg = ctx.cfg.sum_config();
    let tol = &ctx.cfg.tol;
    for q in ["0.3", "0.5", "0.7"] {
        let qr = ctx.real(q);
        let inv = Real::from_i64(1, p) / &qr;
        let name = format!("S1 rho=4 at q={q} and 1/q");
        match (value_of(sum_s1(4, &qr, &cfg)), value_of(sum_s1(4, &inv, &cfg))) {
            (Ok(a), Ok(c)) => b.close(&a, &c, tol, name),
            (Err(e), _) | (_, Err(e)) => b.fail(name, &e),
        }
    }
    for q in ["0.2", "0.5", "0.8"] {
        let qr = ctx.real(q);
        for rho in 3..=8 {
            let name = format!("S1 rho={rho} q={q} direct vs q-form");
            let pair = (
                value_of(sum_s1_line(rho, &qr, Line::Direct, &cfg)),
                value_of(sum_s1_line(rho, &qr, Line::QForm, &cfg)),
            );
            match pair {
                (Ok(a), Ok(c)) => b.close(&a, &c, tol, name),
                (Err(e), _) | (_, Err(e)) => b.fail(name, &e),
            }
        }
        for kappa in 1..=6 {
            let name = format!("S2 kappa={kappa} q={q} direct vs q-form");
            let pair = (
                value_of(sum_s2_line(kappa, &qr, Line::Direct, &cfg)),
                value_of(sum_s2_line(kappa, &qr, Line::QForm, &cfg)),
            );
            match pair {
                (Ok(a), Ok(c)) => b.close(&a, &c, tol, name),
                (Err(e), _) | (_, Err(e)) => b.fail(name, &e),
            }
        }
    }
}

fn cesaro(ctx: &Ctx, b: &mut Battery) {
    let p = ctx.p();
    let half = ctx.real("0.5");
    let t10 = ctx.real("5e-10");
    let s = partial_sums(s1_terms(3, Line::PForm, &half), 101);
    b.close(&s[100], &ctx.real("1.0759457568"), &t10, "S_100 for rho=3, p=0.5");
    b.close(&s[101], &ctx.real("-0.2208954963"), &t10, "S_101 for rho=3, p=0.5");
    b.close(&s[50], &s[100], &t10, "S_50 vs S_100");
    b.close(&s[51], &s[101], &t10, "S_51 vs S_101");
    match sum_s1(3, &ctx.real("2"), &ctx.cfg.sum_config()) {
        Ok(r) => match (r.value(), r.gap()) {
            (Some(v), Some(g)) => {
                b.close(v, &ctx.real("0.4275251302"), &t10, "Cesaro limit at q=2");
                match q_infinity(&half, p) {
                    Ok(qi) => b.close(g, &qi, &ctx.real("1e-9"), "gap vs Q_inf(0.5)"),
                    Err(e) => b.fail("Q_inf(0.5)", &e),
                }
            }
            _ => b.ok(false, "rho=3 q=2 is not Cesaro-summed"),
        },
        Err(e) => b.fail("rho=3 q=2", &e),
    }
}

fn limits(ctx: &Ctx, b: &mut Battery) {
    let p = ctx.p();
    let cfg = ctx.cfg.sum_config();
    let rows: [(&str, &str, std::ops::RangeInclusive<u32>, bool); 4] = [
        ("s1", "0.5", 3..=8, false),
        ("s1", "2", 3..=8, true),
        ("s2", "0.5", 1..=6, true),
        ("s2", "2", 2..=6, true),
    ];
    for (fam, q, range, increasing) in rows {
        let qr = ctx.real(q);
        let name = format!("{fam} at q={q} moves monotonically toward its limit");
        let res = (|| -> Result<bool> {
            let (values, limit) = if fam == "s1" {
                let v: Result<Vec<Real>> = range.clone().map(|r| value_of(sum_s1(r, &qr, &cfg))).collect();
                (v?, s1_limit(&qr, p)?)
            } else {
                let v: Result<Vec<Real>> = range.clone().map(|k| value_of(sum_s2(k, &qr, &cfg))).collect();
                (v?, s2_limit(&qr, p)?)
            };
            let ordered = values
                .windows(2)
                .all(|w| if increasing { w[0] < w[1] } else { w[0] > w[1] });
            let dist: Vec<Real> = values.iter().map(|v| (v.clone() - &limit).abs()).collect();
            Ok(ordered && dist.windows(2).all(|w| w[1] < w[0]))
        })();
        match res {
            Ok(ok) => b.ok(ok, name),
            Err(e) => b.fail(name, &e),
        }
    }
    for (q, n) in [("0.5", 200), ("2", 20)] {
        let name = format!("sum of (q;q)_n diverges at q={q}");
        match gauss_problem2(&ctx.real(q), n, &cfg) {
            Ok(r) => b.ok(r.status() == Status::Divergent, name),
            Err(e) => b.fail(name, &e),
        }
    }
}
