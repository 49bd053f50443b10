use entry7::{
    gauss4_coeffs, gauss_entry7_coeffs, ipow, muir_rogers, parse_rat, qpoch_rat,
    ramanujan_cf_coeffs, Entry7, Error, Family, PowerSeries, RamanujanParams, Rat, Real,
    SeriesSpec, Status,
};
use entry7::cfrac::MUIR_ROGERS_MAX;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{Cli, Command, FamilyArg, Format, Source};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{decimal_label, emit, render_rows, render_single, Row};
use crate::verify;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> CliResult<u8> {
    let cfg = RunConfig::resolve(&cli.global)?;
    match cli.command {
        Command::Sum { family, rho, kappa, q } => {
            let family = pick_family(family, rho, kappa)?;
            cmd_sum(family, &q, &cfg)
        }
        Command::Table { family, rho, kappa, q } => {
            let params = match (family, rho, kappa) {
                (FamilyArg::S1, Some(r), None) => parse_range(&r)?,
                (FamilyArg::S2, None, Some(k)) => parse_range(&k)?,
                (FamilyArg::S1, ..) => return Err(usage("table --family s1 takes --rho only")),
                (FamilyArg::S2, ..) => return Err(usage("table --family s2 takes --kappa only")),
            };
            cmd_table(family, &params, &q, &cfg)
        }
        Command::Verify { suite } => verify::cmd_verify(suite, &cfg),
        Command::Coeffs { source, q, kappa, a, lambda, b, series, n } => {
            let req = CoeffRequest { q, kappa, a, lambda, b, series };
            cmd_coeffs(source, &req, n, &cfg)
        }
    }
}

fn pick_family(f: FamilyArg, rho: Option<u32>, kappa: Option<u32>) -> CliResult<Family> {
    let family = match (f, rho, kappa) {
        (FamilyArg::S1, Some(rho), None) => Family::S1 { rho },
        (FamilyArg::S2, None, Some(kappa)) => Family::S2 { kappa },
        (FamilyArg::S1, ..) => return Err(usage("--family s1 needs --rho (and no --kappa)")),
        (FamilyArg::S2, ..) => return Err(usage("--family s2 needs --kappa (and no --rho)")),
    };
    family.validate().map_err(|e| usage(e.to_string()))
}

fn parse_q(s: &str) -> CliResult<Rat> {
    parse_rat(s).map_err(|_| usage(format!("invalid q {s:?}: expected a decimal or a fraction")))
}

/// `a..b` (inclusive), a single value, or a comma list.
pub fn parse_range(s: &str) -> CliResult<Vec<u32>> {
    let bad = || usage(format!("invalid parameter range {s:?}"));
    let mut out: Vec<u32> = if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        (a..=b).collect()
    } else {
        s.split(',')
            .map(|x| x.trim().parse().map_err(|_| bad()))
            .collect::<CliResult<_>>()?
    };
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(usage(format!("empty parameter range {s:?}")));
    }
    Ok(out)
}

fn compute_row(family: Family, q: &Rat, cfg: &RunConfig) -> Row {
    let prec = cfg.precision;
    let qr = Real::from_rat(q, prec);
    let label = decimal_label(&qr, cfg.digits.max(12));
    let result = SeriesSpec::new(family, qr, prec).and_then(|s| s.sum(&cfg.sum_config()));
    Row::new(family, &label, &result, cfg.digits)
}

fn cmd_sum(family: Family, q: &str, cfg: &RunConfig) -> CliResult<u8> {
    let q = parse_q(q)?;
    let prec = cfg.precision;
    let qr = Real::from_rat(&q, prec);
    let spec = SeriesSpec::new(family, qr.clone(), prec)?;
    let result = spec.sum(&cfg.sum_config())?;
    let divergent = result.status() == Status::Divergent;
    let row = Row::new(family, &decimal_label(&qr, cfg.digits.max(12)), &Ok(result), cfg.digits);
    emit(&render_single(&row, cfg)?, cfg)?;
    Ok(if divergent { 2 } else { 0 })
}

fn cmd_table(family: FamilyArg, params: &[u32], qs: &[String], cfg: &RunConfig) -> CliResult<u8> {
    let families: Vec<Family> = params
        .iter()
        .map(|&p| match family {
            FamilyArg::S1 => Family::S1 { rho: p },
            FamilyArg::S2 => Family::S2 { kappa: p },
        })
        .map(|f| f.validate().map_err(|e| usage(e.to_string())))
        .collect::<CliResult<_>>()?;
    let mut qs: Vec<Rat> = qs.iter().map(|s| parse_q(s)).collect::<CliResult<_>>()?;
    if qs.is_empty() {
        return Err(usage("--q needs at least one value"));
    }
    qs.sort();
    qs.dedup();

    let cells: Vec<(Family, &Rat)> = families
        .iter()
        .flat_map(|&f| qs.iter().map(move |q| (f, q)))
        .collect();
    let rows: Vec<Row> = if cfg.parallel {
        cells.par_iter().map(|(f, q)| compute_row(*f, q, cfg)).collect()
    } else {
        cells.iter().map(|(f, q)| compute_row(*f, q, cfg)).collect()
    };
    emit(&render_rows(&rows, cfg)?, cfg)?;
    Ok(0)
}

struct CoeffRequest {
    q: Option<String>,
    kappa: Option<u32>,
    a: Option<String>,
    lambda: Option<String>,
    b: Option<String>,
    series: Option<String>,
}

#[derive(Serialize)]
struct CoeffListing {
    source: String,
    coeffs: Vec<String>,
    truncated: Option<String>,
}

fn need_rat(v: &Option<String>, flag: &str, source: &str) -> CliResult<Rat> {
    let s = v
        .as_deref()
        .ok_or_else(|| usage(format!("--source {source} needs --{flag}")))?;
    parse_rat(s).map_err(|_| usage(format!("invalid --{flag} {s:?}")))
}

fn cmd_coeffs(source: Source, req: &CoeffRequest, n: usize, cfg: &RunConfig) -> CliResult<u8> {
    if n < 1 {
        return Err(usage("--n must be at least 1"));
    }
    let name = <Source as clap::ValueEnum>::to_possible_value(&source)
        .expect("no skipped variants")
        .get_name()
        .to_string();
    let mut truncated = None;
    let coeffs: Vec<Rat> = match source {
        Source::Entry7First | Source::Entry7Second => {
            let q = need_rat(&req.q, "q", &name)?;
            let which = if source == Source::Entry7First { Entry7::First } else { Entry7::Second };
            gauss_entry7_coeffs(which, &q, n)
        }
        Source::Gauss4 => {
            let q = need_rat(&req.q, "q", &name)?;
            let kappa = req.kappa.ok_or_else(|| usage("--source gauss4 needs --kappa"))?;
            if kappa < 1 {
                return Err(usage("--kappa must be at least 1"));
            }
            check_q(&q)?;
            gauss4_coeffs(kappa, &q, n)
        }
        Source::Ramanujan => {
            let rp = RamanujanParams {
                a: need_rat(&req.a, "a", &name)?,
                lambda: need_rat(&req.lambda, "lambda", &name)?,
                b: need_rat(&req.b, "b", &name)?,
                q: need_rat(&req.q, "q", &name)?,
            };
            check_q(&rp.q)?;
            ramanujan_cf_coeffs(&rp, n)
        }
        Source::Muir => {
            if n > MUIR_ROGERS_MAX {
                return Err(usage(format!("--n for muir is capped at {MUIR_ROGERS_MAX}")));
            }
            let spec = req
                .series
                .as_deref()
                .ok_or_else(|| usage("--source muir needs --series"))?;
            let ps = parse_series(spec, n + 1)?;
            match muir_rogers(&ps, n) {
                Ok(e) => e,
                Err(Error::DegenerateHankel { index }) => {
                    truncated = Some(format!(
                        "Hankel minor {index} vanishes; coefficients past e_{index} are undefined"
                    ));
                    if index == 0 { Vec::new() } else { muir_rogers(&ps, index)? }
                }
                Err(e) => return Err(e.into()),
            }
        }
    };
    let listing = CoeffListing {
        source: name,
        coeffs: coeffs.iter().map(Rat::to_string).collect(),
        truncated,
    };
    let text = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&listing)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["index", "value"])?;
            for (i, c) in listing.coeffs.iter().enumerate() {
                w.write_record([i.to_string(), c.clone()])?;
            }
            let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
            String::from_utf8(bytes).expect("csv output is UTF-8")
        }
        Format::Text => {
            let mut s = listing.coeffs.join(" ") + "\n";
            if let Some(t) = &listing.truncated {
                s.push_str(&format!("# truncated: {t}\n"));
            }
            s
        }
    };
    emit(&text, cfg)?;
    Ok(0)
}

fn check_q(q: &Rat) -> CliResult<()> {
    if *q == Rat::from_integer(0.into()) {
        return Err(usage("q must be non-zero"));
    }
    Ok(())
}

/// `qpoch:q=..,kappa=..`, `triangular:q=..` or `list:c0,c1,...`.
fn parse_series(spec: &str, len: usize) -> CliResult<PowerSeries> {
    let bad = |why: &str| usage(format!("invalid --series {spec:?}: {why}"));
    let (kind, rest) = spec.split_once(':').ok_or_else(|| bad("expected kind:arguments"))?;
    if kind == "list" {
        let c: Vec<Rat> = rest
            .split(',')
            .map(|x| parse_rat(x).map_err(|_| bad("not a rational")))
            .collect::<CliResult<_>>()?;
        if c.len() < len {
            return Err(bad(&format!("need {len} coefficients, got {}", c.len())));
        }
        return Ok(PowerSeries::new(c));
    }
    let mut q = None;
    let mut kappa = None;
    for kv in rest.split(',') {
        match kv.split_once('=') {
            Some(("q", v)) => q = Some(parse_rat(v.trim()).map_err(|_| bad("invalid q"))?),
            Some(("kappa", v)) => {
                kappa = Some(v.trim().parse::<u32>().map_err(|_| bad("invalid kappa"))?)
            }
            _ => return Err(bad(&format!("unexpected argument {kv:?}"))),
        }
    }
    let q = q.ok_or_else(|| bad("missing q"))?;
    match kind {
        "qpoch" => {
            let kappa = kappa.ok_or_else(|| bad("missing kappa"))?;
            if kappa < 1 {
                return Err(bad("kappa must be at least 1"));
            }
            let qk = ipow(&q, kappa as i64);
            Ok(PowerSeries::from_fn(len, |n| qpoch_rat(&q, &qk, n)))
        }
        "triangular" => Ok(PowerSeries::from_fn(len, |n| ipow(&q, (n * (n + 1) / 2) as i64))),
        _ => Err(bad("kind must be qpoch, triangular or list")),
    }
}
