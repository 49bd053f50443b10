use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use entry7::{Family, Real, Result as CoreResult, SumResult};
use serde::Serialize;

use crate::args::Format;
use crate::config::RunConfig;
use crate::error::CliResult;

/// One rendered sum: a table row or the result of `sum`.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub family: &'static str,
    pub param: u32,
    pub q: String,
    pub value: Option<String>,
    pub status: String,
    pub gap: Option<String>,
    pub terms: usize,
    /// Divergence direction or error message; text output only.
    #[serde(skip)]
    pub note: Option<String>,
}

impl Row {
    pub fn new(family: Family, q: &str, r: &CoreResult<SumResult<Real>>, digits: usize) -> Self {
        let mut row = Row {
            family: family.tag(),
            param: family.param(),
            q: q.to_string(),
            value: None,
            status: "error".into(),
            gap: None,
            terms: 0,
            note: None,
        };
        match r {
            Ok(r) => {
                row.value = r.value().map(|v| v.to_fixed(digits));
                row.gap = r.gap().map(|g| g.to_fixed(digits));
                row.status = r.status().to_string();
                row.terms = r.terms_used;
                row.note = r.direction().map(|d| d.to_string());
            }
            Err(e) => row.note = Some(e.to_string()),
        }
        row
    }
}

/// Decimal rendering of a user-supplied base: exact when it terminates
/// within `digits` places, otherwise rounded; trailing zeros dropped.
pub fn decimal_label(x: &Real, digits: usize) -> String {
    let s = x.to_fixed(digits);
    if !s.contains('.') {
        return s;
    }
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

pub fn meta_lines(cfg: &RunConfig) -> String {
    let ts = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!(
        "# entry7 {}\n# precision {} digits, max terms {}\n# generated at unix time {ts}\n",
        env!("CARGO_PKG_VERSION"),
        cfg.precision,
        cfg.max_terms
    )
}

fn dash(v: &Option<String>) -> &str {
    v.as_deref().unwrap_or("-")
}

pub fn render_rows(rows: &[Row], cfg: &RunConfig) -> CliResult<String> {
    match cfg.format {
        Format::Json => Ok(serde_json::to_string_pretty(rows)? + "\n"),
        Format::Csv => csv_rows(rows),
        Format::Text => {
            let mut out = String::new();
            if !cfg.no_meta {
                out.push_str(&meta_lines(cfg));
            }
            let header = ["family", "param", "q", "value", "status", "gap", "terms"];
            let mut cells: Vec<[String; 7]> = vec![header.map(String::from)];
            for r in rows {
                let value = match (&r.value, r.status.as_str()) {
                    (Some(v), _) => v.clone(),
                    (None, "divergent") => r.note.clone().unwrap_or_default(),
                    _ => "-".into(),
                };
                cells.push([
                    r.family.into(),
                    r.param.to_string(),
                    r.q.clone(),
                    value,
                    r.status.clone(),
                    dash(&r.gap).into(),
                    r.terms.to_string(),
                ]);
            }
            let widths: Vec<usize> = (0..7)
                .map(|c| cells.iter().map(|row| row[c].len()).max().unwrap_or(0))
                .collect();
            for row in &cells {
                let line: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect();
                out.push_str(line.join("  ").trim_end());
                out.push('\n');
            }
            for r in rows.iter().filter(|r| r.status == "error") {
                out.push_str(&format!(
                    "# error in {} param {} q {}: {}\n",
                    r.family,
                    r.param,
                    r.q,
                    dash(&r.note)
                ));
            }
            Ok(out)
        }
    }
}

pub fn render_single(row: &Row, cfg: &RunConfig) -> CliResult<String> {
    match cfg.format {
        Format::Json => Ok(serde_json::to_string_pretty(row)? + "\n"),
        Format::Csv => csv_rows(std::slice::from_ref(row)),
        Format::Text => {
            let mut out = String::new();
            if !cfg.no_meta {
                out.push_str(&meta_lines(cfg));
            }
            let param = if row.family == "s1" { "rho" } else { "kappa" };
            out.push_str(&format!("series     {} {param}={} q={}\n", row.family, row.param, row.q));
            out.push_str(&format!("value      {}\n", dash(&row.value)));
            out.push_str(&format!("status     {}\n", row.status));
            if let Some(d) = &row.note {
                out.push_str(&format!("direction  {d}\n"));
            }
            if let Some(g) = &row.gap {
                out.push_str(&format!("gap        {g}\n"));
            }
            out.push_str(&format!("terms      {}\n", row.terms));
            Ok(out)
        }
    }
}

fn csv_rows(rows: &[Row]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    if rows.is_empty() {
        w.write_record(["family", "param", "q", "value", "status", "gap", "terms"])?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Writes to `--output` when given, stdout otherwise.
pub fn emit(text: &str, cfg: &RunConfig) -> CliResult<()> {
    match &cfg.output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
