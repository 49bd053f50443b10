use std::collections::HashMap;
use std::path::{Path, PathBuf};

use entry7::{Precision, Real, SumConfig};

use crate::args::{Format, GlobalArgs};
use crate::error::{CliError, CliResult};

/// Resolved run settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub precision: Precision,
    pub max_terms: usize,
    pub tol: Real,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub no_meta: bool,
    pub digits: usize,
    pub parallel: bool,
}

const KEYS: [&str; 8] = [
    "precision",
    "max-terms",
    "tol",
    "format",
    "output",
    "no-meta",
    "digits",
    "parallel",
];

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Reads `key = value` lines. Blank lines and `#` comments are skipped;
/// `_` and `-` are interchangeable in keys.
pub fn read_config_file(path: &Path) -> CliResult<HashMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key=value", i + 1)))?;
        let key = k.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(usage(format!("config line {}: unknown key {key:?}", i + 1)));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> CliResult<T> {
    v.parse()
        .map_err(|_| usage(format!("invalid value {v:?} for {key}")))
}

fn parse_bool(key: &str, v: &str) -> CliResult<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(usage(format!("invalid value {v:?} for {key}"))),
    }
}

impl RunConfig {
    pub fn resolve(g: &GlobalArgs) -> CliResult<Self> {
        let file = match &g.config {
            Some(p) => read_config_file(p)?,
            None => HashMap::new(),
        };
        let get = |k: &str| file.get(k).map(String::as_str);

        let digits_p = match g.precision {
            Some(p) => p,
            None => get("precision").map(|v| parse("precision", v)).transpose()?.unwrap_or(50),
        };
        let precision = Precision::new(digits_p)?;

        let max_terms = match g.max_terms {
            Some(m) => m,
            None => get("max-terms")
                .map(|v| parse("max-terms", v))
                .transpose()?
                .unwrap_or(SumConfig::default().max_terms),
        };
        if max_terms < 100 {
            return Err(usage(format!("--max-terms must be at least 100, got {max_terms}")));
        }

        let tol = match g.tol.as_deref().or(get("tol")) {
            Some(s) => {
                let t = Real::parse(s, precision)
                    .map_err(|_| usage(format!("invalid tolerance {s:?}")))?;
                if t <= Real::from_i64(0, precision) {
                    return Err(usage("--tol must be positive"));
                }
                t
            }
            None => Real::pow10(-(precision.digits() as i32 - 10), precision),
        };

        let format = match (g.format, get("format")) {
            (Some(f), _) => f,
            (None, Some(v)) => <Format as clap::ValueEnum>::from_str(v, true)
                .map_err(|_| usage(format!("invalid format {v:?}")))?,
            (None, None) => Format::Text,
        };

        let output = g.output.clone().or_else(|| get("output").map(PathBuf::from));

        let no_meta = g.no_meta || get("no-meta").map(|v| parse_bool("no-meta", v)).transpose()?.unwrap_or(false);
        let parallel = g.parallel || get("parallel").map(|v| parse_bool("parallel", v)).transpose()?.unwrap_or(false);

        let max_digits = precision.digits() as usize - 10;
        let digits = match g.digits {
            Some(d) => d,
            None => get("digits")
                .map(|v| parse("digits", v))
                .transpose()?
                .unwrap_or(max_digits.min(12)),
        };
        if digits > max_digits {
            return Err(usage(format!(
                "--digits {digits} exceeds precision minus 10 ({max_digits})"
            )));
        }

        Ok(RunConfig {
            precision,
            max_terms,
            tol,
            format,
            output,
            no_meta,
            digits,
            parallel,
        })
    }

    pub fn sum_config(&self) -> SumConfig {
        SumConfig {
            precision: self.precision,
            max_terms: self.max_terms,
        }
    }
}
