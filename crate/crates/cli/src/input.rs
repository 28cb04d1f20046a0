//! Parsing of complex arguments and sample files.

use std::path::Path;

use num_complex::Complex64;

use crate::error::{CliError, CliResult};

/// Parses `a`, `bi`, `a+bi` or `a-bi` (also `i`, `-i`, and `j` for `i`).
pub fn parse_complex(s: &str) -> CliResult<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CliError::Config(format!("'{s}' is not a complex number (expected a, bi or a+bi)"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not the leading one or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// Samples `(x, f)` read from a file.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub xs: Vec<f64>,
    pub values: Vec<Complex64>,
}

/// Reads `x,f_re[,f_im]` rows, comma- or whitespace-separated, with an
/// optional header line and `#` comments.
pub fn read_samples(path: &Path) -> CliResult<Samples> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_samples(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn parse_samples(text: &str) -> CliResult<Samples> {
    // normalise whitespace-separated rows to CSV, keeping line numbers
    let normalised: String = text
        .lines()
        .map(|line| {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.contains(',') {
                line.to_string()
            } else {
                line.split_whitespace().collect::<Vec<_>>().join(",")
            }
        })
        .collect::<Vec<_>>()
        .join("\n");

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(normalised.as_bytes());

    let mut xs = Vec::new();
    let mut values = Vec::new();
    let mut first = true;
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if first {
            first = false;
            if record.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
                let names: Vec<&str> = record.iter().collect();
                if names != ["x", "f_re"] && names != ["x", "f_re", "f_im"] {
                    return Err(CliError::Config(format!(
                        "line {line}: header must be 'x,f_re' or 'x,f_re,f_im', got '{}'",
                        names.join(",")
                    )));
                }
                continue;
            }
        }
        if !(2..=3).contains(&record.len()) {
            return Err(CliError::Config(format!(
                "line {line}: expected 2 or 3 fields, found {}",
                record.len()
            )));
        }
        let field = |k: usize| -> CliResult<f64> {
            let raw = record.get(k).unwrap_or("0");
            raw.parse::<f64>().map_err(|_| {
                CliError::Config(format!("line {line}, field {}: '{raw}' is not a number", k + 1))
            })
        };
        let x = field(0)?;
        let re = field(1)?;
        let im = if record.len() == 3 { field(2)? } else { 0.0 };
        xs.push(x);
        values.push(Complex64::new(re, im));
    }
    if xs.is_empty() {
        return Err(CliError::Config("no samples found".into()));
    }
    Ok(Samples { xs, values })
}
