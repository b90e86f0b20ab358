//! File formats shared by the library and the command-line tool.
//!
//! - matrix JSON: `{"m": M, "entries": [[re, im], ...]}`, row-major;
//! - matrix CSV: one row per line, comma-separated `a+bi` tokens;
//! - spectrum: JSON array of `[re, im]` pairs;
//! - series: JSON `{"params": {...}, "coeffs": [matrix, ...]}`.
//!
//! Floats are written in shortest round-trip form and parsed exactly, so every finite double
//! survives a write/read cycle bit for bit.

use std::fs;
use std::io::Read;
use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, LaguerreSeries};
use crate::spectrum::Spectrum;

fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Input(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Error::Input(format!("reading {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Input(format!("writing {}: {e}", path.display())))
}

/// Parses JSON and maps failures to [`Error::Input`].
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("invalid JSON: {e}")))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Input(format!("serialization failed: {e}")))
}

/// Formats `z` as `a+bi` with shortest round-trip exponents, e.g. `-1.5e0+2e-3i`.
pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:e}{sign}{:e}i", z.re, z.im.abs())
}

/// Parses `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(token: &str) -> Result<Complex64> {
    let t = token.trim();
    let bad = || Error::Input(format!("cannot parse complex number {token:?}"));
    let num = |s: &str| -> Result<f64> {
        let v: f64 = s.parse().map_err(|_| bad())?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Input(format!("non-finite value in {token:?}")))
        }
    };
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(num(t)?, 0.0));
    };
    // The split point is the last sign that neither starts the token nor follows an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex64::new(num(&body[..k])?, num(&body[k..])?)),
        None => Ok(Complex64::new(0.0, num(body)?)),
    }
}

pub fn matrix_to_csv(a: &DenseMatrix) -> String {
    let mut out = String::new();
    for i in 0..a.dim() {
        let row: Vec<String> = a.row(i).iter().map(|&z| format_complex(z)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn matrix_from_csv(text: &str) -> Result<DenseMatrix> {
    let rows: Vec<Vec<Complex64>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(parse_complex).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    DenseMatrix::from_rows(rows).map_err(|e| Error::Input(format!("CSV matrix: {e}")))
}

/// Reads a matrix file; `.csv` files (or text not starting with `{`) are read as CSV.
pub fn read_matrix(path: &Path) -> Result<DenseMatrix> {
    let text = read_text(path)?;
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
        || !text.trim_start().starts_with('{');
    if is_csv {
        matrix_from_csv(&text)
    } else {
        from_json(&text)
    }
}

/// Writes JSON unless the extension is `.csv`.
pub fn write_matrix(path: &Path, a: &DenseMatrix) -> Result<()> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        write_text(path, &matrix_to_csv(a))
    } else {
        write_text(path, &to_json(a)?)
    }
}

/// Parses the pairs first so that an unstable eigenvalue surfaces as [`Error::Stability`].
pub fn read_spectrum(path: &Path) -> Result<Spectrum> {
    Spectrum::new(from_json(&read_text(path)?)?)
}

pub fn write_spectrum(path: &Path, s: &Spectrum) -> Result<()> {
    write_text(path, &to_json(s)?)
}

pub fn read_series(path: &Path) -> Result<LaguerreSeries> {
    let series: LaguerreSeries = from_json(&read_text(path)?)?;
    LaguerreSeries::new(series.params, series.coeffs)
}

pub fn write_series(path: &Path, s: &LaguerreSeries) -> Result<()> {
    write_text(path, &to_json(s)?)
}

pub fn read_json_file<T: DeserializeOwned>(path: &Path) -> Result<T> {
    from_json(&read_text(path)?)
}

pub fn write_json_file<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_json(value)?)
}
