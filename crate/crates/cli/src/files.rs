//! Matrix input files and region output files.
//!
//! A matrix file is either JSON,
//!
//! ```text
//! {"rows": 2, "cols": 2, "data": [[1, 0], [0, -2], [0.5, 0], [3, 1]]}
//! ```
//!
//! with row-major `[re, im]` pairs, or CSV:
//!
//! ```text
//! rows,cols
//! 2,2
//! 1, -2i
//! 0.5, 3+i
//! ```
//!
//! where the `rows,cols` label line is optional. Blank lines and lines
//! starting with `#` are ignored.

use std::fs;
use std::path::Path;

use nrange_core::{ComplexMatrix, Region, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Serialize, Deserialize)]
struct JsonMatrix {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

/// Which range a region file describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SetKind {
    W,
    Fov,
    Wl,
    Wh,
    Phik,
    Wnorm,
}

impl SetKind {
    pub fn name(self) -> &'static str {
        match self {
            SetKind::W => "w",
            SetKind::Fov => "fov",
            SetKind::Wl => "wl",
            SetKind::Wh => "wh",
            SetKind::Phik => "phik",
            SetKind::Wnorm => "wnorm",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub set: SetKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub sigma: Vec<f64>,
    pub tool_version: String,
}

/// A region together with how it was produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionFile {
    #[serde(flatten)]
    pub region: Region,
    pub meta: Meta,
}

impl RegionFile {
    pub fn new(region: Region, set: SetKind, k: Option<usize>, sigma: Vec<f64>) -> Self {
        RegionFile {
            region,
            meta: Meta { set, k, sigma, tool_version: env!("CARGO_PKG_VERSION").to_string() },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("region files always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn read_matrix(path: &Path) -> CliResult<ComplexMatrix> {
    let text = read_text(path)?;
    parse_matrix(&text).map_err(|msg| CliError::Parse { path: path.to_path_buf(), msg })
}

pub fn read_region(path: &Path) -> CliResult<RegionFile> {
    let text = read_text(path)?;
    RegionFile::from_json(&text).map_err(|e| CliError::Parse { path: path.to_path_buf(), msg: e.to_string() })
}

/// Parses JSON when the first non-blank character is `{`, CSV otherwise.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, String> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_csv(text)
    }
}

fn parse_json(text: &str) -> Result<ComplexMatrix, String> {
    let j: JsonMatrix = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if j.data.len() != j.rows * j.cols {
        return Err(format!("expected {} entries for {}x{}, found {}", j.rows * j.cols, j.rows, j.cols, j.data.len()));
    }
    let data = j.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
    build(j.rows, j.cols, data)
}

fn build(rows: usize, cols: usize, data: Vec<C64>) -> Result<ComplexMatrix, String> {
    if rows == 0 || cols == 0 {
        return Err("matrix must have at least one row and one column".into());
    }
    if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err("entries must be finite".into());
    }
    ComplexMatrix::new(rows, cols, data).map_err(|e| e.to_string())
}

/// Renders a matrix as a JSON matrix file.
pub fn matrix_to_json(a: &ComplexMatrix) -> String {
    let j = JsonMatrix { rows: a.rows(), cols: a.cols(), data: a.data().iter().map(|z| [z.re, z.im]).collect() };
    serde_json::to_string(&j).expect("matrix files always serialize")
}

fn parse_csv(text: &str) -> Result<ComplexMatrix, String> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (mut no, mut header) = lines.next().ok_or("empty input")?;
    if header.replace(' ', "").eq_ignore_ascii_case("rows,cols") {
        (no, header) = lines.next().ok_or("missing dimensions after header")?;
    }
    let dims: Vec<&str> = header.split(',').map(str::trim).collect();
    let [r, c] = dims[..] else {
        return Err(format!("line {no}: expected `rows,cols`, found `{header}`"));
    };
    let parse_dim = |s: &str| s.parse::<usize>().map_err(|_| format!("line {no}: bad dimension `{s}`"));
    let (rows, cols) = (parse_dim(r)?, parse_dim(c)?);
    let mut data = Vec::with_capacity(rows * cols);
    let mut seen_rows = 0;
    for (no, line) in lines {
        let entries: Vec<&str> = line.split(',').collect();
        if entries.len() != cols {
            return Err(format!("line {no}: expected {cols} entries, found {}", entries.len()));
        }
        for e in entries {
            data.push(parse_entry(e).map_err(|m| format!("line {no}: {m}"))?);
        }
        seen_rows += 1;
    }
    if seen_rows != rows {
        return Err(format!("expected {rows} rows, found {seen_rows}"));
    }
    build(rows, cols, data)
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`; whitespace is ignored.
pub fn parse_entry(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty entry".into());
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(C64::new(number(&t, &t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| matches!(bytes[p], b'+' | b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(p) => (number(&body[..p], &t)?, unit_or_number(&body[p..], &t)?),
        None => (0.0, unit_or_number(body, &t)?),
    };
    Ok(C64::new(re, im))
}

fn unit_or_number(s: &str, whole: &str) -> Result<f64, String> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => number(s, whole),
    }
}

fn number(s: &str, whole: &str) -> Result<f64, String> {
    let ok_chars = s.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'));
    match s.parse::<f64>() {
        Ok(v) if ok_chars && v.is_finite() => Ok(v),
        _ => Err(format!("bad complex entry `{whole}`")),
    }
}
