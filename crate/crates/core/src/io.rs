//! File formats: tensors as CSV, images as ASCII PGM, solver traces as CSV,
//! and `key: value` summaries.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::solver::{fmt_f64, TRACE_HEADER};
use crate::tensor::Tensor;

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

fn parse_f64(line: usize, field: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| parse_err(line, format!("not a number: `{}`", field.trim())))
}

/// One tensor row per line, comma separated, 17 significant digits. A 1D
/// signal is therefore one value per line.
pub fn tensor_to_csv(x: &Tensor) -> String {
    let mut out = String::with_capacity(24 * x.len());
    for row in x.as_slice().chunks(x.cols().max(1)) {
        let line: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn tensor_from_csv(text: &str) -> Result<Tensor> {
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let values = line
            .split(',')
            .map(|f| parse_f64(lineno, f))
            .collect::<Result<Vec<_>>>()?;
        match cols {
            None => cols = Some(values.len()),
            Some(c) if c != values.len() => {
                return Err(parse_err(
                    lineno,
                    format!("expected {c} fields, got {}", values.len()),
                ))
            }
            _ => {}
        }
        data.extend(values);
        rows += 1;
    }
    let cols = cols.ok_or_else(|| parse_err(1, "empty file"))?;
    Tensor::new((rows, cols), data).map_err(|e| match e {
        Error::NonFinite(i) => parse_err(i / cols + 1, "non-finite value"),
        other => other,
    })
}

pub const PGM_NOTE: &str = "# values clamped to [0, 255] and rounded";

/// ASCII (P2) grayscale image, one row per line.
pub fn image_to_pgm(x: &Tensor) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "P2\n{PGM_NOTE}\n{} {}\n255", x.cols(), x.rows());
    for row in x.as_slice().chunks(x.cols().max(1)) {
        let line: Vec<String> = row
            .iter()
            .map(|v| format!("{}", v.clamp(0.0, 255.0).round() as u8))
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn image_from_pgm(text: &str) -> Result<Tensor> {
    let mut tokens = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("");
        tokens.extend(content.split_whitespace().map(|t| (i + 1, t)));
    }
    let mut it = tokens.into_iter();
    match it.next() {
        Some((_, "P2")) => {}
        Some((l, t)) => return Err(parse_err(l, format!("expected P2 magic, got `{t}`"))),
        None => return Err(parse_err(1, "empty file")),
    }
    let mut header = [0usize; 3];
    for h in header.iter_mut() {
        let (l, t) = it.next().ok_or_else(|| parse_err(0, "truncated header"))?;
        *h = t
            .parse()
            .map_err(|_| parse_err(l, format!("bad header field `{t}`")))?;
    }
    let [cols, rows, maxval] = header;
    let mut data = Vec::with_capacity(rows * cols);
    for (l, t) in it {
        let v: usize = t
            .parse()
            .map_err(|_| parse_err(l, format!("bad pixel `{t}`")))?;
        if v > maxval {
            return Err(parse_err(l, format!("pixel {v} exceeds maxval {maxval}")));
        }
        data.push(v as f64);
    }
    if data.len() != rows * cols {
        return Err(parse_err(
            0,
            format!("expected {} pixels, got {}", rows * cols, data.len()),
        ));
    }
    Tensor::new((rows, cols), data)
}

/// One parsed trace row; empty CSV fields come back as `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub n: usize,
    pub nu: f64,
    pub ynorm: f64,
    pub big_lambda: Option<f64>,
    pub lambda: Option<f64>,
    pub residual: f64,
    pub err_ref: Option<f64>,
}

pub fn read_trace_csv(text: &str) -> Result<Vec<TraceRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == TRACE_HEADER => {}
        _ => return Err(parse_err(1, format!("header must be `{TRACE_HEADER}`"))),
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, line)| {
            let l = i + 1;
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 7 {
                return Err(parse_err(l, format!("expected 7 fields, got {}", f.len())));
            }
            let opt = |s: &str| -> Result<Option<f64>> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    parse_f64(l, s).map(Some)
                }
            };
            Ok(TraceRow {
                n: f[0]
                    .parse()
                    .map_err(|_| parse_err(l, "bad iteration index"))?,
                nu: parse_f64(l, f[1])?,
                ynorm: parse_f64(l, f[2])?,
                big_lambda: opt(f[3])?,
                lambda: opt(f[4])?,
                residual: parse_f64(l, f[5])?,
                err_ref: opt(f[6])?,
            })
        })
        .collect()
}

/// `key: value` lines in insertion order.
pub fn summary_text(entries: &[(String, String)]) -> String {
    entries.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
}

pub fn parse_summary(text: &str) -> Result<Vec<(String, String)>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let (k, v) = l
                .split_once(':')
                .ok_or_else(|| parse_err(i + 1, "expected `key: value`"))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
