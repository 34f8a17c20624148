//! Line-oriented lattice files:
//!
//! ```text
//! # comment
//! q 3
//! d 2
//! row x 1
//! row 1 0
//! ```
//!
//! Entries use the rational-function grammar and must not contain spaces.

use super::LatticeBasis;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::RatMatrix;
use crate::parse::parse_ratfunc;

fn file_err(line: usize, msg: impl Into<String>) -> Error {
    Error::LatticeFile {
        line,
        msg: msg.into(),
    }
}

pub fn parse_lattice_file(text: &str) -> Result<LatticeBasis> {
    let mut field: Option<FieldSpec> = None;
    let mut dim: Option<usize> = None;
    let mut rows = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let key = toks.next().expect("nonempty line");
        match key {
            "q" => {
                if field.is_some() {
                    return Err(file_err(line_no, "duplicate q line"));
                }
                let v: u32 = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| file_err(line_no, "expected `q <prime>`"))?;
                field = Some(FieldSpec::new(v).map_err(|e| file_err(line_no, e.to_string()))?);
            }
            "d" => {
                if field.is_none() {
                    return Err(file_err(line_no, "`q` must precede `d`"));
                }
                if dim.is_some() {
                    return Err(file_err(line_no, "duplicate d line"));
                }
                let v: usize = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| file_err(line_no, "expected `d <dim>`"))?;
                dim = Some(v);
            }
            "row" => {
                let (Some(f), Some(d)) = (field, dim) else {
                    return Err(file_err(line_no, "`row` before `q` and `d`"));
                };
                let entries = toks
                    .map(|t| parse_ratfunc(f, t).map_err(|e| file_err(line_no, format!("`{t}`: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                if entries.len() != d {
                    return Err(file_err(line_no, format!("expected {d} entries, found {}", entries.len())));
                }
                if rows.len() == d {
                    return Err(file_err(line_no, "too many rows"));
                }
                rows.push(entries);
            }
            other => return Err(file_err(line_no, format!("unknown key `{other}`"))),
        }
        if key != "row" && line.split_whitespace().count() != 2 {
            return Err(file_err(line_no, "trailing tokens"));
        }
    }
    let f = field.ok_or_else(|| file_err(0, "missing `q` line"))?;
    let d = dim.ok_or_else(|| file_err(0, "missing `d` line"))?;
    if rows.len() != d {
        return Err(file_err(0, format!("expected {d} rows, found {}", rows.len())));
    }
    LatticeBasis::new(RatMatrix::from_rows(f, rows)?)
}

pub fn format_lattice_file(lattice: &LatticeBasis) -> String {
    let m = lattice.basis();
    let mut out = format!("q {}\nd {}\n", lattice.field().p(), lattice.dim());
    for i in 0..m.rows() {
        out.push_str("row");
        for e in m.row(i) {
            out.push(' ');
            out.push_str(&e.to_string());
        }
        out.push('\n');
    }
    out
}
