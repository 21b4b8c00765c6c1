//! Property-table CSV reader and writer.
//!
//! ```text
//! #R=518.3
//! p[Pa],T[K],rho[kg/m3],h[J/kg],mu[Pa.s],k[W/m.K],cp[J/kg.K]
//! 4000000,90,...
//! ```
//!
//! Rows are ordered p-major, then T, and the grid must be complete.

use std::fmt::Write as _;
use std::path::Path;

use super::PropertyTable;
use crate::error::{Error, Result};
use crate::io_util::{atomic_write, fmt_f64};

pub const TABLE_HEADER: [&str; 7] = [
    "p[Pa]",
    "T[K]",
    "rho[kg/m3]",
    "h[J/kg]",
    "mu[Pa.s]",
    "k[W/m.K]",
    "cp[J/kg.K]",
];

/// Loads a table, taking the specific gas constant from the `#R=` sidecar line.
pub fn load_table(path: &Path) -> Result<PropertyTable> {
    load_table_with_gas_constant(path, None)
}

/// Loads a table. `gas_constant` overrides (or supplies) the `#R=` value.
pub fn load_table_with_gas_constant(path: &Path, gas_constant: Option<f64>) -> Result<PropertyTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_table(&text, gas_constant)
}

pub(crate) fn parse_table(text: &str, gas_constant: Option<f64>) -> Result<PropertyTable> {
    let mut sidecar_r = None;
    for (n, line) in text.lines().enumerate() {
        if let Some(v) = line.trim().strip_prefix("#R=") {
            let r: f64 = v.trim().parse().map_err(|_| Error::Parse {
                line: n + 1,
                message: format!("bad gas constant `{v}`"),
            })?;
            sidecar_r = Some(r);
        }
    }
    let r = gas_constant.or(sidecar_r).ok_or_else(|| {
        Error::Validation("specific gas constant missing: add a `#R=` line or pass it explicitly".into())
    })?;

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::Parse { line: 1, message: e.to_string() })?
        .clone();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(Error::Parse { line: 1, message: "empty file".into() });
    }
    if header.iter().ne(TABLE_HEADER.iter().copied()) {
        return Err(Error::Parse {
            line: header.position().map_or(1, |p| p.line() as usize),
            message: format!("expected header `{}`", TABLE_HEADER.join(",")),
        });
    }

    let mut rows: Vec<[f64; 7]> = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let mut row = [0.0; 7];
        for (slot, field) in row.iter_mut().zip(rec.iter()) {
            *slot = field.parse().map_err(|_| Error::Parse {
                line,
                message: format!("not a number: `{field}`"),
            })?;
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse { line: 2, message: "no data rows".into() });
    }

    let p0 = rows[0][0];
    let nt = rows.iter().take_while(|r| r[0] == p0).count();
    if !rows.len().is_multiple_of(nt) {
        return Err(Error::Validation(format!(
            "incomplete grid: {} rows is not a multiple of {nt} temperatures",
            rows.len()
        )));
    }
    let np = rows.len() / nt;
    let temperatures: Vec<f64> = rows[..nt].iter().map(|r| r[1]).collect();
    let mut pressures = Vec::with_capacity(np);
    for i in 0..np {
        let block = &rows[i * nt..(i + 1) * nt];
        let p = block[0][0];
        for (j, row) in block.iter().enumerate() {
            if row[0] != p || row[1] != temperatures[j] {
                return Err(Error::Validation(format!(
                    "row {} breaks the p-major grid layout",
                    i * nt + j + 1
                )));
            }
        }
        pressures.push(p);
    }
    let column = |c: usize| rows.iter().map(|r| r[c]).collect::<Vec<f64>>();
    PropertyTable::new(
        pressures,
        temperatures,
        column(2),
        column(3),
        column(4),
        column(5),
        column(6),
        r,
    )
}

pub(crate) fn format_table(table: &PropertyTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "#R={}", fmt_f64(table.gas_constant_specific()));
    out.push_str(&TABLE_HEADER.join(","));
    out.push('\n');
    for i in 0..table.pressures().len() {
        for j in 0..table.temperatures().len() {
            let n = table.node(i, j);
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                fmt_f64(n.p),
                fmt_f64(n.t),
                fmt_f64(n.rho),
                fmt_f64(n.h),
                fmt_f64(n.mu),
                fmt_f64(n.k),
                fmt_f64(n.cp)
            );
        }
    }
    out
}

/// Writes a table in the CSV layout accepted by [`load_table`].
pub fn write_table(table: &PropertyTable, path: &Path) -> Result<()> {
    atomic_write(path, format_table(table).as_bytes())
}
