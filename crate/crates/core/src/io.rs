//! CSV serialization of lattice and momentum fields.
//!
//! The first line is `# ` followed by the grid as JSON, the second the
//! header `k1,…,kn,mask,re,im`; each further row holds one blade coefficient
//! at one site (site indices `0…N−1`) or node (momentum indices
//! `−N/2+1…N/2`). Every site or node gets a row for each blade in the
//! field's support, so zero coefficients may appear. Floats are written in
//! shortest round-trip form.

use std::io::{BufRead, Write};

use num_complex::Complex64;
use serde::Serialize;

use crate::clifford::{BladeIndex, Multivector};
use crate::error::{Error, Result};
use crate::lattice::{Field, GridSpec};
use crate::spectral::MomentumField;

fn support(values: &[Multivector]) -> Vec<BladeIndex> {
    let mut blades: Vec<BladeIndex> = values
        .iter()
        .flat_map(|v| v.terms().map(|(b, _)| b))
        .collect();
    blades.sort();
    blades.dedup();
    if blades.is_empty() {
        blades.push(BladeIndex::SCALAR);
    }
    blades
}

/// One blade coefficient at one site or momentum node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub k: Vec<i64>,
    pub mask: u32,
    pub re: f64,
    pub im: f64,
}

fn rows(values: &[Multivector], label: impl Fn(usize) -> Vec<i64>) -> Vec<Row> {
    let blades = support(values);
    values
        .iter()
        .enumerate()
        .flat_map(|(lin, v)| {
            let k = label(lin);
            blades.iter().map(move |&b| {
                let c = v.get(b);
                Row {
                    k: k.clone(),
                    mask: b.0,
                    re: c.re,
                    im: c.im,
                }
            })
        })
        .collect()
}

/// Rows of a lattice field, sites labelled `0…N−1` per axis.
pub fn field_rows(field: &Field) -> Vec<Row> {
    let spec = *field.spec();
    rows(field.values(), |lin| {
        spec.multi_index(lin)
            .into_iter()
            .map(|k| k as i64)
            .collect()
    })
}

/// Rows of a momentum field, nodes labelled `−N/2+1…N/2` per axis.
pub fn momentum_rows(field: &MomentumField) -> Vec<Row> {
    let spec = *field.spec();
    rows(field.values(), |lin| spec.momentum_ks(lin))
}

/// Writes the grid comment, the header and the given rows.
pub fn write_rows<W: Write>(mut out: W, spec: &GridSpec, rows: &[Row]) -> Result<()> {
    let header = serde_json::to_string(spec).map_err(|e| Error::Parse(e.to_string()))?;
    writeln!(out, "# {header}")?;
    let cols: Vec<String> = (1..=spec.n()).map(|j| format!("k{j}")).collect();
    writeln!(out, "{},mask,re,im", cols.join(","))?;
    for row in rows {
        let ks: Vec<String> = row.k.iter().map(i64::to_string).collect();
        writeln!(out, "{},{},{},{}", ks.join(","), row.mask, row.re, row.im)?;
    }
    out.flush()?;
    Ok(())
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

fn read_rows<R: BufRead>(
    input: R,
    locate: impl Fn(&GridSpec, &[i64]) -> Option<usize>,
) -> Result<(GridSpec, Vec<Multivector>)> {
    let mut lines = input.lines();
    let first = lines.next().ok_or_else(|| parse_err(1, "empty input"))??;
    let json = first
        .strip_prefix("# ")
        .ok_or_else(|| parse_err(1, "expected '# {grid json}'"))?;
    let spec: GridSpec = serde_json::from_str(json).map_err(|e| parse_err(1, e))?;
    let n = spec.n();
    let header = lines
        .next()
        .ok_or_else(|| parse_err(2, "missing header"))??;
    let cols: Vec<String> = (1..=n).map(|j| format!("k{j}")).collect();
    let expected = format!("{},mask,re,im", cols.join(","));
    if header.trim() != expected {
        return Err(parse_err(2, format!("expected header '{expected}'")));
    }
    let mut values = vec![Multivector::zero(n); spec.len()];
    for (i, line) in lines.enumerate() {
        let lineno = i + 3;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != n + 3 {
            return Err(parse_err(lineno, format!("expected {} columns", n + 3)));
        }
        let ks = fields[..n]
            .iter()
            .map(|s| s.trim().parse::<i64>().map_err(|e| parse_err(lineno, e)))
            .collect::<Result<Vec<_>>>()?;
        let lin = locate(&spec, &ks).ok_or_else(|| parse_err(lineno, "index outside the grid"))?;
        let mask: u32 = fields[n].trim().parse().map_err(|e| parse_err(lineno, e))?;
        let blade = BladeIndex(mask);
        if !blade.is_valid(n) {
            return Err(parse_err(
                lineno,
                format!("mask {mask} invalid for n = {n}"),
            ));
        }
        let re: f64 = fields[n + 1]
            .trim()
            .parse()
            .map_err(|e| parse_err(lineno, e))?;
        let im: f64 = fields[n + 2]
            .trim()
            .parse()
            .map_err(|e| parse_err(lineno, e))?;
        values[lin].set(blade, Complex64::new(re, im));
    }
    Ok((spec, values))
}

pub fn write_field_csv<W: Write>(field: &Field, out: W) -> Result<()> {
    write_rows(out, field.spec(), &field_rows(field))
}

pub fn read_field_csv<R: BufRead>(input: R) -> Result<Field> {
    let (spec, values) = read_rows(input, |spec, ks| {
        let n = spec.points() as i64;
        if ks.iter().all(|&k| (0..n).contains(&k)) {
            let idx: Vec<usize> = ks.iter().map(|&k| k as usize).collect();
            Some(spec.linear_index(&idx))
        } else {
            None
        }
    })?;
    Field::from_values(spec, values)
}

pub fn write_momentum_csv<W: Write>(field: &MomentumField, out: W) -> Result<()> {
    write_rows(out, field.spec(), &momentum_rows(field))
}

pub fn read_momentum_csv<R: BufRead>(input: R) -> Result<MomentumField> {
    let (spec, values) = read_rows(input, |spec, ks| {
        let half = spec.points() as i64 / 2;
        if ks.iter().all(|&k| k > -half && k <= half) {
            let idx: Vec<usize> = ks.iter().map(|&k| spec.momentum_position(k)).collect();
            Some(spec.linear_index(&idx))
        } else {
            None
        }
    })?;
    MomentumField::from_values(spec, values)
}
