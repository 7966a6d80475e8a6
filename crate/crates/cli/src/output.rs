//! Field output in CSV or JSON and the run manifest.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use dfp_lattice::io::{field_rows, momentum_rows, write_rows, Row};
use dfp_lattice::solver::ModelParams;
use dfp_lattice::{Field, GridSpec, MomentumField};
use serde::Serialize;
use serde_json::Value;

use crate::config::{Format, Sinks};
use crate::error::CliResult;

/// Record of one run: inputs, tolerances and achieved errors. Holds no
/// timestamps or host details, so identical runs give identical bytes.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: &'static str,
    pub version: &'static str,
    pub grid: GridSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<ModelParams>,
    pub options: BTreeMap<&'static str, Value>,
    pub tolerances: BTreeMap<&'static str, f64>,
    pub achieved: BTreeMap<&'static str, f64>,
}

impl Manifest {
    pub fn new(command: &'static str, grid: GridSpec, params: Option<ModelParams>) -> Self {
        Manifest {
            command,
            version: env!("CARGO_PKG_VERSION"),
            grid,
            params,
            options: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            achieved: BTreeMap::new(),
        }
    }

    pub fn option(&mut self, key: &'static str, value: impl Into<Value>) -> &mut Self {
        self.options.insert(key, value.into());
        self
    }

    pub fn check(&mut self, key: &'static str, achieved: f64, tolerance: Option<f64>) -> &mut Self {
        self.achieved.insert(key, achieved);
        if let Some(tol) = tolerance {
            self.tolerances.insert(key, tol);
        }
        self
    }
}

#[derive(Serialize)]
struct JsonField<'a> {
    grid: &'a GridSpec,
    space: &'static str,
    rows: &'a [Row],
}

pub fn open(path: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(sinks: &Sinks, grid: &GridSpec, space: &'static str, rows: &[Row]) -> CliResult<()> {
    let mut out = open(&sinks.output)?;
    match sinks.format {
        Format::Csv => write_rows(&mut out, grid, rows)?,
        Format::Json => {
            let doc = JsonField { grid, space, rows };
            serde_json::to_writer_pretty(&mut out, &doc).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn emit_field(sinks: &Sinks, field: &Field) -> CliResult<()> {
    emit(sinks, field.spec(), "lattice", &field_rows(field))
}

pub fn emit_momentum(sinks: &Sinks, field: &MomentumField) -> CliResult<()> {
    emit(sinks, field.spec(), "momentum", &momentum_rows(field))
}

/// Writes the manifest to `--manifest`, else next to `--output` as
/// `OUTPUT.json`, else to standard error.
pub fn emit_manifest(sinks: &Sinks, manifest: &Manifest) -> CliResult<()> {
    let text = serde_json::to_string_pretty(manifest).map_err(io::Error::from)?;
    let target = sinks.manifest.clone().or_else(|| {
        sinks.output.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".json");
            PathBuf::from(s)
        })
    });
    match target {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => eprintln!("{text}"),
    }
    Ok(())
}
