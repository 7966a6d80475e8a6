//! One function per subcommand except `verify`.

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;

use clap::ValueEnum;
use dfp_lattice::io::read_field_csv;
use dfp_lattice::operators::Multipliers;
use dfp_lattice::solver::*;
use dfp_lattice::specfun::{
    bessel_i_scaled, gamma, hartman_watson_theta, levy_pdf, mittag_leffler, wright_psi,
    SeriesValue, WrightParam, WrightSpec,
};
use dfp_lattice::{delta_h, normalization_check, Error, Field, GridSpec};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Format, GridArgs, Resolver, Sinks};
use crate::error::{CliError, CliResult};
use crate::output::{emit_field, emit_manifest, emit_momentum, open, Manifest};
use crate::{
    DumpArgs, EvolveArgs, Function, KernelArgs, KernelKind, KgArgs, MellinBarnesArgs, Method,
    SpecfunArgs, SubordinateArgs,
};

const NORMALIZATION_TOL: f64 = 1e-10;
const ORACLE_TOL: f64 = 1e-6;
const ROUTE_TOL: f64 = 1e-10;
const KG_RESIDUAL_TOL: f64 = 1e-5;
const SUBORDINATION_TOL: f64 = 1e-5;
const MELLIN_BARNES_TOL: f64 = 1e-3;
const SQUARE_TOL: f64 = 1e-12;

fn non_negative(name: &str, value: f64) -> CliResult<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::Usage(format!(
            "--{name} must be >= 0, got {value}"
        )))
    }
}

fn required<T>(name: &str, value: Option<T>) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("--{name} is required")))
}

fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_owned())
        .unwrap_or_default()
}

/// The `--input` field, or the normalized delta on the flag grid.
fn initial_field(
    r: &Resolver,
    grid: &GridArgs,
    input: &Option<PathBuf>,
) -> CliResult<(Field, String)> {
    match r.input(input) {
        Some(path) => {
            let file = File::open(&path)?;
            let field = read_field_csv(BufReader::new(file))?;
            if r.grid_given(grid) && r.grid(grid)? != *field.spec() {
                return Err(CliError::Usage(format!(
                    "grid flags disagree with the grid of {}",
                    path.display()
                )));
            }
            Ok((field, path.display().to_string()))
        }
        None => Ok((delta_h(r.grid(grid)?), "delta".into())),
    }
}

fn relative(diff: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

pub fn evolve(a: &EvolveArgs) -> CliResult<()> {
    let r = Resolver::new(&a.io)?;
    let (phi0, source) = initial_field(&r, &a.grid, &a.input)?;
    let params = r.params(&a.model, None)?;
    let t = non_negative("t", a.t.or(r.file.t).unwrap_or(1.0))?;
    let mut m = Manifest::new("evolve", *phi0.spec(), Some(params));
    m.option("t", t)
        .option("input", source)
        .option("method", value_name(&a.method));
    let out = match a.method {
        Method::Spectral => dfp_evolve(&phi0, t, &params)?,
        Method::Oracle => {
            let steps = a.steps.or(r.file.steps).unwrap_or(1000);
            let run = dfp_timestep_oracle(&phi0, t, &params, steps)?;
            let exact = dfp_evolve(&phi0, t, &params)?;
            let err = relative(run.field.max_abs_diff(&exact)?, exact.sup_norm());
            m.option("steps", steps).option("t0", run.t0);
            m.check("oracle_vs_spectral", err, Some(ORACLE_TOL));
            run.field
        }
    };
    let drift = (normalization_check(&out) - normalization_check(&phi0)).abs();
    m.check("normalization_drift", drift, Some(NORMALIZATION_TOL));
    let sinks = r.sinks(&a.io);
    emit_field(&sinks, &out)?;
    emit_manifest(&sinks, &m)
}

pub fn kernel(a: &KernelArgs) -> CliResult<()> {
    let r = Resolver::new(&a.io)?;
    let spec = r.grid(&a.grid)?;
    let params = r.params(&a.model, None)?;
    let t = non_negative("t", a.t.or(r.file.t).unwrap_or(1.0))?;
    let mut m = Manifest::new("kernel", spec, Some(params));
    m.option("kind", value_name(&a.kind)).option("t", t);
    let field = match a.kind {
        KernelKind::Dfp => dfp_kernel(spec, t, &params)?,
        KernelKind::N => n_kernel(spec, t, &params)?,
        KernelKind::Heat | KernelKind::HeatBessel => {
            let tau = a.tau.or(r.file.tau).unwrap_or(params.variance(t) / 2.0);
            let tau = non_negative("tau", tau)?;
            let spectral = heat_kernel(spec, tau)?;
            let bessel = heat_kernel_bessel(spec, tau)?;
            m.option("tau", tau);
            m.check(
                "route_difference",
                spectral.max_abs_diff(&bessel)?,
                Some(ROUTE_TOL),
            );
            if a.kind == KernelKind::Heat {
                spectral
            } else {
                bessel
            }
        }
        KernelKind::K | KernelKind::KWright => {
            let beta = a.beta.or(r.file.beta).unwrap_or(0);
            let tag = KernelTag::from_beta(beta).map_err(|e| CliError::Usage(e.to_string()))?;
            let trig = kernel_k_beta(spec, t, &params, tag)?;
            let wright = kernel_k_beta_wright(spec, t, &params, tag)?;
            m.option("beta", beta);
            m.check(
                "route_difference",
                trig.max_abs_diff(&wright)?,
                Some(ROUTE_TOL),
            );
            if a.kind == KernelKind::K {
                trig
            } else {
                wright
            }
        }
    };
    m.check("mass", normalization_check(&field), None);
    let sinks = r.sinks(&a.io);
    emit_field(&sinks, &field)?;
    emit_manifest(&sinks, &m)
}

pub fn kg(a: &KgArgs) -> CliResult<()> {
    let r = Resolver::new(&a.io)?;
    let (phi0, source) = initial_field(&r, &a.grid, &a.input)?;
    let p = non_negative("p", a.p.or(r.file.p).unwrap_or(0.0))?;
    let params = r.params(&a.model, Some(p))?;
    let t = non_negative("t", a.t.or(r.file.t).unwrap_or(1.0))?;
    let dt = a.dt.or(r.file.dt).unwrap_or(1e-3);
    if dt.is_nan() || dt <= 0.0 {
        return Err(CliError::Usage(format!("--dt must be > 0, got {dt}")));
    }
    let mut m = Manifest::new("kg", *phi0.spec(), Some(params));
    m.option("t", t)
        .option("p", p)
        .option("dt", dt)
        .option("input", source);
    let psi = klein_gordon_ansatz(&phi0, t, p, &params)?;
    if t >= dt {
        let residual = kg_residual(&phi0, t, p, &params, dt)?;
        m.check("residual", residual, Some(KG_RESIDUAL_TOL));
    }
    let sinks = r.sinks(&a.io);
    emit_field(&sinks, &psi)?;
    emit_manifest(&sinks, &m)
}

pub fn subordinate(a: &SubordinateArgs) -> CliResult<()> {
    let r = Resolver::new(&a.io)?;
    let (phi0, source) = initial_field(&r, &a.grid, &a.input)?;
    let params = r.params(&a.model, None)?;
    let t = non_negative("t", a.t.or(r.file.t).unwrap_or(0.8))?;
    let mut m = Manifest::new("subordinate", *phi0.spec(), Some(params));
    m.option("t", t)
        .option("input", source)
        .option("modewise", a.modewise);
    let sinks = r.sinks(&a.io);
    if a.modewise {
        let out = levy_subordination_modewise(&phi0, t, &params)?;
        m.check("relative_error", out.rel_error, Some(SUBORDINATION_TOL));
        emit_momentum(&sinks, &out.rhs)?;
    } else {
        let out = levy_subordination_check(&phi0, t, &params)?;
        m.check("relative_error", out.rel_error, Some(SUBORDINATION_TOL));
        emit_field(&sinks, &out.rhs)?;
    }
    emit_manifest(&sinks, &m)
}

pub fn mellin_barnes(a: &MellinBarnesArgs) -> CliResult<()> {
    let r = Resolver::new(&a.io)?;
    let spec = r.grid(&a.grid)?;
    let params = r.params(&a.model, None)?;
    let t = non_negative("t", a.t.or(r.file.t).unwrap_or(0.5))?;
    let beta = a.beta.or(r.file.beta).unwrap_or(0);
    let tag = KernelTag::from_beta(beta).map_err(|e| CliError::Usage(e.to_string()))?;
    let default = Contour::default_for(params.hurst, tag);
    let contour = Contour {
        c: a.c.or(r.file.c).unwrap_or(default.c),
        truncation: a
            .truncation
            .or(r.file.truncation)
            .unwrap_or(default.truncation),
    };
    let values: Vec<MellinBarnesValue> = (0..spec.len())
        .into_par_iter()
        .map(|y| mellin_barnes_kernel(spec, y, t, &params, tag, contour))
        .collect::<Result<_, Error>>()?;
    let direct = kernel_k_beta(spec, t, &params, tag)?;
    let scalars: Vec<Complex64> = values.iter().map(|v| v.value).collect();
    let field = Field::from_scalars(spec, &scalars)?;
    let warnings = values
        .iter()
        .filter(|v| v.status == ContourStatus::TruncationWarning)
        .count();
    let tail = values.iter().map(|v| v.tail_estimate).fold(0.0, f64::max);
    let mut m = Manifest::new("mellin-barnes", spec, Some(params));
    m.option("t", t)
        .option("beta", beta)
        .option("c", contour.c)
        .option("truncation", contour.truncation);
    m.check(
        "difference_from_kernel",
        field.max_abs_diff(&direct)?,
        Some(MELLIN_BARNES_TOL),
    )
    .check("tail_estimate", tail, None)
    .check("truncation_warnings", warnings as f64, None);
    let sinks = r.sinks(&a.io);
    emit_field(&sinks, &field)?;
    emit_manifest(&sinks, &m)
}

fn write_multipliers(sinks: &Sinks, spec: &GridSpec, m: &Multipliers) -> CliResult<()> {
    let n = spec.n();
    let mut out = open(&sinks.output)?;
    let node = |i: usize| -> (Vec<i64>, f64, Vec<Complex64>) {
        let z = &m.z()[i];
        let comps = (1..=2 * n)
            .map(|j| z.get(dfp_lattice::BladeIndex::generator(j)))
            .collect();
        (spec.momentum_ks(i), m.d2()[i], comps)
    };
    match sinks.format {
        Format::Csv => {
            let grid = serde_json::to_string(spec).map_err(io::Error::from)?;
            writeln!(out, "# {grid}")?;
            let mut header: Vec<String> = (1..=n).map(|j| format!("k{j}")).collect();
            header.push("d2".into());
            for j in 1..=2 * n {
                header.push(format!("z{j}_re"));
                header.push(format!("z{j}_im"));
            }
            writeln!(out, "{}", header.join(","))?;
            for i in 0..spec.len() {
                let (ks, d2, comps) = node(i);
                let mut cols: Vec<String> = ks.iter().map(i64::to_string).collect();
                cols.push(d2.to_string());
                for c in comps {
                    cols.push(c.re.to_string());
                    cols.push(c.im.to_string());
                }
                writeln!(out, "{}", cols.join(","))?;
            }
        }
        Format::Json => {
            let nodes: Vec<Value> = (0..spec.len())
                .map(|i| {
                    let (ks, d2, comps) = node(i);
                    let z: Vec<[f64; 2]> = comps.iter().map(|c| [c.re, c.im]).collect();
                    json!({ "k": ks, "d2": d2, "z": z })
                })
                .collect();
            let doc = json!({ "grid": spec, "nodes": nodes });
            serde_json::to_writer_pretty(&mut out, &doc).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn dump_multiplier(a: &DumpArgs) -> CliResult<()> {
    let r = Resolver::new(&a.io)?;
    let spec = r.grid(&a.grid)?;
    let table = Multipliers::new(spec);
    let sinks = r.sinks(&a.io);
    write_multipliers(&sinks, &spec, &table)?;
    let mut m = Manifest::new("dump-multiplier", spec, None);
    m.check(
        "square_condition",
        table.square_condition_deviation(),
        Some(SQUARE_TOL),
    );
    emit_manifest(&sinks, &m)
}

fn series_json(function: &str, v: &SeriesValue) -> Value {
    json!({
        "function": function,
        "value": v.value.re,
        "imag": v.value.im,
        "status": v.status,
        "terms_used": v.terms_used,
    })
}

fn trig_wright(lower: f64, lambda: f64) -> CliResult<SeriesValue> {
    let spec = WrightSpec::new(vec![], vec![WrightParam::real(lower, 1.0)]);
    Ok(wright_psi(
        &spec,
        Complex64::new(-lambda * lambda / 4.0, 0.0),
    )?)
}

pub fn specfun(a: &SpecfunArgs) -> CliResult<()> {
    let name = value_name(&a.function);
    let doc = match a.function {
        Function::Gamma => {
            let g = gamma(Complex64::new(required("x", a.x)?, a.x_im))?;
            json!({ "function": name, "value": g.re, "imag": g.im, "status": "ok", "terms_used": null })
        }
        Function::BesselI => {
            let k = required("k", a.k)?;
            let x = non_negative("x", required("x", a.x)?)?;
            let v = bessel_i_scaled(k, x) * x.exp();
            json!({ "function": name, "value": v, "imag": 0.0, "status": "ok", "terms_used": null })
        }
        Function::MittagLeffler => {
            let lambda = Complex64::new(required("lambda", a.lambda)?, a.lambda_im);
            let v = mittag_leffler(required("rho", a.rho)?, required("beta", a.beta)?, lambda)?;
            series_json(&name, &v)
        }
        Function::WrightCos => {
            let mut v = trig_wright(0.5, required("lambda", a.lambda)?)?;
            v.value *= std::f64::consts::PI.sqrt();
            series_json(&name, &v)
        }
        Function::WrightSinc => {
            let mut v = trig_wright(1.5, required("lambda", a.lambda)?)?;
            v.value *= std::f64::consts::PI.sqrt() / 2.0;
            series_json(&name, &v)
        }
        Function::Levy => {
            let v = levy_pdf(required("hurst", a.hurst)?, required("u", a.u)?)?;
            json!({ "function": name, "value": v.value, "imag": 0.0, "status": v.method, "terms_used": v.terms_used })
        }
        Function::HartmanWatson => {
            let v = hartman_watson_theta(required("r", a.r)?, required("p", a.p)?)?;
            json!({ "function": name, "value": v.value, "imag": 0.0, "status": v.status, "terms_used": null, "noise": v.noise })
        }
        Function::WilsonSigma => match wilson_sigma(required("hurst", a.hurst)?) {
            Ok(v) => {
                json!({ "function": name, "value": v, "imag": 0.0, "status": "ok", "terms_used": null })
            }
            Err(Error::RemovableSingularity { limit }) => {
                json!({ "function": name, "value": limit, "imag": 0.0, "status": "removable-singularity-limit", "terms_used": null })
            }
            Err(e) => return Err(e.into()),
        },
    };
    let text = serde_json::to_string_pretty(&doc).map_err(io::Error::from)?;
    let mut out = io::stdout().lock();
    writeln!(out, "{text}")?;
    Ok(())
}
