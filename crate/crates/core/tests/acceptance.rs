//! Acceptance suite: one PASS/FAIL line per criterion. Run with
//! `cargo test -p dfp-lattice --test acceptance -- --nocapture` to see the
//! table.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::*;
use dfp_lattice::operators::{d_squared, dirac_apply, laplacian_apply, z_multiplier_alpha};
use dfp_lattice::solver::*;
use dfp_lattice::specfun::mellin::log_line_integral;
use dfp_lattice::specfun::*;
use dfp_lattice::spectral::{convolve_direct, momentum_sesquilinear};
use dfp_lattice::{
    delta_h, dft_forward, dft_inverse, normalization_check, sesquilinear, Multivector,
};

/// One measured quantity against its bound.
struct Check {
    name: String,
    achieved: f64,
    bound: f64,
    /// `true` when the requirement is `achieved ≥ bound`.
    at_least: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, achieved: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            achieved,
            bound,
            at_least: false,
        }
    }

    fn at_least(name: impl Into<String>, achieved: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            achieved,
            bound,
            at_least: true,
        }
    }

    fn ok(&self) -> bool {
        if self.at_least {
            self.achieved >= self.bound
        } else {
            self.achieved <= self.bound
        }
    }
}

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    run: fn() -> Vec<Check>,
}

fn report(c: &Criterion) -> bool {
    let start = Instant::now();
    let checks = (c.run)();
    let elapsed = start.elapsed();
    let mut pass = elapsed <= c.limit;
    for check in &checks {
        let rel = if check.at_least { ">=" } else { "<=" };
        let mark = if check.ok() { "ok  " } else { "FAIL" };
        println!(
            "    {mark} {:<44} {:>11.3e} {rel} {:.1e}",
            check.name, check.achieved, check.bound
        );
        pass &= check.ok();
    }
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!(
        "criterion {:>2} {verdict}  {:<40} {:>7.2} s (limit {} s)",
        c.id,
        c.title,
        elapsed.as_secs_f64(),
        c.limit.as_secs()
    );
    pass
}

fn params(mu: f64, sigma2: f64, hurst: f64) -> ModelParams {
    ModelParams::new(mu, sigma2, hurst, 0.0).unwrap()
}

fn square_condition() -> Vec<Check> {
    let mut out = Vec::new();
    for (n, points, h) in [(1, 64, 1.0), (2, 32, 0.5), (3, 16, 1.0)] {
        for alpha in [1e-8, 0.25, 0.5] {
            let spec = grid(n, h, "0/1", points);
            let worst = (0..spec.len())
                .map(|i| {
                    let xi = spec.momentum_point(i);
                    let z = z_multiplier_alpha(&xi, n, h, alpha);
                    let d2 = d_squared(&xi, &spec);
                    (&z * &z).max_abs_diff(&Multivector::real(n, d2))
                })
                .fold(0.0, f64::max);
            out.push(Check::at_most(
                format!("z^2 - d^2 (n={n}, N={points}, alpha={alpha})"),
                worst,
                1e-12,
            ));
        }
    }
    out
}

fn parseval_and_convolution() -> Vec<Check> {
    let mut parseval = 0.0f64;
    let mut conv = 0.0f64;
    for trial in 0..20u64 {
        let n = 1 + (trial % 2) as usize;
        let spec = grid(n, 0.7, "1/4", 8);
        let mut r = rng(1000 + trial);
        let f = random_field(&mut r, spec);
        let g = random_momentum_field(&mut r, spec);
        let lhs = momentum_sesquilinear(&dft_forward(&f), &g).unwrap();
        let rhs = sesquilinear(&f, &dft_inverse(&g)).unwrap();
        parseval = parseval.max(lhs.max_abs_diff(&rhs) / lhs.max_abs().max(1.0));

        let k = random_field(&mut r, spec);
        let lhs = dft_forward(&convolve_direct(&k, &f).unwrap());
        let fk = dft_forward(&k);
        let c0 = (2.0 * PI).powf(n as f64 / 2.0);
        let rhs = dft_forward(&f).map_nodes(|i, v| (fk.get(i) * v).scale_real(c0));
        conv = conv.max(lhs.max_abs_diff(&rhs).unwrap() / lhs.sup_norm().max(1.0));
    }
    vec![
        Check::at_most("Parseval, 20 random trials", parseval, 1e-12),
        Check::at_most("convolution theorem, 20 random trials", conv, 1e-12),
    ]
}

fn heat_kernel_dual_route() -> Vec<Check> {
    let spec = grid(1, 1.0, "0/1", 64);
    let mut out = Vec::new();
    for tau in [0.1, 1.0] {
        let a = heat_kernel(spec, tau).unwrap();
        let b = heat_kernel_bessel(spec, tau).unwrap();
        out.push(Check::at_most(
            format!("Bessel vs multiplier (tau={tau})"),
            a.max_abs_diff(&b).unwrap(),
            1e-10,
        ));
        out.push(Check::at_most(
            format!("|sum h^n K - 1| (tau={tau})"),
            (normalization_check(&b) - 1.0).abs(),
            1e-10,
        ));
    }
    out
}

fn dfp_vs_oracle() -> Vec<Check> {
    let spec = grid(1, 1.0, "1/4", 32);
    let phi0 = delta_h(spec);
    let mut out = Vec::new();
    for hurst in [0.3, 0.5, 0.75] {
        let p = params(1.0, 1.0, hurst);
        let exact = dfp_evolve(&phi0, 1.0, &p).unwrap();
        let err = |steps| {
            let run = dfp_timestep_oracle(&phi0, 1.0, &p, steps).unwrap();
            run.field.max_abs_diff(&exact).unwrap() / exact.sup_norm()
        };
        out.push(Check::at_most(
            format!("relative error, 1e4 steps (H={hurst})"),
            err(10_000),
            1e-6,
        ));
        let order = (err(320) / err(640)).log2();
        out.push(Check::at_least(
            format!("RK4 order, 320 vs 640 steps (H={hurst})"),
            order,
            3.7,
        ));
    }
    out
}

fn klein_gordon_residual() -> Vec<Check> {
    let spec = grid(1, 1.0, "1/4", 32);
    let phi0 = delta_h(spec);
    let p = params(1.0, 1.0, 0.5);
    let mut out = Vec::new();
    for pp in [0.0, 0.5] {
        let fine = kg_residual(&phi0, 0.7, pp, &p, 1e-3).unwrap();
        let coarse = kg_residual(&phi0, 0.7, pp, &p, 2e-3).unwrap();
        out.push(Check::at_most(
            format!("residual at dt=1e-3 (p={pp})"),
            fine,
            1e-5,
        ));
        out.push(Check::at_least(
            format!("observed order (p={pp})"),
            (coarse / fine).log2(),
            1.9,
        ));
    }
    out
}

fn levy_laplace(nu: f64, s: f64) -> f64 {
    log_line_integral(
        |x: f64| {
            let u = x.exp();
            let w = (-s * u).exp();
            if w == 0.0 {
                0.0
            } else {
                w * levy_pdf(nu, u).unwrap().value * u
            }
        },
        1e-10,
    )
    .unwrap()
    .0
}

fn levy_subordination() -> Vec<Check> {
    let spec = grid(1, 1.0, "1/4", 32);
    let phi0 = delta_h(spec);
    let mut out = Vec::new();
    for hurst in [0.5, 0.7] {
        let p = params(1.0, 1.0, hurst);
        let site = levy_subordination_check(&phi0, 0.8, &p).unwrap();
        out.push(Check::at_most(
            format!("sitewise (H={hurst})"),
            site.rel_error,
            1e-5,
        ));
        let modes = levy_subordination_modewise(&phi0, 0.8, &p).unwrap();
        out.push(Check::at_most(
            format!("modewise (H={hurst})"),
            modes.rel_error,
            1e-5,
        ));
    }
    let mut worst = 0.0f64;
    for nu in [0.3, 0.5, 0.7] {
        for s in [0.1, 1.0, 5.0] {
            worst = worst.max((levy_laplace(nu, s) - (-s.powf(nu)).exp()).abs());
        }
    }
    out.push(Check::at_most("Laplace identity of L_H", worst, 1e-6));
    out
}

fn wright_machinery() -> Vec<Check> {
    let cos_spec = WrightSpec::new(vec![], vec![WrightParam::real(0.5, 1.0)]);
    let sinc_spec = WrightSpec::new(vec![], vec![WrightParam::real(1.5, 1.0)]);
    let (mut cos_err, mut sinc_err) = (0.0f64, 0.0f64);
    for i in -200..=200 {
        let l = i as f64 * 0.05;
        let arg = c(-l * l / 4.0, 0.0);
        let cv = PI.sqrt() * wright_psi(&cos_spec, arg).unwrap().value.re;
        let sv = PI.sqrt() / 2.0 * wright_psi(&sinc_spec, arg).unwrap().value.re;
        let sinc = if l == 0.0 { 1.0 } else { l.sin() / l };
        cos_err = cos_err.max((cv - l.cos()).abs());
        sinc_err = sinc_err.max((sv - sinc).abs());
    }
    let mut ml = 0.0f64;
    for i in -40..=40 {
        let l = i as f64 * 0.25;
        ml = ml.max(
            (mittag_leffler(1.0, 1.0, c(l, 0.0)).unwrap().value - l.exp()).norm()
                / l.exp().max(1.0),
        );
        ml = ml.max((mittag_leffler(2.0, 1.0, c(-l * l, 0.0)).unwrap().value - l.cos()).norm());
    }
    let mut dup = 0.0f64;
    for i in 1..=50 {
        for im in [0.0, 0.5, -2.0] {
            let s = c(0.1 * i as f64, im);
            let lhs = gamma(2.0 * s).unwrap();
            let rhs = ((2.0 * s - 1.0) * 2f64.ln()).exp() / PI.sqrt()
                * gamma(s).unwrap()
                * gamma(s + 0.5).unwrap();
            dup = dup.max((lhs - rhs).norm() / rhs.norm());
        }
    }
    let p = WrightParam::real;
    let table = [
        (
            WrightSpec::new(vec![p(1.0, 1.0)], vec![p(1.0, 1.0)]),
            ConvergenceClass::Entire,
        ),
        (
            WrightSpec::new(vec![], vec![p(0.5, 1.0)]),
            ConvergenceClass::Entire,
        ),
        (
            WrightSpec::new(vec![p(0.9, 1.25)], vec![p(0.5, 1.0)]),
            ConvergenceClass::Entire,
        ),
        (
            WrightSpec::new(vec![p(1.0, 1.0), p(1.0, 1.0)], vec![p(1.0, 1.0)]),
            ConvergenceClass::Disc,
        ),
        (
            WrightSpec::new(vec![p(0.8, 2.0)], vec![p(0.5, 1.0)]),
            ConvergenceClass::Disc,
        ),
        (
            WrightSpec::new(vec![p(1.0, 1.0); 3], vec![p(1.0, 1.0)]),
            ConvergenceClass::Origin,
        ),
    ];
    let mismatches = table
        .iter()
        .filter(|(s, class)| s.classify().class != *class)
        .count();
    vec![
        Check::at_most("cos identity on |lambda| <= 10", cos_err, 1e-12),
        Check::at_most("sinc identity on |lambda| <= 10", sinc_err, 1e-12),
        Check::at_most("E_{1,1} = exp, E_{2,1}(-l^2) = cos", ml, 1e-12),
        Check::at_most("Legendre duplication", dup, 1e-12),
        Check::at_most("Kilbas classifier mismatches", mismatches as f64, 0.0),
    ]
}

fn hartman_watson() -> Vec<Check> {
    let mut out = Vec::new();
    for r in [1.0, 2.0] {
        let got = hartman_watson_laplace(r, &[0.0, 1.0, 2.0], 1e-8).unwrap();
        let worst = got
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let want = bessel_i_series(k as u32, r);
                (v - want).abs() / want
            })
            .fold(0.0, f64::max);
        out.push(Check::at_most(
            format!("I_k(r) for k = 0, 1, 2 (r={r})"),
            worst,
            1e-4,
        ));
    }
    out
}

fn mellin_identity() -> Vec<Check> {
    let mut worst = 0.0f64;
    let omegas = [c(1.2, 0.0), c(0.7, 0.9), c(2.0, -1.5)];
    let cases = [
        (grid(1, 1.0, "0/1", 16), 0.8),
        (grid(1, 1.0, "0/1", 16), 0.6),
        (grid(2, 0.5, "1/4", 8), 0.9),
    ];
    for (spec, hurst) in cases {
        for tag in [KernelTag::Cosine, KernelTag::Sinc] {
            for xi in [0.0, 0.7, PI / 2.0, PI] {
                for &omega in &omegas {
                    let point = vec![xi; spec.n()];
                    let (lhs, rhs) = mellin_fg_identity_check(
                        &spec,
                        omega,
                        &point,
                        &params(1.0, 1.0, hurst),
                        tag,
                    )
                    .unwrap();
                    worst = worst.max((lhs - rhs).norm() / rhs.norm());
                }
            }
        }
    }
    let spec = grid(1, 1.0, "0/1", 16);
    let p = params(1.0, 1.0, 0.8);
    let mut mb = 0.0f64;
    for tag in [KernelTag::Cosine, KernelTag::Sinc] {
        let contour = Contour {
            truncation: 40.0,
            ..Contour::default_for(0.8, tag)
        };
        let value = mellin_barnes_kernel(spec, 0, 0.5, &p, tag, contour)
            .unwrap()
            .value;
        let direct = kernel_k_beta(spec, 0.5, &p, tag)
            .unwrap()
            .get(0)
            .scalar_part();
        mb = mb.max((value - direct).norm());
    }
    vec![
        Check::at_most("Mellin of f g vs 1Psi1 form", worst, 1e-6),
        Check::at_most("Mellin-Barnes K(0, t) at T = 40", mb, 1e-3),
    ]
}

fn self_adjointness() -> Vec<Check> {
    let (mut dirac, mut lap, mut norm) = (0.0f64, 0.0f64, 0.0f64);
    let grids = [
        grid(1, 1.0, "1/4", 16),
        grid(2, 0.5, "1/3", 8),
        grid(3, 1.0, "1/2", 4),
    ];
    for (i, spec) in grids.into_iter().enumerate() {
        let mut r = rng(2000 + i as u64);
        let f = random_field(&mut r, spec);
        let g = random_field(&mut r, spec);
        let a = sesquilinear(&dirac_apply(&f), &g).unwrap();
        let b = sesquilinear(&f, &dirac_apply(&g)).unwrap();
        dirac = dirac.max(a.max_abs_diff(&b) / a.max_abs().max(1.0));
        let a = sesquilinear(&laplacian_apply(&f), &g).unwrap();
        let b = sesquilinear(&f, &laplacian_apply(&g)).unwrap();
        lap = lap.max(a.max_abs_diff(&b) / a.max_abs().max(1.0));
        for (mu, sigma2, hurst, t) in [
            (1.0, 1.0, 0.3, 1.0),
            (-0.7, 0.4, 0.5, 2.5),
            (2.0, 1.5, 0.8, 0.3),
        ] {
            let evolved = dfp_evolve(&f, t, &params(mu, sigma2, hurst)).unwrap();
            norm = norm.max((normalization_check(&evolved) - normalization_check(&f)).abs());
        }
    }
    vec![
        Check::at_most("D self-adjoint", dirac, 1e-12),
        Check::at_most("Laplacian self-adjoint", lap, 1e-12),
        Check::at_most("normalization under evolution", norm, 1e-10),
    ]
}

#[test]
fn acceptance() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion {
            id: 1,
            title: "square condition",
            limit: secs(1),
            run: square_condition,
        },
        Criterion {
            id: 2,
            title: "Parseval and convolution theorem",
            limit: secs(1),
            run: parseval_and_convolution,
        },
        Criterion {
            id: 3,
            title: "heat kernel dual route",
            limit: secs(1),
            run: heat_kernel_dual_route,
        },
        Criterion {
            id: 4,
            title: "spectral solver vs ODE oracle",
            limit: secs(30),
            run: dfp_vs_oracle,
        },
        Criterion {
            id: 5,
            title: "Klein-Gordon residual",
            limit: secs(10),
            run: klein_gordon_residual,
        },
        Criterion {
            id: 6,
            title: "Levy subordination",
            limit: secs(60),
            run: levy_subordination,
        },
        Criterion {
            id: 7,
            title: "Wright machinery",
            limit: secs(1),
            run: wright_machinery,
        },
        Criterion {
            id: 8,
            title: "Hartman-Watson Laplace identity",
            limit: secs(30),
            run: hartman_watson,
        },
        Criterion {
            id: 9,
            title: "Mellin identity and Mellin-Barnes",
            limit: secs(60),
            run: mellin_identity,
        },
        Criterion {
            id: 10,
            title: "self-adjointness and normalization",
            limit: secs(1),
            run: self_adjointness,
        },
    ];
    println!();
    let failed: Vec<u32> = criteria
        .iter()
        .filter(|c| !report(c))
        .map(|c| c.id)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
