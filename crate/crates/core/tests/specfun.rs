mod common;

use std::f64::consts::{E, PI};

use common::*;
use dfp_lattice::specfun::hartman_watson::resolution_floor;
use dfp_lattice::specfun::mellin::log_line_integral;
use dfp_lattice::specfun::quad::{integrate, QuadOptions};
use dfp_lattice::specfun::*;
use dfp_lattice::Error;
use num_complex::Complex64;

fn rpow(x: f64, s: Complex64) -> Complex64 {
    (s * x.ln()).exp()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn gamma_examples() {
    assert!((gamma(c(0.5, 0.0)).unwrap() - PI.sqrt()).norm() < 1e-14);
    assert!((gamma_real(1.0 / 3.0).unwrap() - 2.678_938_534_707_747_6).abs() < 1e-13);
    assert_eq!(recip_gamma(c(0.0, 0.0)), c(0.0, 0.0));
    assert_eq!(recip_gamma(c(-3.0, 0.0)), c(0.0, 0.0));
    assert!(matches!(gamma(c(-2.0, 0.0)), Err(Error::Pole(_))));
}

fn duplication_error(s: Complex64) -> f64 {
    let lhs = gamma(2.0 * s).unwrap();
    let rhs = rpow(2.0, 2.0 * s - 1.0) / PI.sqrt() * gamma(s).unwrap() * gamma(s + 0.5).unwrap();
    rel(lhs, rhs)
}

#[test]
fn legendre_duplication() {
    assert!(duplication_error(c(0.7, 0.0)) < 1e-12);
    for i in 0..=49 {
        for im in [0.0, 0.5, -2.0] {
            let s = c(0.1 + 0.1 * i as f64, im);
            assert!(duplication_error(s) < 1e-12, "s = {s}");
        }
    }
}

#[test]
fn gamma_recurrence_and_reflection() {
    for s in [c(0.3, 0.2), c(-2.4, 1.1), c(4.5, -3.0)] {
        let g = gamma(s).unwrap();
        assert!(rel(gamma(s + 1.0).unwrap(), s * g) < 1e-13);
        let refl = g * gamma(1.0 - s).unwrap() * (s * PI).sin();
        assert!(rel(refl, c(PI, 0.0)) < 1e-12);
    }
}

#[test]
fn bessel_examples() {
    assert_eq!(bessel_i_scaled(0, 0.0), 1.0);
    let want = bessel_i_series(1, 2.0) * (-2.0f64).exp();
    assert!((bessel_i_scaled(1, 2.0) - want).abs() < 1e-15);
    assert!((bessel_i_scaled(1, 2.0) - 0.215_269_289_248_937_66).abs() < 1e-15);
    let total: f64 = (-30..=30).map(|k| bessel_i_scaled(k, 2.0)).sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert_eq!(bessel_i_scaled(-3, 1.7), bessel_i_scaled(3, 1.7));
}

#[test]
fn bessel_matches_series_oracle() {
    for z in [0.01, 0.5, 3.0, 12.0, 25.0, 40.0] {
        for k in [0u32, 1, 2, 5, 17, 40] {
            let want = bessel_i_series(k, z) * (-z).exp();
            let got = bessel_i_scaled(k as i64, z);
            if want > 1e-280 {
                assert!(
                    (got - want).abs() <= 1e-13 * want,
                    "k={k} z={z}: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn wright_examples() {
    let spec = WrightSpec::new(
        vec![WrightParam::real(1.0, 1.0)],
        vec![WrightParam::real(1.0, 1.0)],
    );
    assert!(rel(wright_psi(&spec, c(2.0, 0.0)).unwrap().value, c(E * E, 0.0)) < 1e-14);
}

fn cos_form(l: f64) -> f64 {
    let s = WrightSpec::new(vec![], vec![WrightParam::real(0.5, 1.0)]);
    PI.sqrt() * wright_psi(&s, c(-l * l / 4.0, 0.0)).unwrap().value.re
}

fn sinc_form(l: f64) -> f64 {
    let s = WrightSpec::new(vec![], vec![WrightParam::real(1.5, 1.0)]);
    PI.sqrt() / 2.0 * wright_psi(&s, c(-l * l / 4.0, 0.0)).unwrap().value.re
}

#[test]
fn trigonometric_wright_identities() {
    assert!((cos_form(PI) + 1.0).abs() < 1e-12);
    assert!((sinc_form(PI / 2.0) - 2.0 / PI).abs() < 1e-12);
    for i in 0..=200 {
        let l = i as f64 * 0.05;
        assert!((cos_form(l) - l.cos()).abs() < 1e-12, "cos at {l}");
        let sinc = if l == 0.0 { 1.0 } else { l.sin() / l };
        assert!((sinc_form(l) - sinc).abs() < 1e-12, "sinc at {l}");
    }
}

#[test]
fn mittag_leffler_examples() {
    assert!((mittag_leffler(1.0, 1.0, c(1.0, 0.0)).unwrap().value - E).norm() < 1e-12);
    for l in [0.3, 1.0, 2.5, 6.0] {
        let v = mittag_leffler(2.0, 1.0, c(-l * l, 0.0)).unwrap().value;
        assert!((v - l.cos()).norm() < 1e-12);
    }
    for beta in [0.5, 1.0, 2.5, -1.0] {
        let v = mittag_leffler(0.7, beta, c(0.0, 0.0)).unwrap().value;
        assert!((v - recip_gamma_real(beta)).norm() < 1e-15);
    }
}

#[test]
fn kilbas_classifier_table() {
    let p = WrightParam::real;
    let table = [
        (
            WrightSpec::new(vec![p(1.0, 1.0)], vec![p(1.0, 1.0)]),
            ConvergenceClass::Entire,
            0.0,
        ),
        (
            WrightSpec::new(vec![], vec![p(0.5, 1.0)]),
            ConvergenceClass::Entire,
            1.0,
        ),
        (
            WrightSpec::new(vec![], vec![p(0.0, -0.3)]),
            ConvergenceClass::Entire,
            -0.3,
        ),
        (
            WrightSpec::new(vec![p(0.9, 1.25)], vec![p(0.5, 1.0)]),
            ConvergenceClass::Entire,
            -0.25,
        ),
        (
            WrightSpec::new(vec![p(1.0, 1.0), p(1.0, 1.0)], vec![p(1.0, 1.0)]),
            ConvergenceClass::Disc,
            -1.0,
        ),
        (
            WrightSpec::new(vec![p(0.8, 2.0)], vec![p(0.5, 1.0)]),
            ConvergenceClass::Disc,
            -1.0,
        ),
        (
            WrightSpec::new(vec![p(1.0, 1.0); 3], vec![p(1.0, 1.0)]),
            ConvergenceClass::Origin,
            -2.0,
        ),
    ];
    for (spec, class, delta) in &table {
        let k = spec.classify();
        assert_eq!(k.class, *class);
        assert!((k.delta - delta).abs() < 1e-14);
    }
    // ₂Ψ₁[(1,1),(1,1); (1,1)]: ρ = 1, κ = −1/2.
    let disc = &table[4].0;
    let k = disc.classify();
    assert!((k.rho - 1.0).abs() < 1e-15 && (k.kappa.re + 0.5).abs() < 1e-15);
    assert!(disc.converges_at(c(0.5, 0.0)));
    assert!(!disc.converges_at(c(1.0, 0.0)));
    assert!(matches!(
        wright_psi(disc, c(1.0, 0.0)),
        Err(Error::Divergent { .. })
    ));
    // Same with lower (3,1): κ = 3/2 admits the boundary circle.
    let edge = WrightSpec::new(vec![p(1.0, 1.0), p(1.0, 1.0)], vec![p(3.0, 1.0)]);
    assert!(edge.converges_at(c(0.0, 1.0)));
    // Scale 2 upper parameter: ρ = 1/4.
    assert!((table[5].0.classify().rho - 0.25).abs() < 1e-15);
    assert!(!table[6].0.converges_at(c(1e-3, 0.0)));
    assert!(table[6].0.converges_at(c(0.0, 0.0)));
}

#[test]
fn disc_series_value() {
    // ₂Ψ₁[(1,1),(1,1);(1,1); λ] = Σ m! λ^m / m! ... = 1/(1 − λ).
    let p = WrightParam::real;
    let spec = WrightSpec::new(vec![p(1.0, 1.0), p(1.0, 1.0)], vec![p(1.0, 1.0)]);
    let v = wright_psi(&spec, c(0.5, 0.0)).unwrap();
    assert!((v.value - 2.0).norm() < 1e-13);
    assert!(v.status.is_converged());
}

#[test]
fn levy_closed_form_at_one_half() {
    for u in [0.05f64, 0.3, 1.0, 4.0, 30.0] {
        let want = (-1.0 / (4.0 * u)).exp() / (2.0 * PI.sqrt() * u.powf(1.5));
        let got = levy_pdf(0.5, u).unwrap().value;
        assert!(
            (got - want).abs() < 1e-12 * want.max(1e-3),
            "u={u}: {got} vs {want}"
        );
        assert!((levy_pdf_integral(0.5, u).unwrap() - want).abs() < 1e-11 * want.max(1e-3));
    }
    assert!((levy_pdf(0.5, 1.0).unwrap().value - 0.219_695_644_733_861).abs() < 1e-12);
}

#[test]
fn levy_series_and_integral_agree() {
    for nu in [0.3, 0.7] {
        for u in [0.2, 1.0, 3.0] {
            let a = levy_pdf(nu, u).unwrap().value;
            let b = levy_pdf_integral(nu, u).unwrap();
            assert!((a - b).abs() < 1e-10 * b.max(1e-6), "nu={nu} u={u}");
        }
    }
    assert!(levy_pdf(1.2, 1.0).is_err());
    assert!(levy_pdf(0.5, -1.0).is_err());
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

#[test]
fn levy_total_mass_and_laplace_identity() {
    for nu in [0.3, 0.5, 0.7] {
        for s in [0.1, 1.0, 5.0] {
            let got = levy_laplace(nu, s);
            let want = (-s.powf(nu)).exp();
            assert!((got - want).abs() < 1e-6, "nu={nu} s={s}: {got} vs {want}");
        }
        assert!((levy_laplace(nu, 0.0) - 1.0).abs() < 1e-6);
    }
    assert!((levy_laplace(0.7, 1.0) - (-1.0f64).exp()).abs() < 1e-6);
}

#[test]
fn hartman_watson_reconstructs_bessel_values() {
    let got = hartman_watson_laplace(1.0, &[0.0, 1.0], 1e-8).unwrap();
    assert!((got[0] - 1.266_065_877_752_008_4).abs() < 1e-4 * 1.27);
    assert!((got[1] - 0.565_159_103_992_485).abs() < 1e-4 * 0.57);
}

#[test]
fn hartman_watson_positivity_on_tame_grid() {
    for r in [0.5, 1.0, 2.0, 5.0] {
        let floor = resolution_floor(r);
        for i in 1..=40 {
            let p = 10.0 * i as f64 / 40.0;
            if p < floor {
                continue;
            }
            let th = hartman_watson_theta(r, p).unwrap();
            assert!(th.value >= -1e-6, "r={r} p={p}: {}", th.value);
            assert_eq!(th.status, ThetaStatus::Ok);
        }
    }
}

#[test]
fn mellin_examples() {
    let v = mellin_numeric(|t| (-t).exp(), c(0.5, 0.0)).unwrap();
    assert!((v.value - PI.sqrt()).norm() < 1e-12);

    // M{t^β f(κ t^γ)}(s) = γ⁻¹ κ^{−(s+β)/γ} M{f}((s+β)/γ), f = e^{−t}.
    let (beta, gam, kappa, s) = (1.0, 2.0, 3.0, c(0.8, 0.0));
    let lhs = mellin_numeric(|t| t.powf(beta) * (-kappa * t.powf(gam)).exp(), s)
        .unwrap()
        .value;
    let arg = (s + beta) / gam;
    let rhs = rpow(kappa, -arg) / gam * mellin_numeric(|t| (-t).exp(), arg).unwrap().value;
    assert!(rel(lhs, rhs) < 1e-12);
    assert!(rel(rhs, rpow(kappa, -arg) / gam * gamma(arg).unwrap()) < 1e-12);
}

#[test]
fn mellin_convolution_against_gamma_product() {
    let direct = mellin_convolve(|t| (-t).exp(), |t| (-t).exp(), 1.0).unwrap();
    let via_transform = mellin_inverse(|s| gamma(s).unwrap().powi(2), 1.0, 1.0, 60.0).re;
    assert!((direct - via_transform).abs() < 1e-8);
    // 2 K₀(2)
    assert!((direct - 0.227_787_745_499_066_9).abs() < 1e-12);
}

#[test]
fn mellin_inversion_round_trip() {
    for t in [0.2, 1.0, 2.5] {
        let back = mellin_inverse(
            |s| mellin_numeric(|u| (-u).exp(), s).unwrap().value,
            1.0,
            t,
            40.0,
        );
        assert!((back.re - (-t).exp()).abs() < 1e-5);
        assert!(back.im.abs() < 1e-5);
    }
}

#[test]
fn mellin_parseval() {
    let (lhs, rhs) = mellin_parseval_check(
        |t| (-t).exp(),
        |t| (-2.0 * t).exp(),
        |s| gamma(s).unwrap(),
        |s| gamma(s).unwrap() * rpow(2.0, -s),
        c(1.5, 0.0),
        0.75,
        60.0,
    )
    .unwrap();
    assert!(rel(rhs, lhs) < 1e-8);
    assert!(rel(lhs, gamma(c(1.5, 0.0)).unwrap() * (3.0f64).powf(-1.5)) < 1e-12);
}

#[test]
fn quadrature_reports_failure() {
    let out = integrate(
        |x: f64| 1.0 / x.sqrt(),
        0.0,
        1.0,
        QuadOptions::rel(1e-15).max_intervals(5),
    );
    assert!(!out.converged);
    assert!(matches!(
        out.into_result(1e-15),
        Err(Error::Quadrature { .. })
    ));
}
