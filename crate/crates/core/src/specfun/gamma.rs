//! Complex Gamma function (Lanczos, g = 7) with reflection, its logarithm,
//! and the entire function `1/Γ`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// True when `s` is a pole of Γ (a non-positive integer).
pub fn is_pole(s: Complex64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round()
}

/// `sin(πz)` with the real part reduced first, accurate near integers.
pub fn sin_pi(z: Complex64) -> Complex64 {
    let k = z.re.round();
    let r = Complex64::new(z.re - k, z.im);
    let s = (r * PI).sin();
    if (k as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

fn lanczos_sum(z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// `ln Γ(s)` for `Re s ≥ 1/2`; the principal branch of the Lanczos form.
fn ln_gamma_right(s: Complex64) -> Complex64 {
    let z = s - 1.0;
    let t = z + G + 0.5;
    HALF_LN_2PI + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// `ln Γ(s)`, defined modulo `2πi` (suitable for `exp`).
pub fn ln_gamma(s: Complex64) -> Result<Complex64> {
    if is_pole(s) {
        return Err(Error::Pole(s.re));
    }
    if s.re < 0.5 {
        Ok(Complex64::new(PI.ln(), 0.0) - sin_pi(s).ln() - ln_gamma_right(1.0 - s))
    } else {
        Ok(ln_gamma_right(s))
    }
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma_real(x: f64) -> f64 {
    ln_gamma_right(Complex64::new(x, 0.0)).re
}

fn gamma_right(s: Complex64) -> Complex64 {
    if s.norm() > 140.0 {
        return ln_gamma_right(s).exp();
    }
    let z = s - 1.0;
    let t = z + G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * lanczos_sum(z)
}

/// `Γ(s)`; an error at the poles `s = 0, −1, −2, …`.
pub fn gamma(s: Complex64) -> Result<Complex64> {
    if is_pole(s) {
        return Err(Error::Pole(s.re));
    }
    if s.re < 0.5 {
        Ok(PI / (sin_pi(s) * gamma_right(1.0 - s)))
    } else {
        Ok(gamma_right(s))
    }
}

/// `Γ(x)` for real `x` away from the poles.
pub fn gamma_real(x: f64) -> Result<f64> {
    gamma(Complex64::new(x, 0.0)).map(|g| g.re)
}

/// `1/Γ(s)`, exactly zero at the poles of Γ.
pub fn recip_gamma(s: Complex64) -> Complex64 {
    if is_pole(s) {
        return Complex64::default();
    }
    if s.re < 0.5 {
        gamma_right(1.0 - s) * sin_pi(s) / PI
    } else {
        1.0 / gamma_right(s)
    }
}

/// `1/Γ(x)` for real `x`.
pub fn recip_gamma_real(x: f64) -> f64 {
    recip_gamma(Complex64::new(x, 0.0)).re
}
