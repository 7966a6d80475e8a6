//! Exponentially scaled modified Bessel functions `e^{−z} I_k(z)` of
//! integer order.

use std::f64::consts::PI;

/// `e^{−z} I₀(z)`: power series up to `z = 20`, asymptotic series beyond.
pub fn bessel_i0_scaled(z: f64) -> f64 {
    let z = z.abs();
    if z <= 20.0 {
        i0_scaled_series(z)
    } else {
        i0_scaled_asymptotic(z)
    }
}

fn i0_scaled_series(z: f64) -> f64 {
    let q = 0.25 * z * z;
    let mut term = (-z).exp();
    let mut sum = term;
    let mut m = 1.0;
    while term > 1e-17 * sum {
        term *= q / (m * m);
        sum += term;
        m += 1.0;
    }
    sum
}

fn i0_scaled_asymptotic(z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k: f64 = 1.0;
    loop {
        let next = term * (2.0 * k - 1.0).powi(2) / (8.0 * k * z);
        if next >= term || next < 1e-17 {
            break;
        }
        term = next;
        sum += term;
        k += 1.0;
    }
    sum / (2.0 * PI * z).sqrt()
}

/// `e^{−z} I_k(z)` for `k = 0, …, kmax` (Miller's backward recurrence,
/// normalized by an independent `I₀`).
pub fn bessel_i_scaled_seq(kmax: usize, z: f64) -> Vec<f64> {
    let z = z.abs();
    let mut out = vec![0.0; kmax + 1];
    if z == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let start = kmax.max(z.ceil() as usize) + 30 + (40.0 * (kmax as f64).max(z)).sqrt() as usize;
    let mut vals = vec![0.0; start + 2];
    vals[start] = 1e-280;
    for m in (1..=start).rev() {
        vals[m - 1] = 2.0 * m as f64 / z * vals[m] + vals[m + 1];
        if vals[m - 1] > 1e250 {
            vals[m - 1..].iter_mut().for_each(|v| *v *= 1e-250);
        }
    }
    out.copy_from_slice(&vals[..=kmax]);
    let scale = bessel_i0_scaled(z) / out[0];
    out.iter_mut().for_each(|v| *v *= scale);
    out
}

/// `e^{−z} I_k(z)`, symmetric in `k`.
pub fn bessel_i_scaled(k: i64, z: f64) -> f64 {
    let k = k.unsigned_abs() as usize;
    bessel_i_scaled_seq(k, z)[k]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin() {
        assert_eq!(bessel_i_scaled(0, 0.0), 1.0);
        assert_eq!(bessel_i_scaled(3, 0.0), 0.0);
    }

    #[test]
    fn symmetric_in_order() {
        assert_eq!(bessel_i_scaled(-2, 1.5), bessel_i_scaled(2, 1.5));
    }

    #[test]
    fn branches_agree_at_the_switch() {
        for z in [20.0, 24.0] {
            let a = i0_scaled_series(z);
            let b = i0_scaled_asymptotic(z);
            assert!((a - b).abs() < 1e-15 * a, "{z}: {a} {b}");
        }
    }
}
