#![allow(dead_code)]

use dfp_lattice::{BladeIndex, Field, GridSpec, MomentumField, Multivector, Rational};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(r: &mut impl Rng) -> Complex64 {
    c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

/// Multivector with every blade populated.
pub fn random_multivector(r: &mut impl Rng, n: usize) -> Multivector {
    let terms: Vec<(BladeIndex, Complex64)> = (0..1u32 << (2 * n))
        .map(|m| (BladeIndex(m), random_complex(r)))
        .collect();
    Multivector::from_terms(n, terms).unwrap()
}

/// Multivector in the complex span of `1, e_1, …, e_{2n}`.
pub fn random_vector_part(r: &mut impl Rng, n: usize) -> Multivector {
    let mut terms = vec![(BladeIndex::SCALAR, random_complex(r))];
    for j in 1..=2 * n {
        terms.push((BladeIndex::generator(j), random_complex(r)));
    }
    Multivector::from_terms(n, terms).unwrap()
}

pub fn random_field(r: &mut impl Rng, spec: GridSpec) -> Field {
    let values = (0..spec.len())
        .map(|_| random_multivector(r, spec.n()))
        .collect();
    Field::from_values(spec, values).unwrap()
}

pub fn random_momentum_field(r: &mut impl Rng, spec: GridSpec) -> MomentumField {
    let values = (0..spec.len())
        .map(|_| random_multivector(r, spec.n()))
        .collect();
    MomentumField::from_values(spec, values).unwrap()
}

pub fn grid(n: usize, h: f64, alpha: &str, points: usize) -> GridSpec {
    GridSpec::new(n, h, alpha.parse::<Rational>().unwrap(), points).unwrap()
}

/// Brute-force product of two basis blades written as generator lists:
/// concatenate, bubble-sort counting transpositions, then contract equal
/// neighbours with the metric `e_j² = −1 (j ≤ n)`, `+1 (j > n)`.
pub fn oracle_blade_product(n: usize, a: &[usize], b: &[usize]) -> (f64, Vec<usize>) {
    let mut word: Vec<usize> = a.iter().chain(b).copied().collect();
    let mut sign = 1.0;
    for i in 0..word.len() {
        for j in 0..word.len() - 1 - i {
            if word[j] > word[j + 1] {
                word.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    let mut out = Vec::new();
    let mut i = 0;
    while i < word.len() {
        if i + 1 < word.len() && word[i] == word[i + 1] {
            if word[i] <= n {
                sign = -sign;
            }
            i += 2;
        } else {
            out.push(word[i]);
            i += 1;
        }
    }
    (sign, out)
}

fn to_list(mask: u32) -> Vec<usize> {
    (0..32)
        .filter(|b| mask & (1 << b) != 0)
        .map(|b| b + 1)
        .collect()
}

fn to_mask(list: &[usize]) -> u32 {
    list.iter().map(|j| 1u32 << (j - 1)).sum()
}

/// Dense `4ⁿ` coefficient vector indexed by mask.
pub fn dense(a: &Multivector) -> Vec<Complex64> {
    let mut v = vec![Complex64::default(); 1 << (2 * a.dim())];
    for (b, x) in a.terms() {
        v[b.0 as usize] = x;
    }
    v
}

/// Geometric product on dense vectors through [`oracle_blade_product`].
pub fn oracle_product(n: usize, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); a.len()];
    for (ma, &xa) in a.iter().enumerate() {
        if xa == Complex64::default() {
            continue;
        }
        for (mb, &xb) in b.iter().enumerate() {
            if xb == Complex64::default() {
                continue;
            }
            let (s, blade) = oracle_blade_product(n, &to_list(ma as u32), &to_list(mb as u32));
            out[to_mask(&blade) as usize] += xa * xb * s;
        }
    }
    out
}

/// Dagger on dense vectors: reverse the generator word, flip each
/// `e_j` with `j ≤ n`, conjugate.
pub fn oracle_dagger(n: usize, a: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); a.len()];
    for (m, &x) in a.iter().enumerate() {
        let mut word = to_list(m as u32);
        word.reverse();
        let mut sign = 1.0;
        for &j in &word {
            if j <= n {
                sign = -sign;
            }
        }
        let (s, blade) = oracle_blade_product(n, &word, &[]);
        out[to_mask(&blade) as usize] += x.conj() * sign * s;
    }
    out
}

pub fn dense_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `I_k(z)` by its power series, summed until terms stop contributing.
pub fn bessel_i_series(k: u32, z: f64) -> f64 {
    let half = z / 2.0;
    let mut term = half.powi(k as i32) / (1..=k).map(f64::from).product::<f64>();
    let mut sum = term;
    let mut m = 0.0;
    loop {
        m += 1.0;
        term *= half * half / (m * (m + k as f64));
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}
