#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rodeo_core::qudit::{StateVector, UnitaryOperator};
use rodeo_core::Complex64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_amplitudes(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> StateVector {
    let amps = random_amplitudes(rng, dim);
    let n = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(amps.into_iter().map(|z| z / n).collect()).unwrap()
}

/// Gram-Schmidt on the rows of a random complex matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> UnitaryOperator {
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while rows.len() < dim {
        let mut v = random_amplitudes(rng, dim);
        for r in &rows {
            let proj: Complex64 = r.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(r) {
                *x -= proj * y;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-6 {
            continue;
        }
        rows.push(v.into_iter().map(|z| z / n).collect());
    }
    UnitaryOperator::unitary(dim, rows.concat(), 1e-12).unwrap()
}

/// Dense matrix-vector product written out by hand.
pub fn dense_apply(op: &UnitaryOperator, v: &[Complex64]) -> Vec<Complex64> {
    (0..op.dim())
        .map(|r| (0..op.dim()).map(|c| op.get(r, c) * v[c]).sum())
        .collect()
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
