//! Single-state microcanonical protocol.
//!
//! Feeding the homogeneous superposition `Σ_x |x⟩/√(d'^N)` into the Rodeo
//! sweep turns the spectral amplitude into the Gaussian-smoothed density of
//! states `Ω_σ(E)/d'^N` (unit peak height per level, width `1/σ`). For
//! `d > 2` the smoothing kernel also carries the `(1/d) e^{-σ²ω'²/2}`
//! harmonic term, and the oracle keeps it.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::engine::WeightedSpectrum;
use crate::ensemble::{
    gaussian_transfer, stream_id, sweep, EstimateRecord, SweepOptions, TimeSampler,
};
use crate::error::{invalid, Error, Result};
use crate::hamiltonians::{spectrum_summary, DiagonalHamiltonian, SpectrumSummary};
use crate::qudit::{checked_pow, make_basis_state, StateVector};
use crate::stats::compensated_sum;

/// Largest basis the sum-over-basis protocol will enumerate.
pub const MAX_NOS_BASIS: usize = 1 << 12;

/// Density-of-states estimate at one energy.
#[derive(Debug, Clone, PartialEq)]
pub struct DosRecord {
    pub energy: f64,
    pub g_estimate: f64,
    /// Sample standard deviation of the per-time signal.
    pub g_std: f64,
    pub g_oracle: f64,
    pub n_samples: usize,
}

impl DosRecord {
    pub fn g_sem(&self) -> f64 {
        self.g_std / (self.n_samples as f64).sqrt()
    }
}

/// Equal-amplitude superposition of all `d'^N` basis states.
pub fn homogeneous_state(local_dim: usize, n_sites: usize) -> Result<StateVector> {
    if local_dim < 2 || n_sites < 1 {
        return Err(invalid("need local dimension >= 2 and at least one site"));
    }
    let dim = checked_pow(local_dim, n_sites)?;
    let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
    StateVector::from_amplitudes(vec![amp; dim])
}

/// `Ω_σ(E) = Σ_levels Ω(E_l) e^{-σ²(E_l - E)²/2}`
pub fn smoothed_dos_oracle(spectrum: &SpectrumSummary, sigma: f64, energy: f64) -> Result<f64> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(invalid(format!("sigma must be positive, got {sigma}")));
    }
    Ok(spectrum
        .levels()
        .map(|(e, g)| g as f64 * (-(sigma * (e - energy)).powi(2) / 2.0).exp())
        .sum())
}

/// Degeneracy-weighted kernel average `Σ_levels Ω(E_l) (TP)_d(E_l - E)` (real part).
///
/// Equals [`smoothed_dos_oracle`] for `d = 2`.
pub fn smoothed_dos_oracle_qudit(
    spectrum: &SpectrumSummary,
    d: usize,
    sigma: f64,
    mu: f64,
    energy: f64,
) -> Result<f64> {
    let mut acc = 0.0;
    for (e, g) in spectrum.levels() {
        acc += g as f64 * gaussian_transfer(d, e - energy, sigma, mu)?.re;
    }
    Ok(acc)
}

/// Degeneracy spectrum scaled to homogeneous overlaps `Ω/d'^N`.
pub fn homogeneous_spectrum(spectrum: &SpectrumSummary) -> WeightedSpectrum {
    let total = spectrum.total_states() as f64;
    let levels = spectrum
        .levels()
        .map(|(e, g)| (e, g as f64 / total))
        .collect();
    WeightedSpectrum::from_levels(levels).expect("degeneracies are finite and positive")
}

fn to_dos(rec: EstimateRecord, oracle: f64) -> DosRecord {
    DosRecord {
        energy: rec.energy,
        g_estimate: rec.mean_re,
        g_std: rec.std_re,
        g_oracle: oracle,
        n_samples: rec.n_samples,
    }
}

/// Density of states from a single homogeneous-input sweep.
pub fn estimate_dos(
    h: &DiagonalHamiltonian,
    d: usize,
    grid: &[f64],
    sampler: &TimeSampler,
    opts: SweepOptions,
) -> Result<Vec<DosRecord>> {
    let psi = homogeneous_state(h.local_dim(), h.n_sites())?;
    let spectrum = spectrum_summary(h);
    let total = spectrum.total_states() as f64;
    let records = sweep(&psi, h, d, grid, sampler, opts)?;
    records
        .into_iter()
        .map(|r| {
            let oracle =
                smoothed_dos_oracle_qudit(&spectrum, d, sampler.sigma, sampler.mu, r.energy)?
                    / total;
            Ok(to_dos(r, oracle))
        })
        .collect()
}

/// Number of states: the spectral amplitude summed over every basis input.
///
/// Each basis state samples its own times; per-energy sums run in basis
/// order with compensated summation, and `g_std` combines the per-state
/// deviations in quadrature.
pub fn nos_sum(
    h: &DiagonalHamiltonian,
    d: usize,
    grid: &[f64],
    sampler: &TimeSampler,
    opts: SweepOptions,
) -> Result<Vec<DosRecord>> {
    let dim = h.dim();
    if dim > MAX_NOS_BASIS {
        return Err(Error::SizeOverflow(dim));
    }
    let per_state: Vec<Vec<EstimateRecord>> = (0..dim)
        .into_par_iter()
        .map(|x| {
            let psi = make_basis_state(dim, x)?;
            let tagged = SweepOptions {
                tag: stream_id(&[opts.tag, x as u64]),
                ..opts
            };
            sweep(&psi, h, d, grid, sampler, tagged)
        })
        .collect::<Result<_>>()?;
    let spectrum = spectrum_summary(h);
    grid.iter()
        .enumerate()
        .map(|(i, &energy)| {
            let g_estimate = compensated_sum(per_state.iter().map(|recs| recs[i].mean_re));
            let g_std = compensated_sum(per_state.iter().map(|recs| recs[i].std_re.powi(2))).sqrt();
            let g_oracle =
                smoothed_dos_oracle_qudit(&spectrum, d, sampler.sigma, sampler.mu, energy)?;
            Ok(DosRecord {
                energy,
                g_estimate,
                g_std,
                g_oracle,
                n_samples: sampler.n_times,
            })
        })
        .collect()
}

/// Entropy at one energy; `None` where `g` was indistinguishable from zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyPoint {
    pub energy: f64,
    pub entropy: Option<f64>,
}

/// Smallest `g` for which a logarithm is taken.
pub const ENTROPY_FLOOR: f64 = 1e-12;

/// `S(E) = ln g(E)` with `k_B = 1`, the additive constant left out.
pub fn entropy(g_values: &[(f64, f64)]) -> Vec<EntropyPoint> {
    g_values
        .iter()
        .map(|&(energy, g)| EntropyPoint {
            energy,
            entropy: log_above(g, ENTROPY_FLOOR),
        })
        .collect()
}

/// Entropy of Monte Carlo DoS records, flagging points with
/// `g <= max(3·sem, 1e-12)`.
pub fn entropy_of_records(records: &[DosRecord]) -> Vec<EntropyPoint> {
    records
        .iter()
        .map(|r| EntropyPoint {
            energy: r.energy,
            entropy: log_above(r.g_estimate, (3.0 * r.g_sem()).max(ENTROPY_FLOOR)),
        })
        .collect()
}

fn log_above(g: f64, floor: f64) -> Option<f64> {
    (g > floor).then(|| g.ln())
}

/// `C = N ln d'`, the constant separating `ln g` from `ln Ω`.
pub fn entropy_constant(local_dim: usize, n_sites: usize) -> f64 {
    n_sites as f64 * (local_dim as f64).ln()
}
