//! Spectral-amplitude estimation over Gaussian-sampled evolution times.
//!
//! Each energy grid point owns an independent ChaCha8 stream: the generator
//! is seeded with the global seed and the stream number is a hash of the
//! grid index, ancilla dimension and an optional caller tag. Results are
//! therefore identical for any number of worker threads.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::engine::{RodeoRun, WeightedSpectrum};
use crate::error::{invalid, Error, Result};
use crate::hamiltonians::DiagonalHamiltonian;
use crate::qudit::StateVector;
use crate::stats::mean_std;
use crate::tol;

/// Distribution of the evolution time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeDistribution {
    #[default]
    Gaussian,
    /// Reserved; sampling from it returns [`Error::Unsupported`].
    GeometricSeries,
}

/// Reproducible source of evolution times.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSampler {
    pub mu: f64,
    pub sigma: f64,
    pub seed: u64,
    pub n_times: usize,
    pub distribution: TimeDistribution,
}

impl TimeSampler {
    pub fn gaussian(mu: f64, sigma: f64, seed: u64, n_times: usize) -> Result<Self> {
        let s = Self {
            mu,
            sigma,
            seed,
            n_times,
            distribution: TimeDistribution::Gaussian,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.sigma.is_finite() || self.sigma <= 0.0 {
            return Err(invalid(format!(
                "sigma must be positive, got {}",
                self.sigma
            )));
        }
        if !self.mu.is_finite() {
            return Err(invalid("mu must be finite"));
        }
        if self.n_times < 1 {
            return Err(invalid("need at least one evolution time"));
        }
        Ok(())
    }

    /// Generator for one stream: ChaCha8 seeded from `seed`, positioned on `stream`.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    /// `n_times` draws from `Normal(μ, σ²)` (ziggurat sampler of `rand_distr`).
    pub fn sample_times(&self, stream: u64) -> Result<Vec<f64>> {
        self.validate()?;
        match self.distribution {
            TimeDistribution::Gaussian => {
                let normal =
                    Normal::new(self.mu, self.sigma).map_err(|e| invalid(e.to_string()))?;
                let mut rng = self.rng(stream);
                Ok((0..self.n_times).map(|_| normal.sample(&mut rng)).collect())
            }
            TimeDistribution::GeometricSeries => Err(Error::Unsupported("geometric-series")),
        }
    }
}

pub fn sample_times(sampler: &TimeSampler, stream: u64) -> Result<Vec<f64>> {
    sampler.sample_times(stream)
}

/// Order-sensitive 64-bit mix of a tuple of integers (SplitMix64 finalizer).
pub fn stream_id(parts: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    parts.iter().fold(0x9e37_79b9_7f4a_7c15, |h, &p| {
        mix(h ^ mix(p.wrapping_add(0x9e37_79b9_7f4a_7c15)))
    })
}

/// Monte Carlo result at one trial energy.
///
/// `std_re`/`std_im` are sample standard deviations of the per-time signal;
/// the standard error of the mean is `std / √n_samples`.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateRecord {
    pub energy: f64,
    pub mean_re: f64,
    pub mean_im: f64,
    pub std_re: f64,
    pub std_im: f64,
    pub n_samples: usize,
    pub analytic_re: f64,
}

impl EstimateRecord {
    pub fn sem_re(&self) -> f64 {
        self.std_re / (self.n_samples as f64).sqrt()
    }

    pub fn sem_im(&self) -> f64 {
        self.std_im / (self.n_samples as f64).sqrt()
    }
}

/// Options for grid sweeps.
#[derive(Debug, Clone, Copy, Default)]
pub struct SweepOptions {
    /// Re-run roughly 1% of samples through the full circuit and require
    /// agreement with the kernel path to `1e-10`.
    pub audit: bool,
    /// Extra value mixed into every stream id (e.g. a basis-state index).
    pub tag: u64,
}

const AUDIT_DOMAIN: u64 = 0xa0d1_7000;

struct AuditInput<'a> {
    hamiltonian: &'a DiagonalHamiltonian,
    psi: &'a StateVector,
}

fn estimate_with_spectrum(
    spectrum: &WeightedSpectrum,
    d: usize,
    energy: f64,
    sampler: &TimeSampler,
    stream: u64,
    audit: Option<&AuditInput<'_>>,
) -> Result<EstimateRecord> {
    let times = sampler.sample_times(stream)?;
    let mut re = Vec::with_capacity(times.len());
    let mut im = Vec::with_capacity(times.len());
    for (k, &t) in times.iter().enumerate() {
        let h = spectrum.expectation(d, energy, t);
        if let Some(a) = audit {
            if stream_id(&[AUDIT_DOMAIN, stream, k as u64]).is_multiple_of(100) {
                let run = RodeoRun::new(d, a.hamiltonian, a.psi, energy, t)?;
                let circuit = run.expectation_value_circuit()?;
                let gap = (circuit - h).norm();
                if gap >= tol::EVOLVED {
                    return Err(Error::NumericGuard(format!(
                        "audit mismatch {gap:e} at E = {energy}, t = {t}"
                    )));
                }
            }
        }
        re.push(h.re);
        im.push(h.im);
    }
    let (mean_re, std_re) = mean_std(re);
    let (mean_im, std_im) = mean_std(im);
    let analytic_re = analytic_sa(spectrum, d, energy, sampler.sigma, sampler.mu)?.re;
    Ok(EstimateRecord {
        energy,
        mean_re,
        mean_im,
        std_re,
        std_im,
        n_samples: times.len(),
        analytic_re,
    })
}

/// Spectral amplitude at one trial energy, sampled on stream `stream`.
pub fn estimate_sa(
    psi: &StateVector,
    h: &DiagonalHamiltonian,
    d: usize,
    energy: f64,
    sampler: &TimeSampler,
    stream: u64,
) -> Result<EstimateRecord> {
    check_ancilla(d)?;
    let spectrum = WeightedSpectrum::from_state(psi, h)?;
    estimate_with_spectrum(&spectrum, d, energy, sampler, stream, None)
}

/// `steps` evenly spaced energies from `min` to `max` inclusive
/// (`min + (max - min)·i/(steps - 1)`); a single step yields `[min]`.
pub fn energy_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 1 {
        return Err(invalid("energy grid needs at least one step"));
    }
    if !min.is_finite() || !max.is_finite() || max < min {
        return Err(invalid(format!("invalid energy range [{min}, {max}]")));
    }
    if steps == 1 {
        return Ok(vec![min]);
    }
    let span = max - min;
    let last = (steps - 1) as f64;
    Ok((0..steps).map(|i| min + span * i as f64 / last).collect())
}

/// Stream id used for grid point `index` of a sweep.
pub fn grid_stream(tag: u64, d: usize, index: usize) -> u64 {
    stream_id(&[tag, d as u64, index as u64])
}

/// Spectral amplitude over an energy grid, parallel over grid points.
pub fn sweep(
    psi: &StateVector,
    h: &DiagonalHamiltonian,
    d: usize,
    grid: &[f64],
    sampler: &TimeSampler,
    opts: SweepOptions,
) -> Result<Vec<EstimateRecord>> {
    check_ancilla(d)?;
    if (psi.norm() - 1.0).abs() > tol::EVOLVED {
        return Err(invalid("input state must be normalized"));
    }
    let spectrum = WeightedSpectrum::from_state(psi, h)?;
    let audit = opts.audit.then_some(AuditInput {
        hamiltonian: h,
        psi,
    });
    grid.par_iter()
        .enumerate()
        .map(|(i, &e)| {
            estimate_with_spectrum(
                &spectrum,
                d,
                e,
                sampler,
                grid_stream(opts.tag, d, i),
                audit.as_ref(),
            )
        })
        .collect()
}

fn check_ancilla(d: usize) -> Result<()> {
    if d < 2 {
        return Err(invalid(format!("ancilla dimension must be >= 2, got {d}")));
    }
    Ok(())
}

/// Gaussian average of the kernel for one level:
/// `((d-1)/d) e^{-σ²ω²/2} e^{-iωμ} + (1/d) e^{-σ²ω'²/2} e^{iω'μ}`, `ω' = (d-1)ω`.
pub fn gaussian_transfer(d: usize, omega: f64, sigma: f64, mu: f64) -> Result<Complex64> {
    check_ancilla(d)?;
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(invalid(format!("sigma must be positive, got {sigma}")));
    }
    let df = d as f64;
    let high = (df - 1.0) * omega;
    let main = Complex64::from_polar((-(sigma * omega).powi(2) / 2.0).exp(), -omega * mu);
    let harmonic = Complex64::from_polar((-(sigma * high).powi(2) / 2.0).exp(), high * mu);
    Ok((main * (df - 1.0) + harmonic) / df)
}

/// Closed-form spectral amplitude `G_d(E) = Σ_levels w (TP)(E_level - E)`.
pub fn analytic_sa(
    spectrum: &WeightedSpectrum,
    d: usize,
    energy: f64,
    sigma: f64,
    mu: f64,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (e, w) in spectrum.levels() {
        acc += gaussian_transfer(d, e - energy, sigma, mu)? * *w;
    }
    Ok(acc)
}

/// `Δ₂G_d = 1 - G_d/G_2` for an eigenstate input at `level_energy`:
/// `(1 - e^{-σ²(d²-2d)(E_x-E)²/2}) / d`.
pub fn relative_difference(d: usize, energy: f64, level_energy: f64, sigma: f64) -> Result<f64> {
    check_ancilla(d)?;
    let df = d as f64;
    let omega = level_energy - energy;
    let value = -(-(sigma * omega).powi(2) * (df * df - 2.0 * df) / 2.0).exp_m1() / df;
    Ok(value.clamp(0.0, 1.0 / df))
}

/// Largest standard deviation of the `N_t`-sample mean of `Re h` for an
/// eigenstate input: `(1/d)√((d²-2d+2)/(2N_t))` for `d > 2` and `√(1/(2N_t))`
/// for the purely real qubit signal.
pub fn predicted_max_std(d: usize, n_times: usize) -> Result<f64> {
    check_ancilla(d)?;
    if n_times < 1 {
        return Err(invalid("need at least one evolution time"));
    }
    let nt = n_times as f64;
    if d == 2 {
        return Ok((1.0 / (2.0 * nt)).sqrt());
    }
    let df = d as f64;
    Ok(((df * df - 2.0 * df + 2.0) / (2.0 * nt)).sqrt() / df)
}

/// Variances of `Re K_d(ω, t)` and `Im K_d(ω, t)` for `t ~ Normal(0, σ²)`.
///
/// Both follow from `E[cos(at)] = e^{-σ²a²/2}` applied to the squared
/// kernel components; the imaginary part is `(-(d-1) sin ωt + sin ω't)/d`.
pub fn variance_profile(d: usize, omega: f64, sigma: f64) -> Result<(f64, f64)> {
    check_ancilla(d)?;
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(invalid(format!("sigma must be positive, got {sigma}")));
    }
    if omega == 0.0 {
        return Ok((0.0, 0.0));
    }
    let df = d as f64;
    let s2 = sigma * sigma;
    let w = omega;
    let wp = (df - 1.0) * omega;
    let g = |a: f64| (-s2 * a * a / 2.0).exp();
    let a = df - 1.0;

    let low_sq = a * a / 2.0;
    let high_sq = 0.5;
    let low_osc = a * a * g(2.0 * w) / 2.0;
    let high_osc = g(2.0 * wp) / 2.0;
    let diff = a * g(wp - w);
    let sum = a * g(wp + w);

    let mean_re = (a * g(w) + g(wp)) / df;
    let second_re = (low_sq + low_osc + high_sq + high_osc + diff + sum) / (df * df);
    let second_im = (low_sq - low_osc + high_sq - high_osc - diff + sum) / (df * df);
    let var_re = (second_re - mean_re * mean_re).max(0.0);
    // Im K_2 vanishes identically
    let var_im = if d == 2 { 0.0 } else { second_im.max(0.0) };
    Ok((var_re, var_im))
}

/// Statistics of the low-signal region of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluctuationSummary {
    /// Mean of `std_re/√N_t` over the selected records.
    pub mean_error_bar: f64,
    /// Sample standard deviation of `mean_re` over the selected records.
    pub fluctuation: f64,
    pub n_selected: usize,
}

/// Selects records with `analytic_re < threshold` and summarizes their noise.
pub fn fluctuation_metric(
    records: &[EstimateRecord],
    threshold: f64,
) -> Result<FluctuationSummary> {
    let selected: Vec<&EstimateRecord> = records
        .iter()
        .filter(|r| r.analytic_re < threshold)
        .collect();
    if selected.is_empty() {
        return Err(Error::EmptySelection(threshold));
    }
    let (mean_error_bar, _) = mean_std(selected.iter().map(|r| r.sem_re()));
    let (_, fluctuation) = mean_std(selected.iter().map(|r| r.mean_re));
    Ok(FluctuationSummary {
        mean_error_bar,
        fluctuation,
        n_selected: selected.len(),
    })
}

/// `1 - fluct_d / fluct_2`
pub fn reduction_ratio(fluctuation: f64, qubit_fluctuation: f64) -> f64 {
    1.0 - fluctuation / qubit_fluctuation
}
