//! One-dimensional Lenz–Ising chains with periodic boundary conditions.
//!
//! Both spin-½ (`d' = 2`) and spin-1 (`d' = 3`) chains are diagonal in the
//! computational basis. Site 0 is the most significant radix-`d'` digit of
//! the basis index, and level `|k⟩` of a site carries the `k`-th entry of
//! [`local_sz`].

use crate::error::{invalid, Error, Result};
use crate::qudit::checked_pow;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Half,
    One,
}

impl Spin {
    pub fn local_dim(self) -> usize {
        match self {
            Spin::Half => 2,
            Spin::One => 3,
        }
    }

    pub fn from_local_dim(d: usize) -> Result<Self> {
        match d {
            2 => Ok(Spin::Half),
            3 => Ok(Spin::One),
            _ => Err(invalid(format!(
                "no spin representation with local dimension {d}"
            ))),
        }
    }
}

/// `S^z` eigenvalue of each local level.
pub fn local_sz(spin: Spin) -> &'static [f64] {
    match spin {
        Spin::Half => &[1.0, -1.0],
        Spin::One => &[1.0, 0.0, -1.0],
    }
}

/// Energy table of a Hamiltonian diagonal in the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalHamiltonian {
    local_dim: usize,
    n_sites: usize,
    coupling: f64,
    energies: Vec<f64>,
}

impl DiagonalHamiltonian {
    /// Arbitrary diagonal Hamiltonian on `n_sites` sites of dimension `local_dim`.
    pub fn from_energies(local_dim: usize, n_sites: usize, energies: Vec<f64>) -> Result<Self> {
        if local_dim < 2 || n_sites < 1 {
            return Err(invalid("need local dimension >= 2 and at least one site"));
        }
        let dim = checked_pow(local_dim, n_sites)?;
        if energies.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: energies.len(),
            });
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(invalid("energies must be finite"));
        }
        Ok(Self {
            local_dim,
            n_sites,
            coupling: 1.0,
            energies,
        })
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn energy(&self, x: usize) -> f64 {
        self.energies[x]
    }
}

/// Radix-`d'` digits of `x`, site 0 first (most significant).
pub fn decode_levels(x: usize, local_dim: usize, n_sites: usize) -> Result<Vec<usize>> {
    let dim = checked_pow(local_dim, n_sites)?;
    if x >= dim {
        return Err(Error::IndexOutOfRange { index: x, dim });
    }
    let mut levels = vec![0; n_sites];
    let mut rest = x;
    for slot in levels.iter_mut().rev() {
        *slot = rest % local_dim;
        rest /= local_dim;
    }
    Ok(levels)
}

/// Per-site `S^z` values of basis state `x`.
pub fn decode_config(x: usize, local_dim: usize, n_sites: usize) -> Result<Vec<f64>> {
    let sz = local_sz(Spin::from_local_dim(local_dim)?);
    Ok(decode_levels(x, local_dim, n_sites)?
        .into_iter()
        .map(|k| sz[k])
        .collect())
}

/// Inverse of [`decode_config`].
pub fn encode_config(config: &[f64], local_dim: usize) -> Result<usize> {
    let sz = local_sz(Spin::from_local_dim(local_dim)?);
    config.iter().try_fold(0usize, |acc, m| {
        let level = sz
            .iter()
            .position(|v| v == m)
            .ok_or_else(|| invalid(format!("{m} is not a valid S^z value for d' = {local_dim}")))?;
        Ok(acc * local_dim + level)
    })
}

/// `-J Σ_i m_i m_{i+1}` with site `N` identified with site 0.
fn bond_energy(config: &[f64], coupling: f64) -> f64 {
    let n = config.len();
    let sum: f64 = (0..n).map(|i| config[i] * config[(i + 1) % n]).sum();
    -coupling * sum
}

/// Ising chain `ℋ = -J Σ S^z_i S^z_{i+1}` under periodic boundary conditions.
pub fn ising_diagonal(spin: Spin, n_sites: usize, coupling: f64) -> Result<DiagonalHamiltonian> {
    if n_sites < 2 {
        return Err(invalid(format!(
            "periodic chain needs at least 2 sites, got {n_sites}"
        )));
    }
    if !coupling.is_finite() {
        return Err(invalid("coupling must be finite"));
    }
    let local_dim = spin.local_dim();
    let dim = checked_pow(local_dim, n_sites)?;
    let sz = local_sz(spin);
    let mut config = vec![0.0; n_sites];
    let energies = (0..dim)
        .map(|x| {
            let mut rest = x;
            for slot in config.iter_mut().rev() {
                *slot = sz[rest % local_dim];
                rest /= local_dim;
            }
            bond_energy(&config, coupling)
        })
        .collect();
    Ok(DiagonalHamiltonian {
        local_dim,
        n_sites,
        coupling,
        energies,
    })
}

/// Distinct energy levels and their degeneracies.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSummary {
    pub distinct_energies: Vec<f64>,
    pub degeneracies: Vec<usize>,
}

impl SpectrumSummary {
    pub fn total_states(&self) -> usize {
        self.degeneracies.iter().sum()
    }

    pub fn levels(&self) -> impl Iterator<Item = (f64, usize)> + '_ {
        self.distinct_energies
            .iter()
            .copied()
            .zip(self.degeneracies.iter().copied())
    }

    /// Degeneracy of the level matching `energy`, zero if none does.
    pub fn degeneracy_of(&self, energy: f64) -> usize {
        self.levels()
            .find(|(e, _)| (e - energy).abs() <= tol::ENERGY_MATCH)
            .map_or(0, |(_, g)| g)
    }
}

/// Exact degeneracy count by enumerating the energy table.
pub fn spectrum_summary(h: &DiagonalHamiltonian) -> SpectrumSummary {
    let mut sorted = h.energies().to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut distinct_energies: Vec<f64> = Vec::new();
    let mut degeneracies: Vec<usize> = Vec::new();
    for e in sorted {
        match distinct_energies.last() {
            Some(&last) if (e - last).abs() <= tol::ENERGY_MATCH => {
                *degeneracies.last_mut().unwrap() += 1;
            }
            _ => {
                distinct_energies.push(e);
                degeneracies.push(1);
            }
        }
    }
    SpectrumSummary {
        distinct_energies,
        degeneracies,
    }
}
