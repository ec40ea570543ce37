//! Single-shot Rodeo circuit and its closed-form single-time quantities.
//!
//! The circuit maps `|0⟩ ⊗ |ψ⟩` through
//! `H_d ⊗ 1`, `C(e^{-iℋt})`, `P_d(Edt/2) ⊗ 1` and `H_d^† ⊗ 1`, which leaves
//! amplitude `(1/d) Σ_ℓ c_x e^{-i(ω_x t + 2πn/d)ℓ}` on `|n⟩|x⟩`, with
//! `ω_x = E_x - E`. Measuring the ancilla in the clock basis gives
//! `⟨Z_d ⊗ 1⟩ = Σ_x |c_x|² K_d(ω_x, t)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::gates::{
    apply_controlled_diagonal, apply_diagonal_on_subsystem, clock_op, evolution_operator,
    phase_shift, qft, qft_inverse, PhaseParameter,
};
use crate::hamiltonians::DiagonalHamiltonian;
use crate::qudit::{
    apply_on_subsystem, make_basis_state, tensor, RegisterLayout, StateVector, Subsystem,
};
use crate::tol;

/// One execution of the circuit at a fixed trial energy and time.
#[derive(Debug, Clone, Copy)]
pub struct RodeoRun<'a> {
    layout: RegisterLayout,
    hamiltonian: &'a DiagonalHamiltonian,
    psi: &'a StateVector,
    trial_energy: f64,
    time: f64,
}

impl<'a> RodeoRun<'a> {
    pub fn new(
        ancilla_dim: usize,
        hamiltonian: &'a DiagonalHamiltonian,
        psi: &'a StateVector,
        trial_energy: f64,
        time: f64,
    ) -> Result<Self> {
        let layout =
            RegisterLayout::new(ancilla_dim, hamiltonian.local_dim(), hamiltonian.n_sites())?;
        if psi.dim() != layout.system_dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.system_dim(),
                found: psi.dim(),
            });
        }
        if (psi.norm() - 1.0).abs() > tol::EVOLVED {
            return Err(invalid("input state must be normalized"));
        }
        if !trial_energy.is_finite() || !time.is_finite() {
            return Err(invalid("trial energy and time must be finite"));
        }
        Ok(Self {
            layout,
            hamiltonian,
            psi,
            trial_energy,
            time,
        })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn ancilla_dim(&self) -> usize {
        self.layout.ancilla_dim()
    }

    pub fn trial_energy(&self) -> f64 {
        self.trial_energy
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// `ω_x = E_x - E`
    pub fn detuning(&self, x: usize) -> f64 {
        self.hamiltonian.energy(x) - self.trial_energy
    }

    /// Joint state after the inverse QFT.
    pub fn run_circuit(&self) -> Result<StateVector> {
        let d = self.ancilla_dim();
        let layout = &self.layout;
        let psi0 = tensor(&make_basis_state(d, 0)?, self.psi);
        let psi1 = apply_on_subsystem(&qft(d)?, Subsystem::Ancilla, &psi0, layout)?;
        let evolution = evolution_operator(self.hamiltonian, self.time)?;
        let psi2 = apply_controlled_diagonal(&evolution, &psi1, layout)?;
        let phi = PhaseParameter::from_trial_energy(self.trial_energy, d, self.time)?;
        let psi3 =
            apply_diagonal_on_subsystem(&phase_shift(d, phi)?, Subsystem::Ancilla, &psi2, layout)?;
        let psi4 = apply_on_subsystem(&qft_inverse(d)?, Subsystem::Ancilla, &psi3, layout)?;
        let drift = (psi4.norm() - 1.0).abs();
        if drift > tol::NORM_GUARD {
            return Err(Error::NumericGuard(format!(
                "circuit output norm drifted by {drift:e}"
            )));
        }
        Ok(psi4)
    }

    /// `A(n) = (⟨n| ⊗ ⟨ψ|)|Ψ₄⟩` in Dirichlet-kernel form.
    ///
    /// With `β_x = ω_x t/2 + πn/d`:
    /// `A(n) = (1/d) Σ_x |c_x|² e^{-i(d-1)β_x} sin(dβ_x)/sin(β_x)`.
    pub fn projection_amplitude(&self, n: usize) -> Result<Complex64> {
        let d = self.ancilla_dim();
        if n >= d {
            return Err(Error::IndexOutOfRange { index: n, dim: d });
        }
        let df = d as f64;
        let shift = PI * n as f64 / df;
        let sum: Complex64 = self
            .psi
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(x, c)| {
                let beta = self.detuning(x) * self.time / 2.0 + shift;
                let phase = Complex64::from_polar(1.0, -(df - 1.0) * beta);
                phase * (c.norm_sqr() * dirichlet_ratio(d, beta))
            })
            .sum();
        Ok(sum / df)
    }

    /// Ancilla outcome probabilities from the circuit marginals.
    pub fn measurement_distribution(&self) -> Result<MeasurementDistribution> {
        let psi4 = self.run_circuit()?;
        let sys = self.layout.system_dim();
        let probs = psi4
            .amplitudes()
            .chunks(sys)
            .map(|block| block.iter().map(|a| a.norm_sqr()).sum())
            .collect();
        Ok(MeasurementDistribution { probs })
    }

    /// `⟨Z_d ⊗ 1⟩` through the kernel sum `Σ_x |c_x|² K_d(ω_x, t)`.
    pub fn expectation_value(&self) -> Complex64 {
        let d = self.ancilla_dim();
        self.psi
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(x, c)| kernel(d, self.detuning(x), self.time) * c.norm_sqr())
            .sum()
    }

    /// `⟨Z_d ⊗ 1⟩` evaluated on the simulated final state.
    pub fn expectation_value_circuit(&self) -> Result<Complex64> {
        let dist = self.measurement_distribution()?;
        dist.clock_expectation()
    }

    pub fn loschmidt_amplitude(&self) -> Complex64 {
        loschmidt_amplitude(self.psi, self.hamiltonian, self.trial_energy, self.time)
            .expect("run dimensions validated at construction")
    }
}

/// `sin(dβ)/sin(β)` with the removable singularities at `β = kπ` filled in.
fn dirichlet_ratio(d: usize, beta: f64) -> f64 {
    let k = (beta / PI).round();
    let eps = beta - k * PI;
    let df = d as f64;
    // (-1)^{k(d-1)}
    let odd = (k.abs() as u64 % 2 == 1) && d.is_multiple_of(2);
    let sign = if odd { -1.0 } else { 1.0 };
    let ratio = if eps.sin().abs() < 1e-8 {
        df * (1.0 - (df * df - 1.0) * eps * eps / 6.0)
    } else {
        (df * eps).sin() / eps.sin()
    };
    sign * ratio
}

/// Ancilla measurement statistics `P_d(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementDistribution {
    pub probs: Vec<f64>,
}

impl MeasurementDistribution {
    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// `Σ_n P(n) e^{i2πn/d}`
    pub fn clock_expectation(&self) -> Result<Complex64> {
        let z = clock_op(self.probs.len())?;
        Ok(self
            .probs
            .iter()
            .zip(z.diagonal())
            .map(|(p, w)| w * *p)
            .sum())
    }
}

fn kernel(d: usize, omega: f64, t: f64) -> Complex64 {
    let df = d as f64;
    let low = omega * t;
    let high = ((df - 1.0) * omega) * t;
    // (d-1) e^{-iωt} + e^{+i(d-1)ωt}, divided by d once so that K(0) is exactly 1
    let re = (df - 1.0) * low.cos() + high.cos();
    let im = -(df - 1.0) * low.sin() + high.sin();
    Complex64::new(re / df, im / df)
}

/// Rodeo kernel `K_d(ω, t) = ((d-1)/d) e^{-iωt} + (1/d) e^{i(d-1)ωt}`.
pub fn rodeo_kernel(d: usize, omega: f64, t: f64) -> Result<Complex64> {
    if d < 2 {
        return Err(invalid(format!("ancilla dimension must be >= 2, got {d}")));
    }
    Ok(kernel(d, omega, t))
}

/// `L(t) = Σ_x |c_x|² e^{-i(E_x - E)t}`
pub fn loschmidt_amplitude(
    psi: &StateVector,
    h: &DiagonalHamiltonian,
    trial_energy: f64,
    t: f64,
) -> Result<Complex64> {
    if psi.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: psi.dim(),
        });
    }
    Ok(psi
        .amplitudes()
        .iter()
        .zip(h.energies())
        .map(|(c, e)| Complex64::from_polar(c.norm_sqr(), -(e - trial_energy) * t))
        .sum())
}

/// `((d-1)/d) L + (1/d) (L*)^{d-1}`.
///
/// Equals the expectation value only for eigenstate inputs; for general
/// superpositions it is a separate diagnostic.
pub fn h_from_loschmidt(d: usize, loschmidt: Complex64) -> Result<Complex64> {
    if d < 2 {
        return Err(invalid(format!("ancilla dimension must be >= 2, got {d}")));
    }
    let df = d as f64;
    Ok(loschmidt * ((df - 1.0) / df) + loschmidt.conj().powu(d as u32 - 1) / df)
}

/// Overlap-weighted spectrum `{(E_level, Σ_{x ∈ level} |c_x|²)}` of an input state.
///
/// Levels with zero weight are dropped; energies are merged only on exact
/// equality so the kernel sum is unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSpectrum {
    levels: Vec<(f64, f64)>,
}

impl WeightedSpectrum {
    pub fn from_state(psi: &StateVector, h: &DiagonalHamiltonian) -> Result<Self> {
        if psi.dim() != h.dim() {
            return Err(Error::DimensionMismatch {
                expected: h.dim(),
                found: psi.dim(),
            });
        }
        let mut pairs: Vec<(f64, f64)> = psi
            .amplitudes()
            .iter()
            .zip(h.energies())
            .filter(|(c, _)| c.norm_sqr() > 0.0)
            .map(|(c, e)| (*e, c.norm_sqr()))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut levels: Vec<(f64, f64)> = Vec::new();
        for (e, w) in pairs {
            match levels.last_mut() {
                Some(last) if last.0 == e => last.1 += w,
                _ => levels.push((e, w)),
            }
        }
        Ok(Self { levels })
    }

    pub fn from_levels(levels: Vec<(f64, f64)>) -> Result<Self> {
        if levels
            .iter()
            .any(|(e, w)| !e.is_finite() || !w.is_finite() || *w < 0.0)
        {
            return Err(invalid(
                "levels need finite energies and non-negative weights",
            ));
        }
        Ok(Self { levels })
    }

    pub fn levels(&self) -> &[(f64, f64)] {
        &self.levels
    }

    pub fn total_weight(&self) -> f64 {
        self.levels.iter().map(|(_, w)| w).sum()
    }

    /// `Σ_levels w K_d(E_level - E, t)`.
    pub fn expectation(&self, d: usize, trial_energy: f64, t: f64) -> Complex64 {
        self.levels
            .iter()
            .map(|(e, w)| {
                let k = kernel(d, e - trial_energy, t);
                if *w == 1.0 {
                    k
                } else {
                    k * *w
                }
            })
            .sum()
    }
}
