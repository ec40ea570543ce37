//! Qudit gates used by the Rodeo circuit.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::hamiltonians::DiagonalHamiltonian;
use crate::qudit::{RegisterLayout, StateVector, Subsystem, UnitaryOperator};

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(invalid(format!("qudit dimension must be >= 2, got {d}")));
    }
    Ok(())
}

/// Trial phase of the ancilla phase shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseParameter(f64);

impl PhaseParameter {
    pub fn new(phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(invalid("phase must be finite"));
        }
        Ok(Self(phi))
    }

    /// `phi = E d t / 2` for trial energy `E`, ancilla dimension `d` and time `t`.
    pub fn from_trial_energy(energy: f64, d: usize, t: f64) -> Result<Self> {
        Self::new(energy * d as f64 * t / 2.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Operator that is diagonal in the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOperator {
    diagonal: Vec<Complex64>,
}

impl DiagonalOperator {
    pub fn new(diagonal: Vec<Complex64>) -> Result<Self> {
        if diagonal.is_empty() {
            return Err(invalid("diagonal operator must have positive dimension"));
        }
        if diagonal.iter().any(|z| !z.is_finite()) {
            return Err(invalid("diagonal operator contains non-finite entries"));
        }
        Ok(Self { diagonal })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            diagonal: vec![Complex64::new(1.0, 0.0); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[Complex64] {
        &self.diagonal
    }

    /// Largest `||z_k| - 1|` over the diagonal.
    pub fn unitarity_defect(&self) -> f64 {
        self.diagonal
            .iter()
            .map(|z| (z.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rhs.dim(),
            });
        }
        Ok(Self {
            diagonal: self
                .diagonal
                .iter()
                .zip(&rhs.diagonal)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn to_dense(&self) -> UnitaryOperator {
        UnitaryOperator::from_fn(self.dim(), |r, c| {
            if r == c {
                self.diagonal[r]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

/// `H_d` with entries `ω^{ℓn}/√d`, `ω = e^{i2π/d}`.
pub fn qft(d: usize) -> Result<UnitaryOperator> {
    check_dim(d)?;
    let norm = 1.0 / (d as f64).sqrt();
    Ok(UnitaryOperator::from_fn(d, |l, n| {
        root_of_unity(d, l * n) * norm
    }))
}

/// `H_d^†` with entries `e^{-i2π nℓ/d}/√d`.
pub fn qft_inverse(d: usize) -> Result<UnitaryOperator> {
    check_dim(d)?;
    let norm = 1.0 / (d as f64).sqrt();
    Ok(UnitaryOperator::from_fn(d, |n, l| {
        root_of_unity(d, l * n).conj() * norm
    }))
}

/// `e^{i2πk/d}`, reducing `k` mod `d` first so large exponents stay exact.
fn root_of_unity(d: usize, k: usize) -> Complex64 {
    let k = k % d;
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64)
}

/// `P_d(φ) = Σ_n ω^{φn/π}|n⟩⟨n| = Σ_n e^{i2φn/d}|n⟩⟨n|`.
pub fn phase_shift(d: usize, phi: PhaseParameter) -> Result<DiagonalOperator> {
    check_dim(d)?;
    let phi = phi.value();
    let diagonal = (0..d)
        .map(|n| Complex64::from_polar(1.0, 2.0 * phi * n as f64 / d as f64))
        .collect();
    Ok(DiagonalOperator { diagonal })
}

/// Generalized Pauli shift: `X_d|ℓ⟩ = |(ℓ+1) mod d⟩`.
pub fn shift_op(d: usize) -> Result<UnitaryOperator> {
    check_dim(d)?;
    Ok(UnitaryOperator::from_fn(d, |r, c| {
        if r == (c + 1) % d {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Generalized Pauli clock: `Z_d|n⟩ = e^{i2πn/d}|n⟩`.
pub fn clock_op(d: usize) -> Result<DiagonalOperator> {
    check_dim(d)?;
    Ok(DiagonalOperator {
        diagonal: (0..d).map(|n| root_of_unity(d, n)).collect(),
    })
}

/// `e^{-iℋt}` for a Hamiltonian diagonal in the computational basis (ħ = 1).
pub fn evolution_operator(h: &DiagonalHamiltonian, t: f64) -> Result<DiagonalOperator> {
    if !t.is_finite() {
        return Err(invalid("evolution time must be finite"));
    }
    let diagonal = h
        .energies()
        .iter()
        .map(|e| Complex64::from_polar(1.0, -e * t))
        .collect();
    Ok(DiagonalOperator { diagonal })
}

/// Dense block form of `C(U) = Σ_n |n⟩⟨n| ⊗ U^n` over a `d`-level control.
///
/// Only used as a reference; the circuit applies controlled diagonal
/// evolutions through [`apply_controlled_diagonal`].
pub fn controlled_power(u: &UnitaryOperator, d: usize) -> Result<UnitaryOperator> {
    check_dim(d)?;
    let m = u.dim();
    let mut powers = Vec::with_capacity(d);
    powers.push(UnitaryOperator::identity(m));
    for n in 1..d {
        let next = powers[n - 1].matmul(u)?;
        powers.push(next);
    }
    Ok(UnitaryOperator::from_fn(d * m, |r, c| {
        let (bn, bc) = (r / m, c / m);
        if bn == bc {
            powers[bn].get(r % m, c % m)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Applies `C(U)` for diagonal `U` as a phase map: `|n⟩|x⟩ → U_xx^n |n⟩|x⟩`.
pub fn apply_controlled_diagonal(
    u: &DiagonalOperator,
    state: &StateVector,
    layout: &RegisterLayout,
) -> Result<StateVector> {
    if u.dim() != layout.system_dim() {
        return Err(Error::DimensionMismatch {
            expected: layout.system_dim(),
            found: u.dim(),
        });
    }
    if state.dim() != layout.joint_dim() {
        return Err(Error::DimensionMismatch {
            expected: layout.joint_dim(),
            found: state.dim(),
        });
    }
    let sys = layout.system_dim();
    let mut amps = state.amplitudes().to_vec();
    let mut power = vec![Complex64::new(1.0, 0.0); sys];
    for block in amps.chunks_mut(sys).skip(1) {
        for ((a, p), z) in block.iter_mut().zip(power.iter_mut()).zip(u.diagonal()) {
            *p *= z;
            *a *= *p;
        }
    }
    StateVector::from_amplitudes(amps)
}

/// Applies a diagonal operator to one subsystem of the joint register.
pub fn apply_diagonal_on_subsystem(
    op: &DiagonalOperator,
    target: Subsystem,
    state: &StateVector,
    layout: &RegisterLayout,
) -> Result<StateVector> {
    let expected = match target {
        Subsystem::Ancilla => layout.ancilla_dim(),
        Subsystem::System => layout.system_dim(),
    };
    if op.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: op.dim(),
        });
    }
    if state.dim() != layout.joint_dim() {
        return Err(Error::DimensionMismatch {
            expected: layout.joint_dim(),
            found: state.dim(),
        });
    }
    let sys = layout.system_dim();
    let mut amps = state.amplitudes().to_vec();
    for (n, block) in amps.chunks_mut(sys).enumerate() {
        match target {
            Subsystem::Ancilla => {
                let z = op.diagonal()[n];
                block.iter_mut().for_each(|a| *a *= z);
            }
            Subsystem::System => {
                block
                    .iter_mut()
                    .zip(op.diagonal())
                    .for_each(|(a, z)| *a *= z);
            }
        }
    }
    StateVector::from_amplitudes(amps)
}
