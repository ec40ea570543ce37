//! Dense complex linear algebra for an ancilla qudit plus a multi-qudit
//! system register.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::MAX_BASIS_STATES;

pub type ComplexAmplitude = Complex64;

/// Pure state stored as a dense amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Wraps raw amplitudes. Rejects empty or non-finite input.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(invalid("state vector must have positive dimension"));
        }
        if amps.iter().any(|a| !a.is_finite()) {
            return Err(invalid("state vector contains non-finite amplitudes"));
        }
        Ok(Self { amps })
    }

    /// Like [`StateVector::from_amplitudes`] but also requires unit norm.
    pub fn normalized(amps: Vec<Complex64>, tol: f64) -> Result<Self> {
        let s = Self::from_amplitudes(amps)?;
        let n = s.norm();
        if (n - 1.0).abs() > tol {
            return Err(invalid(format!(
                "state norm {n} differs from 1 by more than {tol}"
            )));
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Probabilities `|c_x|^2` per basis index.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Which half of the joint register an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    Ancilla,
    System,
}

/// Shape of the joint ancilla + system register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegisterLayout {
    ancilla_dim: usize,
    local_dim: usize,
    n_sites: usize,
    system_dim: usize,
}

impl RegisterLayout {
    pub fn new(ancilla_dim: usize, local_dim: usize, n_sites: usize) -> Result<Self> {
        if ancilla_dim < 2 {
            return Err(invalid(format!(
                "ancilla dimension must be >= 2, got {ancilla_dim}"
            )));
        }
        if local_dim < 2 {
            return Err(invalid(format!(
                "local dimension must be >= 2, got {local_dim}"
            )));
        }
        if n_sites < 1 {
            return Err(invalid("register needs at least one site"));
        }
        let system_dim = checked_pow(local_dim, n_sites)?;
        Ok(Self {
            ancilla_dim,
            local_dim,
            n_sites,
            system_dim,
        })
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// `d'^N`
    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    /// `d * d'^N`
    pub fn joint_dim(&self) -> usize {
        self.ancilla_dim * self.system_dim
    }

    pub fn joint_index(&self, ancilla_level: usize, system_index: usize) -> usize {
        ancilla_level * self.system_dim + system_index
    }

    fn subsystem_dim(&self, target: Subsystem) -> usize {
        match target {
            Subsystem::Ancilla => self.ancilla_dim,
            Subsystem::System => self.system_dim,
        }
    }
}

/// `base^exp`, rejecting registers larger than [`MAX_BASIS_STATES`].
pub(crate) fn checked_pow(base: usize, exp: usize) -> Result<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc
            .checked_mul(base)
            .filter(|&v| v <= MAX_BASIS_STATES)
            .ok_or(Error::SizeOverflow(base.saturating_pow(exp as u32)))?;
    }
    Ok(acc)
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl UnitaryOperator {
    /// Builds an operator from row-major entries without checking unitarity.
    pub fn from_rows(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if entries.iter().any(|a| !a.is_finite()) {
            return Err(invalid("operator contains non-finite entries"));
        }
        Ok(Self { dim, entries })
    }

    /// Builds an operator and requires `max |U^dag U - 1| < tol`.
    pub fn unitary(dim: usize, entries: Vec<Complex64>, tol: f64) -> Result<Self> {
        let op = Self::from_rows(dim, entries)?;
        let dev = op.unitarity_defect();
        if dev >= tol {
            return Err(invalid(format!("operator is not unitary (defect {dev:e})")));
        }
        Ok(op)
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| {
            if r == c {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub(crate) fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push(f(r, c));
            }
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let n = self.dim;
        Ok(Self::from_fn(n, |r, c| {
            (0..n).map(|k| self.get(r, k) * rhs.get(k, c)).sum()
        }))
    }

    /// Kronecker product `self ⊗ rhs` (dense; intended for reference checks).
    pub fn kron(&self, rhs: &Self) -> Self {
        let (a, b) = (self.dim, rhs.dim);
        Self::from_fn(a * b, |r, c| self.get(r / b, c / b) * rhs.get(r % b, c % b))
    }

    /// Dense matrix-vector product.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: state.dim(),
            });
        }
        let amps = (0..self.dim)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(state.amplitudes())
                    .map(|(u, a)| u * a)
                    .sum()
            })
            .collect();
        Ok(StateVector { amps })
    }

    /// `max |(U^dag U - 1)_{rc}|`
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for r in 0..n {
            for c in 0..n {
                let v: Complex64 = (0..n).map(|k| self.get(k, r).conj() * self.get(k, c)).sum();
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((v - target).norm());
            }
        }
        worst
    }

    /// Largest elementwise distance to another operator of the same size.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "operator dimensions differ");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `|index⟩` in a `dim`-dimensional space.
pub fn make_basis_state(dim: usize, index: usize) -> Result<StateVector> {
    if dim == 0 || index >= dim {
        return Err(Error::IndexOutOfRange { index, dim });
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[index] = Complex64::new(1.0, 0.0);
    Ok(StateVector { amps })
}

/// `a ⊗ b` with `a` as the most significant factor.
pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    let amps = a
        .amps
        .iter()
        .flat_map(|x| b.amps.iter().map(move |y| x * y))
        .collect();
    StateVector { amps }
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

fn check_joint(state: &StateVector, layout: &RegisterLayout) -> Result<()> {
    if state.dim() != layout.joint_dim() {
        return Err(Error::DimensionMismatch {
            expected: layout.joint_dim(),
            found: state.dim(),
        });
    }
    Ok(())
}

/// Applies `op ⊗ 1` (ancilla) or `1 ⊗ op` (system) to a joint state without
/// building the Kronecker product.
pub fn apply_on_subsystem(
    op: &UnitaryOperator,
    target: Subsystem,
    state: &StateVector,
    layout: &RegisterLayout,
) -> Result<StateVector> {
    check_joint(state, layout)?;
    let expected = layout.subsystem_dim(target);
    if op.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: op.dim(),
        });
    }
    let (d, sys) = (layout.ancilla_dim(), layout.system_dim());
    let old = state.amplitudes();
    let mut amps = vec![Complex64::new(0.0, 0.0); old.len()];
    match target {
        Subsystem::Ancilla => {
            for n in 0..d {
                let row = op.row(n);
                let out = &mut amps[n * sys..(n + 1) * sys];
                for (m, u) in row.iter().enumerate() {
                    if *u == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let src = &old[m * sys..(m + 1) * sys];
                    for (o, s) in out.iter_mut().zip(src) {
                        *o += u * s;
                    }
                }
            }
        }
        Subsystem::System => {
            for n in 0..d {
                let src = &old[n * sys..(n + 1) * sys];
                for (x, o) in amps[n * sys..(n + 1) * sys].iter_mut().enumerate() {
                    *o = op.row(x).iter().zip(src).map(|(u, s)| u * s).sum();
                }
            }
        }
    }
    Ok(StateVector { amps })
}
