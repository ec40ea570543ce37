//! Qudit Rodeo algorithm simulator.
//!
//! The crate evolves a joint ancilla-qudit + system-register statevector
//! through the Rodeo circuit (QFT, controlled time evolution, phase shift,
//! inverse QFT), estimates spectral amplitudes by averaging the clock-operator
//! expectation value over Gaussian-sampled evolution times, and implements the
//! single-state microcanonical protocol for Gaussian-smoothed density of
//! states and entropy. Every stochastic quantity has a closed-form reference
//! alongside it.
//!
//! Layout of the joint register: the ancilla is the most significant
//! subsystem, so joint index `n * d'^N + x` addresses ancilla level `n`
//! and system basis state `x`.
//!
//! ```
//! use rodeo_core::hamiltonians::{ising_diagonal, Spin};
//! use rodeo_core::engine::{rodeo_kernel, RodeoRun};
//! use rodeo_core::qudit::make_basis_state;
//!
//! let h = ising_diagonal(Spin::Half, 5, 1.0).unwrap();
//! let psi = make_basis_state(32, 0).unwrap();
//! let run = RodeoRun::new(3, &h, &psi, -5.0, 0.7).unwrap();
//! // On resonance the kernel is identically one.
//! assert!((run.expectation_value().re - 1.0).abs() < 1e-12);
//! assert_eq!(rodeo_kernel(3, 0.0, 1.0).unwrap().re, 1.0);
//! ```

pub mod engine;
pub mod ensemble;
pub mod error;
pub mod gates;
pub mod hamiltonians;
pub mod microcanonical;
pub mod qudit;
pub mod stats;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Numerical tolerances shared across the crate.
pub mod tol {
    /// Structural identities (unitarity, gate algebra, tensor products).
    pub const STRUCTURAL: f64 = 1e-12;
    /// Checks on states that went through a full circuit.
    pub const EVOLVED: f64 = 1e-10;
    /// Absolute tolerance used to merge degenerate energy levels.
    pub const ENERGY_MATCH: f64 = 1e-9;
    /// Norm drift beyond this trips the numeric guard.
    pub const NORM_GUARD: f64 = 1e-8;
    /// Norm error accepted on user-supplied superpositions before they are
    /// renormalized; covers amplitudes written with seven decimals.
    pub const INPUT_NORM: f64 = 1e-7;
}

/// Largest system register (number of basis states) the builders accept.
pub const MAX_BASIS_STATES: usize = 1 << 20;
