//! Numerical toolkit for enhanced binding of N particles coupled to a
//! scalar Bose field (the Nelson model with ultraviolet cutoffs).
//!
//! The crate is organised around the quantities that decide whether the
//! coupled system binds:
//!
//! * [`potentials`] — field-induced effective pair potentials built from
//!   ultraviolet cutoff profiles, the self-energy constant, and
//!   truncated/mollified potential approximations.
//! * [`jacobi`] — Jacobi coordinates, reduced masses, and the closed-form
//!   transform pair used to remove the centre of mass.
//! * [`lattice`] — finite-difference discretisations of every
//!   Schrödinger-type cluster operator on boxed grids.
//! * [`eigensolve`] — restarted Lanczos ground states and low spectra for
//!   the matvec-only lattice operators.
//! * [`binding`] — cluster energy tables, the lowest two-cluster threshold,
//!   the binding gap, critical-coupling search, and the field-correction
//!   margin that certifies a ground state of the full model.
//! * [`asymptotics`] — large-coupling slope checks, ground-state
//!   concentration profiles, smeared potentials, and the variational upper
//!   bound that drives the enhanced-binding argument.
//! * [`fock`] — a desk-scale truncated Fock realisation of the full
//!   particle-field Hamiltonian for weak-coupling-limit cross checks.
//!
//! All energies are in natural units (`ħ = 1`); the dispersion is
//! `ω(k) = |k|` throughout.

pub mod asymptotics;
pub mod binding;
pub mod eigensolve;
pub mod error;
pub mod fock;
pub mod jacobi;
pub mod lattice;
pub mod numerics;
pub mod potentials;

pub use binding::BindingReport;
pub use error::CoreError;
pub use lattice::{GridSpec, LatticeOperator, SymOp};
pub use potentials::{CutoffProfile, PairPotential, ParticleSystem};

/// Crate result alias used by every fallible operation.
pub type Result<T> = std::result::Result<T, CoreError>;
