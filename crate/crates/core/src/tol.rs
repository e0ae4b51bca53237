//! Centralized numerical tolerances.
//!
//! The state catalog contains constants given to 6-7 digits, so tolerances
//! tighter than these would fail on correct code. Everything that compares
//! floats anywhere in the crate pulls its threshold from here.

/// Maximum entrywise deviation from `M = M^dagger` accepted as Hermitian.
pub const HERMITICITY: f64 = 1e-10;

/// Eigenvalues above this (negative) slack count as non-negative.
pub const PSD_SLACK: f64 = -1e-9;

/// Wider positivity slack for states reconstructed from 7-digit literature
/// constants, which cannot satisfy [`PSD_SLACK`].
pub const PSD_SLACK_TRUNCATED: f64 = -1e-6;

/// General-purpose equality tolerance for derived quantities.
pub const EQUALITY: f64 = 1e-9;

/// Tolerance for identities that hold exactly up to rounding.
pub const STRICT: f64 = 1e-12;

/// Trace must match 1 within this for a valid density matrix.
pub const TRACE: f64 = 1e-10;

/// Eigenvalue-pair cutoff in the quantum Fisher information sum; pairs with
/// `lambda_i + lambda_j` at or below this are dropped (rank-deficient states).
pub const QFI_EIGENVALUE_FLOOR: f64 = 1e-12;

/// Default bisection width in the visibility parameter.
pub const BISECTION: f64 = 1e-6;

/// Maximum bisection iterations.
pub const BISECTION_MAX_ITER: usize = 60;

/// Default relative convergence tolerance for the see-saw objective.
pub const SEESAW_CONVERGENCE: f64 = 1e-10;

/// Default iteration cap for one see-saw restart. The objective converges
/// linearly at a per-cycle rate near 0.98, so reaching the relative
/// tolerance above takes on the order of 1500 cycles.
pub const SEESAW_MAX_ITER: usize = 2000;
