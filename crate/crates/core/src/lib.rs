//! Optimal quantum signals for indicating a direction with `N` spin-1/2
//! particles.
//!
//! The signal is a superposition of spin coherent states `|j, m(n)>` with a
//! common projection `m` and `j = m..N/2`. Bob measures with the covariant
//! rank-one POVM built from the same ladder. The mean `<cos chi>` between
//! the true and guessed direction is a quadratic form in the signal
//! coefficients whose matrix is tridiagonal, so the best signal is its top
//! eigenvector and `F = (1 + lambda_max) / 2`.
//!
//! Modules:
//! - [`types`]: half-integers, problem families, signal states.
//! - [`orthopoly`]: Jacobi polynomials, Wigner small-d, Gauss-Legendre.
//! - [`optimal`]: coupling matrix and optimal fidelity.
//! - [`povm`]: quadrature oracles and the completeness check.
//! - [`montecarlo`]: seeded simulation of the protocol.
//! - [`asymptotics`]: large-`N` sweeps and extrapolation.
//! - [`cli`], [`plot`]: command-line front end and SVG output.

pub mod asymptotics;
pub mod cli;
pub mod eigen;
pub mod error;
pub mod montecarlo;
pub mod optimal;
pub mod orthopoly;
pub mod plot;
pub mod povm;
pub mod types;

pub use error::{Error, Result};
pub use optimal::{
    build_coupling_matrix, fidelity_sweep, optimal_fidelity, parallel_spin_fidelity,
    CouplingMatrix, SweepMode,
};
pub use types::{
    hilbert_dimension, validate_spec, FidelityResult, HalfInt, ProblemSpec, SignalState,
};
