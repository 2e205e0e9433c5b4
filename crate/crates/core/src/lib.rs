//! Numerical laboratory for the negative spectrum of operators `H = A - σV`
//! with Fourier-multiplier kinetic part `A` and sign-changing potentials `V`.
//!
//! The crate is organized around the objects the computations share:
//!
//! * [`model`] — symbols `a(k)`, potentials, integrability diagnostics,
//!   recurrence classification.
//! * [`specfun`] — Bessel `J0/J1/K0/K1` and the fractional resolvent
//!   constants `c1(α)`, `c2(α)`.
//! * [`grid`] — periodic-box spectral discretization of `H` and the
//!   Birman–Schwinger operator.
//! * [`eigen`] — Lanczos eigensolver, Birman–Schwinger spectral radius and
//!   root finding, Weyl residuals.
//! * [`weak_coupling`] — coupling constant `m`, leading-order secular
//!   predictions, Green-kernel splitting, quadratic-form witness.
//! * [`halfline`] — Neumann half-line shooting, Jost solutions,
//!   σ-expansion coefficients, truncated-form certificates.
//! * [`constructions`] — Bessel-matched wells, the L¹ essential-spectrum
//!   potential, and the transient-regime certificates.
//!
//! With the default `parallel` feature the embarrassingly parallel batch
//! operations (sweeps, per-entry constructions) run on rayon; disabling the
//! feature falls back to equivalent sequential loops.

pub mod constructions;
pub mod eigen;
pub mod error;
pub mod grid;
pub mod halfline;
pub mod model;
pub mod specfun;
pub mod util;
pub mod weak_coupling;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
