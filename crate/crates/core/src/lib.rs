//! Pseudospectral integration of weakly nonlinear wave equations on periodic
//! domains.
//!
//! A weakly nonlinear wave system couples a dominant skew-adjoint constant
//! coefficient operator with a lower-order pointwise nonlinearity,
//!
//! ```text
//! d/dt u_i = L_i(D) u_i + M_i(D) G_i(u),    deg M_i < deg L_i,  G(0) = 0,
//! ```
//!
//! and is advanced in time with the trapezoidal rule. The implicit update is
//! solved by fixed-point iteration of a map whose linear parts are diagonal
//! on the Fourier side: a unit-modulus Cayley multiplier and a low-pass
//! filter multiplier. KdV, NLS, and the Sine-Gordon first-order system ship
//! as built-ins, together with diagnostics that measure the filter-norm
//! scaling in the step size and the empirical contraction of the iteration.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the companion CLI
//! crate carries all file formats and IO.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod diagnostics;
pub mod equations;
pub mod spectral;
pub mod stepper;

pub use equations::{kdv_system, nls_system, sge_system, EquationSystem, InitialCondition};
pub use spectral::{Field, NyquistPolicy, SpectralGrid, Spectrum};
pub use stepper::{IterationMode, SolverSession, StepConfig};
