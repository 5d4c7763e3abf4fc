//! Eigenvalue branches of the magnetic Laplacian on the unit disc.
//!
//! The disc operator `(-i∇ + bA)²` splits into radial fiber operators
//!
//! ```text
//! H_{m,b} = -d²/dr² - (1/r) d/dr + (m/r - br/2)²   on L²((0,1), r dr)
//! ```
//!
//! one per angular momentum `m`. This crate computes the eigenvalues of
//! those fibers under Dirichlet, Neumann and Robin conditions at `r = 1`
//! in three independent ways:
//!
//! * [`variational`]: closed-form Rayleigh–Ritz upper bounds and Temple
//!   lower bounds built from Laguerre trial states ([`trialstate`]).
//! * [`fibersolver`]: a quadratic finite-element discretisation solved by
//!   Sturm-count bisection and shift-invert inverse iteration.
//! * [`kummeroracle`]: roots in `λ` of the boundary determinant written
//!   with Kummer's function `M(a, c, z)`.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod fibersolver;
pub mod kummeroracle;
pub mod linalg;
pub mod math;
pub mod quadrature;
pub mod specfun;
pub mod trialstate;
pub mod variational;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result, Side};
pub use trialstate::{BoundaryCondition, FiberSpec, TrialCoeffs, TrialState};
