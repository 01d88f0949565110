//! Equilibrium profiles for attractive-repulsive power-law interactions.
//!
//! The interaction kernel is `K(x) = |x|^a/a - |x|^b/b` with `a > b > -d`
//! (a power of zero stands for `log|x|`). A density is in equilibrium when
//! the induced potential `K * rho` is constant on the support of `rho` and
//! at least that constant outside it. This crate constructs the explicitly
//! known radial equilibria, evaluates the singular integrals that appear in
//! their derivation, and verifies the constancy conditions by independent
//! quadrature and by particle simulation.
//!
//! The crate is `no_std` compatible (it allocates, but performs no IO);
//! the companion CLI crate wires these routines to files and a terminal.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod float;
pub mod fredholm1d;
pub mod kernel;
pub mod quadrature;
pub mod specfun;
pub mod steady1d;
pub mod steadyhd;
pub mod tol;
pub mod verify;

pub use error::Error;
pub use kernel::PowerLawKernel;
pub use quadrature::{QuadratureSpec, RadialDensity};

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
