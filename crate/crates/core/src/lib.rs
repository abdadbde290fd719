//! A numerical laboratory for the kicked top.
//!
//! The crate covers both sides of the quantum-classical comparison:
//!
//! - [`classical`]: the stroboscopic map on the unit sphere for `p = π/2`, its
//!   analytic Jacobian, the closed-form catalog of fixed points and low-period
//!   orbits, stability and bifurcation scans, and a Newton orbit finder.
//! - [`spin`]: angular momentum operators, spin coherent states, the coherent
//!   state overlap law and Husimi distributions on a Gauss–Legendre grid.
//! - [`floquet`]: the one-period unitary, state evolution, survival
//!   probabilities and Husimi time series.
//! - [`correspondence`]: orthogonality criteria for coherent states centred on
//!   periodic orbits, the minimum spin needed to satisfy them, and survival
//!   scans over `(j, κ)`.
//! - [`cli`]: the batch front end used by the `kicktop` binary.

pub mod classical;
pub mod cli;
pub mod correspondence;
mod error;
pub mod floquet;
pub mod io;
pub mod spin;

pub use error::{Error, Result};
pub use num_complex::Complex64;
