//! Spin-j kinematics: operators, coherent states and Husimi distributions.
//!
//! States are stored in the `|j, m⟩` basis ordered `m = j, j-1, ..., -j`, so
//! amplitude index `k` corresponds to `m = j - k`. `ħ = 1` throughout.

mod coherent;
mod husimi;
mod operators;
mod quadrature;
mod sphere;
mod state;

pub use coherent::{
    overlap_analytic, overlap_numeric, rotation_operator, spin_coherent_state,
    spin_coherent_state_by_rotation,
};
pub use husimi::{husimi, HusimiGrid, HusimiResolution, HusimiSource};
pub use operators::{angular_momentum_operators, AngularMomentum};
pub use quadrature::gauss_legendre;
pub use sphere::SphericalPoint;
pub use state::{Spin, SpinState};

pub(crate) use coherent::coherent_magnitudes;
pub(crate) use operators::raising_coefficients;
