//! Quantum kicked top: the Floquet operator, evolution, survival
//! probabilities and Husimi time series.

mod operator;
mod rotation;
mod series;
mod survival;
mod tridiagonal;

pub use operator::{evolve, FloquetOperator, Propagator};
pub use rotation::{RotationCache, RotationFactor};
pub use series::{husimi_time_average, husimi_time_average_from, husimi_timeseries};
pub use survival::{
    projection_series, survival_fixed_point, survival_for_orbit, survival_from_state,
    survival_period_n, PowerStrategy, SurvivalOptions, SurvivalResult,
};
pub use tridiagonal::SymmetricTridiagonal;
