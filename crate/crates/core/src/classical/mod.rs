//! The classical kicked top for `p = π/2`.
//!
//! The stroboscopic map is
//!
//! ```text
//! X' =  Z cos(κX) + Y sin(κX)
//! Y' = -Z sin(κX) + Y cos(κX)
//! Z' = -X
//! ```
//!
//! acting on unit vectors `(X, Y, Z) = J / j`.

mod bifurcation;
mod map;
mod orbits;
mod search;
mod state;

pub use bifurcation::{bifurcation_scan, BifurcationScan};
pub use map::{
    fibonacci_sphere, jacobian, step, stroboscopic_ensemble, trajectory, KickedTopMap,
};
pub use orbits::{
    catalog_orbit, monodromy, orbit_catalog, orbit_stability, solve_x0, x0_residual,
    CatalogEntry, Existence, OrbitCatalog, OrbitLabel, PeriodicOrbit, STABILITY_TOLERANCE,
};
pub use search::{find_periodic_orbits, OrbitSearch, SeedGrid};
pub use state::{ClassicalState, KickedTopParams};
