use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix3, Matrix3x2, Vector2, Vector3};
use rayon::prelude::*;

use super::{orbit_catalog, ClassicalState, KickedTopMap, KickedTopParams, OrbitLabel, PeriodicOrbit};
use crate::{Error, Result};

/// Tensor grid of Newton seeds: `n_theta × n_phi` cell centres on the sphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedGrid {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl SeedGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        Self { n_theta, n_phi }
    }

    pub fn seeds(&self) -> Vec<ClassicalState> {
        let mut out = Vec::with_capacity(self.n_theta * self.n_phi);
        for i in 0..self.n_theta {
            let theta = PI * (i as f64 + 0.5) / self.n_theta as f64;
            for l in 0..self.n_phi {
                let phi = -PI + 2.0 * PI * (l as f64 + 0.5) / self.n_phi as f64;
                out.push(ClassicalState::from_unit(
                    theta.sin() * phi.cos(),
                    theta.sin() * phi.sin(),
                    theta.cos(),
                ));
            }
        }
        out
    }
}

/// Outcome of a seeded orbit search.
#[derive(Clone, Debug)]
pub struct OrbitSearch {
    pub period: usize,
    /// Distinct orbits of minimal period `period`. Orbits matching a catalog
    /// entry carry its label, others are `Numeric`.
    pub orbits: Vec<PeriodicOrbit>,
    pub converged_seeds: usize,
    pub failed_seeds: usize,
    /// Converged seeds whose minimal period divides `period`.
    pub lower_period_seeds: usize,
}

const NEWTON_MAX_ITER: usize = 60;
const NEWTON_TOL: f64 = 1e-12;
const DEDUP_DIST: f64 = 1e-6;

fn tangent_basis(s: Vector3<f64>) -> Matrix3x2<f64> {
    let helper = if s.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let e1 = (helper - s * s.dot(&helper)).normalize();
    let e2 = s.cross(&e1);
    Matrix3x2::from_columns(&[e1, e2])
}

/// Gauss–Newton on `G(s) = Fⁿ(s) - s`, stepping in the tangent plane and
/// projecting back onto the sphere.
fn newton(map: &KickedTopMap, seed: ClassicalState, period: usize) -> Option<ClassicalState> {
    let mut s = seed;
    for _ in 0..NEWTON_MAX_ITER {
        let mut jac = Matrix3::identity();
        let mut img = s;
        for _ in 0..period {
            jac = map.jacobian(img) * jac;
            img = map.step(img);
        }
        let g = Vector3::from(img.to_array()) - Vector3::from(s.to_array());
        if g.amax() < NEWTON_TOL {
            return Some(s);
        }
        let sv = Vector3::from(s.to_array());
        let basis = tangent_basis(sv);
        let a = (jac - Matrix3::identity()) * basis;
        let normal: Matrix2<f64> = a.transpose() * a;
        let rhs: Vector2<f64> = -(a.transpose() * g);
        let delta = normal.lu().solve(&rhs)?;
        let mut step = basis * delta;
        let len = step.norm();
        if !len.is_finite() {
            return None;
        }
        if len > 0.5 {
            step *= 0.5 / len;
        }
        let next = sv + step;
        s = ClassicalState::normalized(next.x, next.y, next.z).ok()?;
    }
    None
}

fn divisors_below(n: usize) -> impl Iterator<Item = usize> {
    (1..n).filter(move |d| n % d == 0)
}

/// Finds period-`period` orbits by Newton iteration from every seed.
///
/// Converged roots are deduplicated (any point within `1e-6` of a known
/// orbit's points) and roots of lower minimal period are dropped.
/// Non-converging seeds are only counted.
pub fn find_periodic_orbits(
    period: usize,
    params: &KickedTopParams,
    seed_grid: SeedGrid,
) -> Result<OrbitSearch> {
    if period == 0 {
        return Err(Error::InvalidParameter("period must be at least 1".into()));
    }
    let map = KickedTopMap::new(params)?;
    let roots: Vec<Option<ClassicalState>> = seed_grid
        .seeds()
        .par_iter()
        .map(|&seed| newton(&map, seed, period))
        .collect();

    let catalog = orbit_catalog(params)?;
    let mut orbits: Vec<PeriodicOrbit> = Vec::new();
    let (mut converged, mut failed, mut lower) = (0, 0, 0);
    for root in roots {
        let Some(s) = root else {
            failed += 1;
            continue;
        };
        converged += 1;
        if divisors_below(period).any(|d| map.iterate(s, d).max_abs_diff(s) < 1e-8) {
            lower += 1;
            continue;
        }
        let known = orbits
            .iter()
            .any(|o| o.points.iter().any(|p| p.max_abs_diff(s) < DEDUP_DIST));
        if known {
            continue;
        }
        let mut points = Vec::with_capacity(period);
        let mut p = s;
        for _ in 0..period {
            points.push(p);
            p = map.step(p);
        }
        let label = catalog
            .orbits
            .iter()
            .find(|c| {
                c.period() == period
                    && c.points.iter().any(|cp| cp.max_abs_diff(s) < DEDUP_DIST)
            })
            .map(|c| c.label);
        // Reuse the catalog's phase convention when the orbit is known.
        let orbit = match label {
            Some(l) => catalog.get(l).cloned().expect("label came from the catalog"),
            None => match PeriodicOrbit::new(OrbitLabel::Numeric, points, params) {
                Ok(o) => o,
                Err(_) => {
                    failed += 1;
                    converged -= 1;
                    continue;
                }
            },
        };
        orbits.push(orbit);
    }
    Ok(OrbitSearch {
        period,
        orbits,
        converged_seeds: converged,
        failed_seeds: failed,
        lower_period_seeds: lower,
    })
}
