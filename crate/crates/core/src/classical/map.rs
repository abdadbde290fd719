use std::f64::consts::PI;

use nalgebra::Matrix3;
use rayon::prelude::*;

use super::{ClassicalState, KickedTopParams};
use crate::spin::SphericalPoint;
use crate::Result;

const RENORM_TOL: f64 = 1e-12;

/// The `p = π/2` stroboscopic map with its parameters validated once.
#[derive(Clone, Copy, Debug)]
pub struct KickedTopMap {
    kappa: f64,
}

impl KickedTopMap {
    /// Fails with [`crate::Error::UnsupportedRotationAngle`] unless `p = π/2`.
    pub fn new(params: &KickedTopParams) -> Result<Self> {
        params.require_quarter_turn()?;
        Ok(Self {
            kappa: params.kappa,
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn step(&self, s: ClassicalState) -> ClassicalState {
        let (x, y, z) = (s.x(), s.y(), s.z());
        let (sn, cs) = (self.kappa * x).sin_cos();
        let nx = z * cs + y * sn;
        let ny = -z * sn + y * cs;
        let nz = -x;
        let n2 = nx * nx + ny * ny + nz * nz;
        if (n2.sqrt() - 1.0).abs() > RENORM_TOL {
            let n = n2.sqrt();
            ClassicalState::from_unit(nx / n, ny / n, nz / n)
        } else {
            ClassicalState::from_unit(nx, ny, nz)
        }
    }

    /// `Fⁿ(s)`.
    pub fn iterate(&self, mut s: ClassicalState, n: usize) -> ClassicalState {
        for _ in 0..n {
            s = self.step(s);
        }
        s
    }

    /// Analytic `∂F/∂(X, Y, Z)` at `s`.
    pub fn jacobian(&self, s: ClassicalState) -> Matrix3<f64> {
        let k = self.kappa;
        let (x, y, z) = (s.x(), s.y(), s.z());
        let (sn, cs) = (k * x).sin_cos();
        Matrix3::new(
            k * (y * cs - z * sn), sn, cs,
            -k * (z * cs + y * sn), cs, -sn,
            -1.0, 0.0, 0.0,
        )
    }
}

/// One kick of the map. Rejects `p ≠ π/2`.
pub fn step(state: ClassicalState, params: &KickedTopParams) -> Result<ClassicalState> {
    Ok(KickedTopMap::new(params)?.step(state))
}

/// Jacobian of one kick at `state`. Rejects `p ≠ π/2`.
pub fn jacobian(state: ClassicalState, params: &KickedTopParams) -> Result<Matrix3<f64>> {
    Ok(KickedTopMap::new(params)?.jacobian(state))
}

/// `[s, F(s), ..., F^{n_kicks}(s)]`.
pub fn trajectory(
    state: ClassicalState,
    params: &KickedTopParams,
    n_kicks: usize,
) -> Result<Vec<ClassicalState>> {
    let map = KickedTopMap::new(params)?;
    let mut out = Vec::with_capacity(n_kicks + 1);
    out.push(state);
    let mut s = state;
    for _ in 0..n_kicks {
        s = map.step(s);
        out.push(s);
    }
    Ok(out)
}

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653; // π (3 - √5)

/// Fibonacci-lattice covering of the sphere with `n` points.
///
/// `seed` rotates the lattice about `z` by `seed` golden angles, so seed 0 is
/// the canonical lattice.
pub fn fibonacci_sphere(n: usize, seed: u64) -> Vec<ClassicalState> {
    let offset = (seed as f64 * GOLDEN_ANGLE).rem_euclid(2.0 * PI);
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = i as f64 * GOLDEN_ANGLE + offset;
            ClassicalState::from_unit(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// Phase-portrait data: `n_initial` Fibonacci-lattice initial conditions,
/// each iterated `n_kicks` times, reporting the `(θ, φ)` of every post-kick
/// point (initial points excluded). Output is grouped by trajectory.
pub fn stroboscopic_ensemble(
    n_initial: usize,
    n_kicks: usize,
    params: &KickedTopParams,
    seed: u64,
) -> Result<Vec<SphericalPoint>> {
    let map = KickedTopMap::new(params)?;
    let starts = fibonacci_sphere(n_initial, seed);
    let per_traj: Vec<Vec<SphericalPoint>> = starts
        .par_iter()
        .map(|&s0| {
            let mut s = s0;
            (0..n_kicks)
                .map(|_| {
                    s = map.step(s);
                    s.to_spherical()
                })
                .collect()
        })
        .collect();
    Ok(per_traj.concat())
}
