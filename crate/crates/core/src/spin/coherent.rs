use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::sphere::norm3;
use super::{angular_momentum_operators, SphericalPoint, Spin, SpinState};
use crate::Result;

/// `x^e` for a nonnegative base, with the convention `0^0 = 1`, evaluated as
/// its logarithm so that large exponents do not underflow prematurely.
fn ln_pow(base: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        0.0
    } else {
        exponent * base.ln()
    }
}

/// Moduli `a_k(θ) = sqrt(C(2j, k)) cos^{2j-k}(θ/2) sin^k(θ/2)` of the coherent
/// state amplitudes, `k = j - m`.
pub(crate) fn coherent_magnitudes(spin: Spin, theta: f64) -> Vec<f64> {
    let n = spin.twice() as usize;
    let (s, c) = (theta / 2.0).sin_cos();
    let (s, c) = (s.abs(), c.abs());
    let mut ln_binom = 0.0;
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        if k > 0 {
            ln_binom += ((n - k + 1) as f64).ln() - (k as f64).ln();
        }
        let ln_a = 0.5 * ln_binom + ln_pow(c, (n - k) as f64) + ln_pow(s, k as f64);
        out.push(ln_a.exp());
    }
    out
}

/// The spin coherent state `|θ, φ⟩ = exp[iθ(Jx sinφ - Jy cosφ)] |j, j⟩`.
///
/// Uses the closed form `⟨j, m|θ, φ⟩ = a_{j-m}(θ) e^{i(j-m)φ}`; the `m = j`
/// amplitude is real and nonnegative.
pub fn spin_coherent_state(spin: Spin, point: SphericalPoint) -> SpinState {
    let mags = coherent_magnitudes(spin, point.theta);
    let amps = DVector::from_iterator(
        spin.dim(),
        mags.iter()
            .enumerate()
            .map(|(k, &a)| Complex64::from_polar(a, k as f64 * point.phi)),
    );
    SpinState::from_raw(spin, amps)
}

/// Dense rotation `R(θ, φ) = exp[iθ(Jx sinφ - Jy cosφ)]`, exponentiated through
/// the eigendecomposition of the Hermitian generator.
pub fn rotation_operator(spin: Spin, point: SphericalPoint) -> DMatrix<Complex64> {
    let ops = angular_momentum_operators(spin);
    let (sp, cp) = point.phi.sin_cos();
    let generator = &ops.jx * Complex64::new(sp, 0.0) - &ops.jy * Complex64::new(cp, 0.0);
    let eig = generator.symmetric_eigen();
    let phases = DVector::from_iterator(
        spin.dim(),
        eig.eigenvalues
            .iter()
            .map(|&lambda| Complex64::from_polar(1.0, point.theta * lambda)),
    );
    let v = &eig.eigenvectors;
    v * DMatrix::from_diagonal(&phases) * v.adjoint()
}

/// Coherent state obtained by applying [`rotation_operator`] to `|j, j⟩`.
///
/// Slow (`O(n³)`); it fixes the phase convention that the closed form in
/// [`spin_coherent_state`] must reproduce.
pub fn spin_coherent_state_by_rotation(spin: Spin, point: SphericalPoint) -> SpinState {
    let r = rotation_operator(spin, point);
    SpinState::from_raw(spin, r.column(0).into_owned())
}

/// `|⟨a|b⟩| = [cos(χ/2)]^{2j}` for coherent states centred on `a` and `b`,
/// with `cos(χ/2) = |u_a + u_b| / 2`.
pub fn overlap_analytic(a: SphericalPoint, b: SphericalPoint, spin: Spin) -> f64 {
    let u = a.to_cartesian();
    let v = b.to_cartesian();
    let half_cos = (norm3([u[0] + v[0], u[1] + v[1], u[2] + v[2]]) / 2.0).min(1.0);
    if spin.twice() == 0 {
        return 1.0;
    }
    half_cos.powi(spin.twice() as i32)
}

/// `⟨a|b⟩` from the amplitude vectors.
pub fn overlap_numeric(a: &SpinState, b: &SpinState) -> Result<Complex64> {
    a.inner(b)
}
