//! The rotation factor `W = exp(-i p Jy)`.
//!
//! In the `|j, m⟩` basis `Jy = S T S†` with `S = diag(i^k)` and `T` real
//! symmetric tridiagonal, so `W[a, b] = Re(i^(a-b) (C - i S_)[a, b])` with
//! `C = V cos(pΛ) Vᵀ`, `S_ = V sin(pΛ) Vᵀ`. `W` is therefore real orthogonal.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::tridiagonal::SymmetricTridiagonal;
use crate::spin::{raising_coefficients, Spin};

/// Dense real matrix of `exp(-i·angle·Jy)` for one spin.
#[derive(Clone, Debug)]
pub struct RotationFactor {
    spin: Spin,
    angle: f64,
    matrix: DMatrix<f64>,
}

impl RotationFactor {
    pub fn new(spin: Spin, angle: f64) -> Self {
        let n = spin.dim();
        let off: Vec<f64> = raising_coefficients(spin).iter().map(|c| c / 2.0).collect();
        let t = SymmetricTridiagonal::new(vec![0.0; n], off);
        let values = t.eigenvalues();
        let vectors: Vec<Vec<f64>> = values.par_iter().map(|&l| t.eigenvector(l)).collect();
        let v = DMatrix::from_fn(n, n, |r, c| vectors[c][r]);
        drop(vectors);
        let vt = v.transpose();
        let scaled = |f: fn(f64) -> f64| {
            let mut m = v.clone();
            for (c, lambda) in values.iter().enumerate() {
                let s = f(angle * lambda);
                m.column_mut(c).iter_mut().for_each(|x| *x *= s);
            }
            m * &vt
        };
        let cos_part = scaled(f64::cos);
        let sin_part = scaled(f64::sin);
        let matrix = DMatrix::from_fn(n, n, |a, b| match (a + 4 - b % 4) % 4 {
            0 => cos_part[(a, b)],
            1 => sin_part[(a, b)],
            2 => -cos_part[(a, b)],
            _ => -sin_part[(a, b)],
        });
        Self { spin, angle, matrix }
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `max |WᵀW - I|`.
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.matrix.nrows();
        let g = self.matrix.transpose() * &self.matrix - DMatrix::identity(n, n);
        g.amax()
    }
}

/// Shares rotation factors between Floquet operators with the same `(j, p)`.
#[derive(Debug, Default)]
pub struct RotationCache {
    entries: Mutex<HashMap<(u32, u64), Arc<RotationFactor>>>,
}

impl RotationCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the cached factor, building it on first use.
    pub fn get(&self, spin: Spin, angle: f64) -> Arc<RotationFactor> {
        let key = (spin.twice(), angle.to_bits());
        if let Some(hit) = self.entries.lock().expect("cache poisoned").get(&key) {
            return Arc::clone(hit);
        }
        // built outside the lock so distinct spins can be prepared in parallel
        let built = Arc::new(RotationFactor::new(spin, angle));
        let mut map = self.entries.lock().expect("cache poisoned");
        Arc::clone(map.entry(key).or_insert(built))
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops every cached factor for `spin`.
    pub fn evict(&self, spin: Spin) {
        self.entries
            .lock()
            .expect("cache poisoned")
            .retain(|(twice, _), _| *twice != spin.twice());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::rotation_operator;
    use crate::Complex64;
    use std::f64::consts::FRAC_PI_2;

    fn factorial(n: i64) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    /// Wigner small-d matrix element `⟨j m'| exp(-iβJy) |j m⟩`.
    fn wigner_d(twice_j: i64, twice_mp: i64, twice_m: i64, beta: f64) -> f64 {
        let (jpmp, jmmp) = ((twice_j + twice_mp) / 2, (twice_j - twice_mp) / 2);
        let (jpm, jmm) = ((twice_j + twice_m) / 2, (twice_j - twice_m) / 2);
        let dm = (twice_mp - twice_m) / 2;
        let pre = (factorial(jpmp) * factorial(jmmp) * factorial(jpm) * factorial(jmm)).sqrt();
        let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
        let mut sum = 0.0;
        for k in 0..=twice_j {
            if jpm - k < 0 || dm + k < 0 || jmmp - k < 0 {
                continue;
            }
            let sign = if (dm + k) % 2 == 0 { 1.0 } else { -1.0 };
            let den = factorial(jpm - k) * factorial(k) * factorial(dm + k) * factorial(jmmp - k);
            sum += sign * pre / den
                * c.powi((twice_j - dm - 2 * k) as i32)
                * s.powi((dm + 2 * k) as i32);
        }
        sum
    }

    #[test]
    fn matches_wigner_small_d() {
        for twice in [1u32, 2, 3, 4, 7] {
            let spin = Spin::from_twice(twice);
            for beta in [FRAC_PI_2, 0.3, 2.2] {
                let w = RotationFactor::new(spin, beta);
                let n = spin.dim();
                for a in 0..n {
                    for b in 0..n {
                        let tmp = twice as i64 - 2 * a as i64;
                        let tm = twice as i64 - 2 * b as i64;
                        let want = wigner_d(twice as i64, tmp, tm, beta);
                        let got = w.matrix()[(a, b)];
                        assert!((got - want).abs() < 1e-12, "j={twice}/2 ({a},{b}) {got} vs {want}");
                    }
                }
            }
        }
    }

    #[test]
    fn matches_dense_exponential() {
        // exp(-i β Jy) is rotation_operator(θ=β, φ=0)
        let spin = Spin::from_twice(31);
        let w = RotationFactor::new(spin, 1.1);
        let r = rotation_operator(spin, crate::spin::SphericalPoint::new(1.1, 0.0));
        let diff = w.matrix().map(|x| Complex64::new(x, 0.0)) - r;
        assert!(diff.camax() < 1e-11, "{}", diff.camax());
    }

    #[test]
    fn orthogonal_at_moderate_spin() {
        for twice in [0u32, 1, 10, 101, 400] {
            let w = RotationFactor::new(Spin::from_twice(twice), FRAC_PI_2);
            assert!(w.orthogonality_error() < 1e-12, "twice={twice}: {}", w.orthogonality_error());
        }
    }

    #[test]
    fn cache_reuses_factors() {
        let cache = RotationCache::new();
        let a = cache.get(Spin::from_twice(6), FRAC_PI_2);
        let b = cache.get(Spin::from_twice(6), FRAC_PI_2);
        assert!(Arc::ptr_eq(&a, &b));
        let _ = cache.get(Spin::from_twice(7), FRAC_PI_2);
        assert_eq!(cache.len(), 2);
        cache.evict(Spin::from_twice(6));
        assert_eq!(cache.len(), 1);
    }
}
