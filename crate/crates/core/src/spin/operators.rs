use nalgebra::DMatrix;
use num_complex::Complex64;

use super::Spin;

/// Dense `(Jx, Jy, Jz)` for one spin multiplet.
#[derive(Clone, Debug)]
pub struct AngularMomentum {
    pub jx: DMatrix<Complex64>,
    pub jy: DMatrix<Complex64>,
    pub jz: DMatrix<Complex64>,
}

/// `c[k] = ⟨j, m+1| J+ |j, m⟩` with `m = j - k - 1`, i.e. the element linking
/// basis index `k + 1` to index `k`.
pub(crate) fn raising_coefficients(spin: Spin) -> Vec<f64> {
    let casimir = spin.casimir();
    (0..spin.dim().saturating_sub(1))
        .map(|k| {
            let m = spin.m(k + 1);
            (casimir - m * (m + 1.0)).max(0.0).sqrt()
        })
        .collect()
}

/// Builds the angular momentum matrices from the ladder operators.
pub fn angular_momentum_operators(spin: Spin) -> AngularMomentum {
    let n = spin.dim();
    let c = raising_coefficients(spin);
    let mut jx = DMatrix::zeros(n, n);
    let mut jy = DMatrix::zeros(n, n);
    let jz = DMatrix::from_fn(n, n, |r, col| {
        if r == col {
            Complex64::new(spin.m(r), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    for (k, &ck) in c.iter().enumerate() {
        // J+ has ck at (k, k+1); J- = J+†.
        jx[(k, k + 1)] = Complex64::new(ck / 2.0, 0.0);
        jx[(k + 1, k)] = Complex64::new(ck / 2.0, 0.0);
        jy[(k, k + 1)] = Complex64::new(0.0, -ck / 2.0);
        jy[(k + 1, k)] = Complex64::new(0.0, ck / 2.0);
    }
    AngularMomentum { jx, jy, jz }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs(m: &DMatrix<Complex64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn spin_half_is_pauli_over_two() {
        let ops = angular_momentum_operators(Spin::new(0.5).unwrap());
        let h = Complex64::new(0.5, 0.0);
        let i = Complex64::new(0.0, 0.5);
        assert_eq!(ops.jz[(0, 0)], h);
        assert_eq!(ops.jz[(1, 1)], -h);
        assert_eq!(ops.jx[(0, 1)], h);
        assert_eq!(ops.jx[(1, 0)], h);
        assert_eq!(ops.jy[(0, 1)], -i);
        assert_eq!(ops.jy[(1, 0)], i);
    }

    #[test]
    fn su2_algebra_and_casimir() {
        for twice in [0u32, 1, 2, 3, 7, 20, 51, 100, 200] {
            let spin = Spin::from_twice(twice);
            let AngularMomentum { jx, jy, jz } = angular_momentum_operators(spin);
            let i = Complex64::new(0.0, 1.0);
            let comm_xy = &jx * &jy - &jy * &jx - &jz * i;
            let comm_yz = &jy * &jz - &jz * &jy - &jx * i;
            let comm_zx = &jz * &jx - &jx * &jz - &jy * i;
            // products of ~j²-sized entries carry a few ulps of j(j+1)
            let tol = 1e-12f64.max(8.0 * f64::EPSILON * spin.casimir());
            assert!(max_abs(&comm_xy) < tol, "j={spin} err={:e}", max_abs(&comm_xy));
            assert!(max_abs(&comm_yz) < tol, "j={spin}");
            assert!(max_abs(&comm_zx) < tol, "j={spin}");
            let n = spin.dim();
            let cas = &jx * &jx + &jy * &jy + &jz * &jz
                - DMatrix::<Complex64>::identity(n, n) * Complex64::new(spin.casimir(), 0.0);
            assert!(max_abs(&cas) < 1e-10, "j={spin} err={:e}", max_abs(&cas));
        }
    }
}
