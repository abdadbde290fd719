use std::f64::consts::PI;

/// A direction on the unit sphere in polar coordinates.
///
/// `theta ∈ [0, π]`, `phi ∈ (-π, π]`. At the poles `phi` is set to 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalPoint {
    pub theta: f64,
    pub phi: f64,
}

impl SphericalPoint {
    /// Builds a point, folding `theta` into `[0, π]` and `phi` into `(-π, π]`.
    pub fn new(theta: f64, phi: f64) -> Self {
        let [x, y, z] = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
        if (0.0..=PI).contains(&theta) {
            Self::canonical(theta, wrap_phi(phi))
        } else {
            Self::from_cartesian([x, y, z])
        }
    }

    /// Direction of a (not necessarily normalized) nonzero vector.
    pub fn from_cartesian(v: [f64; 3]) -> Self {
        let [x, y, z] = v;
        let rho = x.hypot(y);
        let theta = rho.atan2(z);
        let phi = if rho == 0.0 { 0.0 } else { y.atan2(x) };
        Self::canonical(theta, wrap_phi(phi))
    }

    pub fn to_cartesian(self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Great-circle angle to another point, accurate for nearly equal and
    /// nearly antipodal points.
    pub fn angle_to(self, other: SphericalPoint) -> f64 {
        angle_between(self.to_cartesian(), other.to_cartesian())
    }

    fn canonical(theta: f64, phi: f64) -> Self {
        let phi = if theta == 0.0 || theta == PI { 0.0 } else { phi };
        Self { theta, phi }
    }
}

fn wrap_phi(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    if p <= -PI {
        p += 2.0 * PI;
    }
    p
}

/// Angle between two unit vectors via `2 atan2(|u - v|, |u + v|)`.
pub(crate) fn angle_between(u: [f64; 3], v: [f64; 3]) -> f64 {
    let diff = norm3([u[0] - v[0], u[1] - v[1], u[2] - v[2]]);
    let sum = norm3([u[0] + v[0], u[1] + v[1], u[2] + v[2]]);
    2.0 * diff.atan2(sum)
}

pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn poles_have_zero_phi() {
        assert_eq!(SphericalPoint::new(0.0, 1.3).phi, 0.0);
        assert_eq!(SphericalPoint::new(PI, -2.0).phi, 0.0);
        assert_eq!(SphericalPoint::from_cartesian([0.0, 0.0, -3.0]).theta, PI);
    }

    #[test]
    fn phi_range_is_half_open() {
        let p = SphericalPoint::new(1.0, -PI);
        assert_eq!(p.phi, PI);
        let q = SphericalPoint::from_cartesian([-1.0, -0.0, 0.0]);
        assert!(q.phi > 0.0);
    }

    proptest! {
        #[test]
        fn cartesian_round_trip(theta in 1e-3..(PI - 1e-3), phi in -3.1f64..3.1) {
            let p = SphericalPoint::new(theta, phi);
            let q = SphericalPoint::from_cartesian(p.to_cartesian());
            prop_assert!((p.theta - q.theta).abs() < 1e-12);
            prop_assert!((p.phi - q.phi).abs() < 1e-12);
        }
    }
}
