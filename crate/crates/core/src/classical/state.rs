use std::f64::consts::FRAC_PI_2;

use crate::spin::SphericalPoint;
use crate::{Error, Result};

/// Unit vector `(X, Y, Z) = (Jx, Jy, Jz) / j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalState {
    x: f64,
    y: f64,
    z: f64,
}

const UNIT_TOL: f64 = 1e-12;

impl ClassicalState {
    /// Accepts components whose squared norm is 1 within `1e-12`.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n2 = x * x + y * y + z * z;
        if !n2.is_finite() || (n2 - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidParameter(format!(
                "classical state ({x}, {y}, {z}) is not a unit vector"
            )));
        }
        Ok(Self { x, y, z })
    }

    /// Projects a nonzero vector onto the sphere.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidParameter(
                "cannot normalize a zero or non-finite vector".into(),
            ));
        }
        Ok(Self {
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    pub(crate) const fn from_unit(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_spherical(p: SphericalPoint) -> Self {
        let [x, y, z] = p.to_cartesian();
        Self { x, y, z }
    }

    pub fn to_spherical(self) -> SphericalPoint {
        SphericalPoint::from_cartesian(self.to_array())
    }

    pub fn x(self) -> f64 {
        self.x
    }

    pub fn y(self) -> f64 {
        self.y
    }

    pub fn z(self) -> f64 {
        self.z
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Largest componentwise difference.
    pub fn max_abs_diff(self, other: ClassicalState) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }

    /// Rotation by π about the x axis, `(X, Y, Z) ↦ (X, -Y, -Z)`; a symmetry of
    /// the squared map.
    pub fn rotate_x_pi(self) -> Self {
        Self {
            x: self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    pub fn antipode(self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

/// Parameters of the kicked top: twist strength `κ`, linear rotation angle
/// `p` and kick period `τ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KickedTopParams {
    pub kappa: f64,
    pub p: f64,
    pub tau: f64,
}

impl KickedTopParams {
    pub fn new(kappa: f64, p: f64, tau: f64) -> Result<Self> {
        if !kappa.is_finite() || kappa < 0.0 {
            return Err(Error::InvalidParameter(format!("kappa must be >= 0, got {kappa}")));
        }
        if !tau.is_finite() || tau <= 0.0 {
            return Err(Error::InvalidParameter(format!("tau must be > 0, got {tau}")));
        }
        if !p.is_finite() {
            return Err(Error::InvalidParameter(format!("p must be finite, got {p}")));
        }
        Ok(Self { kappa, p, tau })
    }

    /// `p = π/2`, `τ = 1`.
    pub fn standard(kappa: f64) -> Result<Self> {
        Self::new(kappa, FRAC_PI_2, 1.0)
    }

    pub fn with_kappa(self, kappa: f64) -> Result<Self> {
        Self::new(kappa, self.p, self.tau)
    }

    pub fn is_quarter_turn(&self) -> bool {
        (self.p - FRAC_PI_2).abs() <= 4.0 * f64::EPSILON
    }

    pub(crate) fn require_quarter_turn(&self) -> Result<()> {
        if self.is_quarter_turn() {
            Ok(())
        } else {
            Err(Error::UnsupportedRotationAngle(self.p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_checks() {
        assert!(ClassicalState::new(0.0, 1.0, 0.0).is_ok());
        assert!(ClassicalState::new(0.0, 1.1, 0.0).is_err());
        assert!(ClassicalState::normalized(0.0, 0.0, 0.0).is_err());
        let s = ClassicalState::normalized(3.0, 0.0, 4.0).unwrap();
        assert!((s.x() - 0.6).abs() < 1e-15 && (s.z() - 0.8).abs() < 1e-15);
        assert!(KickedTopParams::new(-1.0, FRAC_PI_2, 1.0).is_err());
        assert!(KickedTopParams::new(1.0, FRAC_PI_2, 0.0).is_err());
        assert!(!KickedTopParams::new(1.0, 1.0, 1.0).unwrap().is_quarter_turn());
        assert!(KickedTopParams::standard(3.0).unwrap().is_quarter_turn());
    }
}
