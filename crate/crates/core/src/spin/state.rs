use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64;

use super::raising_coefficients;
use crate::{Error, Result};

/// Spin quantum number `j`, stored as the integer `2j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spin {
    twice: u32,
}

impl Spin {
    /// Parses `j`, rejecting values where `2j` is not a nonnegative integer.
    pub fn new(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !twice.is_finite() || twice < 0.0 || (twice - twice.round()).abs() > 1e-9 {
            return Err(Error::InvalidSpin(j));
        }
        if twice.round() > u32::MAX as f64 {
            return Err(Error::InvalidSpin(j));
        }
        Ok(Self {
            twice: twice.round() as u32,
        })
    }

    pub const fn from_twice(twice_j: u32) -> Self {
        Self { twice: twice_j }
    }

    pub const fn twice(self) -> u32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    /// Hilbert space dimension `2j + 1`.
    pub const fn dim(self) -> usize {
        self.twice as usize + 1
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// Magnetic quantum number of basis index `k`.
    pub fn m(self, k: usize) -> f64 {
        self.value() - k as f64
    }

    /// Casimir eigenvalue `j (j + 1)`.
    pub fn casimir(self) -> f64 {
        let j = self.value();
        j * (j + 1.0)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Pure state of a spin-`j` system in the `|j, m⟩` basis (`m = j, ..., -j`).
#[derive(Clone, Debug, PartialEq)]
pub struct SpinState {
    spin: Spin,
    amplitudes: DVector<Complex64>,
}

const NORM_TOL: f64 = 1e-12;

impl SpinState {
    /// Wraps amplitudes that are already normalized to within `1e-12`.
    pub fn new(spin: Spin, amplitudes: DVector<Complex64>) -> Result<Self> {
        check_dim(spin, amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { spin, amplitudes })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(spin: Spin, amplitudes: DVector<Complex64>) -> Result<Self> {
        check_dim(spin, amplitudes.len())?;
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            spin,
            amplitudes: amplitudes / Complex64::new(norm, 0.0),
        })
    }

    /// The basis state `|j, m⟩` with `m = j - k`.
    pub fn basis(spin: Spin, k: usize) -> Result<Self> {
        if k >= spin.dim() {
            return Err(Error::InvalidParameter(format!(
                "basis index {k} out of range for j = {spin}"
            )));
        }
        let mut amps = DVector::zeros(spin.dim());
        amps[k] = Complex64::new(1.0, 0.0);
        Ok(Self {
            spin,
            amplitudes: amps,
        })
    }

    pub(crate) fn from_raw(spin: Spin, amplitudes: DVector<Complex64>) -> Self {
        debug_assert_eq!(spin.dim(), amplitudes.len());
        Self { spin, amplitudes }
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &SpinState) -> Result<Complex64> {
        if self.spin != other.spin {
            return Err(Error::DimensionMismatch {
                expected: self.spin.dim(),
                found: other.spin.dim(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|⟨self|other⟩|²`.
    pub fn probability_in(&self, other: &SpinState) -> Result<f64> {
        self.inner(other).map(|z| z.norm_sqr())
    }

    /// `(⟨Jx⟩, ⟨Jy⟩, ⟨Jz⟩)` computed from the ladder structure in `O(2j+1)`.
    pub fn expectation_j(&self) -> [f64; 3] {
        let a = &self.amplitudes;
        let c = raising_coefficients(self.spin);
        // ⟨J+⟩ = Σ conj(a_k) c_k a_{k+1}; J+ = Jx + i Jy.
        let mut raise = Complex64::new(0.0, 0.0);
        for (k, ck) in c.iter().enumerate() {
            raise += a[k].conj() * a[k + 1] * *ck;
        }
        let jz: f64 = a
            .iter()
            .enumerate()
            .map(|(k, z)| self.spin.m(k) * z.norm_sqr())
            .sum();
        [raise.re, raise.im, jz]
    }

    /// `(⟨J²⟩ - |⟨J⟩|²) / j²`, which equals `1/j` for a coherent state.
    pub fn uncertainty(&self) -> f64 {
        let j = self.spin.value();
        let [x, y, z] = self.expectation_j();
        (self.spin.casimir() * self.amplitudes.norm_squared() - (x * x + y * y + z * z)) / (j * j)
    }
}

fn check_dim(spin: Spin, len: usize) -> Result<()> {
    if spin.dim() != len {
        return Err(Error::DimensionMismatch {
            expected: spin.dim(),
            found: len,
        });
    }
    Ok(())
}
