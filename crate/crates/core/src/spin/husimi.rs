use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::{coherent_magnitudes, gauss_legendre, SphericalPoint, Spin, SpinState};
use crate::{Error, Result};

/// Number of quadrature nodes in `θ` (Gauss–Legendre in `cos θ`) and `φ`
/// (uniform).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HusimiResolution {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl HusimiResolution {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta == 0 || n_phi == 0 {
            return Err(Error::InvalidParameter(
                "Husimi grid needs at least one node per axis".into(),
            ));
        }
        Ok(Self { n_theta, n_phi })
    }

    /// `max(64, 2j + 2)` nodes in `θ` and twice that in `φ`, enough for the
    /// product rule to integrate `Q` exactly.
    pub fn default_for(spin: Spin) -> Self {
        let n = 64.max(spin.twice() as usize + 2);
        Self {
            n_theta: n,
            n_phi: 2 * n,
        }
    }
}

/// Input to [`husimi`]: a pure state or a density matrix.
#[derive(Clone, Copy, Debug)]
pub enum HusimiSource<'a> {
    Pure(&'a SpinState),
    Density {
        spin: Spin,
        rho: &'a DMatrix<Complex64>,
    },
}

impl<'a> From<&'a SpinState> for HusimiSource<'a> {
    fn from(s: &'a SpinState) -> Self {
        HusimiSource::Pure(s)
    }
}

/// `Q(θ, φ)` sampled on a Gauss–Legendre × uniform product grid.
#[derive(Clone, Debug, PartialEq)]
pub struct HusimiGrid {
    pub spin: Spin,
    /// Polar angles, increasing.
    pub theta: Vec<f64>,
    /// Gauss–Legendre weights attached to `cos θ`.
    pub theta_weights: Vec<f64>,
    /// Azimuths `-π + 2π (l + 1) / n_phi`, all in `(-π, π]`.
    pub phi: Vec<f64>,
    /// Row-major values, `values[i * n_phi + l] = Q(theta[i], phi[l])`.
    pub values: Vec<f64>,
}

impl HusimiGrid {
    pub fn n_theta(&self) -> usize {
        self.theta.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phi.len()
    }

    pub fn value(&self, i_theta: usize, i_phi: usize) -> f64 {
        self.values[i_theta * self.n_phi() + i_phi]
    }

    pub fn node(&self, i_theta: usize, i_phi: usize) -> SphericalPoint {
        SphericalPoint::new(self.theta[i_theta], self.phi[i_phi])
    }

    /// `∮ Q dΩ` by the product rule.
    pub fn integral(&self) -> f64 {
        let dphi = 2.0 * PI / self.n_phi() as f64;
        self.values
            .chunks(self.n_phi())
            .zip(&self.theta_weights)
            .map(|(row, w)| w * dphi * row.iter().sum::<f64>())
            .sum()
    }

    /// Grid node with the largest `Q`.
    pub fn peak(&self) -> SphericalPoint {
        let (idx, _) = self
            .values
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &v)| if v > best.1 { (i, v) } else { best });
        self.node(idx / self.n_phi(), idx % self.n_phi())
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Pointwise mean of grids sharing the same nodes.
    pub fn mean(grids: &[HusimiGrid]) -> Result<HusimiGrid> {
        let first = grids
            .first()
            .ok_or_else(|| Error::InvalidParameter("cannot average zero Husimi grids".into()))?;
        let mut acc = vec![0.0; first.values.len()];
        for g in grids {
            if g.theta != first.theta || g.phi != first.phi {
                return Err(Error::InvalidParameter(
                    "Husimi grids must share nodes to be averaged".into(),
                ));
            }
            acc.iter_mut().zip(&g.values).for_each(|(a, v)| *a += v);
        }
        let n = grids.len() as f64;
        acc.iter_mut().for_each(|a| *a /= n);
        Ok(HusimiGrid {
            values: acc,
            ..first.clone()
        })
    }
}

/// Evaluates `Q(θ, φ) = (2j+1)/(4π) ⟨θ, φ|ρ|θ, φ⟩` on a quadrature grid.
///
/// Pure states go through one FFT per `θ` row; density matrices are summed
/// directly.
pub fn husimi<'a>(
    source: impl Into<HusimiSource<'a>>,
    resolution: HusimiResolution,
) -> Result<HusimiGrid> {
    let source = source.into();
    let spin = match source {
        HusimiSource::Pure(s) => {
            let norm = s.norm();
            if (norm - 1.0).abs() > 1e-9 {
                return Err(Error::NotNormalized(norm));
            }
            s.spin()
        }
        HusimiSource::Density { spin, rho } => {
            check_density(spin, rho)?;
            spin
        }
    };
    let (x, w) = gauss_legendre(resolution.n_theta);
    let theta: Vec<f64> = x.iter().map(|xi| xi.clamp(-1.0, 1.0).acos()).collect();
    let n_phi = resolution.n_phi;
    let phi: Vec<f64> = (0..n_phi)
        .map(|l| -PI + 2.0 * PI * (l + 1) as f64 / n_phi as f64)
        .collect();
    let prefactor = spin.dim() as f64 / (4.0 * PI);

    let rows: Vec<Vec<f64>> = match source {
        HusimiSource::Pure(state) => {
            let fft = FftPlanner::new().plan_fft_forward(n_phi);
            theta
                .par_iter()
                .map(|&t| pure_row(state.amplitudes(), spin, t, n_phi, &fft, prefactor))
                .collect()
        }
        HusimiSource::Density { rho, .. } => theta
            .par_iter()
            .map(|&t| density_row(rho, spin, t, &phi, prefactor))
            .collect(),
    };
    Ok(HusimiGrid {
        spin,
        theta,
        theta_weights: w,
        phi,
        values: rows.concat(),
    })
}

fn pure_row(
    psi: &DVector<Complex64>,
    spin: Spin,
    theta: f64,
    n_phi: usize,
    fft: &Arc<dyn Fft<f64>>,
    prefactor: f64,
) -> Vec<f64> {
    // ⟨θ,φ_l|ψ⟩ = Σ_k a_k e^{-ikφ_l} ψ_k with φ_l = -π + 2π(l+1)/N, folded onto
    // an N-point DFT.
    let mags = coherent_magnitudes(spin, theta);
    let mut buf = vec![Complex64::new(0.0, 0.0); n_phi];
    for (k, (&a, &z)) in mags.iter().zip(psi.iter()).enumerate() {
        let r = k % n_phi;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let twiddle = Complex64::from_polar(sign * a, -2.0 * PI * r as f64 / n_phi as f64);
        buf[r] += twiddle * z;
    }
    fft.process(&mut buf);
    buf.iter().map(|z| prefactor * z.norm_sqr()).collect()
}

fn density_row(
    rho: &DMatrix<Complex64>,
    spin: Spin,
    theta: f64,
    phi: &[f64],
    prefactor: f64,
) -> Vec<f64> {
    let mags = coherent_magnitudes(spin, theta);
    phi.iter()
        .map(|&p| {
            let amp = DVector::from_iterator(
                mags.len(),
                mags.iter()
                    .enumerate()
                    .map(|(k, &a)| Complex64::from_polar(a, k as f64 * p)),
            );
            prefactor * amp.dotc(&(rho * &amp)).re
        })
        .collect()
}

fn check_density(spin: Spin, rho: &DMatrix<Complex64>) -> Result<()> {
    let n = spin.dim();
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho.nrows(),
        });
    }
    let hermitian_err = (rho - rho.adjoint()).camax();
    if hermitian_err > 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "density matrix is not Hermitian (deviation {hermitian_err:e})"
        )));
    }
    let trace = rho.trace();
    if (trace - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
        return Err(Error::NotNormalized(trace.re));
    }
    Ok(())
}
