use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::rotation::{RotationCache, RotationFactor};
use crate::classical::KickedTopParams;
use crate::spin::{Spin, SpinState};
use crate::{Complex64, Error, Result};

/// One-period propagator `U = exp(-i κ Jz²/(2jτ)) · exp(-i p Jy)`.
///
/// Stored as the diagonal twist phases and the shared real rotation factor.
#[derive(Clone, Debug)]
pub struct FloquetOperator {
    spin: Spin,
    params: KickedTopParams,
    twist: DVector<Complex64>,
    rotation: Arc<RotationFactor>,
}

impl FloquetOperator {
    pub fn new(spin: Spin, params: KickedTopParams) -> Result<Self> {
        Self::with_rotation(Arc::new(RotationFactor::new(spin, params.p)), params)
    }

    pub fn cached(spin: Spin, params: KickedTopParams, cache: &RotationCache) -> Result<Self> {
        Self::with_rotation(cache.get(spin, params.p), params)
    }

    pub fn with_rotation(rotation: Arc<RotationFactor>, params: KickedTopParams) -> Result<Self> {
        if rotation.angle() != params.p {
            return Err(Error::InvalidParameter(format!(
                "rotation factor built for p = {} but params have p = {}",
                rotation.angle(),
                params.p
            )));
        }
        let spin = rotation.spin();
        let twist = twist_phases(spin, &params);
        Ok(Self { spin, params, twist, rotation })
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn params(&self) -> &KickedTopParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.spin.dim()
    }

    pub fn twist_phases(&self) -> &DVector<Complex64> {
        &self.twist
    }

    pub fn rotation(&self) -> &RotationFactor {
        &self.rotation
    }

    /// Dense `U`.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let w = self.rotation.matrix();
        DMatrix::from_fn(self.dim(), self.dim(), |r, c| self.twist[r] * w[(r, c)])
    }

    /// Dense `Uⁿ` by repeated squaring.
    pub fn power_matrix(&self, n: usize) -> DMatrix<Complex64> {
        let dim = self.dim();
        let mut result = DMatrix::<Complex64>::identity(dim, dim);
        let mut base = self.matrix();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &base * &result;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `max |U†U - I|`, evaluated as `Wᵀ diag(|d|²) W - I`.
    pub fn unitarity_error(&self) -> f64 {
        let w = self.rotation.matrix();
        let mut dw = w.clone();
        for (r, d) in self.twist.iter().enumerate() {
            dw.row_mut(r).iter_mut().for_each(|x| *x *= d.norm_sqr());
        }
        let g = w.transpose() * dw - DMatrix::identity(self.dim(), self.dim());
        g.amax()
    }

    pub fn apply(&self, state: &SpinState) -> Result<SpinState> {
        self.check(state)?;
        let mut psi = state.amplitudes().clone();
        let mut work = Workspace::new(self.dim());
        self.apply_raw(&mut psi, &mut work);
        Ok(SpinState::from_raw(self.spin, psi))
    }

    /// Starts an iterator yielding `U ψ, U² ψ, …`.
    pub fn propagate(&self, state: &SpinState) -> Result<Propagator<'_>> {
        self.check(state)?;
        Ok(Propagator {
            op: self,
            psi: state.amplitudes().clone(),
            work: Workspace::new(self.dim()),
        })
    }

    fn check(&self, state: &SpinState) -> Result<()> {
        if state.spin() != self.spin {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: state.amplitudes().len() });
        }
        Ok(())
    }

    pub(crate) fn apply_raw(&self, psi: &mut DVector<Complex64>, work: &mut Workspace) {
        for (k, a) in psi.iter().enumerate() {
            work.input[(k, 0)] = a.re;
            work.input[(k, 1)] = a.im;
        }
        work.output.gemm(1.0, self.rotation.matrix(), &work.input, 0.0);
        for (k, a) in psi.iter_mut().enumerate() {
            *a = self.twist[k] * Complex64::new(work.output[(k, 0)], work.output[(k, 1)]);
        }
    }
}

fn twist_phases(spin: Spin, params: &KickedTopParams) -> DVector<Complex64> {
    let n = spin.dim();
    if spin.twice() == 0 {
        return DVector::from_element(1, Complex64::new(1.0, 0.0));
    }
    let scale = params.kappa / (2.0 * spin.value() * params.tau);
    DVector::from_fn(n, |k, _| {
        let m = spin.m(k);
        Complex64::from_polar(1.0, -scale * m * m)
    })
}

/// Scratch buffers for applying the real rotation to a complex vector.
#[derive(Clone, Debug)]
pub(crate) struct Workspace {
    input: DMatrix<f64>,
    output: DMatrix<f64>,
}

impl Workspace {
    pub(crate) fn new(n: usize) -> Self {
        Self { input: DMatrix::zeros(n, 2), output: DMatrix::zeros(n, 2) }
    }
}

/// Iterator over successive Floquet images of a state.
pub struct Propagator<'a> {
    op: &'a FloquetOperator,
    psi: DVector<Complex64>,
    work: Workspace,
}

impl Propagator<'_> {
    /// Current amplitudes (the last state yielded, or the initial state).
    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.psi
    }

    /// Advances one kick without cloning the state.
    pub fn advance(&mut self) {
        self.op.apply_raw(&mut self.psi, &mut self.work);
    }
}

impl Iterator for Propagator<'_> {
    type Item = SpinState;

    fn next(&mut self) -> Option<SpinState> {
        self.advance();
        Some(SpinState::from_raw(self.op.spin, self.psi.clone()))
    }
}

/// States at kicks `0..=n_kicks`; element 0 is the input.
pub fn evolve(state: &SpinState, op: &FloquetOperator, n_kicks: usize) -> Result<Vec<SpinState>> {
    let mut out = Vec::with_capacity(n_kicks + 1);
    out.push(state.clone());
    out.extend(op.propagate(state)?.take(n_kicks));
    Ok(out)
}
