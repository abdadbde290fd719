use std::fmt;

use nalgebra::DVector;

use super::operator::{FloquetOperator, Workspace};
use crate::classical::{KickedTopParams, OrbitLabel, PeriodicOrbit};
use crate::spin::{spin_coherent_state, SphericalPoint, Spin, SpinState};
use crate::{Complex64, Error, Result};

/// How `U^n` is applied for period-`n` survival.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PowerStrategy {
    /// Pick whichever of the two below needs fewer flops.
    #[default]
    Auto,
    /// Apply `U` `n` times per averaged term.
    Repeated,
    /// Form the dense `U^n` once, then one matrix-vector product per term.
    Precomputed,
}

#[derive(Clone, Copy, Debug)]
pub struct SurvivalOptions {
    pub keep_per_kick: bool,
    pub strategy: PowerStrategy,
}

impl Default for SurvivalOptions {
    fn default() -> Self {
        Self { keep_per_kick: true, strategy: PowerStrategy::Auto }
    }
}

/// Time-averaged return probability `S = (1/L) Σ_{l=1..L} |⟨ψ(0)|ψ(n·l)⟩|²`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurvivalResult {
    pub label: OrbitLabel,
    pub spin: Spin,
    pub kappa: f64,
    /// Orbit period `n`; probabilities are sampled every `n` kicks.
    pub period: usize,
    /// Number of averaged terms.
    pub l: usize,
    pub s: f64,
    /// `|⟨ψ(0)|ψ(n·l)⟩|²` for `l = 1..=L`.
    pub per_kick: Option<Vec<f64>>,
}

impl SurvivalResult {
    /// CSV row `label,j,kappa,L,S[,p_1,…,p_L]`.
    pub fn csv_row(&self) -> String {
        let mut row = format!(
            "{},{},{},{},{}",
            self.label,
            crate::io::fmt_f64(self.spin.value()),
            crate::io::fmt_f64(self.kappa),
            self.l,
            crate::io::fmt_f64(self.s)
        );
        if let Some(p) = &self.per_kick {
            for v in p {
                row.push(',');
                row.push_str(&crate::io::fmt_f64(*v));
            }
        }
        row
    }

    pub const CSV_HEADER: &'static str = "label,j,kappa,L,S";
}

impl fmt::Display for SurvivalResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} j={} κ={} L={} S={:.6}", self.label, self.spin, self.kappa, self.l, self.s)
    }
}

/// Survival of the coherent state centred on `point` under single kicks.
pub fn survival_fixed_point(
    point: SphericalPoint,
    spin: Spin,
    params: &KickedTopParams,
    l: usize,
) -> Result<SurvivalResult> {
    let op = FloquetOperator::new(spin, *params)?;
    let psi = spin_coherent_state(spin, point);
    let mut r = survival_from_state(&op, &psi, 1, l, SurvivalOptions::default())?;
    r.label = OrbitLabel::Numeric;
    Ok(r)
}

/// Survival of the coherent state centred on `orbit.points[0]`, sampled every
/// `orbit.period()` kicks.
pub fn survival_period_n(
    orbit: &PeriodicOrbit,
    spin: Spin,
    params: &KickedTopParams,
    l: usize,
) -> Result<SurvivalResult> {
    let op = FloquetOperator::new(spin, *params)?;
    survival_for_orbit(orbit, &op, l, SurvivalOptions::default())
}

/// As [`survival_period_n`] with a prebuilt (possibly cached) operator.
pub fn survival_for_orbit(
    orbit: &PeriodicOrbit,
    op: &FloquetOperator,
    l: usize,
    opts: SurvivalOptions,
) -> Result<SurvivalResult> {
    let psi = spin_coherent_state(op.spin(), SphericalPoint::from_cartesian(orbit.points[0].to_array()));
    let mut r = survival_from_state(op, &psi, orbit.period(), l, opts)?;
    r.label = orbit.label;
    Ok(r)
}

/// Survival of an arbitrary initial state sampled every `period` kicks.
pub fn survival_from_state(
    op: &FloquetOperator,
    initial: &SpinState,
    period: usize,
    l: usize,
    opts: SurvivalOptions,
) -> Result<SurvivalResult> {
    if l == 0 {
        return Err(Error::InvalidParameter("L must be at least 1".into()));
    }
    if period == 0 {
        return Err(Error::InvalidParameter("period must be at least 1".into()));
    }
    if initial.spin() != op.spin() {
        return Err(Error::DimensionMismatch { expected: op.dim(), found: initial.amplitudes().len() });
    }
    let psi0 = initial.amplitudes();
    let probs = match resolve_strategy(opts.strategy, op.dim(), period, l) {
        PowerStrategy::Precomputed => {
            let un = op.power_matrix(period);
            let mut psi = psi0.clone();
            (0..l)
                .map(|_| {
                    psi = &un * &psi;
                    psi0.dotc(&psi).norm_sqr()
                })
                .collect::<Vec<_>>()
        }
        _ => repeated(op, psi0, period, l),
    };
    let s = probs.iter().sum::<f64>() / l as f64;
    Ok(SurvivalResult {
        label: OrbitLabel::Numeric,
        spin: op.spin(),
        kappa: op.params().kappa,
        period,
        l,
        s,
        per_kick: opts.keep_per_kick.then_some(probs),
    })
}

fn repeated(op: &FloquetOperator, psi0: &DVector<Complex64>, period: usize, l: usize) -> Vec<f64> {
    let mut psi = psi0.clone();
    let mut work = Workspace::new(op.dim());
    (0..l)
        .map(|_| {
            for _ in 0..period {
                op.apply_raw(&mut psi, &mut work);
            }
            psi0.dotc(&psi).norm_sqr()
        })
        .collect()
}

/// Real flop estimates: a kick costs `4N²` (real rotation on two columns);
/// a dense complex product costs `8N³`.
fn resolve_strategy(strategy: PowerStrategy, dim: usize, period: usize, l: usize) -> PowerStrategy {
    match strategy {
        PowerStrategy::Auto => {
            if period == 1 {
                return PowerStrategy::Repeated;
            }
            let n = dim as f64;
            let squarings = (usize::BITS - period.leading_zeros()) as f64 + period.count_ones() as f64 - 1.0;
            let precompute = 8.0 * n * n * n * squarings + 8.0 * n * n * l as f64;
            let repeat = 4.0 * n * n * (period * l) as f64;
            if precompute < repeat {
                PowerStrategy::Precomputed
            } else {
                PowerStrategy::Repeated
            }
        }
        s => s,
    }
}

/// Probability `|⟨target|ψ(k)⟩|²` at kicks `0..=n_kicks`.
pub fn projection_series(
    op: &FloquetOperator,
    initial: &SpinState,
    target: &SpinState,
    n_kicks: usize,
) -> Result<Vec<f64>> {
    if target.spin() != op.spin() {
        return Err(Error::DimensionMismatch { expected: op.dim(), found: target.amplitudes().len() });
    }
    let mut out = vec![target.inner(initial)?.norm_sqr()];
    let mut prop = op.propagate(initial)?;
    for _ in 0..n_kicks {
        prop.advance();
        out.push(target.amplitudes().dotc(prop.amplitudes()).norm_sqr());
    }
    Ok(out)
}
