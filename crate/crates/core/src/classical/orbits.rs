use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix3;
use num_complex::Complex64;

use super::{ClassicalState, KickedTopMap, KickedTopParams};
use crate::{Error, Result};

/// An eigenvalue counts as stable when `|λ| ≤ 1 + STABILITY_TOLERANCE`.
///
/// Every monodromy matrix carries a neutral eigenvalue 1 (the norm is
/// conserved), which must not be misclassified through roundoff.
pub const STABILITY_TOLERANCE: f64 = 1e-9;

/// Per-component tolerance for `F(points[i]) = points[i + 1]`.
const CLOSURE_TOL: f64 = 1e-10;

/// Names of the closed-form orbits, plus `Numeric` for orbits found by search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrbitLabel {
    FP1,
    FP2,
    FP3,
    FP4,
    P2A,
    P2B,
    P2C,
    P2D,
    P2E,
    P4,
    Numeric,
}

impl OrbitLabel {
    /// Every closed-form catalog entry, in catalog order.
    pub const CATALOG: [OrbitLabel; 10] = [
        OrbitLabel::FP1,
        OrbitLabel::FP2,
        OrbitLabel::FP3,
        OrbitLabel::FP4,
        OrbitLabel::P2A,
        OrbitLabel::P2B,
        OrbitLabel::P2C,
        OrbitLabel::P2D,
        OrbitLabel::P2E,
        OrbitLabel::P4,
    ];

    /// Period of a catalog entry (`None` for `Numeric`).
    pub fn period(self) -> Option<usize> {
        use OrbitLabel::*;
        match self {
            FP1 | FP2 | FP3 | FP4 => Some(1),
            P2A | P2B | P2C | P2D | P2E => Some(2),
            P4 => Some(4),
            Numeric => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        use OrbitLabel::*;
        match self {
            FP1 => "FP1",
            FP2 => "FP2",
            FP3 => "FP3",
            FP4 => "FP4",
            P2A => "P2A",
            P2B => "P2B",
            P2C => "P2C",
            P2D => "P2D",
            P2E => "P2E",
            P4 => "P4",
            Numeric => "NUMERIC",
        }
    }

    /// Smallest `κ` at which the entry exists, and whether that bound is
    /// strict.
    pub fn existence_threshold(self) -> Option<(f64, bool)> {
        use OrbitLabel::*;
        match self {
            FP3 | FP4 | P2A => Some((2.0, true)),
            P2B | P2C | P2D | P2E => Some((SQRT_2 * PI, false)),
            _ => None,
        }
    }
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OrbitLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase();
        OrbitLabel::CATALOG
            .iter()
            .copied()
            .chain(std::iter::once(OrbitLabel::Numeric))
            .find(|l| l.as_str() == up)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown orbit label {s:?}")))
    }
}

/// A closed cycle of the map with its linear stability.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicOrbit {
    pub label: OrbitLabel,
    pub points: Vec<ClassicalState>,
    /// Eigenvalues of the Jacobian of `Fⁿ` at `points[0]`, by decreasing modulus.
    pub stability_eigenvalues: [Complex64; 3],
    pub is_stable: bool,
}

impl PeriodicOrbit {
    /// Checks closure under the map and computes stability.
    pub fn new(
        label: OrbitLabel,
        points: Vec<ClassicalState>,
        params: &KickedTopParams,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("an orbit needs at least one point".into()));
        }
        let map = KickedTopMap::new(params)?;
        let mut orbit = Self {
            label,
            points,
            stability_eigenvalues: [Complex64::new(1.0, 0.0); 3],
            is_stable: true,
        };
        let residual = orbit.closure_residual(&map);
        if residual > CLOSURE_TOL {
            return Err(Error::OrbitNotClosed {
                label: label.to_string(),
                residual,
            });
        }
        orbit.update_stability(&map);
        Ok(orbit)
    }

    pub fn period(&self) -> usize {
        self.points.len()
    }

    /// Largest `|F(points[i]) - points[(i+1) mod n]|` over components.
    pub fn closure_residual(&self, map: &KickedTopMap) -> f64 {
        let n = self.points.len();
        (0..n)
            .map(|i| map.step(self.points[i]).max_abs_diff(self.points[(i + 1) % n]))
            .fold(0.0, f64::max)
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.stability_eigenvalues
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    fn update_stability(&mut self, map: &KickedTopMap) {
        let eig = eigenvalues_by_modulus(&monodromy_with(map, &self.points));
        self.is_stable = eig.iter().all(|z| z.norm() <= 1.0 + STABILITY_TOLERANCE);
        self.stability_eigenvalues = eig;
    }
}

fn monodromy_with(map: &KickedTopMap, points: &[ClassicalState]) -> Matrix3<f64> {
    points
        .iter()
        .fold(Matrix3::identity(), |acc, &p| map.jacobian(p) * acc)
}

/// `J(points[n-1]) ⋯ J(points[0])`, the Jacobian of `Fⁿ` at `points[0]`.
pub fn monodromy(points: &[ClassicalState], params: &KickedTopParams) -> Result<Matrix3<f64>> {
    Ok(monodromy_with(&KickedTopMap::new(params)?, points))
}

fn eigenvalues_by_modulus(m: &Matrix3<f64>) -> [Complex64; 3] {
    let ev = m.complex_eigenvalues();
    let mut out = [ev[0], ev[1], ev[2]];
    out.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(b.re.total_cmp(&a.re)));
    out
}

/// Recomputes and stores the stability spectrum of `orbit` at `params`.
///
/// Fails if the orbit does not close at these parameters.
pub fn orbit_stability(orbit: &mut PeriodicOrbit, params: &KickedTopParams) -> Result<[Complex64; 3]> {
    let map = KickedTopMap::new(params)?;
    let residual = orbit.closure_residual(&map);
    if residual > CLOSURE_TOL {
        return Err(Error::OrbitNotClosed {
            label: orbit.label.to_string(),
            residual,
        });
    }
    orbit.update_stability(&map);
    Ok(orbit.stability_eigenvalues)
}

/// Residual of `2x² + [x sin(κx)]² / [1 - cos(κx)]² = 1`.
///
/// Evaluated through the half-angle identity `sin θ / (1 - cos θ) = cot(θ/2)`,
/// which avoids cancellation as `κx → 0`. Poles (`κx = 2πk`, `x ≠ 0`) give `+∞`.
pub fn x0_residual(kappa: f64, x: f64) -> f64 {
    let half = 0.5 * kappa * x;
    let (s, c) = half.sin_cos();
    let r = if s == 0.0 {
        if x == 0.0 {
            2.0 / kappa
        } else {
            f64::INFINITY
        }
    } else {
        x * c / s
    };
    2.0 * x * x + r * r - 1.0
}

const X0_SCAN_INTERVALS: usize = 1024;
const X0_LOWER: f64 = 1e-12;

/// Smallest positive root `x₀` of the normalization condition, the branch
/// that leaves `x₀ = 0` at `κ = 2`.
///
/// Locates a sign change by scanning 1024 subintervals of `(1e-12, 1/√2]`,
/// then bisects to machine precision.
pub fn solve_x0(kappa: f64) -> Result<f64> {
    if !(kappa > 2.0) || !kappa.is_finite() {
        return Err(Error::NoRoot(kappa));
    }
    let f = |x: f64| {
        let v = x0_residual(kappa, x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let hi = std::f64::consts::FRAC_1_SQRT_2;
    let width = (hi - X0_LOWER) / X0_SCAN_INTERVALS as f64;
    let mut left = X0_LOWER;
    let mut f_left = f(left);
    if f_left >= 0.0 {
        return Err(Error::BracketFailed {
            kappa,
            reason: format!("residual at the lower end is not negative ({f_left:e})"),
        });
    }
    for i in 1..=X0_SCAN_INTERVALS {
        let right = if i == X0_SCAN_INTERVALS { hi } else { X0_LOWER + i as f64 * width };
        let f_right = f(right);
        if f_right >= 0.0 {
            let root = bisect(&f, left, right);
            let res = x0_residual(kappa, root);
            if res.abs() < 1e-12 {
                return Ok(root);
            }
            return Err(Error::BracketFailed {
                kappa,
                reason: format!("bisection ended on a pole (residual {res:e})"),
            });
        }
        left = right;
        f_left = f_right;
    }
    Err(Error::BracketFailed {
        kappa,
        reason: format!("no sign change on (1e-12, 1/√2], last residual {f_left:e}"),
    })
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    // invariant: f(lo) < 0 <= f(hi)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // pick whichever end has the smaller residual
    if f(lo).abs() <= f(hi).abs() {
        lo
    } else {
        hi
    }
}

/// Whether a catalog entry exists at the requested parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Existence {
    Present,
    Absent(String),
    /// The closed form was evaluated but failed the closure check.
    NotClosed(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub label: OrbitLabel,
    pub existence: Existence,
}

/// All closed-form orbits present at one `κ`, plus a per-entry existence
/// report.
#[derive(Clone, Debug)]
pub struct OrbitCatalog {
    pub kappa: f64,
    pub orbits: Vec<PeriodicOrbit>,
    pub report: Vec<CatalogEntry>,
}

impl OrbitCatalog {
    pub fn get(&self, label: OrbitLabel) -> Option<&PeriodicOrbit> {
        self.orbits.iter().find(|o| o.label == label)
    }

    pub fn labels(&self) -> Vec<OrbitLabel> {
        self.orbits.iter().map(|o| o.label).collect()
    }
}

fn catalog_points(label: OrbitLabel, kappa: f64) -> Result<std::result::Result<Vec<[f64; 3]>, String>> {
    use OrbitLabel::*;
    let pts = match label {
        FP1 => vec![[0.0, 1.0, 0.0]],
        FP2 => vec![[0.0, -1.0, 0.0]],
        P4 => vec![[1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]],
        FP3 | FP4 | P2A => {
            if kappa <= 2.0 {
                return Ok(Err(format!("{label} exists only for kappa > 2")));
            }
            let x0 = solve_x0(kappa)?;
            let half = 0.5 * kappa * x0;
            let y0 = x0 * half.cos() / half.sin();
            match label {
                FP3 => vec![[x0, y0, -x0]],
                FP4 => vec![[-x0, y0, x0]],
                _ => vec![[x0, -y0, x0], [-x0, -y0, -x0]],
            }
        }
        P2B | P2C | P2D | P2E => {
            let a = PI / kappa;
            let b2 = 1.0 - 2.0 * a * a;
            if !(kappa >= SQRT_2 * PI) || b2 < -1e-15 {
                return Ok(Err(format!("{label} exists only for kappa >= sqrt(2) pi")));
            }
            let b = b2.max(0.0).sqrt();
            match label {
                P2B => vec![[a, b, a], [-a, -b, -a]],
                P2C => vec![[-a, b, a], [-a, -b, a]],
                P2D => vec![[a, b, -a], [a, -b, -a]],
                _ => vec![[a, -b, a], [-a, b, -a]],
            }
        }
        Numeric => return Ok(Err("NUMERIC is not a catalog entry".into())),
    };
    Ok(Ok(pts))
}

/// A single catalog entry at `params`, or `None` where it does not exist.
///
/// A closed form that exists but fails the closure check is an error.
pub fn catalog_orbit(label: OrbitLabel, params: &KickedTopParams) -> Result<Option<PeriodicOrbit>> {
    params.require_quarter_turn()?;
    match catalog_points(label, params.kappa)? {
        Err(_) => Ok(None),
        Ok(raw) => {
            let points = raw
                .into_iter()
                .map(|[x, y, z]| ClassicalState::normalized(x, y, z))
                .collect::<Result<Vec<_>>>()?;
            PeriodicOrbit::new(label, points, params).map(Some)
        }
    }
}

/// Every closed-form orbit present at `params`, each with its stability.
pub fn orbit_catalog(params: &KickedTopParams) -> Result<OrbitCatalog> {
    params.require_quarter_turn()?;
    let mut orbits = Vec::new();
    let mut report = Vec::new();
    for label in OrbitLabel::CATALOG {
        let existence = match catalog_orbit(label, params) {
            Ok(Some(orbit)) => {
                orbits.push(orbit);
                Existence::Present
            }
            Ok(None) => Existence::Absent(
                catalog_points(label, params.kappa)?
                    .err()
                    .unwrap_or_default(),
            ),
            Err(Error::OrbitNotClosed { residual, .. }) => Existence::NotClosed(residual),
            Err(e) => return Err(e),
        };
        report.push(CatalogEntry { label, existence });
    }
    Ok(OrbitCatalog {
        kappa: params.kappa,
        orbits,
        report,
    })
}
