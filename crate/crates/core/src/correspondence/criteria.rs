use nalgebra::DMatrix;

use crate::classical::{ClassicalState, OrbitCatalog, OrbitLabel, PeriodicOrbit};
use crate::spin::Spin;
use crate::{Error, Result};

/// Points closer than this (max-norm) are treated as the same point.
const SAME_POINT: f64 = 1e-10;

/// Pairwise coherent-state overlaps over an orbit and its symmetry partners.
#[derive(Clone, Debug)]
pub struct CriteriaReport {
    pub label: OrbitLabel,
    pub spin: Spin,
    pub epsilon: f64,
    /// Orbit points first, then partner points not already on the orbit.
    pub points: Vec<ClassicalState>,
    pub n_orbit_points: usize,
    /// `|⟨a|b⟩|` for every pair; the diagonal is 1.
    pub pairwise_overlaps: DMatrix<f64>,
    pub satisfied: bool,
}

impl CriteriaReport {
    /// Largest overlap among distinct points of the orbit itself.
    pub fn max_orbit_overlap(&self) -> f64 {
        max_off_diagonal(&self.pairwise_overlaps, self.n_orbit_points)
    }

    /// Largest overlap among all distinct points, partners included.
    pub fn max_overlap(&self) -> f64 {
        max_off_diagonal(&self.pairwise_overlaps, self.points.len())
    }

    /// Orthogonality among the orbit's own points.
    pub fn orbit_criterion(&self) -> bool {
        self.max_orbit_overlap() <= self.epsilon
    }

    /// Orthogonality across the orbit and its symmetry partners.
    pub fn partner_criterion(&self) -> bool {
        self.max_overlap() <= self.epsilon
    }
}

fn max_off_diagonal(m: &DMatrix<f64>, n: usize) -> f64 {
    let mut best = 0.0f64;
    for a in 0..n {
        for b in 0..a {
            best = best.max(m[(a, b)]);
        }
    }
    best
}

fn union_points(orbit: &PeriodicOrbit, partners: &[PeriodicOrbit]) -> Vec<ClassicalState> {
    let mut points = orbit.points.clone();
    for p in partners.iter().flat_map(|o| &o.points) {
        if points.iter().all(|q| q.max_abs_diff(*p) > SAME_POINT) {
            points.push(*p);
        }
    }
    points
}

fn half_angle_cosine(a: ClassicalState, b: ClassicalState) -> f64 {
    let s = [a.x() + b.x(), a.y() + b.y(), a.z() + b.z()];
    ((s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt() / 2.0).min(1.0)
}

/// Largest `cos(χ/2)` over distinct pairs of orbit and partner points;
/// coherent-state overlaps are this value raised to `2j`.
pub fn max_half_angle_cosine(orbit: &PeriodicOrbit, partners: &[PeriodicOrbit]) -> f64 {
    let points = union_points(orbit, partners);
    let mut best = 0.0f64;
    for a in 0..points.len() {
        for b in 0..a {
            best = best.max(half_angle_cosine(points[a], points[b]));
        }
    }
    best
}

/// Overlaps `[cos(χ/2)]^{2j}` between coherent states on every pair of orbit
/// and partner points; satisfied when no off-diagonal entry exceeds `epsilon`.
pub fn criteria_report(
    orbit: &PeriodicOrbit,
    partners: &[PeriodicOrbit],
    spin: Spin,
    epsilon: f64,
) -> Result<CriteriaReport> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    let points = union_points(orbit, partners);
    let n = points.len();
    let twice = spin.twice() as i32;
    let overlaps = DMatrix::from_fn(n, n, |a, b| {
        if a == b {
            1.0
        } else {
            half_angle_cosine(points[a], points[b]).powi(twice)
        }
    });
    let satisfied = max_off_diagonal(&overlaps, n) <= epsilon;
    Ok(CriteriaReport {
        label: orbit.label,
        spin,
        epsilon,
        points,
        n_orbit_points: orbit.points.len(),
        pairwise_overlaps: overlaps,
        satisfied,
    })
}

/// Smallest spin (in steps of ½, at least ½) whose report is satisfied.
///
/// Starts from `2j = ⌈ln ε / ln cos(χ_min/2)⌉` and confirms by direct
/// evaluation of neighbouring spins.
pub fn min_j_for_orthogonality(
    orbit: &PeriodicOrbit,
    partners: &[PeriodicOrbit],
    epsilon: f64,
) -> Result<Spin> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let c = max_half_angle_cosine(orbit, partners);
    if c >= 1.0 - 1e-15 {
        return Err(Error::NoFiniteJ);
    }
    let mut twice = if c == 0.0 { 1 } else { ((epsilon.ln() / c.ln()).ceil() as u32).max(1) };
    let ok = |t: u32| criteria_report(orbit, partners, Spin::from_twice(t), epsilon).map(|r| r.satisfied);
    while !ok(twice)? {
        twice += 1;
    }
    while twice > 1 && ok(twice - 1)? {
        twice -= 1;
    }
    Ok(Spin::from_twice(twice))
}

/// Catalog orbits holding the images of `orbit` under the π-rotation about
/// `x`, a symmetry of the squared map. Images landing on `orbit` itself are
/// not reported.
pub fn symmetry_partners(orbit: &PeriodicOrbit, catalog: &OrbitCatalog) -> Result<Vec<PeriodicOrbit>> {
    let mut partners: Vec<PeriodicOrbit> = Vec::new();
    for image in orbit.points.iter().map(|p| p.rotate_x_pi()) {
        if orbit.points.iter().any(|q| q.max_abs_diff(image) <= SAME_POINT) {
            continue;
        }
        let owner = catalog
            .orbits
            .iter()
            .find(|o| o.points.iter().any(|q| q.max_abs_diff(image) <= SAME_POINT))
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "symmetry image {:?} of {} is not on any catalog orbit at κ = {}",
                    image.to_array(),
                    orbit.label,
                    catalog.kappa
                ))
            })?;
        if partners.iter().all(|p| p.label != owner.label) {
            partners.push(owner.clone());
        }
    }
    Ok(partners)
}
