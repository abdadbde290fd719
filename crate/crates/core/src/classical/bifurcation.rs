use rayon::prelude::*;

use super::{catalog_orbit, KickedTopParams, OrbitLabel, STABILITY_TOLERANCE};
use crate::{Error, Result};

/// Largest stability multiplier of one catalog orbit over a `κ` grid.
#[derive(Clone, Debug)]
pub struct BifurcationScan {
    pub label: OrbitLabel,
    pub kappa_values: Vec<f64>,
    /// `None` where the orbit does not exist.
    pub max_abs_eigenvalue: Vec<Option<f64>>,
    /// First stability change on the grid, refined by bisection.
    pub crossing: Option<f64>,
    /// Maximal runs of grid points where the orbit does not exist.
    pub missing_ranges: Vec<(f64, f64)>,
}

/// Bisection stops once the bracket is narrower than this.
const CROSSING_TOL: f64 = 1e-10;

fn max_multiplier(label: OrbitLabel, base: &KickedTopParams, kappa: f64) -> Result<Option<f64>> {
    let params = base.with_kappa(kappa)?;
    Ok(catalog_orbit(label, &params)?.map(|o| o.max_abs_eigenvalue()))
}

fn unstable(m: f64) -> bool {
    m > 1.0 + STABILITY_TOLERANCE
}

/// Scans `n_points` evenly spaced `κ` in `[lo, hi]` (`p = π/2`, `τ = 1`).
///
/// The crossing is the first adjacent pair of existing grid points whose
/// stability classification differs, refined by bisection on that
/// classification to `|Δκ| < 1e-10`.
pub fn bifurcation_scan(
    label: OrbitLabel,
    kappa_range: (f64, f64),
    n_points: usize,
) -> Result<BifurcationScan> {
    let (lo, hi) = kappa_range;
    if label == OrbitLabel::Numeric {
        return Err(Error::InvalidParameter("scan needs a catalog orbit label".into()));
    }
    if n_points < 2 || !(hi > lo) || lo < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "bifurcation scan needs 0 <= lo < hi and at least 2 points, got [{lo}, {hi}] x {n_points}"
        )));
    }
    let base = KickedTopParams::standard(lo)?;
    let kappa_values: Vec<f64> = (0..n_points)
        .map(|i| lo + (hi - lo) * i as f64 / (n_points - 1) as f64)
        .collect();
    let max_abs_eigenvalue = kappa_values
        .par_iter()
        .map(|&k| max_multiplier(label, &base, k))
        .collect::<Result<Vec<_>>>()?;

    let mut crossing = None;
    for i in 0..n_points - 1 {
        if let (Some(a), Some(b)) = (max_abs_eigenvalue[i], max_abs_eigenvalue[i + 1]) {
            if unstable(a) != unstable(b) {
                crossing = Some(refine(label, &base, kappa_values[i], kappa_values[i + 1], unstable(a))?);
                break;
            }
        }
    }

    let mut missing_ranges = Vec::new();
    let mut run: Option<(f64, f64)> = None;
    for (k, m) in kappa_values.iter().zip(&max_abs_eigenvalue) {
        match (m, run.as_mut()) {
            (None, Some(r)) => r.1 = *k,
            (None, None) => run = Some((*k, *k)),
            (Some(_), Some(_)) => missing_ranges.extend(run.take()),
            (Some(_), None) => {}
        }
    }
    missing_ranges.extend(run);

    Ok(BifurcationScan {
        label,
        kappa_values,
        max_abs_eigenvalue,
        crossing,
        missing_ranges,
    })
}

fn refine(
    label: OrbitLabel,
    base: &KickedTopParams,
    mut lo: f64,
    mut hi: f64,
    lo_unstable: bool,
) -> Result<f64> {
    while hi - lo > CROSSING_TOL {
        let mid = 0.5 * (lo + hi);
        match max_multiplier(label, base, mid)? {
            Some(m) if unstable(m) == lo_unstable => lo = mid,
            Some(_) => hi = mid,
            None => break,
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, SQRT_2};

    #[test]
    fn fp1_loses_stability_at_two() {
        let scan = bifurcation_scan(OrbitLabel::FP1, (1.0, 3.0), 201).unwrap();
        assert!((scan.crossing.unwrap() - 2.0).abs() < 1e-6);
        assert!(scan.missing_ranges.is_empty());
    }

    #[test]
    fn p4_loses_stability_at_pi() {
        let scan = bifurcation_scan(OrbitLabel::P4, (2.8, 3.5), 71).unwrap();
        assert!((scan.crossing.unwrap() - PI).abs() < 1e-6);
    }

    #[test]
    fn fp3_reports_missing_range_and_crossing() {
        let scan = bifurcation_scan(OrbitLabel::FP3, (1.0, 5.0), 81).unwrap();
        assert_eq!(scan.missing_ranges.len(), 1);
        assert_eq!(scan.missing_ranges[0].0, 1.0);
        assert!(scan.missing_ranges[0].1 <= 2.0);
        assert!((scan.crossing.unwrap() - SQRT_2 * PI).abs() < 1e-6);
    }

    #[test]
    fn bad_ranges() {
        assert!(bifurcation_scan(OrbitLabel::FP1, (3.0, 1.0), 10).is_err());
        assert!(bifurcation_scan(OrbitLabel::FP1, (1.0, 3.0), 1).is_err());
        assert!(bifurcation_scan(OrbitLabel::Numeric, (1.0, 3.0), 10).is_err());
    }
}
