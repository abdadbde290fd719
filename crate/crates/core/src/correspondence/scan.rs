use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;

use super::criteria::min_j_for_orthogonality;
use crate::classical::{bifurcation_scan, catalog_orbit, KickedTopParams, OrbitLabel};
use crate::floquet::{survival_for_orbit, FloquetOperator, RotationFactor, SurvivalOptions};
use crate::io::fmt_f64;
use crate::spin::Spin;
use crate::{Error, Result};

/// `count` evenly spaced values from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count).map(|i| start + (end - start) * i as f64 / (count - 1) as f64).collect(),
    }
}

/// Spins from `lo` to `hi` inclusive in steps of `step` (a multiple of ½).
pub fn spin_range(lo: f64, hi: f64, step: f64) -> Result<Vec<Spin>> {
    let a = Spin::new(lo)?.twice();
    let b = Spin::new(hi)?.twice();
    let s = 2.0 * step;
    if !(s >= 1.0) || s.fract() != 0.0 || b < a {
        return Err(Error::InvalidParameter(format!("bad spin range {lo}:{hi} step {step}")));
    }
    Ok((a..=b).step_by(s as usize).map(Spin::from_twice).collect())
}

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    /// Overlap threshold for the orthogonality curve.
    pub threshold: f64,
    /// Grid points used to locate the classical bifurcation.
    pub bifurcation_points: usize,
}

impl ScanOptions {
    /// `1e-8` for P4 and `1e-10` otherwise.
    pub fn for_orbit(label: OrbitLabel) -> Self {
        let threshold = if label == OrbitLabel::P4 { 1e-8 } else { 1e-10 };
        Self { threshold, bifurcation_points: 401 }
    }
}

/// Survival probabilities over a `(j, κ)` lattice for one orbit family.
#[derive(Clone, Debug)]
pub struct SurvivalGrid {
    pub label: OrbitLabel,
    pub j_values: Vec<Spin>,
    pub kappa_values: Vec<f64>,
    /// `s[j_index][kappa_index]`; `None` where the orbit does not exist.
    pub s: Vec<Vec<Option<f64>>>,
    pub l: usize,
    /// Classical loss or gain of stability within the scanned `κ` range.
    pub bifurcation_kappa: Option<f64>,
    pub threshold: f64,
    /// Per `κ`, the smallest `j` at which the orbit's own coherent states
    /// overlap by at most `threshold`.
    pub orthogonality_curve: Vec<Option<f64>>,
}

impl SurvivalGrid {
    pub fn get(&self, j_index: usize, kappa_index: usize) -> Option<f64> {
        self.s[j_index][kappa_index]
    }

    /// The `κ` row at one spin (for slices, the only row).
    pub fn row(&self, j_index: usize) -> &[Option<f64>] {
        &self.s[j_index]
    }

    /// Index of the grid `κ` closest to `kappa`.
    pub fn kappa_index(&self, kappa: f64) -> usize {
        let mut best = 0;
        for (i, k) in self.kappa_values.iter().enumerate() {
            if (k - kappa).abs() < (self.kappa_values[best] - kappa).abs() {
                best = i;
            }
        }
        best
    }

    /// `#`-prefixed metadata, then `j,kappa,S` rows (`S` empty where missing).
    pub fn write_csv(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "#orbit={}", self.label)?;
        writeln!(w, "#L={}", self.l)?;
        match self.bifurcation_kappa {
            Some(k) => writeln!(w, "#bifurcation_kappa={}", fmt_f64(k))?,
            None => writeln!(w, "#bifurcation_kappa=none")?,
        }
        writeln!(w, "#threshold={}", fmt_f64(self.threshold))?;
        writeln!(w, "j,kappa,S")?;
        for (ji, spin) in self.j_values.iter().enumerate() {
            for (ki, kappa) in self.kappa_values.iter().enumerate() {
                let s = self.s[ji][ki].map(fmt_f64).unwrap_or_default();
                writeln!(w, "{},{},{}", fmt_f64(spin.value()), fmt_f64(*kappa), s)?;
            }
        }
        Ok(())
    }

    /// `kappa,j_min` rows (`j_min` empty where undefined).
    pub fn write_curve_csv(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "#orbit={}", self.label)?;
        writeln!(w, "#threshold={}", fmt_f64(self.threshold))?;
        writeln!(w, "kappa,j_min")?;
        for (kappa, j) in self.kappa_values.iter().zip(&self.orthogonality_curve) {
            writeln!(w, "{},{}", fmt_f64(*kappa), j.map(fmt_f64).unwrap_or_default())?;
        }
        Ok(())
    }
}

/// Survival `S(L)` of the coherent state on the orbit's first point for every
/// `(j, κ)` cell. One rotation factor is built per `j` and shared by all `κ`.
pub fn survival_heatmap(
    label: OrbitLabel,
    j_values: &[Spin],
    kappa_values: &[f64],
    l: usize,
    options: ScanOptions,
) -> Result<SurvivalGrid> {
    if label == OrbitLabel::Numeric {
        return Err(Error::InvalidParameter("scans need a catalog orbit label".into()));
    }
    if j_values.is_empty() || kappa_values.is_empty() {
        return Err(Error::InvalidParameter("scan grid is empty".into()));
    }
    if l == 0 {
        return Err(Error::InvalidParameter("L must be at least 1".into()));
    }
    let params: Vec<KickedTopParams> =
        kappa_values.iter().map(|&k| KickedTopParams::standard(k)).collect::<Result<_>>()?;
    let orbits = params
        .par_iter()
        .map(|p| catalog_orbit(label, p))
        .collect::<Result<Vec<_>>>()?;

    let opts = SurvivalOptions { keep_per_kick: false, ..Default::default() };
    let mut s = Vec::with_capacity(j_values.len());
    for &spin in j_values {
        let rotation = Arc::new(RotationFactor::new(spin, params[0].p));
        let row = orbits
            .par_iter()
            .zip(&params)
            .map(|(orbit, p)| match orbit {
                None => Ok(None),
                Some(orbit) => {
                    let op = FloquetOperator::with_rotation(Arc::clone(&rotation), *p)?;
                    Ok(Some(survival_for_orbit(orbit, &op, l, opts)?.s))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        s.push(row);
    }

    let orthogonality_curve = orbits
        .iter()
        .map(|o| match o {
            None => Ok(None),
            Some(o) => match min_j_for_orthogonality(o, &[], options.threshold) {
                Ok(spin) => Ok(Some(spin.value())),
                Err(Error::NoFiniteJ) => Ok(None),
                Err(e) => Err(e),
            },
        })
        .collect::<Result<Vec<_>>>()?;

    let (lo, hi) = kappa_values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &k| (a.min(k), b.max(k)));
    let bifurcation_kappa = if hi > lo {
        bifurcation_scan(label, (lo, hi), options.bifurcation_points.max(2))?.crossing
    } else {
        None
    };

    Ok(SurvivalGrid {
        label,
        j_values: j_values.to_vec(),
        kappa_values: kappa_values.to_vec(),
        s,
        l,
        bifurcation_kappa,
        threshold: options.threshold,
        orthogonality_curve,
    })
}

/// `S(κ)` at one spin; a one-row [`survival_heatmap`].
pub fn survival_slice(
    label: OrbitLabel,
    spin: Spin,
    kappa_values: &[f64],
    l: usize,
    options: ScanOptions,
) -> Result<SurvivalGrid> {
    survival_heatmap(label, &[spin], kappa_values, l, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::survival_period_n;

    #[test]
    fn grid_helpers() {
        assert_eq!(linspace(1.0, 3.0, 5), vec![1.0, 1.5, 2.0, 2.5, 3.0]);
        assert_eq!(linspace(2.0, 9.0, 1), vec![2.0]);
        let js = spin_range(0.5, 3.0, 0.5).unwrap();
        assert_eq!(js.len(), 6);
        assert_eq!(spin_range(1.0, 4.0, 1.0).unwrap().last().unwrap().twice(), 8);
        assert!(spin_range(1.0, 4.0, 0.3).is_err());
    }

    #[test]
    fn single_cell_matches_direct_call() {
        let spin = Spin::from_twice(16);
        let grid = survival_heatmap(OrbitLabel::P2A, &[spin], &[3.1], 20, ScanOptions::for_orbit(OrbitLabel::P2A)).unwrap();
        let p = KickedTopParams::standard(3.1).unwrap();
        let orbit = catalog_orbit(OrbitLabel::P2A, &p).unwrap().unwrap();
        let direct = survival_period_n(&orbit, spin, &p, 20).unwrap();
        assert_eq!(grid.get(0, 0), Some(direct.s));
        assert_eq!(grid.bifurcation_kappa, None);
    }

    #[test]
    fn missing_cells_are_not_fabricated() {
        let kappas = linspace(1.5, 2.5, 5);
        let grid = survival_slice(OrbitLabel::FP3, Spin::from_twice(10), &kappas, 5, ScanOptions::for_orbit(OrbitLabel::FP3)).unwrap();
        assert_eq!(grid.row(0)[..3], [None, None, None]);
        assert!(grid.row(0)[3..].iter().all(|s| s.is_some()));
        assert_eq!(grid.orthogonality_curve[0], None);
        let mut csv = Vec::new();
        grid.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("#orbit=FP3\n#L=5\n"));
        assert!(text.lines().any(|l| l.ends_with(',')));
    }

    #[test]
    fn fp1_heatmap_shows_bifurcation() {
        let js: Vec<Spin> = [10u32, 20, 40].into_iter().map(Spin::from_twice).collect();
        let kappas = linspace(1.0, 3.0, 9);
        let grid = survival_heatmap(OrbitLabel::FP1, &js, &kappas, 50, ScanOptions::for_orbit(OrbitLabel::FP1)).unwrap();
        assert!((grid.bifurcation_kappa.unwrap() - 2.0).abs() < 1e-6);
        let s = |ji: usize, k: f64| grid.get(ji, grid.kappa_index(k)).unwrap();
        assert!(s(2, 1.5) > s(2, 2.75) + 0.3);
        // FP1 is its own orbit: no pair, so the curve sits at the smallest spin
        assert!(grid.orthogonality_curve.iter().all(|c| *c == Some(0.5)));
    }
}
