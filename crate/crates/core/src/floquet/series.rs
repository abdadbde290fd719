use super::operator::FloquetOperator;
use crate::classical::KickedTopParams;
use crate::spin::{
    husimi, spin_coherent_state, HusimiGrid, HusimiResolution, HusimiSource, SphericalPoint, Spin,
    SpinState,
};
use crate::{Error, Result};

/// Husimi snapshots of the coherent state at `point` after each kick in
/// `kicks` (sorted, kick 0 is the initial state).
pub fn husimi_timeseries(
    point: SphericalPoint,
    spin: Spin,
    params: &KickedTopParams,
    kicks: &[usize],
    resolution: HusimiResolution,
) -> Result<Vec<HusimiGrid>> {
    if kicks.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter("kick list must be sorted".into()));
    }
    let op = FloquetOperator::new(spin, *params)?;
    let psi = spin_coherent_state(spin, point);
    let mut prop = op.propagate(&psi)?;
    let mut at = 0;
    let mut out = Vec::with_capacity(kicks.len());
    for &k in kicks {
        while at < k {
            prop.advance();
            at += 1;
        }
        let state = SpinState::from_raw(spin, prop.amplitudes().clone());
        out.push(husimi(HusimiSource::Pure(&state), resolution)?);
    }
    Ok(out)
}

/// Mean of the Husimi grids after kicks `1..=n_kicks` starting from the
/// coherent state at `point`.
pub fn husimi_time_average(
    point: SphericalPoint,
    spin: Spin,
    params: &KickedTopParams,
    n_kicks: usize,
    resolution: HusimiResolution,
) -> Result<HusimiGrid> {
    let op = FloquetOperator::new(spin, *params)?;
    husimi_time_average_from(&spin_coherent_state(spin, point), &op, n_kicks, resolution)
}

/// As [`husimi_time_average`] for an arbitrary initial state.
pub fn husimi_time_average_from(
    initial: &SpinState,
    op: &FloquetOperator,
    n_kicks: usize,
    resolution: HusimiResolution,
) -> Result<HusimiGrid> {
    if n_kicks == 0 {
        return Err(Error::InvalidParameter("n_kicks must be at least 1".into()));
    }
    let mut prop = op.propagate(initial)?;
    let mut acc: Option<HusimiGrid> = None;
    for _ in 0..n_kicks {
        prop.advance();
        let state = SpinState::from_raw(op.spin(), prop.amplitudes().clone());
        let grid = husimi(HusimiSource::Pure(&state), resolution)?;
        acc = Some(match acc {
            None => grid,
            Some(mut a) => {
                a.values.iter_mut().zip(&grid.values).for_each(|(x, y)| *x += y);
                a
            }
        });
    }
    let mut avg = acc.expect("n_kicks >= 1");
    avg.values.iter_mut().for_each(|v| *v /= n_kicks as f64);
    Ok(avg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn params(kappa: f64) -> KickedTopParams {
        KickedTopParams::standard(kappa).unwrap()
    }

    #[test]
    fn large_spin_peak_cycles_through_period_four() {
        let spin = Spin::from_twice(40);
        let start = SphericalPoint::new(FRAC_PI_2, 0.0);
        let kicks: Vec<usize> = (0..=8).collect();
        let grids = husimi_timeseries(start, spin, &params(1.5), &kicks, HusimiResolution::new(64, 128).unwrap()).unwrap();
        let cycle = [[1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
        for (k, g) in grids.iter().enumerate() {
            let target = SphericalPoint::from_cartesian(cycle[k % 4]);
            assert!(g.peak().angle_to(target) < 0.1, "kick {k}");
        }
    }

    #[test]
    fn kick_zero_is_initial_state() {
        let spin = Spin::from_twice(10);
        let start = SphericalPoint::new(1.0, 0.4);
        let res = HusimiResolution::new(32, 64).unwrap();
        let g = husimi_timeseries(start, spin, &params(2.0), &[0], res).unwrap();
        let direct = husimi(HusimiSource::Pure(&spin_coherent_state(spin, start)), res).unwrap();
        assert_eq!(g[0].values, direct.values);
        assert!(husimi_timeseries(start, spin, &params(2.0), &[3, 1], res).is_err());
    }

    #[test]
    fn eigenstate_average_equals_single_kick() {
        let spin = Spin::from_twice(8);
        let op = FloquetOperator::new(spin, params(2.5)).unwrap();
        let v = op.matrix().schur().unpack().0;
        let psi = SpinState::new(spin, v.column(2).into_owned()).unwrap();
        let res = HusimiResolution::new(24, 48).unwrap();
        let avg = husimi_time_average_from(&psi, &op, 10, res).unwrap();
        let one = husimi_time_average_from(&psi, &op, 1, res).unwrap();
        for (a, b) in avg.values.iter().zip(&one.values) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn chaotic_average_spreads() {
        let spin = Spin::from_twice(50);
        let fp1 = SphericalPoint::new(FRAC_PI_2, FRAC_PI_2);
        let res = HusimiResolution::new(48, 96).unwrap();
        let regular = husimi_time_average(fp1, spin, &params(2.5), 100, res).unwrap();
        let chaotic = husimi_time_average(fp1, spin, &params(6.0), 100, res).unwrap();
        let support = |g: &HusimiGrid| {
            let peak = g.max_value();
            let total = g.integral();
            let mut covered = 0.0;
            for i in 0..g.n_theta() {
                for k in 0..g.n_phi() {
                    if g.value(i, k) > 0.05 * peak {
                        covered += g.theta_weights[i] * 2.0 * PI / g.n_phi() as f64;
                    }
                }
            }
            (covered / (4.0 * PI), total)
        };
        let (reg_cover, reg_total) = support(&regular);
        let (ch_cover, ch_total) = support(&chaotic);
        assert!((reg_total - 1.0).abs() < 1e-10 && (ch_total - 1.0).abs() < 1e-10);
        assert!(ch_cover > 0.5, "{ch_cover}");
        assert!(reg_cover < ch_cover);
    }
}
