//! Acceptance gate: every criterion at its stated tolerance, one PASS/FAIL
//! line each. Exits nonzero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::time::{Duration, Instant};

use kicktop::classical::{
    bifurcation_scan, catalog_orbit, jacobian, solve_x0, x0_residual, ClassicalState, KickedTopParams,
    OrbitLabel,
};
use kicktop::correspondence::{
    linspace, min_j_for_orthogonality, spin_range, survival_heatmap, survival_slice, ScanOptions,
};
use kicktop::floquet::{evolve, projection_series, survival_period_n, FloquetOperator};
use kicktop::spin::{
    husimi, overlap_analytic, overlap_numeric, spin_coherent_state, HusimiResolution, HusimiSource,
    SphericalPoint, Spin,
};
use kicktop::Complex64;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn params(kappa: f64) -> KickedTopParams {
    KickedTopParams::standard(kappa).unwrap()
}

fn spin(j: f64) -> Spin {
    Spin::new(j).unwrap()
}

fn fp1() -> SphericalPoint {
    SphericalPoint::new(FRAC_PI_2, FRAC_PI_2)
}

fn fp2() -> SphericalPoint {
    SphericalPoint::new(FRAC_PI_2, -FRAC_PI_2)
}

fn bifurcation_points() -> Outcome {
    let sqrt2pi = SQRT_2 * PI;
    let cases: [(OrbitLabel, (f64, f64), f64, f64); 9] = [
        (OrbitLabel::FP1, (1.0, 3.0), 2.0, 1e-6),
        (OrbitLabel::P4, (2.5, 3.6), PI, 1e-6),
        (OrbitLabel::FP3, (2.5, 5.0), sqrt2pi, 1e-6),
        (OrbitLabel::FP4, (2.5, 5.0), sqrt2pi, 1e-6),
        (OrbitLabel::P2A, (2.5, 5.0), sqrt2pi, 1e-6),
        (OrbitLabel::P2B, (4.45, 5.5), 4.8725, 1e-3),
        (OrbitLabel::P2C, (4.45, 5.5), 4.8725, 1e-3),
        (OrbitLabel::P2D, (4.45, 5.5), 4.8725, 1e-3),
        (OrbitLabel::P2E, (4.45, 5.5), 4.8725, 1e-3),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, range, expected, tol) in cases {
        let t = Instant::now();
        let crossing = bifurcation_scan(label, range, 2001).ok().and_then(|s| s.crossing);
        let elapsed = t.elapsed();
        let ok = crossing.is_some_and(|c| (c - expected).abs() <= tol) && elapsed < Duration::from_secs(10);
        pass &= ok;
        parts.push(format!("{label}={:.7} ({:.2}s)", crossing.unwrap_or(f64::NAN), elapsed.as_secs_f64()));
    }
    outcome(pass, parts.join(" "))
}

fn fp1_eigenvalues() -> Outcome {
    let mut worst: f64 = 0.0;
    let state = ClassicalState::new(0.0, 1.0, 0.0).unwrap();
    for kappa in [2.5, 3.0, 4.0] {
        let jac = jacobian(state, &params(kappa)).unwrap();
        let mut got: Vec<Complex64> = jac.complex_eigenvalues().iter().copied().collect();
        let d = (kappa * kappa - 4.0).sqrt();
        let expected = [1.0, (kappa + d) / 2.0, (kappa - d) / 2.0];
        for e in expected {
            let (i, err) = got
                .iter()
                .enumerate()
                .map(|(i, z)| (i, (z - e).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            got.remove(i);
            worst = worst.max(err);
        }
    }
    outcome(worst < 1e-9, format!("max eigenvalue error {worst:.2e}"))
}

fn overlap_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let random_point = |rng: &mut ChaCha8Rng| {
        let z: f64 = rng.gen_range(-1.0..1.0);
        SphericalPoint::new(z.acos(), rng.gen_range(-PI..PI))
    };
    let mut worst: f64 = 0.0;
    for j in [1.0, 5.0, 20.0, 50.0] {
        let s = spin(j);
        for _ in 0..1000 {
            let (a, b) = (random_point(&mut rng), random_point(&mut rng));
            let numeric = overlap_numeric(&spin_coherent_state(s, a), &spin_coherent_state(s, b))
                .unwrap()
                .norm();
            worst = worst.max((numeric - overlap_analytic(a, b, s)).abs());
        }
    }
    let p4 = catalog_orbit(OrbitLabel::P4, &params(1.5)).unwrap().unwrap();
    let adjacent = overlap_analytic(p4.points[0].to_spherical(), p4.points[1].to_spherical(), spin(20.0));
    let rel = (adjacent / 2f64.powi(-20) - 1.0).abs();
    outcome(
        worst < 1e-10 && rel < 1e-12,
        format!("max |numeric - law| {worst:.2e}; P4 adjacent j=20 {adjacent:.6e} (rel {rel:.1e})"),
    )
}

fn p4_threshold() -> Outcome {
    let p4 = catalog_orbit(OrbitLabel::P4, &params(1.5)).unwrap().unwrap();
    match min_j_for_orthogonality(&p4, &[], 1e-8) {
        Ok(j) => outcome(j.value() == 27.0, format!("j_min = {j}")),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn p2a_overlaps() -> Outcome {
    let kappa = 2.5;
    let x0 = solve_x0(kappa).unwrap();
    let residual = x0_residual(kappa, x0).abs();
    let p2a = catalog_orbit(OrbitLabel::P2A, &params(kappa)).unwrap().unwrap();
    let (a, b) = (p2a.points[0].to_spherical(), p2a.points[1].to_spherical());
    let o10 = overlap_analytic(a, b, spin(10.0));
    let o40 = overlap_analytic(a, b, spin(40.0));
    let pass = residual < 1e-12 && (1e-5..=1e-3).contains(&o10) && (1e-15..=1e-13).contains(&o40);
    outcome(pass, format!("x0={x0:.12} residual {residual:.1e}; j=10 {o10:.3e}; j=40 {o40:.3e}"))
}

fn deep_quantum() -> Outcome {
    let t = Instant::now();
    let op10 = FloquetOperator::new(spin(10.0), params(1.5)).unwrap();
    let start = spin_coherent_state(spin(10.0), fp1());
    let series = projection_series(&op10, &start, &start, 8).unwrap();
    let min_survival = series[1..].iter().copied().fold(f64::INFINITY, f64::min);

    let op2 = FloquetOperator::new(spin(2.0), params(1.5)).unwrap();
    let transfer = projection_series(
        &op2,
        &spin_coherent_state(spin(2.0), fp1()),
        &spin_coherent_state(spin(2.0), fp2()),
        200,
    )
    .unwrap();
    let (kick, max_transfer) = transfer
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let elapsed = t.elapsed();
    let pass = min_survival > 0.9 && max_transfer > 0.5 && elapsed < Duration::from_secs(5);
    outcome(
        pass,
        format!(
            "j=10 min survival over kicks 1..8 {min_survival:.4}; j=2 max FP2 probability {max_transfer:.4} at kick {kick}; {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn p4_transition() -> Outcome {
    let p = params(1.5);
    let p4 = catalog_orbit(OrbitLabel::P4, &p).unwrap().unwrap();
    let s6 = survival_period_n(&p4, spin(6.0), &p, 50).unwrap().s;
    let s20 = survival_period_n(&p4, spin(20.0), &p, 50).unwrap().s;
    outcome(s20 - s6 > 0.3, format!("S(20)={s20:.4} S(6)={s6:.4} diff {:.4}", s20 - s6))
}

fn slice_difference(label: OrbitLabel, j: f64, l: usize, high: f64, low: f64) -> Outcome {
    let t = Instant::now();
    let grid = survival_slice(label, spin(j), &[high, low], l, ScanOptions::for_orbit(label)).unwrap();
    let elapsed = t.elapsed();
    let (a, b) = (grid.get(0, 0).unwrap(), grid.get(0, 1).unwrap());
    outcome(
        a - b > 0.5 && elapsed < Duration::from_secs(1800),
        format!("S({high})={a:.4} S({low})={b:.4} diff {:.4}; {:.1}s", a - b, elapsed.as_secs_f64()),
    )
}

fn p2a_slice() -> Outcome {
    let t = Instant::now();
    let kappas: Vec<f64> = (0..=80).map(|i| 3.4 + 0.02 * i as f64).collect();
    let grid = survival_slice(OrbitLabel::P2A, spin(1000.0), &kappas, 100, ScanOptions::for_orbit(OrbitLabel::P2A))
        .unwrap();
    let elapsed = t.elapsed();
    let s: Vec<f64> = grid.row(0).iter().map(|v| v.unwrap()).collect();
    let at = |k: f64| s[grid.kappa_index(k)];

    let window: Vec<usize> = (0..kappas.len()).filter(|&i| (3.6 - 1e-9..=3.8 + 1e-9).contains(&kappas[i])).collect();
    let i_min = *window.iter().min_by(|&&a, &&b| s[a].total_cmp(&s[b])).unwrap();
    let local_min = s[i_min] < s[i_min - 1] && s[i_min] < s[i_min + 1] && s[i_min] < at(3.5) && s[i_min] < at(3.9);

    let bif = SQRT_2 * PI;
    let mean = |f: &dyn Fn(f64) -> bool| {
        let v: Vec<f64> = kappas.iter().zip(&s).filter(|(k, _)| f(**k)).map(|(_, s)| *s).collect();
        v.iter().sum::<f64>() / v.len() as f64
    };
    let before = mean(&|k| k < bif);
    let after = mean(&|k| k > bif);
    let collapse = after < 0.5 * before;
    outcome(
        local_min && collapse && elapsed < Duration::from_secs(1800),
        format!(
            "min S={:.4} at κ={:.2} (S(3.5)={:.4}, S(3.9)={:.4}); mean S below/above √2π {before:.4}/{after:.4}; {:.1}s",
            s[i_min],
            kappas[i_min],
            at(3.5),
            at(3.9),
            elapsed.as_secs_f64()
        ),
    )
}

fn husimi_normalization() -> Outcome {
    let s = spin(25.0);
    let op = FloquetOperator::new(s, params(3.0)).unwrap();
    let states = evolve(&spin_coherent_state(s, SphericalPoint::new(1.0, 0.7)), &op, 20).unwrap();
    let res = HusimiResolution::default_for(s);
    let worst_norm = states[1..]
        .iter()
        .map(|st| (husimi(st, res).unwrap().integral() - 1.0).abs())
        .fold(0.0, f64::max);
    let n = s.dim();
    let rho = DMatrix::<Complex64>::identity(n, n) / Complex64::new(n as f64, 0.0);
    let mixed = husimi(HusimiSource::Density { spin: s, rho: &rho }, res).unwrap();
    let flat = 1.0 / (4.0 * PI);
    let worst_flat = (mixed.max_value() - flat).abs().max((mixed.min_value() - flat).abs());
    outcome(
        worst_norm < 1e-6 && worst_flat < 1e-12,
        format!("max |∮Q - 1| {worst_norm:.2e}; max |Q_mixed - 1/4π| {worst_flat:.2e}"),
    )
}

fn unitarity() -> Outcome {
    let mut worst: f64 = 0.0;
    for j in [0.5, 10.0, 100.0, 500.0, 1000.0, 1999.5, 2000.0] {
        let op = FloquetOperator::new(spin(j), params(3.0)).unwrap();
        worst = worst.max(op.unitarity_error());
    }
    let s = spin(100.0);
    let op = FloquetOperator::new(s, params(3.0)).unwrap();
    let mut prop = op.propagate(&spin_coherent_state(s, SphericalPoint::new(0.9, 2.0))).unwrap();
    let mut drift: f64 = 0.0;
    for _ in 0..10_000 {
        prop.advance();
        drift = drift.max((prop.amplitudes().norm() - 1.0).abs());
    }
    outcome(
        worst < 1e-10 && drift < 1e-9,
        format!("max ‖U†U - I‖ {worst:.2e} (j ≤ 2000); norm drift over 1e4 kicks {drift:.2e}"),
    )
}

fn heatmap_structure() -> Outcome {
    let js = spin_range(1.0, 50.0, 1.0).unwrap();
    let kappas = linspace(2.05, 5.0, 60);
    let grid = survival_heatmap(OrbitLabel::P2A, &js, &kappas, 50, ScanOptions::for_orbit(OrbitLabel::P2A)).unwrap();
    let Some(bif) = grid.bifurcation_kappa else {
        return outcome(false, "no bifurcation located");
    };
    let (mut above_curve, mut past_bif) = (Vec::new(), Vec::new());
    for (ji, j) in grid.j_values.iter().enumerate() {
        for (ki, &k) in kappas.iter().enumerate() {
            let Some(s) = grid.get(ji, ki) else { continue };
            if k > bif {
                past_bif.push(s);
            } else if grid.orthogonality_curve[ki].is_some_and(|jmin| j.value() >= jmin) {
                above_curve.push(s);
            }
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (a, b) = (mean(&above_curve), mean(&past_bif));
    outcome(
        a - b > 0.3,
        format!(
            "mean S stable above curve {a:.4} ({} cells), past bifurcation {b:.4} ({} cells), diff {:.4}",
            above_curve.len(),
            past_bif.len(),
            a - b
        ),
    )
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("1 bifurcation points", bifurcation_points),
        ("2 FP1 eigenvalues", fp1_eigenvalues),
        ("3 overlap law", overlap_law),
        ("4 P4 orthogonality threshold", p4_threshold),
        ("5 P2A overlaps", p2a_overlaps),
        ("6 deep-quantum localization", deep_quantum),
        ("7 P4 correspondence transition", p4_transition),
        ("8a FP1 slice", || slice_difference(OrbitLabel::FP1, 2000.0, 200, 1.9, 2.1)),
        ("8b P4 slice", || slice_difference(OrbitLabel::P4, 1000.0, 50, 3.0, 3.3)),
        ("8c P2A slice", p2a_slice),
        ("9 Husimi normalization", husimi_normalization),
        ("10 unitarity and norm drift", unitarity),
        ("11 P2A heatmap structure", heatmap_structure),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        let o = check();
        let status = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("{status} {name}: {} [{:.1}s]", o.detail, t.elapsed().as_secs_f64());
    }
    println!("{failed} criteria failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
