use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;

use super::config::{OutputFormat, RunConfig, Subcommand};
use crate::classical::{
    bifurcation_scan, catalog_orbit, find_periodic_orbits, orbit_catalog, stroboscopic_ensemble,
    ClassicalState, Existence, KickedTopParams, OrbitLabel, PeriodicOrbit, SeedGrid,
};
use crate::correspondence::{
    criteria_report, min_j_for_orthogonality, survival_heatmap, symmetry_partners, ScanOptions,
};
use crate::floquet::{
    husimi_time_average, husimi_timeseries, survival_for_orbit, FloquetOperator, RotationFactor,
    SurvivalOptions, SurvivalResult,
};
use crate::io::{fmt_f64, write_husimi_binary, write_husimi_csv};
use crate::spin::{HusimiResolution, SphericalPoint, Spin};
use crate::{Error, Result};

/// One file produced by a run, held in memory until the run succeeds.
pub(crate) struct Output {
    pub name: String,
    pub bytes: Vec<u8>,
}

pub(crate) struct Report {
    pub outputs: Vec<Output>,
    pub summary: Vec<String>,
}

fn single_kappa(cfg: &RunConfig) -> Result<f64> {
    match cfg.kappa_values().as_slice() {
        [k] => Ok(*k),
        _ => Err(Error::InvalidParameter(format!("{} takes a single kappa", cfg.command))),
    }
}

fn params(cfg: &RunConfig, kappa: f64) -> Result<KickedTopParams> {
    KickedTopParams::new(kappa, cfg.p.unwrap_or(std::f64::consts::FRAC_PI_2), cfg.tau.unwrap_or(1.0))
}

fn spins(cfg: &RunConfig) -> Result<Vec<Spin>> {
    cfg.j_values().into_iter().map(Spin::new).collect()
}

fn required<T>(v: Option<T>, key: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParameter(format!("missing required key {key}")))
}

/// The catalog orbit at `params`, or the reason it is unavailable.
fn require_orbit(label: OrbitLabel, params: &KickedTopParams) -> Result<PeriodicOrbit> {
    match catalog_orbit(label, params)? {
        Some(o) => Ok(o),
        None if matches!(label, OrbitLabel::FP3 | OrbitLabel::FP4 | OrbitLabel::P2A) => {
            Err(Error::NoRoot(params.kappa))
        }
        None => Err(Error::InvalidParameter(format!("{label} does not exist at κ = {}", params.kappa))),
    }
}

fn csv(lines: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    lines(&mut buf)?;
    Ok(buf)
}

pub(crate) fn execute(cfg: &RunConfig) -> Result<Report> {
    match cfg.command {
        Subcommand::PhasePortrait => phase_portrait(cfg),
        Subcommand::Bifurcation => bifurcation(cfg),
        Subcommand::Catalog => catalog(cfg),
        Subcommand::Husimi => husimi(cfg),
        Subcommand::Survival => survival(cfg),
        Subcommand::Heatmap => heatmap(cfg),
        Subcommand::Criteria => criteria(cfg),
        Subcommand::FindOrbits => find_orbits(cfg),
    }
}

fn phase_portrait(cfg: &RunConfig) -> Result<Report> {
    let kappa = single_kappa(cfg)?;
    let p = params(cfg, kappa)?;
    let n_init = required(cfg.n_init, "n-init")?;
    let kicks = required(cfg.kicks, "kicks")?;
    let seed = cfg.seed.unwrap_or(0);
    let points = stroboscopic_ensemble(n_init, kicks, &p, seed)?;
    let bytes = csv(|w| {
        writeln!(w, "# phase portrait kappa={} n_init={n_init} kicks={kicks} seed={seed}", fmt_f64(kappa))?;
        writeln!(w, "trajectory,kick,theta,phi")?;
        for (i, pt) in points.iter().enumerate() {
            writeln!(w, "{},{},{},{}", i / kicks, i % kicks + 1, fmt_f64(pt.theta), fmt_f64(pt.phi))?;
        }
        Ok(())
    })?;
    Ok(Report {
        outputs: vec![Output { name: "phase_portrait.csv".into(), bytes }],
        summary: vec![format!("{} points from {n_init} trajectories", points.len())],
    })
}

fn bifurcation(cfg: &RunConfig) -> Result<Report> {
    let label = required(cfg.orbit, "orbit")?;
    let ks = cfg.kappa_values();
    let (lo, hi) = (ks[0], *ks.last().expect("validated non-empty"));
    let scan = bifurcation_scan(label, (lo, hi), ks.len())?;
    let bytes = csv(|w| {
        writeln!(w, "#orbit={label}")?;
        match scan.crossing {
            Some(k) => writeln!(w, "#crossing={}", fmt_f64(k))?,
            None => writeln!(w, "#crossing=none")?,
        }
        writeln!(w, "kappa,max_abs_eigenvalue")?;
        for (k, m) in scan.kappa_values.iter().zip(&scan.max_abs_eigenvalue) {
            writeln!(w, "{},{}", fmt_f64(*k), m.map(fmt_f64).unwrap_or_default())?;
        }
        Ok(())
    })?;
    let mut summary = vec![match scan.crossing {
        Some(k) => format!("{label}: stability changes at κ = {k:.10}"),
        None => format!("{label}: no stability change in [{lo}, {hi}]"),
    }];
    for (a, b) in &scan.missing_ranges {
        summary.push(format!("{label} absent for κ in [{a}, {b}]"));
    }
    Ok(Report { outputs: vec![Output { name: "bifurcation.csv".into(), bytes }], summary })
}

fn write_orbit_rows(w: &mut Vec<u8>, index: usize, o: &PeriodicOrbit) -> std::io::Result<()> {
    for (k, pt) in o.points.iter().enumerate() {
        let s = pt.to_spherical();
        writeln!(
            w,
            "{index},{},{},{k},{},{},{},{},{},{},{}",
            o.label,
            o.period(),
            fmt_f64(pt.x()),
            fmt_f64(pt.y()),
            fmt_f64(pt.z()),
            fmt_f64(s.theta),
            fmt_f64(s.phi),
            fmt_f64(o.max_abs_eigenvalue()),
            o.is_stable
        )?;
    }
    Ok(())
}

const ORBIT_HEADER: &str = "orbit,label,period,point,x,y,z,theta,phi,max_abs_eigenvalue,stable";

fn catalog(cfg: &RunConfig) -> Result<Report> {
    let kappa = single_kappa(cfg)?;
    let cat = orbit_catalog(&params(cfg, kappa)?)?;
    let mut summary = Vec::new();
    let bytes = csv(|w| {
        writeln!(w, "#kappa={}", fmt_f64(kappa))?;
        for e in &cat.report {
            match &e.existence {
                Existence::Present => {}
                Existence::Absent(why) => writeln!(w, "#absent {}: {why}", e.label)?,
                Existence::NotClosed(r) => writeln!(w, "#not_closed {}: residual {}", e.label, fmt_f64(*r))?,
            }
        }
        writeln!(w, "{ORBIT_HEADER}")?;
        for (i, o) in cat.orbits.iter().enumerate() {
            write_orbit_rows(w, i, o)?;
            summary.push(format!(
                "{} period {} {} (max |λ| = {:.6})",
                o.label,
                o.period(),
                if o.is_stable { "stable" } else { "unstable" },
                o.max_abs_eigenvalue()
            ));
        }
        Ok(())
    })?;
    Ok(Report { outputs: vec![Output { name: "catalog.csv".into(), bytes }], summary })
}

fn husimi(cfg: &RunConfig) -> Result<Report> {
    let kappa = single_kappa(cfg)?;
    let p = params(cfg, kappa)?;
    let spin = match spins(cfg)?.as_slice() {
        [s] => *s,
        _ => return Err(Error::InvalidParameter("husimi takes a single j".into())),
    };
    let start = match (cfg.start, cfg.orbit) {
        (Some((theta, phi)), _) => SphericalPoint::new(theta, phi),
        (None, Some(label)) => require_orbit(label, &p)?.points[0].to_spherical(),
        (None, None) => return Err(Error::InvalidParameter("husimi needs an orbit or a start point".into())),
    };
    let default_res = HusimiResolution::default_for(spin);
    let res = HusimiResolution::new(
        cfg.n_theta.unwrap_or(default_res.n_theta),
        cfg.n_phi.unwrap_or(default_res.n_phi),
    )?;
    let kicks = required(cfg.kicks, "kicks")?;
    let format = cfg.format.unwrap_or(OutputFormat::Csv);
    let ext = match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Binary => "bin",
    };
    let encode = |g: &crate::spin::HusimiGrid| -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        match format {
            OutputFormat::Csv => write_husimi_csv(g, &mut buf)?,
            OutputFormat::Binary => write_husimi_binary(g, &mut buf)?,
        }
        Ok(buf)
    };
    let mut outputs = Vec::new();
    let mut summary = Vec::new();
    if cfg.average == Some(true) {
        let g = husimi_time_average(start, spin, &p, kicks, res)?;
        let peak = g.peak();
        summary.push(format!("average over {kicks} kicks peaks at θ={:.4}, φ={:.4}", peak.theta, peak.phi));
        outputs.push(Output { name: format!("husimi_average.{ext}"), bytes: encode(&g)? });
    } else {
        let list: Vec<usize> = (0..=kicks).collect();
        for (k, g) in list.iter().zip(husimi_timeseries(start, spin, &p, &list, res)?) {
            let peak = g.peak();
            summary.push(format!("kick {k}: peak at θ={:.4}, φ={:.4}", peak.theta, peak.phi));
            outputs.push(Output { name: format!("husimi_kick{k:04}.{ext}"), bytes: encode(&g)? });
        }
    }
    Ok(Report { outputs, summary })
}

fn survival(cfg: &RunConfig) -> Result<Report> {
    let label = required(cfg.orbit, "orbit")?;
    let l = required(cfg.l, "L")?;
    let keep = cfg.per_kick == Some(true);
    let kappas = cfg.kappa_values();
    let ps: Vec<KickedTopParams> = kappas.iter().map(|&k| params(cfg, k)).collect::<Result<_>>()?;
    let orbits: Vec<PeriodicOrbit> = ps.iter().map(|p| require_orbit(label, p)).collect::<Result<_>>()?;
    let opts = SurvivalOptions { keep_per_kick: keep, ..Default::default() };
    let mut rows: Vec<SurvivalResult> = Vec::new();
    for spin in spins(cfg)? {
        let rotation = Arc::new(RotationFactor::new(spin, ps[0].p));
        let results = orbits
            .par_iter()
            .zip(&ps)
            .map(|(o, p)| {
                let op = FloquetOperator::with_rotation(Arc::clone(&rotation), *p)?;
                survival_for_orbit(o, &op, l, opts)
            })
            .collect::<Result<Vec<_>>>()?;
        rows.extend(results);
    }
    let summary = rows.iter().map(|r| r.to_string()).collect();
    let bytes = csv(|w| {
        if keep {
            let cols: Vec<String> = (1..=l).map(|i| format!("p{i}")).collect();
            writeln!(w, "{},{}", SurvivalResult::CSV_HEADER, cols.join(","))?;
        } else {
            writeln!(w, "{}", SurvivalResult::CSV_HEADER)?;
        }
        for r in &rows {
            writeln!(w, "{}", r.csv_row())?;
        }
        Ok(())
    })?;
    Ok(Report { outputs: vec![Output { name: "survival.csv".into(), bytes }], summary })
}

fn heatmap(cfg: &RunConfig) -> Result<Report> {
    let label = required(cfg.orbit, "orbit")?;
    let l = required(cfg.l, "L")?;
    let mut options = ScanOptions::for_orbit(label);
    if let Some(t) = cfg.threshold {
        options.threshold = t;
    }
    let grid = survival_heatmap(label, &spins(cfg)?, &cfg.kappa_values(), l, options)?;
    let mut main = Vec::new();
    grid.write_csv(&mut main)?;
    let mut curve = Vec::new();
    grid.write_curve_csv(&mut curve)?;
    let summary = vec![
        format!("{} × {} cells", grid.j_values.len(), grid.kappa_values.len()),
        match grid.bifurcation_kappa {
            Some(k) => format!("classical bifurcation at κ = {k:.10}"),
            None => "no classical bifurcation in range".into(),
        },
    ];
    Ok(Report {
        outputs: vec![
            Output { name: "heatmap.csv".into(), bytes: main },
            Output { name: "orthogonality_curve.csv".into(), bytes: curve },
        ],
        summary,
    })
}

fn criteria(cfg: &RunConfig) -> Result<Report> {
    let label = required(cfg.orbit, "orbit")?;
    let eps = required(cfg.threshold, "threshold")?;
    let kappa = single_kappa(cfg)?;
    let p = params(cfg, kappa)?;
    let orbit = require_orbit(label, &p)?;
    let partners = symmetry_partners(&orbit, &orbit_catalog(&p)?)?;
    let j_min_orbit = min_j_for_orthogonality(&orbit, &[], eps);
    let j_min_all = min_j_for_orthogonality(&orbit, &partners, eps);
    let names: Vec<String> = partners.iter().map(|o| o.label.to_string()).collect();
    let show = |r: &Result<Spin>| match r {
        Ok(s) => s.to_string(),
        Err(Error::NoFiniteJ) => "none".into(),
        Err(e) => format!("error: {e}"),
    };
    let mut summary = vec![
        format!("{label} at κ = {kappa}: partners [{}]", names.join(", ")),
        format!("orbit points orthogonal (ε = {eps:e}) from j = {}", show(&j_min_orbit)),
        format!("with partners from j = {}", show(&j_min_all)),
    ];
    let reports = spins(cfg)?
        .into_iter()
        .map(|s| criteria_report(&orbit, &partners, s, eps))
        .collect::<Result<Vec<_>>>()?;
    let bytes = csv(|w| {
        writeln!(w, "#orbit={label}")?;
        writeln!(w, "#kappa={}", fmt_f64(kappa))?;
        writeln!(w, "#threshold={}", fmt_f64(eps))?;
        writeln!(w, "#partners={}", names.join(";"))?;
        writeln!(w, "#j_min_orbit={}", show(&j_min_orbit))?;
        writeln!(w, "#j_min_with_partners={}", show(&j_min_all))?;
        writeln!(w, "j,max_orbit_overlap,max_overlap,orbit_criterion,partner_criterion,satisfied")?;
        for r in &reports {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                fmt_f64(r.spin.value()),
                fmt_f64(r.max_orbit_overlap()),
                fmt_f64(r.max_overlap()),
                r.orbit_criterion(),
                r.partner_criterion(),
                r.satisfied
            )?;
        }
        Ok(())
    })?;
    if let Some(r) = reports.last() {
        summary.push(format!("at j = {}: max overlap {:e}", r.spin, r.max_overlap()));
    }
    Ok(Report { outputs: vec![Output { name: "criteria.csv".into(), bytes }], summary })
}

fn find_orbits(cfg: &RunConfig) -> Result<Report> {
    let kappa = single_kappa(cfg)?;
    let period = required(cfg.period, "period")?;
    let grid = SeedGrid::new(required(cfg.n_theta, "n-theta")?, required(cfg.n_phi, "n-phi")?);
    let search = find_periodic_orbits(period, &params(cfg, kappa)?, grid)?;
    let bytes = csv(|w| {
        writeln!(w, "#kappa={}", fmt_f64(kappa))?;
        writeln!(w, "#period={period}")?;
        writeln!(
            w,
            "#seeds converged={} failed={} lower_period={}",
            search.converged_seeds, search.failed_seeds, search.lower_period_seeds
        )?;
        writeln!(w, "{ORBIT_HEADER}")?;
        for (i, o) in search.orbits.iter().enumerate() {
            write_orbit_rows(w, i, o)?;
        }
        Ok(())
    })?;
    let mut summary = vec![format!("{} orbits of period {period}", search.orbits.len())];
    summary.extend(search.orbits.iter().map(|o| {
        let first: ClassicalState = o.points[0];
        format!(
            "{} at ({:.6}, {:.6}, {:.6}) {}",
            o.label,
            first.x(),
            first.y(),
            first.z(),
            if o.is_stable { "stable" } else { "unstable" }
        )
    }));
    Ok(Report { outputs: vec![Output { name: "orbits.csv".into(), bytes }], summary })
}
