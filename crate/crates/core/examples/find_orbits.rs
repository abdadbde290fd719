//! Newton search for periodic orbits from a seed grid, compared with the
//! closed-form catalog.

use kicktop::classical::{find_periodic_orbits, KickedTopParams, OrbitLabel, SeedGrid};

fn main() -> kicktop::Result<()> {
    for (period, kappa) in [(1, 2.5), (2, 4.6), (4, 1.5)] {
        let params = KickedTopParams::standard(kappa)?;
        let search = find_periodic_orbits(period, &params, SeedGrid::new(40, 40))?;
        println!(
            "period {period}, kappa = {kappa}: {} orbits ({} seeds converged, {} failed, {} of lower period)",
            search.orbits.len(),
            search.converged_seeds,
            search.failed_seeds,
            search.lower_period_seeds
        );
        for orbit in &search.orbits {
            let p = orbit.points[0];
            let name = if orbit.label == OrbitLabel::Numeric { "new".to_string() } else { orbit.label.to_string() };
            println!(
                "  {name:>4} ({:+.6}, {:+.6}, {:+.6}) max|lambda| = {:.4}",
                p.x(),
                p.y(),
                p.z(),
                orbit.max_abs_eigenvalue()
            );
        }
    }
    Ok(())
}
