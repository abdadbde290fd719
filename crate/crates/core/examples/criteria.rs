//! Orthogonality criteria for coherent states on catalog orbits and the
//! smallest spin satisfying them.

use kicktop::classical::{orbit_catalog, KickedTopParams};
use kicktop::correspondence::{criteria_report, min_j_for_orthogonality, symmetry_partners};
use kicktop::Error;

fn main() -> kicktop::Result<()> {
    let eps = 1e-10;
    for kappa in [2.5, 4.0, 5.0] {
        let catalog = orbit_catalog(&KickedTopParams::standard(kappa)?)?;
        println!("kappa = {kappa}, epsilon = {eps:e}");
        for orbit in &catalog.orbits {
            let partners = symmetry_partners(orbit, &catalog)?;
            let names: Vec<String> = partners.iter().map(|p| p.label.to_string()).collect();
            let j_min = match min_j_for_orthogonality(orbit, &partners, eps) {
                Ok(j) => j,
                Err(Error::NoFiniteJ) => {
                    println!("  {:>4}: points coincide with partners {names:?}", orbit.label);
                    continue;
                }
                Err(e) => return Err(e),
            };
            let report = criteria_report(orbit, &partners, j_min, eps)?;
            println!(
                "  {:>4}: j_min = {j_min:>5}, max overlap there {:.2e}, partners {names:?}",
                orbit.label,
                report.max_overlap()
            );
        }
    }
    Ok(())
}
