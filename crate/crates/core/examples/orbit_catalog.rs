//! The closed-form orbit catalog at a few kappa values, with stability and
//! the entries that do not exist there.

use kicktop::classical::{orbit_catalog, Existence, KickedTopParams};

fn main() -> kicktop::Result<()> {
    for kappa in [1.5, 2.5, 3.5, 4.6, 5.0] {
        let catalog = orbit_catalog(&KickedTopParams::standard(kappa)?)?;
        println!("kappa = {kappa}");
        for orbit in &catalog.orbits {
            let p = orbit.points[0];
            println!(
                "  {:>4} period {}  ({:+.6}, {:+.6}, {:+.6})  max|lambda| = {:.6}  {}",
                orbit.label,
                orbit.period(),
                p.x(),
                p.y(),
                p.z(),
                orbit.max_abs_eigenvalue(),
                if orbit.is_stable { "stable" } else { "unstable" }
            );
        }
        for entry in &catalog.report {
            if let Existence::Absent(why) = &entry.existence {
                println!("  {:>4} absent: {why}", entry.label);
            }
        }
    }
    Ok(())
}
