//! Stability of every catalog orbit over a kappa range and the located
//! stability changes.

use kicktop::classical::{bifurcation_scan, OrbitLabel};

fn main() -> kicktop::Result<()> {
    use OrbitLabel::*;
    let ranges = [
        (FP1, (1.0, 3.0)),
        (FP2, (1.0, 3.0)),
        (P4, (2.5, 3.6)),
        (FP3, (2.1, 5.0)),
        (FP4, (2.1, 5.0)),
        (P2A, (2.1, 5.0)),
        (P2B, (4.45, 5.5)),
        (P2C, (4.45, 5.5)),
        (P2D, (4.45, 5.5)),
        (P2E, (4.45, 5.5)),
    ];
    for (label, range) in ranges {
        let scan = bifurcation_scan(label, range, 2001)?;
        let peak = scan.max_abs_eigenvalue.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
        match scan.crossing {
            Some(k) => println!("{label:>4}: stability changes at kappa = {k:.10} (max |lambda| on grid {peak:.3})"),
            None => println!("{label:>4}: no change in [{}, {}]", range.0, range.1),
        }
    }
    Ok(())
}
