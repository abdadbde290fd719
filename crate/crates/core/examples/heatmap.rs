//! Survival heatmap over (j, kappa) for the P2A family with its
//! orthogonality curve, written as CSV to the temp directory.

use kicktop::classical::OrbitLabel;
use kicktop::correspondence::{linspace, spin_range, survival_heatmap, ScanOptions};

fn main() -> kicktop::Result<()> {
    let js = spin_range(1.0, 30.0, 1.0)?;
    let kappas = linspace(2.05, 5.0, 30);
    let grid = survival_heatmap(OrbitLabel::P2A, &js, &kappas, 50, ScanOptions::for_orbit(OrbitLabel::P2A))?;

    let dir = std::env::temp_dir();
    grid.write_csv(&mut std::fs::File::create(dir.join("heatmap_p2a.csv"))?)?;
    grid.write_curve_csv(&mut std::fs::File::create(dir.join("heatmap_p2a_curve.csv"))?)?;
    println!("bifurcation at kappa = {:?}", grid.bifurcation_kappa);

    // coarse text rendering: rows are j, columns kappa
    for (ji, j) in grid.j_values.iter().enumerate().rev().step_by(3) {
        let row: String = grid
            .row(ji)
            .iter()
            .map(|s| match s {
                None => ' ',
                Some(s) if *s > 0.6 => '#',
                Some(s) if *s > 0.3 => '+',
                Some(s) if *s > 0.1 => '.',
                Some(_) => '_',
            })
            .collect();
        println!("j = {:>4} |{row}|", j.to_string());
    }
    println!("CSV written to {}", dir.display());
    Ok(())
}
