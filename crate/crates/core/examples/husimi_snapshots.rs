//! Husimi distributions of a coherent state launched on the period-4 orbit:
//! the peak hops between the four orbit points from kick to kick.

use kicktop::classical::{catalog_orbit, KickedTopParams, OrbitLabel};
use kicktop::floquet::{husimi_time_average, husimi_timeseries};
use kicktop::io::write_husimi_csv;
use kicktop::spin::{HusimiResolution, Spin};

fn main() -> kicktop::Result<()> {
    let params = KickedTopParams::standard(1.5)?;
    let spin = Spin::new(40.0)?;
    let p4 = catalog_orbit(OrbitLabel::P4, &params)?.expect("P4 exists for all kappa");
    let start = p4.points[0].to_spherical();
    let res = HusimiResolution::default_for(spin);

    let grids = husimi_timeseries(start, spin, &params, &[0, 1, 2, 3, 4, 5], res)?;
    for (kick, g) in grids.iter().enumerate() {
        let c = g.peak().to_cartesian();
        println!(
            "kick {kick}: peak at ({:+.3}, {:+.3}, {:+.3}), max Q = {:.3}, integral = {:.12}",
            c[0],
            c[1],
            c[2],
            g.max_value(),
            g.integral()
        );
    }

    let avg = husimi_time_average(start, spin, &params, 50, res)?;
    let path = std::env::temp_dir().join("husimi_p4_average.csv");
    write_husimi_csv(&avg, std::fs::File::create(&path)?)?;
    println!("50-kick average written to {}", path.display());
    Ok(())
}
