//! Stroboscopic phase portrait: Fibonacci-lattice initial conditions iterated
//! under the classical map, written as `theta,phi` CSV on stdout.
//!
//! cargo run --release --example phase_portrait -- 3.0 1360 150 > portrait.csv

use kicktop::classical::{stroboscopic_ensemble, KickedTopParams};

fn main() -> kicktop::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let kappa: f64 = args.first().map_or(3.0, |s| s.parse().expect("kappa"));
    let n_init: usize = args.get(1).map_or(1360, |s| s.parse().expect("n_init"));
    let kicks: usize = args.get(2).map_or(150, |s| s.parse().expect("kicks"));

    let points = stroboscopic_ensemble(n_init, kicks, &KickedTopParams::standard(kappa)?, 0)?;
    println!("theta,phi");
    for p in &points {
        println!("{},{}", p.theta, p.phi);
    }
    eprintln!("{} points from {n_init} trajectories at kappa = {kappa}", points.len());
    Ok(())
}
