//! Time-averaged survival probability of coherent states on periodic orbits,
//! swept over spin size.

use kicktop::classical::{catalog_orbit, KickedTopParams, OrbitLabel};
use kicktop::floquet::survival_period_n;
use kicktop::spin::Spin;

fn main() -> kicktop::Result<()> {
    for (label, kappa) in [(OrbitLabel::FP1, 1.5), (OrbitLabel::P4, 1.5), (OrbitLabel::P2A, 3.0)] {
        let params = KickedTopParams::standard(kappa)?;
        let orbit = catalog_orbit(label, &params)?.expect("orbit exists");
        println!("{label} at kappa = {kappa}, L = 50");
        for j in [2.0, 6.0, 10.0, 20.0, 40.0, 80.0] {
            let r = survival_period_n(&orbit, Spin::new(j)?, &params, 50)?;
            println!("  j = {j:>4}: S = {:.4}", r.s);
        }
    }
    Ok(())
}
