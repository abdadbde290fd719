//! Dynamical tunneling at small spin: a coherent state on FP1 leaks onto the
//! symmetry-related fixed point FP2 and back.

use std::f64::consts::FRAC_PI_2;

use kicktop::classical::KickedTopParams;
use kicktop::floquet::{projection_series, FloquetOperator};
use kicktop::spin::{spin_coherent_state, SphericalPoint, Spin};

fn main() -> kicktop::Result<()> {
    let spin = Spin::new(2.0)?;
    let op = FloquetOperator::new(spin, KickedTopParams::standard(1.5)?)?;
    let fp1 = spin_coherent_state(spin, SphericalPoint::new(FRAC_PI_2, FRAC_PI_2));
    let fp2 = spin_coherent_state(spin, SphericalPoint::new(FRAC_PI_2, -FRAC_PI_2));

    let stay = projection_series(&op, &fp1, &fp1, 200)?;
    let moved = projection_series(&op, &fp1, &fp2, 200)?;
    for kick in (0..=200).step_by(10) {
        let bar = "#".repeat((moved[kick] * 40.0).round() as usize);
        println!("kick {kick:>3}: P(FP1) = {:.3}  P(FP2) = {:.3} {bar}", stay[kick], moved[kick]);
    }
    Ok(())
}
