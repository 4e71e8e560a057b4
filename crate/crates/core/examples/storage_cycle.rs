//! A comb-designed chain returns any state to itself after one period.

use std::f64::consts::PI;

use nalgebra::Matrix6;
use qmb::{initial_state, solve_comb_params, Branch, Propagator};

fn main() -> qmb::Result<()> {
    let sol = solve_comb_params(0.6, Branch::B)?;
    let prop = Propagator::new(&sol.params())?;
    let v0 = initial_state(2)?;
    for k in 0..=8 {
        let t = k as f64 * PI / 4.0;
        let pop = prop.apply(&v0, t).populations();
        println!(
            "t = {k}pi/4  E(x1..x3) = {:.6} {:.6} {:.6}",
            pop[0], pop[1], pop[2]
        );
    }
    let err = (prop.matrix(2.0 * PI) - Matrix6::identity()).norm();
    println!("|U(2pi) - I|_F = {err:.2e}");
    Ok(())
}
