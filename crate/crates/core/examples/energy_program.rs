//! Choosing the coupling that leaves a requested population in the central
//! atom at t = pi, then checking it against direct simulation.

use std::f64::consts::PI;

use qmb::dynamics::central_population;
use qmb::{energy_at_pi, solve_comb_params, solve_g_for_energy, ENERGY_BRANCH};

fn main() -> qmb::Result<()> {
    for target in [0.0, 0.1, 1.0 / 3.0, 0.5, 0.9] {
        let program = solve_g_for_energy(target)?;
        println!("target {target:.6}: {} root(s)", program.g_solutions.len());
        for g in program.g_solutions {
            let simulated = central_population(&solve_comb_params(g, ENERGY_BRANCH)?.params(), PI)?;
            println!(
                "  g = {g:.10}  closed form {:.3e} off, simulation {:.3e} off",
                (energy_at_pi(g)? - target).abs(),
                (simulated - target).abs()
            );
        }
    }
    Ok(())
}
