//! Switch the coupling off at t = pi and watch the populations hold.

use std::f64::consts::PI;

use qmb::dynamics::time_grid;
use qmb::{evolve_schedule, initial_state, solve_comb_params, Schedule, ENERGY_BRANCH, G_QUBIT};

fn main() -> qmb::Result<()> {
    let params = solve_comb_params(G_QUBIT, ENERGY_BRANCH)?.params();
    let schedule = Schedule::switch_at(params, PI, 0.0, 3.0 * PI);
    let times = time_grid(3.0 * PI, 13);
    let traj = evolve_schedule(&schedule, &initial_state(2)?, &times)?;
    println!(
        "{:>7} {:>9} {:>9} {:>9} {:>9}",
        "t/pi", "E(x1)", "E(x2)", "E(x3)", "E(a2)"
    );
    for (t, state) in times.iter().zip(&traj.states) {
        let p = state.populations();
        println!(
            "{:>7.3} {:>9.6} {:>9.6} {:>9.6} {:>9.6}",
            t / PI,
            p[0],
            p[1],
            p[2],
            p[4]
        );
    }
    Ok(())
}
