use std::f64::consts::PI;

use qmb::dynamics::{central_population, time_grid, RK4_DEFAULT_DT};
use qmb::{
    evolve_rk4, evolve_schedule, evolve_spectral, initial_state, plateau_width, scale_comb,
    solve_comb_params, Schedule, ENERGY_BRANCH, G_QUBIT, G_QUTRIT,
};

#[test]
fn slower_comb_revives_at_its_own_period() {
    let sol = scale_comb(&solve_comb_params(G_QUTRIT, ENERGY_BRANCH).unwrap(), 0.5).unwrap();
    let v0 = initial_state(2).unwrap();
    let traj = evolve_spectral(&sol.params(), &v0, &[2.0 * PI, 4.0 * PI]).unwrap();
    assert!(traj.states[0].distance(&v0) > 1e-3);
    assert!(traj.states[1].distance(&v0) <= 1e-8);
}

#[test]
fn every_initial_slot_revives() {
    let params = solve_comb_params(0.3, ENERGY_BRANCH).unwrap().params();
    for slot in 1..=6 {
        let v0 = initial_state(slot).unwrap();
        let traj = evolve_spectral(&params, &v0, &[2.0 * PI]).unwrap();
        assert!(traj.states[0].distance(&v0) <= 1e-8, "slot {slot}");
    }
}

#[test]
fn freezing_at_half_period_holds_the_populations() {
    let params = solve_comb_params(G_QUBIT, ENERGY_BRANCH).unwrap().params();
    let schedule = Schedule::switch_at(params, PI, 0.0, 3.0 * PI);
    let v0 = initial_state(2).unwrap();
    let times = time_grid(3.0 * PI, 601);
    let traj = evolve_schedule(&schedule, &v0, &times).unwrap();
    assert!(traj.max_norm_drift() <= 1e-10);
    let at_pi = central_population(&params, PI).unwrap();
    for (t, state) in times.iter().zip(&traj.states) {
        if *t >= PI {
            // With g = 0 the central atom only talks to its own resonator,
            // and both are empty at the switch.
            assert!(state.populations()[1] <= 1e-7 + at_pi, "t={t}");
            assert!(state.populations()[4] <= 1e-7, "t={t}");
        }
    }
}

#[test]
fn constant_schedule_matches_plain_evolution() {
    let params = solve_comb_params(0.5, ENERGY_BRANCH).unwrap().params();
    let v0 = initial_state(2).unwrap();
    let times = time_grid(2.0 * PI, 101);
    let a = evolve_schedule(&Schedule::constant(params, 2.0 * PI), &v0, &times).unwrap();
    let b = evolve_spectral(&params, &v0, &times).unwrap();
    assert!(a.max_deviation(&b) <= 1e-12);
}

#[test]
fn rk4_follows_the_propagator_across_a_comb_period() {
    let params = solve_comb_params(G_QUTRIT, ENERGY_BRANCH).unwrap().params();
    let v0 = initial_state(2).unwrap();
    let rk = evolve_rk4(&params, &v0, RK4_DEFAULT_DT, 2.0 * PI).unwrap();
    let exact = evolve_spectral(&params, &v0, &rk.times).unwrap();
    assert!(rk.max_deviation(&exact) <= 1e-6);
    assert!(rk.max_norm_drift() <= 1e-8);
}

#[test]
fn qubit_plateau_is_resolved() {
    let params = solve_comb_params(G_QUBIT, ENERGY_BRANCH).unwrap().params();
    let traj = evolve_spectral(
        &params,
        &initial_state(2).unwrap(),
        &time_grid(2.0 * PI, 4001),
    )
    .unwrap();
    let width = plateau_width(&traj, PI, 1e-3).unwrap();
    assert!(width > 0.0 && width < PI, "{width}");
}
