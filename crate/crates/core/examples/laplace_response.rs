//! The central-atom amplitude from the Laplace-domain response, compared
//! with the propagator, for a generic point and a degenerate comb.

use num_complex::Complex64;
use qmb::dynamics::time_grid;
use qmb::{
    evolve_spectral, initial_state, inverse_laplace_s2, s2_response, solve_comb_params, Branch,
    SystemParams,
};

fn main() -> qmb::Result<()> {
    let cases = [
        ("generic", SystemParams::new(0.4, 0.2, 1.1, 0.7)?),
        ("comb", solve_comb_params(0.7556142107, Branch::A)?.params()),
    ];
    let times = time_grid(2.0 * std::f64::consts::PI, 9);
    for (name, params) in cases {
        let r = s2_response(&params, Complex64::new(0.3, 0.5))?;
        println!("{name}: s2(0.3+0.5i) = {:.6}", r.value);
        let laplace = inverse_laplace_s2(&params, &times)?;
        let traj = evolve_spectral(&params, &initial_state(2)?, &times)?;
        for ((t, l), s) in times.iter().zip(&laplace).zip(&traj.states) {
            println!("  t = {t:.4}  s2 = {l:.8}  diff {:.1e}", (l - s[1]).norm());
        }
    }
    Ok(())
}
