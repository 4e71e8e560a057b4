//! Couplings that put the six eigenfrequencies on the comb -2, -1, 0, 0, 1, 2,
//! on both solution branches.

use qmb::comb::COMB_FREQUENCIES;
use qmb::{eigenfrequencies, solve_comb_params, Branch};

fn main() -> qmb::Result<()> {
    println!(
        "{:>5} {:>6} {:>12} {:>12} {:>10} {:>10}",
        "g", "branch", "delta=f2", "f1", "residual", "comb err"
    );
    for g in [0.1, 0.3, 0.4531870484, 0.6, 0.7556142107, 0.9, 1.0] {
        for branch in [Branch::A, Branch::B] {
            let sol = solve_comb_params(g, branch)?;
            let err = eigenfrequencies(&sol.params())?.max_deviation(&COMB_FREQUENCIES);
            println!(
                "{g:>5.3} {branch:>6} {:>12.9} {:>12.9} {:>10.1e} {err:>10.1e}",
                sol.delta,
                sol.f1,
                sol.max_residual()
            );
        }
    }
    let sol = solve_comb_params(0.7556142107, Branch::A)?;
    println!(
        "\n{}",
        serde_json::to_string_pretty(&sol).expect("serializable")
    );
    Ok(())
}
