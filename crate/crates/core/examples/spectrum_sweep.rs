//! Spectrum of the resonant chain (f1 = f2 = 1, no detuning) as the
//! inter-resonator coupling grows, with the non-equidistance error.

use qmb::spectrum::{nonequidistance_error, SweepParam};
use qmb::{char_poly, sweep_spectrum, SystemParams};

fn main() -> qmb::Result<()> {
    let base = SystemParams::new(0.0, 0.0, 1.0, 1.0)?;
    let p = char_poly(&base.with_g(1.0))?;
    println!("g = 1: Det(p) = p^6 + {}p^4 + {}p^2 + {}", p.c4, p.c2, p.c0);

    println!("{:>6} {:>44} {:>10}", "g", "positive frequencies", "delta");
    for row in sweep_spectrum(&base, SweepParam::G, (0.0, 3.0), 13, None)? {
        let spectrum =
            qmb::Spectrum::from_frequencies(row.frequencies, qmb::spectrum::DEGENERACY_TOL);
        let delta = nonequidistance_error(&spectrum)
            .map(|d| format!("{d:.6}"))
            .unwrap_or_else(|_| "degenerate".into());
        let w = spectrum.positive_half();
        println!(
            "{:>6.2} {:>14.8} {:>14.8} {:>14.8} {:>10}",
            row.value, w[0], w[1], w[2], delta
        );
    }
    Ok(())
}
