//! Data behind the four standard plots: spectrum and non-equidistance error
//! against the inter-resonator coupling for the resonant chain, spectrum
//! against detuning on the qubit-point comb, and the central-atom
//! population for the qubit and qutrit programs.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::comb::{solve_comb_params, Branch, ENERGY_BRANCH, G_QUBIT, G_QUTRIT};
use crate::dynamics::{evolve_spectral, time_grid, CENTRAL_ATOM, DEFAULT_GRID_POINTS};
use crate::error::{Error, Result};
use crate::model::{initial_state, SystemParams};
use crate::spectrum::{
    eigenfrequencies, nonequidistance_error, sweep_spectrum, write_sweep_csv, SweepParam, SweepRow,
};
use crate::table::fmt12;

pub const SPECTRUM_VS_G_POINTS: usize = 301;
pub const SPECTRUM_VS_G_RANGE: (f64, f64) = (0.0, 3.0);
pub const DELTA_VS_G_POINTS: usize = 1000;
pub const DELTA_VS_G_RANGE: (f64, f64) = (0.01, 3.0);
pub const SPECTRUM_VS_DETUNING_POINTS: usize = 401;
pub const SPECTRUM_VS_DETUNING_RANGE: (f64, f64) = (0.0, 2.0);

/// Equal couplings, no detuning: `f1 = f2 = 1`, `delta = 0`.
pub fn resonant_base() -> SystemParams {
    SystemParams {
        g: 0.0,
        delta: 0.0,
        f1: 1.0,
        f2: 1.0,
        omega0: 0.0,
    }
}

pub fn spectrum_vs_g() -> Result<Vec<SweepRow>> {
    sweep_spectrum(
        &resonant_base(),
        SweepParam::G,
        SPECTRUM_VS_G_RANGE,
        SPECTRUM_VS_G_POINTS,
        None,
    )
}

/// `(g, delta)` pairs on the resonant chain.
pub fn delta_vs_g() -> Result<Vec<(f64, f64)>> {
    let (lo, hi) = DELTA_VS_G_RANGE;
    let n = DELTA_VS_G_POINTS;
    (0..n)
        .map(|i| {
            let g = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            let spectrum = eigenfrequencies(&resonant_base().with_g(g))?;
            Ok((g, nonequidistance_error(&spectrum)?))
        })
        .collect()
}

/// Detuning sweep with `f1`, `f2` held on branch A of the qubit-point comb.
pub fn spectrum_vs_detuning() -> Result<Vec<SweepRow>> {
    let sol = solve_comb_params(G_QUBIT, Branch::A)?;
    sweep_spectrum(
        &sol.params(),
        SweepParam::Delta,
        SPECTRUM_VS_DETUNING_RANGE,
        SPECTRUM_VS_DETUNING_POINTS,
        Some(Branch::A),
    )
}

/// `(t, E_s2 at the qubit point, E_s2 at the qutrit point)` over one period.
pub fn energy_transfer(points: usize) -> Result<Vec<(f64, f64, f64)>> {
    let times = time_grid(2.0 * PI, points);
    let v0 = initial_state(2)?;
    let qubit = solve_comb_params(G_QUBIT, ENERGY_BRANCH)?;
    let qutrit = solve_comb_params(G_QUTRIT, ENERGY_BRANCH)?;
    let a = evolve_spectral(&qubit.params(), &v0, &times)?.population(CENTRAL_ATOM);
    let b = evolve_spectral(&qutrit.params(), &v0, &times)?.population(CENTRAL_ATOM);
    Ok(times
        .into_iter()
        .zip(a)
        .zip(b)
        .map(|((t, a), b)| (t, a, b))
        .collect())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn finish(path: &Path, result: std::io::Result<()>) -> Result<()> {
    result.map_err(|e| Error::io(path, e))
}

/// Writes `fig2.csv` .. `fig5.csv` into `dir` (created if missing) and
/// returns their paths. Output is deterministic.
pub fn write_all(dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    let path = dir.join("fig2.csv");
    let rows = spectrum_vs_g()?;
    let mut out = create(&path)?;
    finish(
        &path,
        write_sweep_csv(&rows, &mut out).and_then(|_| out.flush()),
    )?;
    written.push(path);

    let path = dir.join("fig3.csv");
    let rows = delta_vs_g()?;
    let mut out = create(&path)?;
    let result = (|| {
        writeln!(out, "g,delta")?;
        for (g, d) in &rows {
            writeln!(out, "{},{}", fmt12(*g), fmt12(*d))?;
        }
        out.flush()
    })();
    finish(&path, result)?;
    written.push(path);

    let path = dir.join("fig4.csv");
    let rows = spectrum_vs_detuning()?;
    let mut out = create(&path)?;
    finish(
        &path,
        write_sweep_csv(&rows, &mut out).and_then(|_| out.flush()),
    )?;
    written.push(path);

    let path = dir.join("fig5.csv");
    let rows = energy_transfer(DEFAULT_GRID_POINTS)?;
    let mut out = create(&path)?;
    let result = (|| {
        writeln!(out, "t,E_s2_qubit,E_s2_qutrit")?;
        for (t, a, b) in &rows {
            writeln!(out, "{},{},{}", fmt12(*t), fmt12(*a), fmt12(*b))?;
        }
        out.flush()
    })();
    finish(&path, result)?;
    written.push(path);

    Ok(written)
}
