//! Parameters that place the spectrum on the equidistant comb
//! `{-2, -1, 0, 0, 1, 2}` and the closed-form population of the central
//! atom after half a revival period.
//!
//! Matching `Det(p)` to `p^2 (p^2 + 1)(p^2 + 4)` with `delta = f2` reduces to
//!
//! ```text
//! 4 f2^2 + 2 g^2 + f1^2 = 5
//! f2^2 (g^2 + f1^2)     = 1
//! ```
//!
//! so `x = f2^2` solves `4x^2 - (5 - g^2) x + 1 = 0`. With
//! `s = sqrt(g^4 - 10 g^2 + 9)` (real for `0 < g <= 1`) the two roots give
//! branch A, `x = (5 - g^2 - s) / 8`, `f1^2 = (5 - 3g^2 + s) / 2`, and branch
//! B, `x = (5 - g^2 + s) / 8`, `f1^2 = (5 - 3g^2 - s) / 2`. They meet at
//! `g = 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::spectrum::{char_poly, eigenfrequencies};

/// The degenerate comb in units of its spacing.
pub const COMB_FREQUENCIES: [f64; 6] = [-2.0, -1.0, 0.0, 0.0, 1.0, 2.0];

/// Coupling at which the central atom is empty at `t = pi`.
pub const G_QUBIT: f64 = 0.7556142107;

/// Coupling at which the central atom holds one third at `t = pi`.
pub const G_QUTRIT: f64 = 0.4531870484;

/// Branch whose dynamics reproduce [`energy_at_pi`]. Pinned by the
/// dynamics oracle (see `dynamics::identify_energy_branch`).
pub const ENERGY_BRANCH: Branch = Branch::B;

/// Residual bound every [`CombSolution`] satisfies.
pub const RESIDUAL_TOL: f64 = 1e-12;

/// Grid used to bracket roots of the energy program.
pub const ENERGY_SCAN_POINTS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    A,
    B,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::A => "A",
            Branch::B => "B",
        })
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Branch::A),
            "B" | "b" => Ok(Branch::B),
            _ => Err(Error::Usage(format!(
                "unknown comb branch `{s}` (expected A or B)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CombSolution {
    pub branch: Branch,
    pub g: f64,
    pub delta: f64,
    pub f1: f64,
    pub f2: f64,
    /// `(c4 - 5 k^2, c2 - 4 k^4, c0)` for comb spacing `k`.
    pub residuals: [f64; 3],
    pub spectrum: [f64; 6],
}

impl CombSolution {
    pub fn params(&self) -> SystemParams {
        SystemParams {
            g: self.g,
            delta: self.delta,
            f1: self.f1,
            f2: self.f2,
            omega0: 0.0,
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |acc, r| acc.max(r.abs()))
    }
}

/// Residuals of `Det = p^2 (p^2 + 1)(p^2 + 4)`: `(c4 - 5, c2 - 4, c0)`.
pub fn comb_constraints(params: &SystemParams) -> Result<[f64; 3]> {
    comb_constraints_scaled(params, 1.0)
}

/// Same as [`comb_constraints`] for a comb of spacing `kappa`.
pub fn comb_constraints_scaled(params: &SystemParams, kappa: f64) -> Result<[f64; 3]> {
    let c = char_poly(params)?;
    let k2 = kappa * kappa;
    Ok([c.c4 - 5.0 * k2, c.c2 - 4.0 * k2 * k2, c.c0])
}

fn inner_root(g: f64) -> Result<f64> {
    if !(g > 0.0 && g <= 1.0) {
        return Err(Error::Domain(g));
    }
    let g2 = g * g;
    // g^4 - 10 g^2 + 9 = (1 - g^2)(9 - g^2) >= 0 on the domain.
    Ok(((1.0 - g2) * (9.0 - g2)).sqrt())
}

pub fn solve_comb_params(g: f64, branch: Branch) -> Result<CombSolution> {
    let s = inner_root(g)?;
    let g2 = g * g;
    let (f2_sq, f1_sq) = match branch {
        Branch::A => ((5.0 - g2 - s) / 8.0, (5.0 - 3.0 * g2 + s) / 2.0),
        Branch::B => ((5.0 - g2 + s) / 8.0, (5.0 - 3.0 * g2 - s) / 2.0),
    };
    for (name, value) in [("f2^2", f2_sq), ("f1^2", f1_sq)] {
        if value < 0.0 {
            return Err(Error::BranchInfeasible {
                branch,
                g,
                reason: format!("{name} = {value} is negative"),
            });
        }
    }
    let f2 = f2_sq.sqrt();
    let f1 = f1_sq.sqrt();
    let params = SystemParams::new(g, f2, f1, f2)?;
    let residuals = comb_constraints(&params)?;
    let spectrum = eigenfrequencies(&params)?;
    let solution = CombSolution {
        branch,
        g,
        delta: f2,
        f1,
        f2,
        residuals,
        spectrum: spectrum.frequencies,
    };
    debug_assert!(solution.max_residual() <= RESIDUAL_TOL, "{solution:?}");
    debug_assert!(
        spectrum.max_deviation(&COMB_FREQUENCIES) <= 1e-7,
        "{solution:?}"
    );
    Ok(solution)
}

/// Multiplies every coupling and the detuning by `kappa`. The comb spacing,
/// and so every frequency, scales by `kappa`; the revival time becomes
/// `2 pi / kappa`.
pub fn scale_comb(solution: &CombSolution, kappa: f64) -> Result<CombSolution> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::invalid("kappa", format!("{kappa} must be positive")));
    }
    let params = solution.params().scaled(kappa);
    let spectrum = eigenfrequencies(&params)?;
    Ok(CombSolution {
        branch: solution.branch,
        g: params.g,
        delta: params.delta,
        f1: params.f1,
        f2: params.f2,
        residuals: comb_constraints_scaled(&params, kappa)?,
        spectrum: spectrum.frequencies,
    })
}

/// `g^4 - 2g^2 + (1 - g^2) s`; the central-atom population at `t = pi` is
/// its square over 9.
fn energy_amplitude(g: f64) -> Result<f64> {
    let s = inner_root(g)?;
    let g2 = g * g;
    Ok(g2 * g2 - 2.0 * g2 + (1.0 - g2) * s)
}

/// Closed-form `E(x2)` at `t = pi` on the comb.
pub fn energy_at_pi(g: f64) -> Result<f64> {
    let h = energy_amplitude(g)?;
    Ok(h * h / 9.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyProgram {
    #[serde(rename = "target")]
    pub target_e2: f64,
    #[serde(rename = "roots")]
    pub g_solutions: Vec<f64>,
}

/// All couplings in `(0, 1]` whose comb puts `target` in the central atom at
/// `t = pi`, ascending. An unattainable target yields no roots.
///
/// The population is a square, so `E = target` is solved as
/// `h(g) = ±3 sqrt(target)`; this keeps the `target = 0` root (a tangency of
/// `E`) a sign change. Roots are bracketed on an even grid and bisected to
/// adjacent floats.
pub fn solve_g_for_energy(target: f64) -> Result<EnergyProgram> {
    if !target.is_finite() {
        return Err(Error::invalid("target", format!("{target} is not finite")));
    }
    let mut roots: Vec<f64> = Vec::new();
    if target < 0.0 {
        return Ok(EnergyProgram {
            target_e2: target,
            g_solutions: roots,
        });
    }

    let grid: Vec<f64> = (1..=ENERGY_SCAN_POINTS)
        .map(|i| i as f64 / ENERGY_SCAN_POINTS as f64)
        .collect();
    let amplitudes: Vec<f64> = grid
        .iter()
        .map(|&g| energy_amplitude(g))
        .collect::<Result<_>>()?;

    let level = 3.0 * target.sqrt();
    let levels: &[f64] = if level == 0.0 {
        &[0.0]
    } else {
        &[level, -level]
    };
    for &level in levels {
        let f = |g: f64| energy_amplitude(g).map(|h| h - level);
        for i in 0..grid.len() {
            let here = amplitudes[i] - level;
            if here == 0.0 {
                roots.push(grid[i]);
                continue;
            }
            if i + 1 < grid.len() {
                let next = amplitudes[i + 1] - level;
                if here * next < 0.0 {
                    roots.push(bisect(f, grid[i], grid[i + 1])?);
                }
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    roots.retain(|&g| {
        energy_at_pi(g)
            .map(|e| (e - target).abs() <= 1e-12)
            .unwrap_or(false)
    });
    Ok(EnergyProgram {
        target_e2: target,
        g_solutions: roots,
    })
}

fn bisect(f: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut f_lo = f(lo)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_lo * f_mid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    let (a, b) = (f(lo)?.abs(), f(hi)?.abs());
    Ok(if a <= b { lo } else { hi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::eigenfrequencies;

    #[test]
    fn constraint_examples() {
        let r = comb_constraints(&SystemParams::new(0.0, 1.0, 1.0, 1.0).unwrap()).unwrap();
        assert_eq!(r, [0.0, 0.0, 0.0]);
        let r = comb_constraints(&SystemParams::new(0.0, 0.0, 1.0, 1.0).unwrap()).unwrap();
        assert_eq!(r, [-2.0, -1.0, 1.0]);
    }

    #[test]
    fn small_g_limits() {
        let g = 1e-9;
        let b = solve_comb_params(g, Branch::B).unwrap();
        assert!((b.f1 - 1.0).abs() < 1e-9 && (b.f2 - 1.0).abs() < 1e-9);
        assert_eq!(b.delta, b.f2);
        let a = solve_comb_params(g, Branch::A).unwrap();
        assert!((a.f1 - 2.0).abs() < 1e-9 && (a.f2 - 0.5).abs() < 1e-9);
        assert_eq!(a.delta, a.f2);
        for sol in [a, b] {
            let s = spectrum_of(&sol);
            assert!(s.max_deviation(&COMB_FREQUENCIES) < 1e-7);
        }
    }

    fn spectrum_of(sol: &CombSolution) -> crate::spectrum::Spectrum {
        eigenfrequencies(&sol.params()).unwrap()
    }

    #[test]
    fn qubit_point_branch_a_detuning() {
        let a = solve_comb_params(G_QUBIT, Branch::A).unwrap();
        assert!((a.delta - 0.56206631).abs() < 1e-7, "{}", a.delta);
        assert!(a.max_residual() <= RESIDUAL_TOL);
    }

    #[test]
    fn branches_meet_at_unit_coupling() {
        let a = solve_comb_params(1.0, Branch::A).unwrap();
        let b = solve_comb_params(1.0, Branch::B).unwrap();
        assert_eq!((a.f1, a.f2), (b.f1, b.f2));
        assert!((a.f2 * a.f2 - 0.5).abs() < 1e-15 && (a.f1 * a.f1 - 1.0).abs() < 1e-15);
        assert!(a.max_residual() <= RESIDUAL_TOL);
    }

    #[test]
    fn domain_errors() {
        for g in [0.0, -0.5, 1.0 + 1e-12, 3.0, f64::NAN] {
            assert!(matches!(
                solve_comb_params(g, Branch::A),
                Err(Error::Domain(_))
            ));
            assert!(matches!(energy_at_pi(g), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn energy_closed_form_values() {
        assert!(energy_at_pi(G_QUBIT).unwrap() <= 1e-10);
        // The quoted qutrit coupling sits 4.9e-10 below the true root
        // 0.45318704889065880..., which costs ~1e-9 in the population.
        let e = energy_at_pi(G_QUTRIT).unwrap();
        assert!((e - 1.0 / 3.0).abs() <= 1e-9, "{e}");
        let root = 0.4531870488906588;
        assert!((energy_at_pi(root).unwrap() - 1.0 / 3.0).abs() <= 1e-12);
        assert_eq!(energy_at_pi(1.0).unwrap(), 1.0 / 9.0);
    }

    #[test]
    fn energy_program_examples() {
        let p = solve_g_for_energy(0.0).unwrap();
        assert!(
            p.g_solutions.iter().any(|g| (g - G_QUBIT).abs() < 1e-9),
            "{p:?}"
        );
        let p = solve_g_for_energy(1.0 / 3.0).unwrap();
        assert!(
            p.g_solutions.iter().any(|g| (g - G_QUTRIT).abs() < 1e-9),
            "{p:?}"
        );
        let p = solve_g_for_energy(1.0 / 9.0).unwrap();
        assert!(p.g_solutions.contains(&1.0), "{p:?}");
        assert!(solve_g_for_energy(1.5).unwrap().g_solutions.is_empty());
        assert!(solve_g_for_energy(-0.1).unwrap().g_solutions.is_empty());
    }

    #[test]
    fn scaling() {
        let sol = solve_comb_params(G_QUBIT, Branch::A).unwrap();
        assert_eq!(scale_comb(&sol, 1.0).unwrap(), sol);
        let doubled = scale_comb(&sol, 2.0).unwrap();
        let expected = COMB_FREQUENCIES.map(|w| 2.0 * w);
        assert!(spectrum_of(&doubled).max_deviation(&expected) < 1e-7);
        assert!(doubled.max_residual() < 1e-11);
        assert!(scale_comb(&sol, 0.0).is_err());
    }

    #[test]
    fn json_layout() {
        let sol = solve_comb_params(G_QUTRIT, Branch::B).unwrap();
        let v: serde_json::Value = serde_json::to_value(&sol).unwrap();
        for key in ["branch", "g", "delta", "f1", "f2", "residuals", "spectrum"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["branch"], "B");
        assert_eq!(v["residuals"].as_array().unwrap().len(), 3);
        assert_eq!(v["spectrum"].as_array().unwrap().len(), 6);
        let prog = serde_json::to_value(solve_g_for_energy(0.0).unwrap()).unwrap();
        assert!(prog.get("target").is_some() && prog["roots"].is_array());
    }
}
