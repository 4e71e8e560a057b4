//! Time evolution of the single excitation.
//!
//! The spectral propagator `U(t) = V e^{-i w t} V^T` is the production path.
//! A fixed-step RK4 integrator of `dv/dt = -i M v` is kept as an independent
//! oracle. Piecewise-constant coupling schedules are propagated segment by
//! segment with the state continuous across each (instantaneous) switch.

use std::io::Write;
use std::path::Path;

use nalgebra::{Matrix6, Vector6};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::comb::{energy_at_pi, solve_comb_params, Branch};
use crate::error::{Error, Result};
use crate::model::{build_coupling_matrix, initial_state, StateVector, SystemParams, DIM};
use crate::spectrum::eigen_basis;
use crate::table::fmt12;

pub const NORM_TOL: f64 = 1e-10;
pub const RK4_DEFAULT_DT: f64 = 1e-2;
/// Largest norm drift an RK4 run may accumulate before it is rejected.
pub const RK4_MAX_NORM_DRIFT: f64 = 1e-8;
/// Samples over one revival period used for figure data.
pub const DEFAULT_GRID_POINTS: usize = 2001;

/// Index of the central atom `s2` in amplitude order.
pub const CENTRAL_ATOM: usize = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&StateVector> {
        self.states.last()
    }

    /// Population of one slot (0-based) over time.
    pub fn population(&self, slot: usize) -> Vec<f64> {
        self.states.iter().map(|s| s[slot].norm_sqr()).collect()
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.states
            .iter()
            .map(|s| (s.norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest amplitude difference against another trajectory sampled at
    /// the same times.
    pub fn max_deviation(&self, other: &Trajectory) -> f64 {
        self.states
            .iter()
            .zip(&other.states)
            .flat_map(|(a, b)| (a.0 - b.0).iter().map(|z| z.norm()).collect::<Vec<_>>())
            .fold(0.0, f64::max)
    }
}

/// `n` evenly spaced times on `[0, t_end]`, both ends included.
pub fn time_grid(t_end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect(),
    }
}

fn check_state(v0: &StateVector) -> Result<()> {
    if !v0.is_normalized(NORM_TOL) {
        return Err(Error::InvalidState(format!(
            "initial state has norm^2 {} (expected 1)",
            v0.norm_sqr()
        )));
    }
    Ok(())
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("times", "non-finite time"));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("times", "times must be ascending"));
    }
    Ok(())
}

/// Spectral propagator for one parameter set.
#[derive(Clone, Debug)]
pub struct Propagator {
    frequencies: Vector6<f64>,
    vectors: Matrix6<Complex64>,
    vectors_t: Matrix6<Complex64>,
}

impl Propagator {
    pub fn new(params: &SystemParams) -> Result<Self> {
        let basis = eigen_basis(params)?;
        let vectors = basis.vectors.map(|x| Complex64::new(x, 0.0));
        Ok(Propagator {
            frequencies: basis.frequencies,
            vectors_t: vectors.transpose(),
            vectors,
        })
    }

    /// `U(t) = V diag(e^{-i w_k t}) V^T`.
    pub fn matrix(&self, t: f64) -> Matrix6<Complex64> {
        let phases = self.frequencies.map(|w| Complex64::new(0.0, -w * t).exp());
        self.vectors * Matrix6::from_diagonal(&phases) * self.vectors_t
    }

    pub fn apply(&self, v: &StateVector, t: f64) -> StateVector {
        let coeffs = self.vectors_t * v.0;
        let rotated = coeffs.zip_map(&self.frequencies, |c, w| {
            c * Complex64::new(0.0, -w * t).exp()
        });
        StateVector(self.vectors * rotated)
    }
}

pub fn evolve_spectral(
    params: &SystemParams,
    v0: &StateVector,
    times: &[f64],
) -> Result<Trajectory> {
    check_state(v0)?;
    check_times(times)?;
    let propagator = Propagator::new(params)?;
    Ok(Trajectory {
        times: times.to_vec(),
        states: times.iter().map(|&t| propagator.apply(v0, t)).collect(),
    })
}

/// Classic fixed-step RK4 on `[0, t_end]`. The step is shrunk to
/// `t_end / ceil(t_end / dt)` so the grid lands on `t_end`; every step is
/// recorded. Fails if the norm drifts by more than [`RK4_MAX_NORM_DRIFT`].
pub fn evolve_rk4(
    params: &SystemParams,
    v0: &StateVector,
    dt: f64,
    t_end: f64,
) -> Result<Trajectory> {
    check_state(v0)?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid("dt", format!("{dt} must be positive")));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::invalid("t_end", format!("{t_end} must be positive")));
    }
    let m = build_coupling_matrix(params)?.0;
    let generator = m.map(|x| Complex64::new(0.0, -x));
    let steps = (t_end / dt).ceil() as usize;
    let h = t_end / steps as f64;
    let (half, full) = (Complex64::from(0.5 * h), Complex64::from(h));
    let (two, sixth) = (Complex64::from(2.0), Complex64::from(h / 6.0));

    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut v = v0.0;
    times.push(0.0);
    states.push(*v0);
    for n in 1..=steps {
        let k1 = generator * v;
        let k2 = generator * (v + k1 * half);
        let k3 = generator * (v + k2 * half);
        let k4 = generator * (v + k3 * full);
        v += (k1 + k2 * two + k3 * two + k4) * sixth;
        times.push(if n == steps { t_end } else { n as f64 * h });
        states.push(StateVector(v));
    }

    let trajectory = Trajectory { times, states };
    let drift = trajectory.max_norm_drift();
    if drift > RK4_MAX_NORM_DRIFT {
        return Err(Error::Accuracy {
            drift,
            bound: RK4_MAX_NORM_DRIFT,
        });
    }
    Ok(trajectory)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub t_start: f64,
    pub t_end: f64,
    pub g: f64,
}

/// Piecewise-constant coupling `g(t)`; `delta`, `f1` and `f2` come from
/// `base` and stay fixed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub base: SystemParams,
    pub segments: Vec<Segment>,
}

/// On-disk schedule. `base` may be omitted and supplied by the caller.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleFile {
    #[serde(default)]
    pub base: Option<SystemParams>,
    pub segments: Vec<Segment>,
}

impl ScheduleFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Resolves the base parameters: `override_base` wins over the file.
    pub fn into_schedule(self, override_base: Option<SystemParams>) -> Result<Schedule> {
        let base = override_base.or(self.base).ok_or_else(|| {
            Error::Schedule("no base parameters in the schedule file or on the command line".into())
        })?;
        let schedule = Schedule {
            base,
            segments: self.segments,
        };
        schedule.validate()?;
        Ok(schedule)
    }
}

/// Gaps or overlaps between consecutive segments up to this size are
/// treated as rounding.
const SEGMENT_JOIN_TOL: f64 = 1e-12;

impl Schedule {
    pub fn constant(base: SystemParams, t_end: f64) -> Self {
        Schedule {
            base,
            segments: vec![Segment {
                t_start: 0.0,
                t_end,
                g: base.g,
            }],
        }
    }

    /// Holds `base.g` on `[0, t_switch]`, then `g_after` until `t_end`.
    pub fn switch_at(base: SystemParams, t_switch: f64, g_after: f64, t_end: f64) -> Self {
        Schedule {
            base,
            segments: vec![
                Segment {
                    t_start: 0.0,
                    t_end: t_switch,
                    g: base.g,
                },
                Segment {
                    t_start: t_switch,
                    t_end,
                    g: g_after,
                },
            ],
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        let first = self
            .segments
            .first()
            .ok_or_else(|| Error::Schedule("schedule has no segments".into()))?;
        if first.t_start.abs() > SEGMENT_JOIN_TOL {
            return Err(Error::Schedule(format!(
                "schedule starts at {} instead of 0",
                first.t_start
            )));
        }
        for seg in &self.segments {
            if seg.t_end.partial_cmp(&seg.t_start) != Some(std::cmp::Ordering::Greater) {
                return Err(Error::Schedule(format!(
                    "segment [{}, {}] is empty",
                    seg.t_start, seg.t_end
                )));
            }
            if !(seg.g >= 0.0 && seg.g.is_finite()) {
                return Err(Error::Schedule(format!(
                    "segment coupling g = {} is invalid",
                    seg.g
                )));
            }
        }
        for pair in self.segments.windows(2) {
            if (pair[1].t_start - pair[0].t_end).abs() > SEGMENT_JOIN_TOL {
                return Err(Error::Schedule(format!(
                    "segments [{}, {}] and [{}, {}] are not contiguous",
                    pair[0].t_start, pair[0].t_end, pair[1].t_start, pair[1].t_end
                )));
            }
        }
        Ok(())
    }

    pub fn end(&self) -> f64 {
        self.segments.last().map_or(0.0, |s| s.t_end)
    }
}

pub fn evolve_schedule(schedule: &Schedule, v0: &StateVector, times: &[f64]) -> Result<Trajectory> {
    schedule.validate()?;
    check_state(v0)?;
    check_times(times)?;
    if let Some(&t_max) = times.last() {
        if t_max > schedule.end() + SEGMENT_JOIN_TOL {
            return Err(Error::Schedule(format!(
                "schedule ends at {} but evolution requested up to {t_max}",
                schedule.end()
            )));
        }
    }
    if times.first().is_some_and(|&t| t < 0.0) {
        return Err(Error::Schedule("times before 0 are not covered".into()));
    }

    let mut states = Vec::with_capacity(times.len());
    let mut remaining = times.iter().copied().peekable();
    let mut v_start = *v0;
    for (k, seg) in schedule.segments.iter().enumerate() {
        let propagator = Propagator::new(&schedule.base.with_g(seg.g))?;
        let is_last = k + 1 == schedule.segments.len();
        while let Some(&t) = remaining.peek() {
            if t > seg.t_end && !is_last {
                break;
            }
            states.push(propagator.apply(&v_start, t - seg.t_start));
            remaining.next();
        }
        v_start = propagator.apply(&v_start, seg.t_end - seg.t_start);
        if remaining.peek().is_none() {
            break;
        }
    }
    Ok(Trajectory {
        times: times.to_vec(),
        states,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyRow {
    pub t: f64,
    /// `(E_s1, E_s2, E_s3, E_a1, E_a2, E_a3)`.
    pub populations: [f64; DIM],
}

pub fn energies(trajectory: &Trajectory) -> Vec<EnergyRow> {
    trajectory
        .times
        .iter()
        .zip(&trajectory.states)
        .map(|(&t, s)| EnergyRow {
            t,
            populations: s.populations(),
        })
        .collect()
}

pub const ENERGY_CSV_HEADER: &str = "t,E_s1,E_s2,E_s3,E_a1,E_a2,E_a3";

pub fn write_energies_csv<W: Write>(rows: &[EnergyRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{ENERGY_CSV_HEADER}")?;
    for row in rows {
        let mut line = fmt12(row.t);
        for e in row.populations {
            line.push(',');
            line.push_str(&fmt12(e));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Width of the contiguous stretch of samples around `center` on which the
/// central-atom population stays at or below `threshold`. Zero if the sample
/// nearest `center` is already above it.
pub fn plateau_width(trajectory: &Trajectory, center: f64, threshold: f64) -> Result<f64> {
    let times = &trajectory.times;
    let (first, last) = match (times.first(), times.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Err(Error::invalid("trajectory", "trajectory is empty")),
    };
    if !(center >= first && center <= last) {
        return Err(Error::invalid(
            "center",
            format!("{center} outside trajectory window [{first}, {last}]"),
        ));
    }
    let e2 = trajectory.population(CENTRAL_ATOM);
    let nearest = times
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - center).abs().total_cmp(&(b.1 - center).abs()))
        .map(|(i, _)| i)
        .expect("non-empty");
    if e2[nearest] > threshold {
        return Ok(0.0);
    }
    let mut lo = nearest;
    while lo > 0 && e2[lo - 1] <= threshold {
        lo -= 1;
    }
    let mut hi = nearest;
    while hi + 1 < e2.len() && e2[hi + 1] <= threshold {
        hi += 1;
    }
    Ok(times[hi] - times[lo])
}

/// Simulated central-atom population at `t` starting from the excited
/// central atom.
pub fn central_population(params: &SystemParams, t: f64) -> Result<f64> {
    let v0 = initial_state(2)?;
    let v = Propagator::new(params)?.apply(&v0, t);
    Ok(v[CENTRAL_ATOM].norm_sqr())
}

/// Largest `|energy_at_pi(g) - simulated E(x2)(pi)|` over `grid` on one
/// comb branch.
pub fn energy_branch_deviation(branch: Branch, grid: &[f64]) -> Result<f64> {
    grid.iter().try_fold(0.0f64, |acc, &g| {
        let sol = solve_comb_params(g, branch)?;
        let simulated = central_population(&sol.params(), std::f64::consts::PI)?;
        Ok(acc.max((energy_at_pi(g)? - simulated).abs()))
    })
}

/// The comb branch whose simulated dynamics reproduce the closed-form
/// half-period population within `tol` on every grid point.
pub fn identify_energy_branch(grid: &[f64], tol: f64) -> Result<Branch> {
    let mut matches = Vec::new();
    for branch in [Branch::A, Branch::B] {
        if energy_branch_deviation(branch, grid)? <= tol {
            matches.push(branch);
        }
    }
    match matches.as_slice() {
        [branch] => Ok(*branch),
        [] => Err(Error::Consistency(
            "no comb branch reproduces the closed-form energy".into(),
        )),
        _ => Err(Error::Consistency(
            "both comb branches reproduce the closed-form energy on this grid".into(),
        )),
    }
}
