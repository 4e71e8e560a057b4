//! Command-line front end.
//!
//! Every subcommand is also a JSON run configuration: `qmb run cfg.json`
//! reads an object tagged with `"command"` whose other keys are the long
//! flag names, e.g. `{"command": "spectrum", "comb": "A", "g": 0.7556142107}`.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage or validation error.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::comb::{
    energy_at_pi, scale_comb, solve_comb_params, solve_g_for_energy, Branch, ENERGY_BRANCH,
    G_QUBIT, G_QUTRIT,
};
use crate::dynamics::{
    energies, evolve_rk4, evolve_schedule, evolve_spectral, time_grid, write_energies_csv,
    Schedule, ScheduleFile, DEFAULT_GRID_POINTS, RK4_DEFAULT_DT,
};
use crate::error::{Error, Result};
use crate::figures;
use crate::model::{initial_state, SystemParams};
use crate::spectrum::{
    degeneracy_discriminant, eigenfrequencies, nonequidistance_error, sweep_spectrum,
    write_sweep_csv, SweepParam,
};
use crate::table::fmt12;

/// Environment variable holding the log filter (e.g. `info`, `debug`).
pub const LOG_ENV: &str = "QMB_LOG";

#[derive(Debug, Parser)]
#[command(
    name = "qmb",
    version,
    about = "Three-resonator comb design and single-excitation dynamics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Central atom empty at t = pi.
    Qubit,
    /// One third left in the central atom at t = pi.
    Qutrit,
}

impl Preset {
    pub fn g(self) -> f64 {
        match self {
            Preset::Qubit => G_QUBIT,
            Preset::Qutrit => G_QUTRIT,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Spectral,
    Rk4,
}

fn parse_branch(s: &str) -> std::result::Result<Branch, String> {
    s.parse::<Branch>().map_err(|e| e.to_string())
}

/// Model parameters from flags, a `key = value` file, a comb branch or a
/// preset.
#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub f1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub f2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub omega0: Option<f64>,
    /// Derive delta, f1 and f2 from g on this comb branch.
    #[arg(long, value_parser = parse_branch)]
    pub comb: Option<Branch>,
    /// Named coupling (implies the energy branch unless --comb is given).
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Parameter file with `g = ..`, `delta = ..`, `f1 = ..`, `f2 = ..` lines.
    #[arg(long)]
    pub params: Option<PathBuf>,
}

impl ParamArgs {
    pub fn is_empty(&self) -> bool {
        self.g.is_none()
            && self.delta.is_none()
            && self.f1.is_none()
            && self.f2.is_none()
            && self.omega0.is_none()
            && self.comb.is_none()
            && self.preset.is_none()
            && self.params.is_none()
    }

    pub fn resolve(&self) -> Result<SystemParams> {
        self.resolve_with(|_| None)
    }

    /// `fallback` supplies values for fields nobody set.
    pub fn resolve_with(&self, fallback: impl Fn(&str) -> Option<f64>) -> Result<SystemParams> {
        let file = self.params.as_ref().map(SystemParams::load).transpose()?;
        let g = self.g.or(self.preset.map(Preset::g));
        let branch = self.comb.or(self.preset.map(|_| ENERGY_BRANCH));
        let omega0 = self.omega0.or(file.map(|f| f.omega0)).unwrap_or(0.0);

        if let Some(branch) = branch {
            if self.delta.is_some() || self.f1.is_some() || self.f2.is_some() {
                return Err(Error::Usage(
                    "--delta/--f1/--f2 cannot be combined with --comb or --preset".into(),
                ));
            }
            let g = g
                .or(file.map(|f| f.g))
                .or_else(|| fallback("g"))
                .ok_or_else(|| Error::Usage("--comb needs --g or --preset".into()))?;
            let params = solve_comb_params(g, branch)?.params();
            return Ok(SystemParams { omega0, ..params });
        }

        let pick = |name: &'static str, flag: Option<f64>, from_file: Option<f64>| {
            flag.or(from_file)
                .or_else(|| fallback(name))
                .ok_or_else(|| Error::Usage(format!("missing required parameter --{name}")))
        };
        let params = SystemParams {
            g: pick("g", g, file.map(|f| f.g))?,
            delta: pick("delta", self.delta, file.map(|f| f.delta))?,
            f1: pick("f1", self.f1, file.map(|f| f.f1))?,
            f2: pick("f2", self.f2, file.map(|f| f.f2))?,
            omega0,
        };
        params.validate()?;
        Ok(params)
    }
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputArgs {
    /// Output file; standard output if omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Clone, Debug, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Eigenfrequencies, non-equidistance error and degeneracy report.
    Spectrum {
        #[command(flatten)]
        #[serde(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        #[serde(flatten)]
        out: OutputArgs,
    },
    /// Spectrum on a grid of one parameter.
    Sweep {
        #[command(flatten)]
        #[serde(flatten)]
        params: ParamArgs,
        /// Parameter to vary: g, delta, f1 or f2.
        #[arg(long)]
        vary: String,
        #[arg(long, allow_negative_numbers = true)]
        lo: f64,
        #[arg(long, allow_negative_numbers = true)]
        hi: f64,
        #[arg(long, default_value_t = 101)]
        #[serde(default = "default_sweep_points")]
        n: usize,
        /// Re-derive f1, f2 from g on this branch at every grid point.
        #[arg(long, value_parser = parse_branch)]
        #[serde(default)]
        constrain: Option<Branch>,
        #[command(flatten)]
        #[serde(flatten)]
        out: OutputArgs,
    },
    /// Comb parameters for a coupling g on one branch.
    Comb {
        #[arg(long)]
        #[serde(default)]
        g: Option<f64>,
        #[arg(long, value_enum)]
        #[serde(default)]
        preset: Option<Preset>,
        #[arg(long, value_parser = parse_branch, default_value = "A")]
        #[serde(default = "default_branch")]
        branch: Branch,
        /// Rescale the solution to comb spacing kappa.
        #[arg(long)]
        #[serde(default)]
        kappa: Option<f64>,
        #[command(flatten)]
        #[serde(flatten)]
        out: OutputArgs,
    },
    /// Closed-form half-period population, or the couplings reaching a target.
    Energy {
        /// Target population of the central atom at t = pi.
        #[arg(long, conflicts_with = "g")]
        #[serde(default)]
        target: Option<f64>,
        /// Evaluate the closed form at this coupling.
        #[arg(long)]
        #[serde(default)]
        g: Option<f64>,
        #[command(flatten)]
        #[serde(flatten)]
        out: OutputArgs,
    },
    /// Populations over time, optionally under a coupling schedule.
    Evolve {
        #[command(flatten)]
        #[serde(flatten)]
        params: ParamArgs,
        /// JSON schedule: {"base": {...}, "segments": [{"t_start", "t_end", "g"}]}.
        #[arg(long)]
        #[serde(default)]
        schedule: Option<PathBuf>,
        /// End time; defaults to 2 pi or the end of the schedule.
        #[arg(long)]
        #[serde(default)]
        t_end: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        #[serde(default = "default_points")]
        points: usize,
        /// Initially excited slot, 1..=6 in the order s1 s2 s3 a1 a2 a3.
        #[arg(long, default_value_t = 2)]
        #[serde(default = "default_initial")]
        initial: usize,
        #[arg(long, value_enum, default_value_t = Method::Spectral)]
        #[serde(default)]
        method: Method,
        /// RK4 step.
        #[arg(long, default_value_t = RK4_DEFAULT_DT)]
        #[serde(default = "default_dt")]
        dt: f64,
        #[command(flatten)]
        #[serde(flatten)]
        out: OutputArgs,
    },
    /// Write fig2.csv .. fig5.csv.
    Figures {
        #[arg(long, default_value = "figures")]
        #[serde(default = "default_out_dir")]
        out_dir: PathBuf,
    },
    /// Execute a JSON run configuration.
    #[serde(skip)]
    Run { config: PathBuf },
}

fn default_sweep_points() -> usize {
    101
}
fn default_branch() -> Branch {
    Branch::A
}
fn default_points() -> usize {
    DEFAULT_GRID_POINTS
}
fn default_initial() -> usize {
    2
}
fn default_dt() -> f64 {
    RK4_DEFAULT_DT
}
fn default_out_dir() -> PathBuf {
    PathBuf::from("figures")
}

pub fn load_config(path: &Path) -> Result<Command> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

fn emit(out: &OutputArgs, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    match &out.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| Error::io(path, e))?;
            let mut w = BufWriter::new(file);
            body(&mut w)
                .and_then(|_| w.flush())
                .map_err(|e| Error::io(path, e))?;
            log::info!("wrote {}", path.display());
            Ok(())
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w)
                .and_then(|_| w.flush())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn write_json<T: Serialize>(w: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)
}

#[derive(Serialize)]
struct SpectrumReport {
    params: SystemParams,
    frequencies: [f64; 6],
    delta: Option<f64>,
    degenerate: bool,
    discriminant: f64,
    zero_pair: bool,
}

pub fn execute(command: &Command) -> Result<()> {
    match command {
        Command::Spectrum { params, out } => {
            let params = params.resolve()?;
            let spectrum = eigenfrequencies(&params)?;
            let report = degeneracy_discriminant(&params)?;
            let delta = nonequidistance_error(&spectrum).ok();
            let summary = SpectrumReport {
                params,
                frequencies: spectrum.frequencies,
                delta,
                degenerate: delta.is_none(),
                discriminant: report.discriminant,
                zero_pair: report.zero_pair,
            };
            emit(out, |w| match out.format {
                Format::Json => write_json(w, &summary),
                Format::Csv => {
                    writeln!(w, "w1,w2,w3,w4,w5,w6,delta,degenerate,discriminant")?;
                    let freqs: Vec<String> =
                        summary.frequencies.iter().map(|&x| fmt12(x)).collect();
                    writeln!(
                        w,
                        "{},{},{},{}",
                        freqs.join(","),
                        summary.delta.map(fmt12).unwrap_or_default(),
                        summary.degenerate,
                        fmt12(summary.discriminant)
                    )
                }
            })
        }
        Command::Sweep {
            params,
            vary,
            lo,
            hi,
            n,
            constrain,
            out,
        } => {
            let vary: SweepParam = vary.parse()?;
            let key = match vary {
                SweepParam::G => "g",
                SweepParam::Delta => "delta",
                SweepParam::F1 => "f1",
                SweepParam::F2 => "f2",
            };
            let constrained = constrain.is_some();
            let base = params.resolve_with(|name| {
                if name == key || (constrained && (name == "f1" || name == "f2")) {
                    Some(*lo)
                } else {
                    None
                }
            })?;
            let rows = sweep_spectrum(&base, vary, (*lo, *hi), *n, *constrain)?;
            emit(out, |w| match out.format {
                Format::Json => write_json(w, &rows),
                Format::Csv => write_sweep_csv(&rows, w),
            })
        }
        Command::Comb {
            g,
            preset,
            branch,
            kappa,
            out,
        } => {
            let g = g
                .or(preset.map(Preset::g))
                .ok_or_else(|| Error::Usage("comb needs --g or --preset".into()))?;
            let mut solution = solve_comb_params(g, *branch)?;
            if let Some(kappa) = kappa {
                solution = scale_comb(&solution, *kappa)?;
            }
            emit(out, |w| match out.format {
                Format::Json => write_json(w, &solution),
                Format::Csv => {
                    writeln!(w, "branch,g,delta,f1,f2,r1,r2,r3,w1,w2,w3,w4,w5,w6")?;
                    let mut fields = vec![
                        solution.branch.to_string(),
                        fmt12(solution.g),
                        fmt12(solution.delta),
                        fmt12(solution.f1),
                        fmt12(solution.f2),
                    ];
                    fields.extend(solution.residuals.iter().map(|&r| fmt12(r)));
                    fields.extend(solution.spectrum.iter().map(|&r| fmt12(r)));
                    writeln!(w, "{}", fields.join(","))
                }
            })
        }
        Command::Energy { target, g, out } => match (target, g) {
            (Some(target), None) => {
                let program = solve_g_for_energy(*target)?;
                emit(out, |w| match out.format {
                    Format::Json => write_json(w, &program),
                    Format::Csv => {
                        writeln!(w, "target,g")?;
                        for root in &program.g_solutions {
                            writeln!(w, "{},{}", fmt12(program.target_e2), fmt12(*root))?;
                        }
                        Ok(())
                    }
                })
            }
            (None, Some(g)) => {
                let e = energy_at_pi(*g)?;
                emit(out, |w| match out.format {
                    Format::Json => write_json(w, &serde_json::json!({ "g": g, "energy": e })),
                    Format::Csv => writeln!(w, "g,energy\n{},{}", fmt12(*g), fmt12(e)),
                })
            }
            _ => Err(Error::Usage(
                "energy needs exactly one of --target or --g".into(),
            )),
        },
        Command::Evolve {
            params,
            schedule,
            t_end,
            points,
            initial,
            method,
            dt,
            out,
        } => {
            let v0 = initial_state(*initial)?;
            let trajectory = match schedule {
                Some(path) => {
                    let file = ScheduleFile::load(path)?;
                    let base = if params.is_empty() {
                        None
                    } else {
                        Some(params.resolve()?)
                    };
                    let schedule: Schedule = file.into_schedule(base)?;
                    let t_end = t_end.unwrap_or(schedule.end());
                    evolve_schedule(&schedule, &v0, &time_grid(t_end, *points))?
                }
                None => {
                    let params = params.resolve()?;
                    let t_end = t_end.unwrap_or(2.0 * PI);
                    match method {
                        Method::Spectral => {
                            evolve_spectral(&params, &v0, &time_grid(t_end, *points))?
                        }
                        Method::Rk4 => evolve_rk4(&params, &v0, *dt, t_end)?,
                    }
                }
            };
            let rows = energies(&trajectory);
            emit(out, |w| match out.format {
                Format::Json => write_json(w, &rows),
                Format::Csv => write_energies_csv(&rows, w),
            })
        }
        Command::Figures { out_dir } => {
            for path in figures::write_all(out_dir)? {
                log::info!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Run { config } => {
            let command = load_config(config)?;
            if matches!(command, Command::Run { .. }) {
                return Err(Error::Usage("a run configuration cannot nest `run`".into()));
            }
            execute(&command)
        }
    }
}

/// Parses `args` (including the program name) and executes. Returns the
/// process exit code; diagnostics go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_resolves_to_energy_branch() {
        let args = ParamArgs {
            preset: Some(Preset::Qutrit),
            ..Default::default()
        };
        let p = args.resolve().unwrap();
        let sol = solve_comb_params(G_QUTRIT, ENERGY_BRANCH).unwrap();
        assert_eq!(p, sol.params());
    }

    #[test]
    fn missing_flag_is_usage_error() {
        let args = ParamArgs {
            g: Some(0.0),
            delta: Some(0.0),
            f1: Some(1.0),
            ..Default::default()
        };
        let err = args.resolve().unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn comb_conflicts_with_explicit_couplings() {
        let args = ParamArgs {
            g: Some(0.5),
            f1: Some(1.0),
            comb: Some(Branch::A),
            ..Default::default()
        };
        assert!(matches!(args.resolve(), Err(Error::Usage(_))));
    }

    #[test]
    fn config_json_mirrors_flags() {
        let cmd: Command = serde_json::from_str(
            r#"{"command": "spectrum", "comb": "A", "g": 0.7556142107, "format": "json"}"#,
        )
        .unwrap();
        match cmd {
            Command::Spectrum { params, out } => {
                assert_eq!(params.comb, Some(Branch::A));
                assert_eq!(out.format, Format::Json);
                assert!(out.output.is_none());
            }
            other => panic!("{other:?}"),
        }
        let cmd: Command = serde_json::from_str(
            r#"{"command": "sweep", "vary": "g", "lo": 0, "hi": 3, "f1": 1, "f2": 1, "delta": 0}"#,
        )
        .unwrap();
        assert!(matches!(cmd, Command::Sweep { n: 101, .. }));
        assert!(serde_json::from_str::<Command>(r#"{"command": "run", "config": "x"}"#).is_err());
    }
}
