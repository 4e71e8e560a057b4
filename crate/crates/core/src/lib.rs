//! Single-photon dynamics in a chain of three coupled resonators, each
//! hosting a resonant two-level atom.
//!
//! The crate designs coupling and detuning values that put the six
//! eigenfrequencies on an equidistant comb, and simulates the resulting
//! programmable energy transfer between the atoms: qubit and qutrit
//! generation at half period, full revival at one period.
//!
//! * [`model`]: parameters, state vectors, the coupling matrix.
//! * [`spectrum`]: characteristic polynomial, eigenfrequencies,
//!   non-equidistance error, degeneracy diagnostics, Laplace response.
//! * [`comb`]: comb design and the closed-form half-period population.
//! * [`dynamics`]: spectral and RK4 propagation, coupling schedules,
//!   population tables.
//! * [`figures`], [`cli`]: figure data and the command-line front end.

pub mod cli;
pub mod comb;
mod cubic;
pub mod dynamics;
pub mod error;
pub mod figures;
pub mod model;
pub mod spectrum;
pub mod table;

pub use comb::{
    comb_constraints, energy_at_pi, scale_comb, solve_comb_params, solve_g_for_energy, Branch,
    CombSolution, EnergyProgram, ENERGY_BRANCH, G_QUBIT, G_QUTRIT,
};
pub use dynamics::{
    energies, evolve_rk4, evolve_schedule, evolve_spectral, plateau_width, Propagator, Schedule,
    Segment, Trajectory,
};
pub use error::{Error, Result};
pub use model::{build_coupling_matrix, initial_state, CouplingMatrix, StateVector, SystemParams};
pub use spectrum::{
    char_poly, degeneracy_discriminant, eigenfrequencies, inverse_laplace_s2,
    nonequidistance_error, s2_response, sweep_spectrum, CharPoly, Spectrum,
};
