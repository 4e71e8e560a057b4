//! Parameters, state vectors and the real symmetric generator of the
//! single-excitation dynamics.
//!
//! Amplitudes are ordered `(s1, s2, s3, a1, a2, a3)`: the three atomic
//! coherences followed by the three resonator field modes. In the rotating
//! frame the equations of motion are `dv/dt = -i M v` with
//!
//! ```text
//!         s1   s2   s3   a1   a2   a3
//!   s1 [ -Δ    .    .    f2   .    .  ]
//!   s2 [  .    0    .    .    f1   .  ]
//!   s3 [  .    .    Δ    .    .    f2 ]
//!   a1 [  f2   .    .   -Δ    g    .  ]
//!   a2 [  .    f1   .    g    0    g  ]
//!   a3 [  .    .    f2   .    g    Δ  ]
//! ```
//!
//! so that `ds1/dt = iΔ s1 - i f2 a1`: site 1 (atom and resonator) sits at
//! `-Δ` in the rotating frame, site 3 at `+Δ`. Flipping the sign of `Δ` only
//! swaps sites 1 and 3. Each atom is resonant with the resonator that hosts
//! it.

use std::fmt;
use std::path::Path;

use nalgebra::{Matrix6, Vector6};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of amplitudes in the single-excitation sector.
pub const DIM: usize = 6;

/// Slot labels in amplitude order.
pub const LABELS: [&str; DIM] = ["s1", "s2", "s3", "a1", "a2", "a3"];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Inter-resonator coupling.
    pub g: f64,
    /// Detuning of resonators (and atoms) 1 and 3 relative to resonator 2.
    pub delta: f64,
    /// Atom-field coupling in resonator 2.
    pub f1: f64,
    /// Atom-field coupling in resonators 1 and 3.
    pub f2: f64,
    /// Carrier frequency. Carried along for bookkeeping; rotating-frame
    /// quantities never depend on it.
    #[serde(default)]
    pub omega0: f64,
}

impl SystemParams {
    /// Builds and validates a parameter set with `omega0 = 0`.
    pub fn new(g: f64, delta: f64, f1: f64, f2: f64) -> Result<Self> {
        let params = SystemParams {
            g,
            delta,
            f1,
            f2,
            omega0: 0.0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("g", self.g),
            ("delta", self.delta),
            ("f1", self.f1),
            ("f2", self.f2),
            ("omega0", self.omega0),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::invalid(name, format!("{value} is not finite")));
            }
        }
        for (name, value) in [("g", self.g), ("f1", self.f1), ("f2", self.f2)] {
            if value < 0.0 {
                return Err(Error::invalid(
                    name,
                    format!("{value} is negative; couplings must be >= 0"),
                ));
            }
        }
        Ok(())
    }

    pub fn with_g(self, g: f64) -> Self {
        SystemParams { g, ..self }
    }

    pub fn with_delta(self, delta: f64) -> Self {
        SystemParams { delta, ..self }
    }

    /// Multiplies every coupling and the detuning by `kappa`.
    pub fn scaled(self, kappa: f64) -> Self {
        SystemParams {
            g: self.g * kappa,
            delta: self.delta * kappa,
            f1: self.f1 * kappa,
            f2: self.f2 * kappa,
            omega0: self.omega0,
        }
    }

    /// Parses the flat `key = value` format (keys `g`, `delta`, `f1`, `f2`,
    /// optional `omega0`).
    pub fn from_kv_str(text: &str) -> Result<Self> {
        let params: SystemParams = toml::from_str(text)?;
        params.validate()?;
        Ok(params)
    }

    pub fn to_kv_string(&self) -> String {
        format!(
            "g = {:?}\ndelta = {:?}\nf1 = {:?}\nf2 = {:?}\nomega0 = {:?}\n",
            self.g, self.delta, self.f1, self.f2, self.omega0
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_kv_str(&text)
    }
}

impl fmt::Display for SystemParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "g={} delta={} f1={} f2={}",
            self.g, self.delta, self.f1, self.f2
        )
    }
}

/// Six complex amplitudes `(s1, s2, s3, a1, a2, a3)` in the rotating frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVector(pub Vector6<Complex64>);

impl StateVector {
    pub fn from_amplitudes(amplitudes: [Complex64; DIM]) -> Self {
        StateVector(Vector6::from_column_slice(&amplitudes))
    }

    pub fn amplitudes(&self) -> [Complex64; DIM] {
        let mut out = [Complex64::new(0.0, 0.0); DIM];
        out.copy_from_slice(self.0.as_slice());
        out
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Occupation probability `|v_n|^2` of every slot.
    pub fn populations(&self) -> [f64; DIM] {
        let mut out = [0.0; DIM];
        for (p, a) in out.iter_mut().zip(self.0.iter()) {
            *p = a.norm_sqr();
        }
        out
    }

    /// Euclidean distance to another state.
    pub fn distance(&self, other: &StateVector) -> f64 {
        (self.0 - other.0).norm()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }
}

impl std::ops::Index<usize> for StateVector {
    type Output = Complex64;

    fn index(&self, index: usize) -> &Complex64 {
        &self.0[index]
    }
}

/// Real symmetric generator `M` of `dv/dt = -i M v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingMatrix(pub Matrix6<f64>);

impl CouplingMatrix {
    pub fn as_matrix(&self) -> &Matrix6<f64> {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }
}

pub fn build_coupling_matrix(params: &SystemParams) -> Result<CouplingMatrix> {
    params.validate()?;
    let SystemParams {
        g, delta, f1, f2, ..
    } = *params;
    let mut m = Matrix6::zeros();
    m[(0, 0)] = -delta;
    m[(2, 2)] = delta;
    m[(3, 3)] = -delta;
    m[(5, 5)] = delta;
    for (i, j, value) in [(0, 3, f2), (1, 4, f1), (2, 5, f2), (3, 4, g), (4, 5, g)] {
        m[(i, j)] = value;
        m[(j, i)] = value;
    }
    Ok(CouplingMatrix(m))
}

/// Unit excitation in slot `excited_index` (1-based, `1..=6` in the order
/// s1, s2, s3, a1, a2, a3).
pub fn initial_state(excited_index: usize) -> Result<StateVector> {
    if !(1..=DIM).contains(&excited_index) {
        return Err(Error::IndexOutOfRange(excited_index));
    }
    let mut v = Vector6::zeros();
    v[excited_index - 1] = Complex64::new(1.0, 0.0);
    Ok(StateVector(v))
}

/// `S = D P` with `D = diag(-1, 1, -1, 1, -1, 1)` and `P` swapping sites 1
/// and 3. It anticommutes with every coupling matrix: `S M S^-1 = -M`.
pub fn mirror_operator() -> Matrix6<f64> {
    let mut perm = Matrix6::zeros();
    for (i, j) in [(0, 2), (1, 1), (2, 0), (3, 5), (4, 4), (5, 3)] {
        perm[(i, j)] = 1.0;
    }
    let signs = Matrix6::from_diagonal(&Vector6::new(-1.0, 1.0, -1.0, 1.0, -1.0, 1.0));
    signs * perm
}
