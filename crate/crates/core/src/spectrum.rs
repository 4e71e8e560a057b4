//! Characteristic polynomial, eigenfrequencies and the Laplace-domain
//! response of the excited central atom.
//!
//! With `p = -i w` the determinant of the Laplace-transformed system is the
//! even polynomial `Det(p) = p^6 + c4 p^4 + c2 p^2 + c0`, a cubic in
//! `q = p^2 = -w^2`. Eigenfrequencies are obtained twice: from the real roots
//! of that cubic and from a symmetric eigensolver on the coupling matrix. The
//! two must agree before a [`Spectrum`] is returned.

use std::io::Write;

use nalgebra::{Matrix6, SymmetricEigen, Vector6};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::comb::{self, Branch};
use crate::cubic;
use crate::error::{Error, Result};
use crate::model::{build_coupling_matrix, SystemParams};
use crate::table::fmt12;

/// Default absolute tolerance (comb-spacing units) for clustering equal
/// frequencies.
pub const DEGENERACY_TOL: f64 = 1e-7;

/// Required agreement between the cubic closed form and the eigensolver.
pub const CROSS_CHECK_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharPoly {
    pub c4: f64,
    pub c2: f64,
    pub c0: f64,
}

impl CharPoly {
    pub fn eval(&self, p: Complex64) -> Complex64 {
        let q = p * p;
        ((q + self.c4) * q + self.c2) * q + self.c0
    }

    /// `dDet/dp = 6p^5 + 4 c4 p^3 + 2 c2 p`.
    pub fn derivative(&self, p: Complex64) -> Complex64 {
        let q = p * p;
        p * ((6.0 * q + 4.0 * self.c4) * q + 2.0 * self.c2)
    }

    /// Roots of the cubic in `q = p^2`, ascending. All are `<= 0` up to
    /// rounding for any physical parameter set.
    pub fn q_roots(&self) -> [f64; 3] {
        cubic::real_roots(self.c4, self.c2, self.c0)
    }

    /// Coefficients of `det(wI - M) = w^6 - c4 w^4 + c2 w^2 - c0`, lowest
    /// degree first.
    pub fn frequency_poly(&self) -> [f64; 7] {
        [-self.c0, 0.0, self.c2, 0.0, -self.c4, 0.0, 1.0]
    }
}

pub fn char_poly(params: &SystemParams) -> Result<CharPoly> {
    params.validate()?;
    let SystemParams {
        g, delta, f1, f2, ..
    } = *params;
    let (d2, g2, f12, f22) = (delta * delta, g * g, f1 * f1, f2 * f2);
    let c4 = 2.0 * d2 + 2.0 * g2 + f12 + 2.0 * f22;
    let c2 = d2 * d2 + 2.0 * (g2 + f12 - f22) * d2 + 2.0 * (g2 + f12) * f22 + f22 * f22;
    let detuned = (delta - f2) * (delta + f2);
    let c0 = f12 * detuned * detuned;
    Ok(CharPoly { c4, c2, c0 })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Ascending.
    pub frequencies: [f64; 6],
    pub degeneracy_tol: f64,
    pub clusters: Vec<Cluster>,
}

impl Spectrum {
    /// Sorts `frequencies` and groups runs whose consecutive gaps are within
    /// `degeneracy_tol`.
    pub fn from_frequencies(mut frequencies: [f64; 6], degeneracy_tol: f64) -> Self {
        frequencies.sort_by(f64::total_cmp);
        let mut clusters: Vec<(f64, usize)> = Vec::new();
        let mut last = f64::NEG_INFINITY;
        for &w in &frequencies {
            match clusters.last_mut() {
                Some((sum, count)) if w - last <= degeneracy_tol => {
                    *sum += w;
                    *count += 1;
                }
                _ => clusters.push((w, 1)),
            }
            last = w;
        }
        let clusters = clusters
            .into_iter()
            .map(|(sum, count)| Cluster {
                value: sum / count as f64,
                multiplicity: count,
            })
            .collect();
        Spectrum {
            frequencies,
            degeneracy_tol,
            clusters,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.clusters.iter().any(|c| c.multiplicity > 1)
    }

    /// The three largest frequencies `w1 <= w2 <= w3`.
    pub fn positive_half(&self) -> [f64; 3] {
        [
            self.frequencies[3],
            self.frequencies[4],
            self.frequencies[5],
        ]
    }

    pub fn sum(&self) -> f64 {
        self.frequencies.iter().sum()
    }

    /// Largest `|w_k + w_{5-k}|`; zero for a spectrum symmetric about 0.
    pub fn mirror_asymmetry(&self) -> f64 {
        (0..3)
            .map(|k| (self.frequencies[k] + self.frequencies[5 - k]).abs())
            .fold(0.0, f64::max)
    }

    /// Largest deviation from `target` (both sorted).
    pub fn max_deviation(&self, target: &[f64; 6]) -> f64 {
        let mut sorted = *target;
        sorted.sort_by(f64::total_cmp);
        self.frequencies
            .iter()
            .zip(sorted)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Eigendecomposition `M = V diag(w) V^T` with `w` ascending.
#[derive(Clone, Debug)]
pub struct EigenBasis {
    pub frequencies: Vector6<f64>,
    pub vectors: Matrix6<f64>,
}

pub fn eigen_basis(params: &SystemParams) -> Result<EigenBasis> {
    let m = build_coupling_matrix(params)?;
    let eig = SymmetricEigen::new(m.0);
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut frequencies = Vector6::zeros();
    let mut vectors = Matrix6::zeros();
    for (dst, &src) in order.iter().enumerate() {
        frequencies[dst] = eig.eigenvalues[src];
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(EigenBasis {
        frequencies,
        vectors,
    })
}

pub fn eigenfrequencies(params: &SystemParams) -> Result<Spectrum> {
    eigenfrequencies_with_tol(params, DEGENERACY_TOL)
}

/// Eigenfrequencies from the symmetric eigensolver, after checking them
/// against the closed-form roots of the cubic in `q`.
///
/// The comparison is made on `w^2 = -q`. Each root gets tolerance
/// [`CROSS_CHECK_TOL`] (relative for `|q| > 1`) widened by the intrinsic
/// forward error of extracting that root from rounded coefficients, which
/// is only non-negligible where roots cluster.
pub fn eigenfrequencies_with_tol(params: &SystemParams, degeneracy_tol: f64) -> Result<Spectrum> {
    let basis = eigen_basis(params)?;
    let poly = char_poly(params)?;
    let q_roots = poly.q_roots();

    let scale = poly.c4.abs().max(1.0);
    for &q in &q_roots {
        if q > CROSS_CHECK_TOL * scale {
            return Err(Error::Consistency(format!(
                "cubic root q = {q:e} is positive; frequencies would be complex"
            )));
        }
    }

    let mut closed_form = [0.0; 6];
    for (k, &q) in q_roots.iter().enumerate() {
        closed_form[2 * k] = -q.min(0.0);
        closed_form[2 * k + 1] = -q.min(0.0);
    }
    closed_form.sort_by(f64::total_cmp);
    let mut squared: Vec<f64> = basis.frequencies.iter().map(|w| w * w).collect();
    squared.sort_by(f64::total_cmp);

    for (&w2_closed, &w2_eig) in closed_form.iter().zip(&squared) {
        let q = -w2_closed;
        let tol = CROSS_CHECK_TOL * q.abs().max(1.0)
            + cubic::root_sensitivity(poly.c4, poly.c2, poly.c0, q, 8.0 * f64::EPSILON);
        if (w2_closed - w2_eig).abs() > tol {
            return Err(Error::Consistency(format!(
                "closed-form w^2 = {w2_closed:e} vs eigensolver w^2 = {w2_eig:e} (tol {tol:e}) at {params}"
            )));
        }
    }

    let mut frequencies = [0.0; 6];
    frequencies.copy_from_slice(basis.frequencies.as_slice());
    Ok(Spectrum::from_frequencies(frequencies, degeneracy_tol))
}

/// `|w2/w1 - 3| + |w3/w1 - 5|` over the positive frequencies. Defined only
/// for non-degenerate spectra with `w1` above the degeneracy tolerance.
pub fn nonequidistance_error(spectrum: &Spectrum) -> Result<f64> {
    if spectrum.is_degenerate() {
        return Err(Error::NotApplicable(
            "spectrum has degenerate frequencies".into(),
        ));
    }
    let [w1, w2, w3] = spectrum.positive_half();
    if w1 <= spectrum.degeneracy_tol {
        return Err(Error::NotApplicable(format!(
            "lowest positive frequency {w1:e} is below tolerance"
        )));
    }
    Ok((w2 / w1 - 3.0).abs() + (w3 / w1 - 5.0).abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyReport {
    /// Discriminant of `q^3 + c4 q^2 + c2 q + c0`.
    pub discriminant: f64,
    /// `|discriminant|` is negligible against `c4^6`: some `w^2` repeats.
    pub repeated_square: bool,
    /// `c0` vanishes (the `delta = ±f2` condition): a pair of zero
    /// frequencies, i.e. a double root of `Det` at `p = 0`.
    pub zero_pair: bool,
}

impl DegeneracyReport {
    pub fn is_degenerate(&self) -> bool {
        self.repeated_square || self.zero_pair
    }
}

/// Relative threshold on the discriminant for [`DegeneracyReport::repeated_square`].
pub const DISCRIMINANT_REL_TOL: f64 = 1e-12;

pub fn degeneracy_discriminant(params: &SystemParams) -> Result<DegeneracyReport> {
    let poly = char_poly(params)?;
    let discriminant = cubic::discriminant(poly.c4, poly.c2, poly.c0);
    let scale = poly.c4.powi(6);
    let repeated_square = discriminant.abs() <= DISCRIMINANT_REL_TOL * scale;
    // The smallest |q| is about c0 / c2; it is a zero pair when that q is
    // below the squared frequency tolerance.
    let zero_pair = poly.c0 <= DEGENERACY_TOL * DEGENERACY_TOL * poly.c2.abs();
    Ok(DegeneracyReport {
        discriminant,
        repeated_square,
        zero_pair,
    })
}

/// Laplace-domain amplitude `s2(p)` for the initial condition `s2(0) = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResponseAmplitude {
    pub value: Complex64,
}

// Coefficients of the s2(p) numerator, lowest degree first:
// p^5 + 2(Δ²+g²+f2²) p^3 + (Δ⁴ + 2Δ²g² - 2Δ²f2² + 2g²f2² + f2⁴) p.
fn s2_numerator(params: &SystemParams) -> [f64; 6] {
    let (d2, g2, f22) = (
        params.delta * params.delta,
        params.g * params.g,
        params.f2 * params.f2,
    );
    let linear = d2 * d2 + 2.0 * d2 * g2 - 2.0 * d2 * f22 + 2.0 * g2 * f22 + f22 * f22;
    [0.0, linear, 0.0, 2.0 * (d2 + g2 + f22), 0.0, 1.0]
}

fn horner(coeffs: &[f64], p: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * p + c)
}

pub fn s2_response(params: &SystemParams, p: Complex64) -> Result<ResponseAmplitude> {
    let poly = char_poly(params)?;
    let det = poly.eval(p);
    let r = p.norm_sqr();
    let magnitude = r * r * r + poly.c4 * r * r + poly.c2.abs() * r + poly.c0;
    if det.norm() <= 1e-13 * magnitude || det.norm() == 0.0 {
        return Err(Error::Pole { re: p.re, im: p.im });
    }
    let numerator = horner(&s2_numerator(params), p);
    Ok(ResponseAmplitude {
        value: numerator / det,
    })
}

// Truncated power series in ε, lowest order first.
fn series_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        for j in 0..n - i {
            out[i + j] += a[i] * b[j];
        }
    }
    out
}

/// Poles of `s2(p)` as `(p_k, multiplicity)`, from the clustered spectrum.
fn poles(spectrum: &Spectrum) -> Vec<(Complex64, usize)> {
    spectrum
        .clusters
        .iter()
        .map(|c| (Complex64::new(0.0, -c.value), c.multiplicity))
        .collect()
}

/// `s2(t)` as the sum of residues of `s2(p) e^{pt}`. Clustered poles of
/// multiplicity `m` use the confluent formula: the residue is the `m-1`
/// Taylor coefficient of `(p - p_k)^m s2(p) e^{pt}` at `p_k`.
pub fn inverse_laplace_s2(params: &SystemParams, times: &[f64]) -> Result<Vec<Complex64>> {
    let spectrum = eigenfrequencies(params)?;
    let poles = poles(&spectrum);
    let numerator = s2_numerator(params);
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);

    // Everything except the exponential is time independent: precompute the
    // Taylor coefficients of N(p) / prod_{j != k} (p - p_j)^{m_j} per pole.
    let mut partials = Vec::with_capacity(poles.len());
    for (k, &(pk, m)) in poles.iter().enumerate() {
        let mut shifted = vec![zero; m];
        shifted[0] = pk;
        if m > 1 {
            shifted[1] = one;
        }
        let mut series = vec![zero; m];
        for &c in numerator.iter().rev() {
            series = series_mul(&series, &shifted);
            series[0] += c;
        }
        for (j, &(pj, mj)) in poles.iter().enumerate() {
            if j == k {
                continue;
            }
            let a = pk - pj;
            let inverse: Vec<Complex64> = (0..m).map(|n| (-one / a).powu(n as u32) / a).collect();
            for _ in 0..mj {
                series = series_mul(&series, &inverse);
            }
        }
        partials.push((pk, series));
    }

    Ok(times
        .iter()
        .map(|&t| {
            partials
                .iter()
                .map(|(pk, series)| {
                    let m = series.len();
                    let mut term = zero;
                    let mut coeff = one;
                    // Coefficient of ε^{m-1} in series(ε) * e^{(p_k + ε) t}.
                    for n in 0..m {
                        if n > 0 {
                            coeff *= t / n as f64;
                        }
                        term += series[m - 1 - n] * coeff;
                    }
                    term * (pk * t).exp()
                })
                .sum()
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    G,
    Delta,
    F1,
    F2,
}

impl std::str::FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "g" => Ok(SweepParam::G),
            "delta" => Ok(SweepParam::Delta),
            "f1" => Ok(SweepParam::F1),
            "f2" => Ok(SweepParam::F2),
            _ => Err(Error::UnknownParameter(s.to_string())),
        }
    }
}

impl SweepParam {
    fn apply(self, base: SystemParams, value: f64) -> SystemParams {
        match self {
            SweepParam::G => SystemParams { g: value, ..base },
            SweepParam::Delta => SystemParams {
                delta: value,
                ..base
            },
            SweepParam::F1 => SystemParams { f1: value, ..base },
            SweepParam::F2 => SystemParams { f2: value, ..base },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub frequencies: [f64; 6],
    /// `None` where the non-equidistance error is undefined.
    pub delta: Option<f64>,
    pub degenerate: bool,
}

/// Evaluates the spectrum on `n` evenly spaced values of one parameter.
///
/// With `constraint` set, `f1` and `f2` are re-derived from each row's `g`
/// on that comb branch; `delta` is left as given (or swept).
pub fn sweep_spectrum(
    base: &SystemParams,
    vary: SweepParam,
    range: (f64, f64),
    n: usize,
    constraint: Option<Branch>,
) -> Result<Vec<SweepRow>> {
    let (lo, hi) = range;
    if n < 2 {
        return Err(Error::Usage(format!("sweep needs n >= 2, got {n}")));
    }
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(Error::Usage(format!("sweep range [{lo}, {hi}] is empty")));
    }
    (0..n)
        .map(|i| {
            let value = if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            };
            let mut params = vary.apply(*base, value);
            if let Some(branch) = constraint {
                let sol = comb::solve_comb_params(params.g, branch)?;
                params.f1 = sol.f1;
                params.f2 = sol.f2;
            }
            let spectrum = eigenfrequencies(&params)?;
            let delta = nonequidistance_error(&spectrum).ok();
            Ok(SweepRow {
                value,
                frequencies: spectrum.frequencies,
                delta,
                degenerate: delta.is_none(),
            })
        })
        .collect()
}

pub const SWEEP_CSV_HEADER: &str = "param,w1,w2,w3,w4,w5,w6,delta,degenerate";

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for row in rows {
        let mut line = fmt12(row.value);
        for w in row.frequencies {
            line.push(',');
            line.push_str(&fmt12(w));
        }
        line.push(',');
        if let Some(d) = row.delta {
            line.push_str(&fmt12(d));
        }
        line.push(',');
        line.push_str(if row.degenerate { "true" } else { "false" });
        writeln!(out, "{line}")?;
    }
    Ok(())
}
