//! Monic real cubics `x^3 + b x^2 + c x + d` with three real roots.

use std::f64::consts::PI;

/// Discriminant `18bcd - 4b^3 d + b^2 c^2 - 4c^3 - 27d^2`. Zero iff the cubic
/// has a repeated root; positive iff it has three distinct real roots.
pub fn discriminant(b: f64, c: f64, d: f64) -> f64 {
    18.0 * b * c * d - 4.0 * b * b * b * d + b * b * c * c - 4.0 * c * c * c - 27.0 * d * d
}

pub fn eval(b: f64, c: f64, d: f64, x: f64) -> f64 {
    ((x + b) * x + c) * x + d
}

fn eval_derivative(b: f64, c: f64, x: f64) -> f64 {
    (3.0 * x + 2.0 * b) * x + c
}

/// Real roots in ascending order by the trigonometric (Viète) method.
///
/// Assumes the cubic has three real roots, which holds whenever it is the
/// characteristic polynomial of a real symmetric matrix. A slightly positive
/// depressed coefficient (rounding) is treated as a triple root.
pub fn real_roots(b: f64, c: f64, d: f64) -> [f64; 3] {
    let shift = -b / 3.0;
    // Depressed form t^3 + p t + q with x = t + shift.
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;

    let mut roots = if p >= 0.0 {
        let t = (-q).cbrt();
        [t + shift; 3]
    } else {
        let amplitude = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * amplitude)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        [0, 1, 2].map(|k| amplitude * (theta - 2.0 * PI * k as f64 / 3.0).cos() + shift)
    };

    for root in roots.iter_mut() {
        *root = polish(b, c, d, *root);
    }
    roots.sort_by(f64::total_cmp);
    roots
}

// A couple of guarded Newton steps; a step is kept only if the residual drops.
fn polish(b: f64, c: f64, d: f64, mut x: f64) -> f64 {
    for _ in 0..2 {
        let fx = eval(b, c, d, x);
        let dfx = eval_derivative(b, c, x);
        if fx == 0.0 || dfx == 0.0 {
            break;
        }
        let next = x - fx / dfx;
        if eval(b, c, d, next).abs() < fx.abs() {
            x = next;
        } else {
            break;
        }
    }
    x
}

/// Forward-error bound for a root `x` computed from coefficients known to
/// relative precision `eta`: the smallest of `(k! * e / |P^(k)(x)|)^(1/k)`
/// for `k = 1, 2, 3`, where `e` is the backward error. This is what limits
/// how closely clustered roots can be recovered from the coefficients.
pub fn root_sensitivity(b: f64, c: f64, d: f64, x: f64, eta: f64) -> f64 {
    let ax = x.abs();
    let backward = eta * (ax * ax * ax + b.abs() * ax * ax + c.abs() * ax + d.abs());
    let d1 = eval_derivative(b, c, x).abs();
    let d2 = (6.0 * x + 2.0 * b).abs();
    let d3 = 6.0;
    let mut bound = (6.0 * backward / d3).cbrt();
    if d2 > 0.0 {
        bound = bound.min((2.0 * backward / d2).sqrt());
    }
    if d1 > 0.0 {
        bound = bound.min(backward / d1);
    }
    bound
}
