//! Numeric Mahler measures.
//!
//! The primary route is Jensen's formula over the roots, found by
//! Aberth-Ehrlich simultaneous iteration with a Newton polish. Quadrature of
//! `log|f|` on the unit circle is kept as an independent cross-check.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::NumericError;
use crate::polynomial::{horner, CoeffVec, MonicRecip, RecipLaurent};

pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_ITERATIONS: usize = 500;

/// Roots of a polynomial together with the worst relative backward error
/// `|f(z)| / sum |a_j| |z|^j` over the returned roots.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub residual: f64,
}

fn relative_residual(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    let scale = coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm());
    if scale == 0.0 {
        0.0
    } else {
        horner(coeffs, z).norm() / scale
    }
}

/// Value and derivative by Horner.
fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let (p, dp, _) = eval_with_scale(coeffs, z);
    (p, dp)
}

/// Value, derivative and the backward-error scale `sum |a_j| |z|^j`.
fn eval_with_scale(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let r = z.norm();
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    let mut scale = 0.0;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        scale = scale * r + c.norm();
    }
    (p, dp, scale)
}

/// Deterministic starting points on a circle whose radius comes from the
/// Fujiwara bound, rotated off the real axis.
fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].norm();
    let mut bound: f64 = 0.0;
    for j in 1..=n {
        let mut a = coeffs[n - j].norm() / lead;
        if j == n {
            a /= 2.0;
        }
        bound = bound.max(a.powf(1.0 / j as f64));
    }
    // Geometric mean of the root moduli is a better centre when the bound
    // is loose; keep it inside the bound.
    let geo = (coeffs[0].norm() / lead).powf(1.0 / n as f64);
    let radius = if geo > 0.0 && geo.is_finite() {
        geo.min(2.0 * bound).max(1e-3 * bound)
    } else {
        bound.max(f64::MIN_POSITIVE)
    };
    (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect()
}

fn aberth(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    if n == 1 {
        return vec![-coeffs[0] / coeffs[1]];
    }
    let mut z = initial_guesses(coeffs);
    let mut done = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        let mut all_done = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (p, dp, scale) = eval_with_scale(coeffs, z[k]);
            // At rounding level the iterate is as good as it gets.
            if p.norm() <= 2.0 * f64::EPSILON * scale {
                done[k] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let mut step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                // Derivative vanished or roots collided: nudge and retry.
                step = Complex64::new(1e-8, 1e-8) * (1.0 + z[k].norm());
            }
            z[k] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[k].norm().max(f64::MIN_POSITIVE) {
                done[k] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    z
}

/// Newton polish that only accepts steps which reduce `|f|`.
fn polish(coeffs: &[Complex64], z: &mut [Complex64]) {
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(coeffs, *zk);
            if p.is_zero() || dp.is_zero() {
                break;
            }
            let candidate = *zk - p / dp;
            if horner(coeffs, candidate).norm() < p.norm() {
                *zk = candidate;
            } else {
                break;
            }
        }
    }
}

/// All `deg f` roots of `f`, with multiplicity.
pub fn find_roots(f: &CoeffVec, tol: f64) -> Result<RootSet, NumericError> {
    let coeffs = f.entries();
    if coeffs.iter().all(|c| c.is_zero()) {
        return Err(NumericError::ZeroPolynomial);
    }
    if coeffs.len() < 2 {
        return Err(NumericError::InvalidArgument(
            "root finding needs degree >= 1".into(),
        ));
    }
    if coeffs.last().unwrap().is_zero() {
        return Err(NumericError::DegenerateLeadingCoefficient);
    }
    // Vanishing low-order coefficients are exact roots at zero.
    let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    let reduced = &coeffs[zeros..];
    let mut roots = vec![Complex64::zero(); zeros];
    if reduced.len() > 1 {
        let mut z = aberth(reduced);
        polish(reduced, &mut z);
        roots.extend(z);
    }
    let residual = roots
        .iter()
        .map(|&z| relative_residual(coeffs, z))
        .fold(0.0, f64::max);
    if residual.is_nan() || residual > tol {
        return Err(NumericError::NoConvergence { residual });
    }
    Ok(RootSet { roots, residual })
}

/// Jensen's formula: `|leading| * prod max(1, |root|)`.
pub fn mahler_from_roots(f: &CoeffVec, tol: f64) -> Result<f64, NumericError> {
    let f = f.trimmed();
    let lead = f.entries().last().ok_or(NumericError::ZeroPolynomial)?.norm();
    if f.len() == 1 {
        return Ok(lead);
    }
    let roots = find_roots(&f, tol)?;
    Ok(roots
        .roots
        .iter()
        .fold(lead, |acc, z| acc * z.norm().max(1.0)))
}

/// `exp` of the midpoint-rule mean of `log|f(e^{2 pi i t})|` over `nodes`
/// equally spaced points.
pub fn mahler_quadrature(f: &CoeffVec, nodes: usize) -> Result<f64, NumericError> {
    if nodes < 16 {
        return Err(NumericError::InvalidArgument(format!(
            "quadrature needs at least 16 nodes, got {nodes}"
        )));
    }
    let nonzero: Vec<&Complex64> = f.entries().iter().filter(|c| !c.is_zero()).collect();
    match nonzero.as_slice() {
        [] => return Err(NumericError::ZeroPolynomial),
        // |c x^k| is constant on the circle.
        [c] => return Ok(c.norm()),
        _ => {}
    }
    let mut total = 0.0;
    for j in 0..nodes {
        let t = (j as f64 + 0.5) / nodes as f64;
        let x = Complex64::from_polar(1.0, 2.0 * PI * t);
        let v = f.eval(x).norm();
        if v == 0.0 {
            return Err(NumericError::NodeOnZero);
        }
        total += v.ln();
    }
    Ok((total / nodes as f64).exp())
}

/// Reciprocal Mahler measure of `v`; exactly 0 for the zero vector.
pub fn mu_rec(v: &RecipLaurent, tol: f64) -> Result<f64, NumericError> {
    let c = v.coeffs();
    let Some(last) = c.iter().rposition(|x| !x.is_zero()) else {
        return Ok(0.0);
    };
    if last == 0 {
        return Ok(c[0].norm());
    }
    let trimmed = RecipLaurent::new(c[..=last].to_vec())?;
    mahler_from_roots(&trimmed.embed(), tol)
}

/// Monic reciprocal measure: `mu_rec(b, 1)`.
pub fn nu_rec(b: &MonicRecip, tol: f64) -> Result<f64, NumericError> {
    mahler_from_roots(&b.to_poly(), tol)
}
