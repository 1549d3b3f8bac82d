//! Coefficient-space model: reciprocal Laurent polynomials, their monic
//! form, the embedding into ordinary coefficient vectors, and the map from
//! roots to coefficients.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::NumericError;

/// Ordinary polynomial `f(x) = sum entries[m] x^m`, ascending powers.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffVec(pub Vec<Complex64>);

impl CoeffVec {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Self(entries)
    }

    pub fn from_real(entries: &[f64]) -> Self {
        Self(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        horner(&self.0, x)
    }

    /// Product of two polynomials.
    pub fn mul(&self, other: &Self) -> Self {
        Self(convolve(&self.0, &other.0))
    }

    /// Euclidean norm of the coefficient vector.
    pub fn l2_norm(&self) -> f64 {
        self.0.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    /// Drops vanishing high-order coefficients.
    pub fn trimmed(&self) -> Self {
        let mut v = self.0.clone();
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        Self(v)
    }
}

pub(crate) fn horner(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::zero(), |acc, &c| acc * x + c)
}

pub(crate) fn convolve(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `p_v(x) = v_0 + sum_{n=1}^N v_n (x^n + x^-n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RecipLaurent {
    v: Vec<Complex64>,
}

impl RecipLaurent {
    /// `v` holds `(v_0, ..., v_N)` with `N >= 1`.
    pub fn new(v: Vec<Complex64>) -> Result<Self, NumericError> {
        if v.len() < 2 {
            return Err(NumericError::InvalidArgument(
                "reciprocal Laurent polynomial needs order N >= 1".into(),
            ));
        }
        Ok(Self { v })
    }

    pub fn from_real(v: &[f64]) -> Result<Self, NumericError> {
        Self::new(v.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn order(&self) -> usize {
        self.v.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.v
    }

    pub fn eval(&self, x: Complex64) -> Result<Complex64, NumericError> {
        eval_symmetric(&self.v, x)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            v: self.v.iter().map(|&c| c * k).collect(),
        }
    }

    /// Coefficients of `x^N p_v(x)`, ascending:
    /// `(v_N, ..., v_1, v_0, v_1, ..., v_N)`.
    pub fn embed(&self) -> CoeffVec {
        palindrome(&self.v)
    }
}

/// `p~_b(x) = (x^N + x^-N) + b_0 + sum_{n=1}^{N-1} b_n (x^n + x^-n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicRecip {
    b: Vec<Complex64>,
}

impl MonicRecip {
    /// `b` holds `(b_0, ..., b_{N-1})` with `N >= 1`.
    pub fn new(b: Vec<Complex64>) -> Result<Self, NumericError> {
        if b.is_empty() {
            return Err(NumericError::InvalidArgument(
                "monic reciprocal polynomial needs order N >= 1".into(),
            ));
        }
        Ok(Self { b })
    }

    pub fn from_real(b: &[f64]) -> Result<Self, NumericError> {
        Self::new(b.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn order(&self) -> usize {
        self.b.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.b
    }

    /// The reciprocal vector `(b_0, ..., b_{N-1}, 1)`.
    pub fn extended(&self) -> RecipLaurent {
        let mut v = self.b.clone();
        v.push(Complex64::one());
        RecipLaurent { v }
    }

    pub fn eval(&self, x: Complex64) -> Result<Complex64, NumericError> {
        self.extended().eval(x)
    }

    /// Coefficients of `x^N p~_b(x)`: degree `2N`, palindromic, leading 1.
    pub fn to_poly(&self) -> CoeffVec {
        self.extended().embed()
    }
}

fn eval_symmetric(v: &[Complex64], x: Complex64) -> Result<Complex64, NumericError> {
    if x.is_zero() {
        return Err(NumericError::ZeroArgument);
    }
    let inv = x.inv();
    let mut acc = v[0];
    let (mut up, mut down) = (Complex64::one(), Complex64::one());
    for &c in &v[1..] {
        up *= x;
        down *= inv;
        acc += c * (up + down);
    }
    Ok(acc)
}

fn palindrome(v: &[Complex64]) -> CoeffVec {
    let mut out: Vec<Complex64> = v.iter().rev().copied().collect();
    out.extend_from_slice(&v[1..]);
    CoeffVec(out)
}

/// Nonzero roots `alpha` parametrizing monic reciprocal polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct RootVec(Vec<Complex64>);

impl RootVec {
    pub fn new(alpha: Vec<Complex64>) -> Result<Self, NumericError> {
        if let Some(i) = alpha.iter().position(|a| a.is_zero()) {
            return Err(NumericError::ZeroRoot(i));
        }
        if alpha.is_empty() {
            return Err(NumericError::InvalidArgument("empty root vector".into()));
        }
        Ok(Self(alpha))
    }

    pub fn from_real(alpha: &[f64]) -> Result<Self, NumericError> {
        Self::new(alpha.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `beta_n = alpha_n + 1/alpha_n`.
    pub fn beta(&self) -> Vec<Complex64> {
        self.0.iter().map(|&a| a + a.inv()).collect()
    }
}

pub fn eval_recip(p: &RecipLaurent, x: Complex64) -> Result<Complex64, NumericError> {
    p.eval(x)
}

pub fn eval_monic(p: &MonicRecip, x: Complex64) -> Result<Complex64, NumericError> {
    p.eval(x)
}

pub fn monic_to_poly(p: &MonicRecip) -> CoeffVec {
    p.to_poly()
}

pub fn lambda_embed(p: &RecipLaurent) -> CoeffVec {
    p.embed()
}

/// The roots-to-coefficients map: expands
/// `prod (x + alpha_n)(x + 1/alpha_n) / x^N` into monic reciprocal form.
pub fn from_roots(alpha: &RootVec) -> MonicRecip {
    // Each factor is the palindrome x^2 + beta x + 1, so the product stays
    // palindromic exactly.
    let mut poly = vec![Complex64::one()];
    for beta in alpha.beta() {
        poly = convolve(&poly, &[Complex64::one(), beta, Complex64::one()]);
    }
    let n = alpha.len();
    // Entry N + k of the degree-2N product is b_k.
    MonicRecip {
        b: poly[n..2 * n].to_vec(),
    }
}

/// `(b_0, ..., b_{N-1})` with `prod (x + beta_n) = x^N + sum b_n x^n`, so
/// `b_{N-n} = e_n(beta)`.
pub fn e_map(beta: &[Complex64]) -> Vec<Complex64> {
    let mut poly = vec![Complex64::one()];
    for &b in beta {
        poly = convolve(&poly, &[b, Complex64::one()]);
    }
    poly.truncate(beta.len());
    poly
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn eval_examples() {
        let p = RecipLaurent::from_real(&[2.5, 1.0]).unwrap();
        assert!((p.eval(c(2.0)).unwrap() - c(5.0)).norm() < 1e-15);
        let m = MonicRecip::from_real(&[-2.5]).unwrap();
        assert!(m.eval(c(2.0)).unwrap().norm() < 1e-15);
        assert_eq!(p.eval(c(0.0)), Err(NumericError::ZeroArgument));
        assert_eq!(m.eval(c(0.0)), Err(NumericError::ZeroArgument));
    }

    #[test]
    fn real_coefficients_give_real_values_on_circle() {
        let p = RecipLaurent::from_real(&[0.3, -1.2, 0.7]).unwrap();
        for k in 0..16 {
            let t = k as f64 / 16.0;
            let x = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t);
            let z = p.eval(x).unwrap();
            let expected = 0.3
                + 2.0 * (-1.2 * (2.0 * std::f64::consts::PI * t).cos()
                    + 0.7 * (4.0 * std::f64::consts::PI * t).cos());
            assert!((z.re - expected).abs() < 1e-12);
            assert!(z.im.abs() < 1e-12);
        }
    }

    #[test]
    fn monic_to_poly_examples() {
        let p = MonicRecip::from_real(&[-2.5]).unwrap().to_poly();
        assert_eq!(p, CoeffVec::from_real(&[1.0, -2.5, 1.0]));
        let q = MonicRecip::from_real(&[2.0, 0.0]).unwrap().to_poly();
        assert_eq!(q, CoeffVec::from_real(&[1.0, 0.0, 2.0, 0.0, 1.0]));
        let r = MonicRecip::from_real(&[0.0]).unwrap().to_poly();
        assert_eq!(r, CoeffVec::from_real(&[1.0, 0.0, 1.0]));
    }

    #[test]
    fn lambda_examples() {
        let e = RecipLaurent::from_real(&[3.0, 7.0]).unwrap().embed();
        assert_eq!(e, CoeffVec::from_real(&[7.0, 3.0, 7.0]));
        let e = RecipLaurent::from_real(&[1.0, 0.0]).unwrap().embed();
        assert_eq!(e, CoeffVec::from_real(&[0.0, 1.0, 0.0]));
        let e = RecipLaurent::from_real(&[0.0, 1.0]).unwrap().embed();
        assert_eq!(e, CoeffVec::from_real(&[1.0, 0.0, 1.0]));
        // Asymmetric N = 2 vector pins the index order.
        let e = RecipLaurent::from_real(&[1.0, 2.0, 3.0]).unwrap().embed();
        assert_eq!(e, CoeffVec::from_real(&[3.0, 2.0, 1.0, 2.0, 3.0]));
    }

    #[test]
    fn from_roots_examples() {
        let b = from_roots(&RootVec::from_real(&[2.0]).unwrap());
        assert!((b.coeffs()[0] - c(2.5)).norm() < 1e-15);
        let b = from_roots(&RootVec::from_real(&[0.5]).unwrap());
        assert!((b.coeffs()[0] - c(2.5)).norm() < 1e-15);
        let b = from_roots(&RootVec::from_real(&[1.0, -1.0]).unwrap());
        assert_eq!(b.coeffs(), &[c(-2.0), c(0.0)]);
        assert_eq!(
            RootVec::from_real(&[1.0, 0.0]),
            Err(NumericError::ZeroRoot(1))
        );
    }

    #[test]
    fn e_map_examples() {
        assert_eq!(e_map(&[c(2.0), c(3.0)]), vec![c(6.0), c(5.0)]);
        assert_eq!(e_map(&[c(0.0), c(0.0)]), vec![c(0.0), c(0.0)]);
        assert_eq!(e_map(&[c(1.0), c(-1.0)]), vec![c(-1.0), c(0.0)]);
    }
}
