//! Symmetric-function identities behind the change of variables from roots
//! to coefficients: elementary symmetric functions, the expansion of the
//! palindromic coefficients in terms of `e_n(beta)`, Vandermonde products,
//! and the Jacobian of the roots-to-coefficients map with a finite-difference
//! check.
//!
//! The coefficient of `x^(2N-n)` in `prod (x^2 + beta_m x + 1)` is
//! `sum_{M >= 0} C(N - n + 2M, M) e_{n-2M}(beta)`. (Expanding with the
//! binomial `C(N - n - 2M, M)` instead already fails at `N = n = 2`.)

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{FromPrimitive, Num};

use crate::error::NumericError;
use crate::polynomial::{from_roots, RootVec};

/// `[e_0, e_1, ..., e_len]` of `values`, read off `prod (x + value)`.
pub fn all_elem_sym<T: Num + Clone>(values: &[T]) -> Vec<T> {
    // coeffs[k] is the coefficient of x^(len - k).
    let mut coeffs = vec![T::one()];
    for v in values {
        let mut next = coeffs.clone();
        next.push(T::zero());
        for k in 1..next.len() {
            next[k] = next[k].clone() + v.clone() * coeffs[k - 1].clone();
        }
        coeffs = next;
    }
    coeffs
}

/// `e_n(values)`.
pub fn elem_sym<T: Num + Clone>(values: &[T], n: usize) -> Result<T, NumericError> {
    if n > values.len() {
        return Err(NumericError::IndexOutOfRange {
            index: n as i64,
            limit: values.len() as i64,
        });
    }
    Ok(all_elem_sym(values).swap_remove(n))
}

fn binomial_u64(n: i64, k: i64) -> u64 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `eps_n = sum_{M >= 0} C(N - n + 2M, M) e_{n-2M}(beta)` for `0 <= n <= N`.
///
/// Equals the coefficient of `x^(2N-n)` in `prod (x + alpha)(x + 1/alpha)`
/// when `beta_m = alpha_m + 1/alpha_m`.
pub fn epsilon_via_e<T: Num + Clone + FromPrimitive>(
    n: usize,
    beta: &[T],
) -> Result<T, NumericError> {
    let big_n = beta.len();
    if n > big_n {
        return Err(NumericError::IndexOutOfRange {
            index: n as i64,
            limit: big_n as i64,
        });
    }
    let e = all_elem_sym(beta);
    let mut acc = T::zero();
    let mut m = 0usize;
    while 2 * m <= n {
        let c = binomial_u64((big_n - n + 2 * m) as i64, m as i64);
        acc = acc + T::from_u64(c).expect("binomial fits") * e[n - 2 * m].clone();
        m += 1;
    }
    Ok(acc)
}

/// The coefficients of `prod (x^2 + beta_m x + 1)`, highest degree first,
/// obtained by direct expansion. Oracle for [`epsilon_via_e`].
pub fn palindrome_coefficients<T: Num + Clone>(beta: &[T]) -> Vec<T> {
    let mut poly = vec![T::one()];
    for b in beta {
        let mut next = vec![T::zero(); poly.len() + 2];
        for (k, c) in poly.iter().enumerate() {
            next[k] = next[k].clone() + c.clone();
            next[k + 1] = next[k + 1].clone() + c.clone() * b.clone();
            next[k + 2] = next[k + 2].clone() + c.clone();
        }
        poly = next;
    }
    poly
}

/// `prod_{m < n} (beta_n - beta_m)`.
pub fn vandermonde<T: Num + Clone>(beta: &[T]) -> T {
    let mut acc = T::one();
    for n in 0..beta.len() {
        for m in 0..n {
            acc = acc * (beta[n].clone() - beta[m].clone());
        }
    }
    acc
}

/// Holomorphic Jacobian determinant of the roots-to-coefficients map:
/// `V(beta) * prod (alpha_n^2 - 1) / alpha_n^2`.
pub fn jacobian_complex_det(alpha: &RootVec) -> Complex64 {
    let beta = alpha.beta();
    alpha
        .entries()
        .iter()
        .fold(vandermonde(&beta), |acc, &a| acc * (a * a - 1.0) / (a * a))
}

/// Real `2N x 2N` Jacobian determinant, `|jacobian_complex_det|^2`.
pub fn jacobian_real_factor(alpha: &RootVec) -> f64 {
    jacobian_complex_det(alpha).norm_sqr()
}

/// Central-difference real Jacobian of `map` at `point`, in interleaved
/// `(re, im)` coordinates.
pub fn numeric_jacobian<F>(map: F, point: &RootVec, h: f64) -> Result<DMatrix<f64>, NumericError>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let min_mod = point
        .entries()
        .iter()
        .map(|a| a.norm())
        .fold(f64::INFINITY, f64::min);
    if h > 1e-2 * min_mod {
        return Err(NumericError::StepTooLarge { h });
    }
    let n = point.len();
    let mut jac = DMatrix::zeros(2 * n, 2 * n);
    for col in 0..2 * n {
        let dir = if col % 2 == 0 {
            Complex64::new(h, 0.0)
        } else {
            Complex64::new(0.0, h)
        };
        let mut plus = point.entries().to_vec();
        let mut minus = plus.clone();
        plus[col / 2] += dir;
        minus[col / 2] -= dir;
        let fp = map(&plus);
        let fm = map(&minus);
        if fp.len() != n || fm.len() != n {
            return Err(NumericError::DimensionMismatch {
                expected: n,
                got: fp.len(),
            });
        }
        for row in 0..n {
            let d = (fp[row] - fm[row]) / (2.0 * h);
            jac[(2 * row, col)] = d.re;
            jac[(2 * row + 1, col)] = d.im;
        }
    }
    Ok(jac)
}

/// The map from roots to monic reciprocal coefficients on raw slices.
pub fn roots_to_coeffs(alpha: &[Complex64]) -> Vec<Complex64> {
    let roots = RootVec::new(alpha.to_vec()).expect("nonzero roots");
    from_roots(&roots).coeffs().to_vec()
}

/// Default step `1e-5 * min |alpha_n|`.
pub fn default_step(alpha: &RootVec) -> f64 {
    1e-5 * alpha
        .entries()
        .iter()
        .map(|a| a.norm())
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn elem_sym_examples() {
        assert_eq!(elem_sym(&[2, 3], 1).unwrap(), 5);
        assert_eq!(elem_sym(&[2, 3], 2).unwrap(), 6);
        assert_eq!(elem_sym(&[7, -4, 9], 0).unwrap(), 1);
        assert!(elem_sym(&[2, 3], 3).is_err());
    }

    #[test]
    fn epsilon_examples() {
        let beta = [c(1.7), c(-0.4)];
        let e2 = elem_sym(&beta, 2).unwrap();
        assert!((epsilon_via_e(2, &beta).unwrap() - (e2 + 2.0)).norm() < 1e-14);
        let e1 = elem_sym(&beta, 1).unwrap();
        assert!((epsilon_via_e(1, &beta).unwrap() - e1).norm() < 1e-14);
        assert_eq!(epsilon_via_e(0, &beta).unwrap(), c(1.0));
        assert!(epsilon_via_e(3, &beta).is_err());
    }

    #[test]
    fn epsilon_matches_expansion_exactly() {
        let beta: Vec<BigRational> = [(1, 3), (-5, 2), (7, 1), (2, 9)]
            .iter()
            .map(|&(n, d)| BigRational::new(n.into(), d.into()))
            .collect();
        let expanded = palindrome_coefficients(&beta);
        for (n, expected) in expanded.iter().enumerate().take(beta.len() + 1) {
            assert_eq!(epsilon_via_e(n, &beta).unwrap(), *expected);
        }
    }

    #[test]
    fn vandermonde_examples() {
        assert_eq!(vandermonde(&[1, 3]), 2);
        assert_eq!(vandermonde(&[1, 2, 4]), 6);
        assert_eq!(vandermonde(&[1, 2, 1]), 0);
        assert_eq!(vandermonde(&[2, 1, 4]), -6);
    }

    #[test]
    fn jacobian_examples() {
        let a = RootVec::from_real(&[2.0]).unwrap();
        assert!((jacobian_complex_det(&a) - c(0.75)).norm() < 1e-15);
        assert!((jacobian_real_factor(&a) - 9.0 / 16.0).abs() < 1e-15);
        let a = RootVec::from_real(&[2.0, 3.0]).unwrap();
        assert!((jacobian_complex_det(&a) - c(5.0 / 9.0)).norm() < 1e-14);
        assert!((jacobian_real_factor(&a) - 25.0 / 81.0).abs() < 1e-14);
        let a = RootVec::from_real(&[1.0, 3.0]).unwrap();
        assert_eq!(jacobian_real_factor(&a), 0.0);
        let a = RootVec::from_real(&[-1.0, 3.0]).unwrap();
        assert_eq!(jacobian_real_factor(&a), 0.0);
    }

    #[test]
    fn numeric_jacobian_examples() {
        let p = RootVec::new(vec![Complex64::new(0.3, 1.1), c(-2.0)]).unwrap();
        let id = numeric_jacobian(|a: &[Complex64]| a.to_vec(), &p, 1e-5).unwrap();
        assert!((id - DMatrix::<f64>::identity(4, 4)).abs().max() < 1e-9);

        let a = RootVec::from_real(&[2.0]).unwrap();
        let j = numeric_jacobian(roots_to_coeffs, &a, 1e-5).unwrap();
        assert!((j.determinant() / (9.0 / 16.0) - 1.0).abs() < 1e-6);

        let a = RootVec::from_real(&[2.0, 3.0]).unwrap();
        let j = numeric_jacobian(roots_to_coeffs, &a, 1e-5).unwrap();
        assert!((j.determinant() / (25.0 / 81.0) - 1.0).abs() < 1e-6);

        assert!(matches!(
            numeric_jacobian(roots_to_coeffs, &a, 0.1),
            Err(NumericError::StepTooLarge { .. })
        ));
    }
}
