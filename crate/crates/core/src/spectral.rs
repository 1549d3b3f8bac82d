//! The exact Mellin-side machinery: the integer coefficients `c_n(J)`, the
//! matrix of rational functions `I(J, K; s)`, its determinant and product
//! form `H_N(s)`, the residues `rho(n)`, the closed-form distribution
//! function `h_N`, and the star-body volume.
//!
//! Sign convention for `c_n(J)`: the bracket is
//! `C(J-1, (J+n)/2 - 1) - C(J-1, (J+n)/2)`, which is what direct angular
//! integration of the `(1, 3)` entry produces. The opposite bracket order
//! flips every off-diagonal `c_n(J)` and leaves the determinant unchanged,
//! so only entry-level checks can tell them apart.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, ExactError, NumericError};
use crate::exact::{binomial, factorial, int, LaurentPi, PiScaled, PolyQ, RatFunPi, Rational};

/// `c_n(J)` for `n, J >= 1`; zero unless `n <= J` and `n = J (mod 2)`.
pub fn coeff_c(n: i64, big_j: i64) -> i64 {
    if n < 1 || big_j < 1 || n > big_j || (big_j - n) % 2 != 0 {
        return 0;
    }
    let half = (big_j + n) / 2;
    let c = binomial(big_j - 1, half - 1) - binomial(big_j - 1, half);
    c.to_i64().expect("c_n(J) fits in i64")
}

/// The `N x N` integer matrix with rows indexed by the pole `n` and columns
/// by `K`: entry `(n, K)` is `c_n(K)`. Upper triangular with unit diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMatrix {
    rows: Vec<Vec<i64>>,
}

impl CMatrix {
    pub fn new(size: usize) -> Self {
        let rows = (1..=size as i64)
            .map(|n| (1..=size as i64).map(|k| coeff_c(n, k)).collect())
            .collect();
        Self { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// `c_n(K)` with 1-based indices.
    pub fn get(&self, n: usize, k: usize) -> i64 {
        self.rows[n - 1][k - 1]
    }

    /// Row `n` (1-based), the vector `omega_n`.
    pub fn omega(&self, n: usize) -> &[i64] {
        &self.rows[n - 1]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn to_rational(&self) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }
}

/// `2 pi s / (s^2 - n^2)`.
pub fn pole_pair(n: i64) -> RatFunPi {
    RatFunPi::from_parts(1, PolyQ::from_ints(&[0, 2]), PolyQ::from_ints(&[-n * n, 0, 1]))
        .expect("nonzero denominator")
}

/// `I(J, K; s) = pi sum_n c_n(J) c_n(K) 2s / (s^2 - n^2)`.
pub fn i_entry(big_j: i64, big_k: i64) -> RatFunPi {
    (1..=big_j.min(big_k)).fold(RatFunPi::zero(), |acc, n| {
        let w = coeff_c(n, big_j) * coeff_c(n, big_k);
        if w == 0 {
            acc
        } else {
            acc.add(&pole_pair(n).scale(&int(w)))
                .expect("entries share grade 1")
        }
    })
}

/// The radial profile `h(J, K; r) = 2 pi sum_n c_n(J) c_n(K) (r^2n + r^-2n)`
/// as a Laurent polynomial in `r`.
pub fn hjk_closed(big_j: i64, big_k: i64) -> LaurentPi {
    let terms = (1..=big_j.min(big_k)).flat_map(|n| {
        let w = PiScaled::new(int(2 * coeff_c(n, big_j) * coeff_c(n, big_k)), 1);
        [(2 * n, w.clone()), (-2 * n, w)]
    });
    LaurentPi::from_terms(terms).expect("even exponents, single grade")
}

/// Trapezoid rule for the angular integral defining `h(J, K; r)` on
/// `nodes` equally spaced angles. `nodes` must be even; the points are taken
/// in antipodal pairs `alpha, -alpha`.
pub fn hjk_quadrature(big_j: u32, big_k: u32, r: f64, nodes: usize) -> Result<f64, NumericError> {
    if nodes == 0 || !nodes.is_multiple_of(2) {
        return Err(NumericError::InvalidArgument(format!(
            "node count must be positive and even, got {nodes}"
        )));
    }
    if big_j == 0 || big_k == 0 {
        return Err(NumericError::InvalidArgument("J, K must be >= 1".into()));
    }
    if r < 1.0 {
        return Ok(0.0);
    }
    let integrand = |alpha: Complex64| {
        let inv = alpha.inv();
        let conj = alpha.conj();
        let conj_inv = conj.inv();
        (alpha - inv)
            * (conj - conj_inv)
            * (alpha + inv).powu(big_j - 1)
            * (conj + conj_inv).powu(big_k - 1)
    };
    let half = nodes / 2;
    let mut sum = Complex64::zero();
    for j in 0..half {
        let theta = 2.0 * PI * j as f64 / nodes as f64;
        let alpha = Complex64::from_polar(r, theta);
        sum += integrand(alpha) + integrand(-alpha);
    }
    Ok((sum * (2.0 * PI / nodes as f64)).re)
}

/// A square matrix of exact rational functions.
pub type RatFunMatrix = Vec<Vec<RatFunPi>>;

/// The symmetric `N x N` matrix of entries `I(J, K; s)`.
pub fn i_matrix(size: usize) -> RatFunMatrix {
    let size = size as i64;
    (1..=size)
        .map(|j| (1..=size).map(|k| i_entry(j, k)).collect())
        .collect()
}

fn check_square<T>(m: &[Vec<T>]) -> Result<usize, ExactError> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(ExactError::NotSquare);
    }
    Ok(n)
}

/// Exact determinant over the field of rational functions, by Gaussian
/// elimination pivoting on the lowest-degree nonzero entry in each column.
pub fn det_ratfun(m: &[Vec<RatFunPi>]) -> Result<RatFunPi, ExactError> {
    let n = check_square(m)?;
    let mut a: RatFunMatrix = m.to_vec();
    let mut det = RatFunPi::constant(&PiScaled::rational(Rational::one()));
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .min_by_key(|&r| {
                let f = &a[r][col];
                f.num().degree().unwrap_or(0) + f.den().degree().unwrap_or(0)
            });
        let Some(p) = pivot else {
            return Ok(RatFunPi::zero());
        };
        if p != col {
            a.swap(p, col);
            det = det.neg();
        }
        let pivot_row = a[col].clone();
        let pv = pivot_row[col].clone();
        det = det.mul(&pv);
        for row in a.iter_mut().skip(col + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].div(&pv)?;
            for k in col + 1..n {
                if !pivot_row[k].is_zero() {
                    row[k] = row[k].sub(&factor.mul(&pivot_row[k]))?;
                }
            }
            row[col] = RatFunPi::zero();
        }
    }
    Ok(det)
}

/// Heap's algorithm: every permutation of `0..n` with its sign.
fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = vec![(perm.clone(), 1)];
    let mut c = vec![0usize; n];
    let mut sign = 1;
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            out.push((perm.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

pub const DOUBLE_SUM_MAX_DIM: usize = 6;

/// `(1/N!) sum_tau sum_sigma sgn(tau) sgn(sigma) prod_n M[tau(n)][sigma(n)]`.
pub fn det_double_sum(m: &[Vec<Rational>]) -> Result<Rational, ExactError> {
    let n = check_square(m)?;
    if n > DOUBLE_SUM_MAX_DIM {
        return Err(ExactError::DimensionTooLarge(n));
    }
    let perms = permutations(n);
    let mut total = Rational::zero();
    for (tau, st) in &perms {
        for (sigma, ss) in &perms {
            let mut prod = Rational::one();
            for k in 0..n {
                prod *= &m[tau[k]][sigma[k]];
                if prod.is_zero() {
                    break;
                }
            }
            if st * ss > 0 {
                total += prod;
            } else {
                total -= prod;
            }
        }
    }
    Ok(total / Rational::from_integer(factorial(n as u64)))
}

/// Determinant of a rational matrix by exact Gaussian elimination.
pub fn det_rational(m: &[Vec<Rational>]) -> Result<Rational, ExactError> {
    let n = check_square(m)?;
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pv = a[col][col].clone();
        det *= &pv;
        let pivot_row = a[col].clone();
        for row in a.iter_mut().skip(col + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pv;
            for k in col..n {
                row[k] -= &factor * &pivot_row[k];
            }
        }
    }
    Ok(det)
}

/// `H_N(s) = prod_{n=1}^N 2 pi s / (s^2 - n^2)`.
pub fn h_product(size: usize) -> RatFunPi {
    (1..=size as i64).fold(
        RatFunPi::constant(&PiScaled::rational(Rational::one())),
        |acc, n| acc.mul(&pole_pair(n)),
    )
}

/// `H_N(s) / 2s`, the Mellin transform of `h_N`.
pub fn h_hat(size: usize) -> RatFunPi {
    let two_s = RatFunPi::from_parts(0, PolyQ::from_ints(&[0, 2]), PolyQ::one()).unwrap();
    h_product(size).div(&two_s).expect("2s is nonzero")
}

/// `rho(n) = pi^N 2^(N-1) n^N (-1)^(N-n) / ((N+n)! (N-n)!)` for `1 <= n <= N`,
/// the residue of `H_N(s)/2s` at `s = n`.
pub fn rho(size: usize, n: usize) -> Result<PiScaled, NumericError> {
    if n < 1 || n > size {
        return Err(NumericError::IndexOutOfRange {
            index: n as i64,
            limit: size as i64,
        });
    }
    let big_n = size as u32;
    let num = BigInt::from(2).pow(big_n - 1) * BigInt::from(n).pow(big_n);
    let den = factorial((size + n) as u64) * factorial((size - n) as u64);
    let mut q = Rational::new(num, den);
    if (size - n) % 2 == 1 {
        q = -q;
    }
    Ok(PiScaled::new(q, size as i32))
}

/// `h_N(x) = sum_n 2 rho(n) (x^2n + (-1)^N x^-2n)` on `[1, inf)`.
pub fn h_closed(size: usize) -> LaurentPi {
    let sign = if size.is_multiple_of(2) { 1 } else { -1 };
    let terms = (1..=size).flat_map(|n| {
        let c = rho(size, n).unwrap().scale(&int(2));
        let e = 2 * n as i64;
        [(e, c.clone()), (-e, c.scale(&int(sign)))]
    });
    LaurentPi::from_terms(terms).expect("even exponents, single grade")
}

/// `h_N(xi)`: the measure of the monic coefficient vectors with
/// monic reciprocal measure at most `xi`. Zero for `xi < 1`.
///
/// The Laurent polynomial is summed exactly at the binary value of `xi`;
/// near `xi = 1` its terms cancel to many digits.
pub fn h_eval(size: usize, xi: f64, pi_value: f64) -> f64 {
    if xi.is_nan() || xi < 1.0 || !xi.is_finite() {
        return 0.0;
    }
    let x = Rational::from_float(xi).expect("finite");
    h_closed(size).eval_exact(&x).to_f64_with(pi_value)
}

/// `2^N pi^(N+1) (N+1)^N / (2N+1)!`.
pub fn volume_exact(size: usize) -> PiScaled {
    let big_n = size as u32;
    let num = BigInt::from(2).pow(big_n) * BigInt::from(size + 1).pow(big_n);
    let den = factorial(2 * size as u64 + 1);
    PiScaled::new(Rational::new(num, den), size as i32 + 1)
}

/// `2 pi (H_N(s) / 2s)` at `s = N + 1`.
pub fn volume_via_mellin(size: usize) -> PiScaled {
    let v = h_hat(size)
        .eval_exact(&int(size as i64 + 1))
        .expect("N + 1 is not a pole");
    v.mul(&PiScaled::new(int(2), 1))
}

/// Outcome of checking the rank-one decomposition of the `I` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOneReport {
    pub size: usize,
    pub c_matrix: CMatrix,
    /// Nonzero vector orthogonal to `omega_1, ..., omega_{N-1}`.
    pub psi: Vec<Rational>,
    pub kernel_ok: bool,
    /// `I psi = (2 pi s / (s^2 - N^2)) B_N psi`.
    pub eigen_identity_ok: bool,
    /// `I = C^T diag(2 pi s / (s^2 - n^2)) C`.
    pub factorization_ok: bool,
    pub det_c: Rational,
}

impl RankOneReport {
    pub fn passed(&self) -> bool {
        self.kernel_ok && self.eigen_identity_ok && self.factorization_ok && self.det_c.is_one()
    }
}

/// Solves for `psi` with `omega_n . psi = 0` for `n < N` and verifies the
/// vector identity and the triangular factorization exactly.
pub fn omega_psi_check(size: usize) -> Result<RankOneReport, Error> {
    if size < 2 {
        return Err(NumericError::InvalidArgument("rank-one check needs N >= 2".into()).into());
    }
    let c = CMatrix::new(size);
    let cq = c.to_rational();

    // Rows 1..N-1 of C are unit upper triangular, so fixing psi_N = 1 and
    // back-substituting gives the kernel vector.
    let mut psi = vec![Rational::zero(); size];
    psi[size - 1] = Rational::one();
    for n in (0..size - 1).rev() {
        let mut acc = Rational::zero();
        for k in n + 1..size {
            acc += &cq[n][k] * &psi[k];
        }
        psi[n] = -acc / &cq[n][n];
    }
    let dot = |row: &[Rational]| -> Rational { row.iter().zip(&psi).map(|(a, b)| a * b).sum() };
    let kernel_ok = psi.iter().any(|x| !x.is_zero()) && cq[..size - 1].iter().all(|r| dot(r).is_zero());
    if !kernel_ok {
        return Err(Error::KernelNotFound(size));
    }

    let i = i_matrix(size);
    let omega_n = &cq[size - 1];
    let omega_dot_psi = dot(omega_n);
    let top = pole_pair(size as i64);
    let mut eigen_identity_ok = true;
    for (j, row) in i.iter().enumerate() {
        let lhs = row
            .iter()
            .zip(&psi)
            .try_fold(RatFunPi::zero(), |acc, (f, p)| acc.add(&f.scale(p)))?;
        // (B_N psi)_J = c_N(J) (omega_N . psi)
        let rhs = top.scale(&(&omega_n[j] * &omega_dot_psi));
        eigen_identity_ok &= lhs == rhs;
    }

    let diag: Vec<RatFunPi> = (1..=size as i64).map(pole_pair).collect();
    let mut factorization_ok = true;
    for j in 0..size {
        for k in 0..size {
            let mut acc = RatFunPi::zero();
            for n in 0..size {
                let w = &cq[n][j] * &cq[n][k];
                acc = acc.add(&diag[n].scale(&w))?;
            }
            factorization_ok &= acc == i[j][k];
        }
    }

    let det_c = det_rational(&cq)?;
    Ok(RankOneReport {
        size,
        c_matrix: c,
        psi,
        kernel_ok,
        eigen_identity_ok,
        factorization_ok,
        det_c,
    })
}

/// Largest absolute entry of a rational vector, for reporting.
pub fn max_abs(v: &[Rational]) -> Rational {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
}
