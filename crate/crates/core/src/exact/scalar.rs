use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ExactError;

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n!` as an arbitrary-precision integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient with the conventions `C(n, k) = 0` for `k < 0`,
/// `k > n` or `n < 0`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// An exact value `coeff * pi^pi_power`.
///
/// Zero is canonical: a zero coefficient always carries grade 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiScaled {
    coeff: Rational,
    pi_power: i32,
}

impl PiScaled {
    pub fn new(coeff: Rational, pi_power: i32) -> Self {
        if coeff.is_zero() {
            Self::zero()
        } else {
            Self { coeff, pi_power }
        }
    }

    pub fn rational(coeff: Rational) -> Self {
        Self::new(coeff, 0)
    }

    pub fn zero() -> Self {
        Self {
            coeff: Rational::zero(),
            pi_power: 0,
        }
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn pi_power(&self) -> i32 {
        self.pi_power
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Sum of two values of the same grade. Zero is compatible with every
    /// grade.
    pub fn checked_add(&self, other: &Self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_power != other.pi_power {
            return Err(ExactError::GradeMismatch(self.pi_power, other.pi_power));
        }
        Ok(Self::new(&self.coeff + &other.coeff, self.pi_power))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.checked_add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.coeff * &other.coeff, self.pi_power + other.pi_power)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ExactError> {
        if other.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::new(
            &self.coeff / &other.coeff,
            self.pi_power - other.pi_power,
        ))
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.coeff, self.pi_power)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(&self.coeff * q, self.pi_power)
    }

    /// Numeric value with `pi` supplied by the caller.
    pub fn to_f64_with(&self, pi_value: f64) -> f64 {
        self.coeff.to_f64().unwrap_or(f64::NAN) * pi_value.powi(self.pi_power)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_f64_with(std::f64::consts::PI)
    }
}

impl From<Rational> for PiScaled {
    fn from(q: Rational) -> Self {
        Self::rational(q)
    }
}

/// Serialized as `p/q * pi^k`; the denominator and grade are always
/// written out.
impl fmt::Display for PiScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{} * pi^{}",
            self.coeff.numer(),
            self.coeff.denom(),
            self.pi_power
        )
    }
}

/// Accepts `p`, `p/q`, and either of those followed by `* pi^k` (or a bare
/// `* pi`).
impl FromStr for PiScaled {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ExactError::Parse(s.to_string());
        let (rational_part, pi_part) = match s.split_once('*') {
            Some((r, p)) => (r.trim(), Some(p.trim())),
            None => (s.trim(), None),
        };
        let pi_power = match pi_part {
            None => 0,
            Some("pi") => 1,
            Some(p) => p
                .strip_prefix("pi^")
                .ok_or_else(bad)?
                .trim()
                .parse::<i32>()
                .map_err(|_| bad())?,
        };
        let coeff = parse_rational(rational_part).ok_or_else(bad)?;
        Ok(Self::new(coeff, pi_power))
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// Writes a rational as `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn abs_f64(q: &Rational) -> f64 {
    q.abs().to_f64().unwrap_or(f64::INFINITY)
}
