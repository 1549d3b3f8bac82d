use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, ToPrimitive, Zero};

use super::poly::PolyQ;
use super::scalar::{abs_f64, int, PiScaled, Rational};
use crate::error::ExactError;

/// Reduced rational function `num / den` over the rationals with a monic
/// denominator. Zero is `0 / 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunQ {
    num: PolyQ,
    den: PolyQ,
}

impl RatFunQ {
    pub fn new(num: PolyQ, den: PolyQ) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lc = den.leading().unwrap().recip();
        Ok(Self {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    pub fn zero() -> Self {
        Self {
            num: PolyQ::zero(),
            den: PolyQ::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(PolyQ::one())
    }

    pub fn from_poly(p: PolyQ) -> Self {
        Self {
            num: p,
            den: PolyQ::one(),
        }
    }

    pub fn num(&self) -> &PolyQ {
        &self.num
    }

    pub fn den(&self) -> &PolyQ {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::new(&self.num + &other.num, self.den.clone()).unwrap();
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Self::new(num, &self.den * &other.den).unwrap()
    }

    pub fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        // Cross-cancel before multiplying to keep the gcd small.
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let n1 = self.num.div_rem(&g1).0;
        let d2 = other.den.div_rem(&g1).0;
        let n2 = other.num.div_rem(&g2).0;
        let d1 = self.den.div_rem(&g2).0;
        Self::new(&n1 * &n2, &d1 * &d2).unwrap()
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExactError> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn eval(&self, s0: &Rational) -> Result<Rational, ExactError> {
        let d = self.den.eval(s0);
        if d.is_zero() {
            return Err(ExactError::PoleEvaluation);
        }
        Ok(self.num.eval(s0) / d)
    }

    /// `f(-s)`.
    pub fn reflect(&self) -> Self {
        Self::new(self.num.reflect(), self.den.reflect()).unwrap()
    }
}

/// A rational function in `s` carried with a uniform pi-grade:
/// `pi^pi_power * fun(s)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunPi {
    pi_power: i32,
    fun: RatFunQ,
}

impl RatFunPi {
    pub fn new(pi_power: i32, fun: RatFunQ) -> Self {
        if fun.is_zero() {
            Self::zero()
        } else {
            Self { pi_power, fun }
        }
    }

    /// Builds `pi^pi_power * num / den`, reducing on the way in.
    pub fn from_parts(pi_power: i32, num: PolyQ, den: PolyQ) -> Result<Self, ExactError> {
        Ok(Self::new(pi_power, RatFunQ::new(num, den)?))
    }

    pub fn zero() -> Self {
        Self {
            pi_power: 0,
            fun: RatFunQ::zero(),
        }
    }

    pub fn constant(c: &PiScaled) -> Self {
        Self::new(
            c.pi_power(),
            RatFunQ::from_poly(PolyQ::constant(c.coeff().clone())),
        )
    }

    /// `c / (s - pole)`.
    pub fn simple_pole(c: &PiScaled, pole: i64) -> Self {
        Self::new(
            c.pi_power(),
            RatFunQ::new(
                PolyQ::constant(c.coeff().clone()),
                PolyQ::linear(int(pole)),
            )
            .unwrap(),
        )
    }

    pub fn pi_power(&self) -> i32 {
        self.pi_power
    }

    pub fn fun(&self) -> &RatFunQ {
        &self.fun
    }

    pub fn num(&self) -> &PolyQ {
        &self.fun.num
    }

    pub fn den(&self) -> &PolyQ {
        &self.fun.den
    }

    pub fn is_zero(&self) -> bool {
        self.fun.is_zero()
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_power != other.pi_power {
            return Err(ExactError::GradeMismatch(self.pi_power, other.pi_power));
        }
        Ok(Self::new(self.pi_power, self.fun.add(&other.fun)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.pi_power, self.fun.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.pi_power + other.pi_power, self.fun.mul(&other.fun))
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExactError> {
        Ok(Self::new(
            self.pi_power - other.pi_power,
            self.fun.div(&other.fun)?,
        ))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.pi_power, self.fun.scale(c))
    }

    /// Exact value at a rational point.
    pub fn eval_exact(&self, s0: &Rational) -> Result<PiScaled, ExactError> {
        Ok(PiScaled::new(self.fun.eval(s0)?, self.pi_power))
    }

    /// Numeric value at a rational point with a caller-supplied `pi`. The
    /// rational part is computed exactly before conversion.
    pub fn eval(&self, s0: &Rational, pi_value: f64) -> Result<f64, ExactError> {
        Ok(self.eval_exact(s0)?.to_f64_with(pi_value))
    }

    /// `f(-s)`.
    pub fn reflect(&self) -> Self {
        Self::new(self.pi_power, self.fun.reflect())
    }

    /// Residues at the poles of a proper rational function whose
    /// denominator splits into distinct linear factors `s - n` with integer
    /// `n`.
    pub fn partial_fractions(&self) -> Result<BTreeMap<i64, PiScaled>, ExactError> {
        partial_fractions(self)
    }

    /// Inverse of [`partial_fractions`]: `sum_n residue_n / (s - n)`.
    pub fn from_partial_fractions(
        residues: &BTreeMap<i64, PiScaled>,
    ) -> Result<Self, ExactError> {
        residues.iter().try_fold(Self::zero(), |acc, (&n, r)| {
            acc.add(&Self::simple_pole(r, n))
        })
    }
}

/// Integer roots of a nonzero polynomial with multiplicity, plus the
/// cofactor left after dividing them out.
fn integer_roots(p: &PolyQ) -> (Vec<i64>, PolyQ) {
    let mut rest = p.monic();
    let mut roots = Vec::new();
    let k = rest.zero_order();
    if k > 0 {
        roots.extend(std::iter::repeat_n(0, k));
        rest = PolyQ::new(rest.coeffs()[k..].to_vec());
    }
    let Some(deg) = rest.degree() else {
        return (roots, rest);
    };
    if deg == 0 {
        return (roots, rest);
    }
    // Fujiwara bound on root moduli of a monic polynomial.
    let c = rest.coeffs();
    let mut bound: f64 = 0.0;
    for j in 1..=deg {
        let mut a = abs_f64(&c[deg - j]);
        if j == deg {
            a /= 2.0;
        }
        bound = bound.max(a.powf(1.0 / j as f64));
    }
    let limit = (2.0 * bound).ceil() as i64 + 1;
    for r in 1..=limit {
        for cand in [r, -r] {
            let x = int(cand);
            while rest.degree().unwrap_or(0) > 0 && rest.eval(&x).is_zero() {
                rest = rest.div_rem(&PolyQ::linear(x.clone())).0;
                roots.push(cand);
            }
        }
    }
    (roots, rest)
}

pub fn partial_fractions(f: &RatFunPi) -> Result<BTreeMap<i64, PiScaled>, ExactError> {
    let mut out = BTreeMap::new();
    if f.is_zero() {
        return Ok(out);
    }
    let num_deg = f.num().degree().unwrap();
    let den_deg = f.den().degree().unwrap();
    if num_deg >= den_deg {
        return Err(ExactError::ImproperFraction {
            num: num_deg,
            den: den_deg,
        });
    }
    let (roots, rest) = integer_roots(f.den());
    let mut sorted = roots.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(ExactError::RepeatedPole);
    }
    if rest.degree().unwrap_or(0) > 0 {
        return Err(ExactError::NonIntegerPole);
    }
    // Simple pole: residue = num(n) / den'(n).
    let dden = f.den().derivative();
    for n in sorted {
        let x = int(n);
        let residue = f.num().eval(&x) / dden.eval(&x);
        out.insert(n, PiScaled::new(residue, f.pi_power()));
    }
    Ok(out)
}

/// Numeric value of `(s - pole) * f(s)` near a pole, for residue checks.
pub fn residue_limit(f: &RatFunPi, pole: i64, offset: f64, pi_value: f64) -> f64 {
    let s = pole as f64 + offset;
    let v = f.num().eval_f64(s) / f.den().eval_f64(s);
    offset * v * pi_value.powi(f.pi_power())
}

impl fmt::Display for RatFunPi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "pi^{} * ({})", self.pi_power, self.num())?;
        if !(self.den().degree() == Some(0) && self.den().leading().is_some_and(One::is_one)) {
            write!(f, " / ({})", self.den())?;
        }
        Ok(())
    }
}

/// Float value of a rational, for reporting.
pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
