use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use super::ratfun::RatFunPi;
use super::scalar::{rat, PiScaled, Rational};
use crate::error::ExactError;

/// Exact Laurent polynomial in one variable with even exponents and
/// pi-graded coefficients sharing a single grade.
///
/// Read as a function on `[1, inf)` that vanishes on `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPi {
    terms: BTreeMap<i64, PiScaled>,
}

impl LaurentPi {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds from `(exponent, coefficient)` pairs, merging repeated
    /// exponents and dropping zeros.
    pub fn from_terms<I>(terms: I) -> Result<Self, ExactError>
    where
        I: IntoIterator<Item = (i64, PiScaled)>,
    {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, &c)?;
        }
        Ok(out)
    }

    fn grade(&self) -> Option<i32> {
        self.terms.values().next().map(PiScaled::pi_power)
    }

    fn add_term(&mut self, exponent: i64, c: &PiScaled) -> Result<(), ExactError> {
        if exponent % 2 != 0 {
            return Err(ExactError::OddExponent(exponent));
        }
        if c.is_zero() {
            return Ok(());
        }
        if let Some(g) = self.grade() {
            if g != c.pi_power() {
                return Err(ExactError::GradeMismatch(g, c.pi_power()));
            }
        }
        let merged = match self.terms.get(&exponent) {
            Some(prev) => prev.checked_add(c)?,
            None => c.clone(),
        };
        if merged.is_zero() {
            self.terms.remove(&exponent);
        } else {
            self.terms.insert(exponent, merged);
        }
        Ok(())
    }

    pub fn terms(&self) -> &BTreeMap<i64, PiScaled> {
        &self.terms
    }

    pub fn coeff(&self, exponent: i64) -> PiScaled {
        self.terms.get(&exponent).cloned().unwrap_or_else(PiScaled::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactError> {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, c)?;
        }
        Ok(out)
    }

    pub fn scale(&self, q: &PiScaled) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&e, c)| (e, c.mul(q)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Self { terms }
    }

    /// Exact value at 1 (the sum of coefficients).
    pub fn at_one(&self) -> PiScaled {
        self.terms
            .values()
            .try_fold(PiScaled::zero(), |acc, c| acc.checked_add(c))
            .expect("single-grade invariant")
    }

    /// Numeric value at `x >= 1`; zero below 1.
    pub fn eval(&self, x: f64, pi_value: f64) -> f64 {
        if x < 1.0 {
            return 0.0;
        }
        self.terms
            .iter()
            .map(|(&e, c)| c.to_f64_with(pi_value) * x.powi(e as i32))
            .sum()
    }

    /// Exact value at a rational point `x >= 1`; zero below 1.
    pub fn eval_exact(&self, x: &Rational) -> PiScaled {
        if *x < Rational::one() {
            return PiScaled::zero();
        }
        self.terms
            .iter()
            .map(|(&e, c)| c.scale(&pow_rational(x, e)))
            .try_fold(PiScaled::zero(), |acc, t| acc.checked_add(&t))
            .expect("single-grade invariant")
    }

    /// Mellin transform `int_1^inf x^(-2s) g(x) dx / x` as an exact rational
    /// function: the term `c x^(2n)` maps to `(c/2) / (s - n)`.
    pub fn mellin(&self) -> Result<RatFunPi, ExactError> {
        laurent_mellin(self)
    }
}

fn pow_rational(x: &Rational, e: i64) -> Rational {
    let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

pub fn laurent_mellin(g: &LaurentPi) -> Result<RatFunPi, ExactError> {
    let half: Rational = rat(1, 2);
    g.terms.iter().try_fold(RatFunPi::zero(), |acc, (&e, c)| {
        if e % 2 != 0 {
            return Err(ExactError::OddExponent(e));
        }
        acc.add(&RatFunPi::simple_pole(&c.scale(&half), e / 2))
    })
}

impl fmt::Display for LaurentPi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| format!("({c}) * x^{e}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::PolyQ;
    use crate::exact::scalar::int;

    #[test]
    fn symmetric_pair_transforms_to_s_over_quadratic() {
        for l in 1..4 {
            let g = LaurentPi::from_terms([
                (4 * l, PiScaled::rational(int(1))),
                (-4 * l, PiScaled::rational(int(1))),
            ])
            .unwrap();
            let expected =
                RatFunPi::from_parts(0, PolyQ::from_ints(&[0, 1]), PolyQ::from_ints(&[-4 * l * l, 0, 1]))
                    .unwrap();
            assert_eq!(g.mellin().unwrap(), expected);
        }
    }

    #[test]
    fn antisymmetric_pair() {
        let g = LaurentPi::from_terms([
            (2, PiScaled::new(int(1), 1)),
            (-2, PiScaled::new(int(-1), 1)),
        ])
        .unwrap();
        let expected =
            RatFunPi::from_parts(1, PolyQ::one(), PolyQ::from_ints(&[-1, 0, 1])).unwrap();
        assert_eq!(g.mellin().unwrap(), expected);
        assert!(g.at_one().is_zero());
    }

    #[test]
    fn constant_term() {
        let g = LaurentPi::from_terms([(0, PiScaled::rational(int(2)))]).unwrap();
        let expected = RatFunPi::from_parts(0, PolyQ::one(), PolyQ::from_ints(&[0, 1])).unwrap();
        assert_eq!(g.mellin().unwrap(), expected);
    }

    #[test]
    fn odd_exponent_rejected() {
        assert_eq!(
            LaurentPi::from_terms([(3, PiScaled::rational(int(1)))]),
            Err(ExactError::OddExponent(3))
        );
    }

    #[test]
    fn eval_vanishes_below_one() {
        let g = LaurentPi::from_terms([(2, PiScaled::rational(int(1)))]).unwrap();
        assert_eq!(g.eval(0.5, 3.0), 0.0);
        assert_eq!(g.eval(2.0, 3.0), 4.0);
    }
}
