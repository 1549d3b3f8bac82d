//! Exact arithmetic: rationals, pi-graded scalars, univariate polynomials
//! and rational functions over Q, partial fractions, and the Laurent to
//! Mellin term table.
//!
//! Every quantity handled here is homogeneous in pi, so pi stays symbolic
//! (an integer grade) and a numeric value for it is supplied only when a
//! result is turned into a float.

mod laurent;
mod poly;
mod ratfun;
mod scalar;

pub use laurent::{laurent_mellin, LaurentPi};
pub use poly::PolyQ;
pub use ratfun::{partial_fractions, rational_to_f64, residue_limit, RatFunPi, RatFunQ};
pub use scalar::{binomial, factorial, fmt_rational, int, parse_rational, rat, PiScaled, Rational};

/// Arithmetic operation selector for [`ratfun_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn ratfun_arith(
    a: &RatFunPi,
    b: &RatFunPi,
    op: ArithOp,
) -> Result<RatFunPi, crate::error::ExactError> {
    match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => Ok(a.mul(b)),
        ArithOp::Div => a.div(b),
    }
}

/// Numeric evaluation of `f` at a rational point.
pub fn ratfun_eval(
    f: &RatFunPi,
    s0: &Rational,
    pi_value: f64,
) -> Result<f64, crate::error::ExactError> {
    f.eval(s0, pi_value)
}
