//! Exact and numeric machinery for the distribution of Mahler measures of
//! reciprocal polynomials.
//!
//! - [`exact`]: rationals, pi-graded scalars, rational functions, partial
//!   fractions, Laurent polynomials and their Mellin transforms.
//! - [`polynomial`]: reciprocal Laurent polynomials in coefficient space.
//! - [`measure`]: Mahler measures by Jensen's formula and by quadrature.
//! - [`symfun`]: symmetric functions and the Jacobian of the roots-to-
//!   coefficients map.
//! - [`spectral`]: the matrix of rational functions whose determinant is
//!   `H_N(s)`, the closed form of `h_N`, and the volume formula.
//! - [`montecarlo`]: seeded estimates of `h_N(xi)` and the star-body volume.

pub mod error;
pub mod exact;
pub mod measure;
pub mod montecarlo;
pub mod polynomial;
pub mod spectral;
pub mod symfun;

pub use error::{Error, ExactError, NumericError, Result};
pub use exact::{LaurentPi, PiScaled, PolyQ, RatFunPi, RatFunQ, Rational};
pub use montecarlo::McEstimate;
pub use polynomial::{CoeffVec, MonicRecip, RecipLaurent, RootVec};
