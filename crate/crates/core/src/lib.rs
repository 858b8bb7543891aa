//! Exact computation of truncated resultants of bivariate polynomials over a
//! prime field: Res_y(P, Q) mod x^k in softly-linear time in dk.
//!
//! The fast path runs a generalized half-gcd over K[x,y]/<x^k> to extract
//! pseudo-inverses, recovers the first nonzero coefficient of the resultant by
//! a degree-reducing recursion, and reconstructs the remaining coefficients
//! from a first-order linear differential equation. An independent cubic-time
//! evaluation/interpolation oracle provides bit-exact ground truth.

pub mod error;
pub mod field;
pub mod instances;
pub mod ntt;
pub mod oracle;
pub mod pseudo;
pub mod halfgcd;
pub mod resultant;
pub mod rk;
pub mod selfcheck;
pub mod upoly;

pub use error::{Error, Result};
pub use field::{FieldElem, PrimeField};
pub use halfgcd::{Engine, HalfGcdResult, PseudoInverse, PseudoInverseOutcome};
pub use pseudo::{EtaResult, Mat2Rk, PairS};
pub use resultant::{BivariateInput, FirstCoeff, MonicReduction, OdeData};
pub use rk::RkPoly;
pub use upoly::{TruncSeries, UPoly};
