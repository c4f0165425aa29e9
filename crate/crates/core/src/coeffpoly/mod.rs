//! Exact coefficient arithmetic, sparse bihomogeneous polynomials in two
//! vector variables `x` and `u`, and fraction-free exact linear algebra.
//!
//! This is the substrate for everything else: no floating point exists
//! anywhere in the crate.

mod alpha;
mod coefficient;
mod matrix;
mod multipoly;

pub use alpha::AlphaPoly;
pub use coefficient::{Coefficient, Rat};
pub use matrix::ExactMatrix;
pub use multipoly::{Expo, MultiPoly, Scalar, Var};
