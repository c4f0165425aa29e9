//! Exact computer algebra for the operator calculus of second-order
//! conformally invariant operators on harmonic-valued polynomials.
//!
//! Everything is computed over the Gaussian rationals (arbitrary precision,
//! no rounding anywhere). The crate is organised around a handful of layers:
//!
//! * [`coeffpoly`] — coefficients, sparse bihomogeneous polynomials in two
//!   vector variables, and exact linear algebra.
//! * [`diffop`] — scalar differential operators with polynomial coefficients:
//!   construction of the named operators, composition, application.
//! * [`clifford`] — the complex Clifford algebra, Witt basis, spinor space,
//!   spinor-valued polynomials and Dirac operators.
//! * [`harmonic`] — exact bases of harmonic / simplicial-harmonic / monogenic
//!   polynomial spaces, Fischer machinery and reproducing kernels.
//! * [`radial`] — calculus on `|x|^alpha`-weighted polynomials, the Kelvin
//!   inversion, and the surface/Gamma constant bookkeeping.
//! * [`opalgebra`] — a normal-ordering engine for the abstract operator
//!   algebra with coefficients polynomial in the symbolic dimension.
//! * [`kernelcheck`] — operators as exact matrices: kernel dimensions,
//!   kernel decompositions, ellipticity of the principal symbol.
//! * [`rscheck`] — the bridge to the Rarita-Schwinger operator on
//!   monogenic-valued functions.
//! * [`suites`] — the verification suites driven by the CLI and the
//!   acceptance tests, with machine-readable reports.

pub mod clifford;
pub mod coeffpoly;
pub mod diffop;
pub mod harmonic;
pub mod kernelcheck;
pub mod opalgebra;
pub mod radial;
pub mod report;
pub mod rscheck;
pub mod suites;

mod error;

pub use error::{Error, Result};
