//! Exact coefficients of cyclotomic polynomials and tooling around them.
//!
//! * [`numthy`]: factorization, Möbius, totient, divisors.
//! * [`coeff`]: two independent exact engines for `Phi_n`.
//! * [`newton`]: power sums over primitive roots, Newton-identity prefixes,
//!   the piecewise leading-coefficient formula, and the `Phi_{2n}` range check.
//! * [`census`]: sets of nontrivial coefficient points and first appearances.
//! * [`symmetry`]: reflection, scaling, and Hausdorff diagnostics.
//! * [`store`], [`plot`]: CSV/manifest persistence and SVG scatter plots.

pub mod census;
pub mod coeff;
pub mod error;
pub mod exec;
pub mod newton;
pub mod numthy;
pub mod plot;
pub mod store;
pub mod symmetry;

pub use error::{Error, Result};
