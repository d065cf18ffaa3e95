//! Coalescence of Dubrovin canonical coordinates on complex Grassmannians
//! `G(k, n)` and the arithmetic of the non-coalescing counts.
//!
//! The crate is organised bottom-up:
//!
//! - [`primes`]: linear sieve with smallest prime factors and prefix sums.
//! - [`cyclotomic`]: exact sums of roots of unity modulo the cyclotomic polynomial.
//! - [`coalescence`]: the closed-form criterion, checked against an exhaustive
//!   oracle, and the non-coalescing counts `l~(n)`.
//! - [`qh_satake`]: quantum multiplication operators in the wedge basis and
//!   their spectra.
//! - [`analytic_series`]: zeta, prime zeta, truncated Euler products and the
//!   Dirichlet series of `l~(n)`.
//! - [`distribution`]: rough numbers, the Buchstab function, `H(x, y)`,
//!   `li(x)` and the de Bruijn / envelope diagnostics.
//!
//! Floating point code is generic over [`Real`]; the `*64` aliases below are
//! the instantiations used by the CLI and the acceptance suite.

// `!(a > b)` guards are intentional: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic_series;
pub mod coalescence;
pub mod cyclotomic;
pub mod distribution;
mod error;
pub mod primes;
pub mod qh_satake;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub use num_complex::Complex;

pub type SeriesValue64 = analytic_series::SeriesValue<f64>;
pub type BuchstabTable64 = distribution::BuchstabTable<f64>;
pub type SpectrumResult64 = qh_satake::SpectrumResult<f64>;
pub type WedgeOperator64 = qh_satake::WedgeOperator<f64>;
pub type Complex64 = Complex<f64>;

pub type SeriesValue32 = analytic_series::SeriesValue<f32>;
pub type BuchstabTable32 = distribution::BuchstabTable<f32>;
