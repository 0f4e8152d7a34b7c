//! Numerical toolkit for selfdecomposable distributions built from series of
//! Laplace (double exponential) variables.
//!
//! The central object is a symmetric Lévy density `k(x)`, carried through its
//! tail function `u(x) = x·k(x)` on `x > 0`. Tails are represented either
//! exactly, as finite sums `Σ c·x^m·e^(−b·x)` ([`exp_poly`]), or through
//! closed-form hyperbolic evaluators with exact derivatives of any order
//! ([`chain`]). On top of that the crate provides
//!
//! * the Lévy–Khintchine machinery: integrability checks, exponent and
//!   characteristic-function evaluation, residual (ratio) densities
//!   ([`levy`]);
//! * the iterated `k ↦ (−x·k(x))′` operator, sign scans, and Urbanik-class
//!   verdicts `L_k` ([`urbanik`]);
//! * a catalog of the hyperbolic-sine, hyperbolic-cosine, hyperbolic-tangent,
//!   logistic, generalized-logistic, Laplace, and Talacko–Zolotarev laws with
//!   their rate sequences, closed-form characteristic functions, and
//!   background driving characteristic functions ([`catalog`], [`bdlp`]);
//! * Monte Carlo samplers with empirical characteristic-function verification
//!   ([`sampler`]).
//!
//! The `urbanik` binary exposes classification, identity verification, and
//! sampling as scriptable commands; see the repository README.

pub mod bdlp;
pub mod catalog;
pub mod chain;
pub mod error;
pub mod exp_poly;
pub mod levy;
pub mod quad;
pub mod sampler;
pub mod special;
pub mod urbanik;

pub use error::{Error, Result};
