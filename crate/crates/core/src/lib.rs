//! Exact and floating-point machinery for the six-vertex model with domain
//! wall boundary conditions.
//!
//! Everything here is `no_std` (with `alloc`). The partition function is
//! computed two independent ways ([`partition`]), the Yang-Baxter algebra
//! identities behind its functional equation are checked as operator
//! equations ([`vertex`], [`monodromy`], [`functional`]), and the functional
//! equation is solved for the coefficients of the partition-function
//! polynomial ([`solver`]), normalized by its asymptotic leading coefficient
//! ([`asymptotics`]).
//!
//! Spectral parameters are always carried in exponentiated form:
//! `u_i = e^{λ_i}`, `w_k = e^{μ_k}` and `q = e^{γ}`. With that choice every
//! weight is a Laurent polynomial, so one [`Scalar`] contract covers both the
//! exact backend ([`LaurentPoly`]) and the numeric one ([`Complex64`]).

#![no_std]
#![warn(rust_2018_idioms, unused_qualifications)]

extern crate alloc;

pub mod asymptotics;
pub mod error;
pub mod functional;
pub mod monodromy;
pub mod operator;
pub mod partition;
pub mod scalar;
pub mod solver;
pub mod spectral;
pub mod vertex;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use operator::{Matrix, StateVector};
pub use scalar::{LaurentPoly, Monomial, Rational, RationalFunction, Scalar, UniPoly, VarId, VarKind};
pub use spectral::Spectral;
