//! Numerics for a within-host HIV-1 model with a genetically engineered
//! recombinant virus and an intracellular (eclipse-phase) delay.
//!
//! The state is `(x, y, z, v, w)`: uninfected cells, single-infected cells,
//! double-infected cells, pathogen virions and recombinant virions. The
//! crate provides
//!
//! - [`model`]: parameters, the delayed vector field, reproduction numbers,
//!   closed-form equilibria and the boundedness functional;
//! - [`dde`]: a method-of-steps Bogacki–Shampine integrator with cubic
//!   Hermite dense output, plus long-run regime classification;
//! - [`spectral`]: characteristic quasi-polynomials at the three equilibria,
//!   modulus polynomials, Routh–Hurwitz / Hurwitz-determinant tests, a
//!   Newton root census and an argument-principle root counter;
//! - [`hopf`]: location and certification of the Hopf point in the delay;
//! - [`lyapunov`]: evaluation of the global-stability functionals along
//!   numerical trajectories.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![cfg_attr(docsrs, feature(doc_auto_cfg))]
// `!(x > 0.0)` is used deliberately so that NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
mod math;
pub mod poly;
pub mod quadrature;

pub mod dde;
pub mod hopf;
pub mod lyapunov;
pub mod model;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use dde::{classify_longrun, integrate, HistorySpec, LongRunKind, LongRunVerdict, Trajectory};
pub use model::{
    equilibria, reproduction_numbers, rhs, threshold_delay, Equilibrium, EquilibriumKind,
    ModelParams, StateVector, ThresholdSet,
};
