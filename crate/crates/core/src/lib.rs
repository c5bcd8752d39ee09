//! Pointwise Riemannian curvature algebra.
//!
//! The crate is `no_std` (it needs `alloc`) and covers:
//!
//! * [`expr`]: symbolic scalar expressions in chart coordinates (parse,
//!   exact differentiation, evaluation).
//! * [`tensor`]: metrics, (0,4) tensors, bilinear forms and the curvature
//!   shaped builders.
//! * [`chart`]: Christoffel symbols, Riemann, Ricci, scalar curvature and
//!   covariant derivatives of a symbolic metric at a point.
//! * [`gencurv`]: quasi-conformal, pseudo-projective, W2 and Weyl tensors and
//!   the inversions that solve a vanishing tensor for the Riemann tensor.
//! * [`wrs`]: weakly (Ricci) symmetric residuals and 1-form recovery.
//! * [`classify`]: Einstein, quasi-Einstein and (hyper / pseudo)
//!   quasi-constant curvature fits.
//! * [`harness`]: seeded randomized checks of the flatness theorem chains.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod chart;
pub mod classify;
mod error;
pub mod expr;
pub mod gencurv;
pub mod harness;
pub mod linalg;
pub mod tensor;
pub mod wrs;

pub use chart::{CurvatureBundle, MetricField};
pub use error::{Error, Result};
pub use expr::{ExprError, Expression};
pub use gencurv::QcParams;
pub use tensor::{Bilinear, Grid, LinearMap, Metric, OneForm, Tensor04};
pub use wrs::OneFormSystem;
