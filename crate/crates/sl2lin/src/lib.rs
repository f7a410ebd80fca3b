//! Numerical toolkit for the linear Poisson structure on sl2(C).
//!
//! Matrix invariants and the closed-form gradient flow, the skeleton of normal
//! matrices, pointwise exterior calculus on R^6, homotopy operators by quadrature,
//! flat-function calculus on C, Nash smoothing operators, and the Nash-Moser schedule.

pub mod error;
pub mod field;
pub mod flatcalc;
pub mod flow;
pub mod foliation;
pub mod homotopy;
pub mod matrix;
pub mod nashmoser;
pub mod sampling;
pub mod skeleton;
pub mod smoothing;
pub mod suites;
pub mod tensor;

pub use error::{Error, Result};
