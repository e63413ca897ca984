//! Work, power and energy-exchange bounds for quantum batteries.
//!
//! Every routine is generic over the real scalar; the aliases below fix it
//! to `f64`.

// `!(x > 0)` style guards also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod closed;
pub mod coherence;
pub mod error;
pub mod ineq;
pub mod linalg;
pub mod models;
pub mod open;
pub mod pauli;
pub mod sample;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type CMatrix = scalar::CMat<f64>;
pub type Battery = closed::ClosedBattery<f64>;
pub type Bounds = closed::BoundReport<f64>;
pub type Check = ineq::InequalityCheck<f64>;
pub type Basis = coherence::CoherenceBasis<f64>;
pub type Channel = open::KrausChannel<f64>;
pub type Lindblad = open::LindbladModel<f64>;
pub type Trajectory = open::Trajectory<f64>;
