//! Special functions and numerical kernels.
//!
//! Everything here is a pure function of its arguments. Elliptic integrals use
//! the parameter convention `m = k^2`.

mod bessel;
mod elliptic;
mod mathieu;
pub mod quadrature;

pub use bessel::{
    bessel_i, bessel_i_scaled, bessel_k, bessel_k_scaled, i1_over_x, log_bessel_i, log_bessel_k,
    BesselOrder,
};
pub use elliptic::{carlson_rd, carlson_rf, elliptic_e, elliptic_f};
pub use mathieu::{mathieu, mathieu_pair, MathieuValue, Parity};
pub use quadrature::{
    integrate, integrate_2d, integrate_log, QuadratureOptions, QuadratureResult, Sign,
    SingularEnds,
};

use thiserror::Error;

/// Errors raised by the special-function kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecfunError {
    #[error("{function}: argument {value} outside domain ({reason})")]
    Domain {
        function: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error(
        "quadrature did not converge: error estimate {error:e} exceeds tolerance {tolerance:e} \
         after {evaluations} evaluations"
    )]
    NoConvergence {
        error: f64,
        tolerance: f64,
        evaluations: usize,
    },
    #[error("integrand returned a non-finite value at x = {x}")]
    NonFinite { x: f64 },
    #[error("integral diverges: {0}")]
    Divergent(String),
    #[error("Mathieu integration failed at z = {z} (a = {a}, q = {q}): {reason}")]
    Mathieu {
        a: f64,
        q: f64,
        z: f64,
        reason: String,
    },
}
