//! Superpotentials, sector potentials, supercharges and Hamiltonians.

mod hamiltonian;
mod params;
mod potential;
mod spinor;
mod supercharge;
mod superpotential;
mod units;

pub use hamiltonian::{apply_hamiltonian, apply_susy_hamiltonian, laplacian};
pub use params::{ModelParams, WType};
pub use potential::{
    matrix_from_jet, matrix_potential, potential, potential_from_jet, MatrixPotential, Sector,
};
pub use spinor::{FnField, Spinor4, SpinorField, SpinorJet, DEFAULT_FD_STEP};
pub use supercharge::{
    apply_elliptic_supercharge, apply_supercharge, apply_supercharge_to_jet, EllipticJet4,
    Supercharge, SuperchargedField,
};
pub use superpotential::{
    superpotential_i, superpotential_ii, ScalarJet, SeparatedPart, Superpotential,
};
pub use units::nondimensionalize;

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::specfun::SpecfunError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("evaluation at ({x1}, {x2}) is too close to a center")]
    Singularity { x1: f64, x2: f64 },
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Numerical(#[from] SpecfunError),
}
