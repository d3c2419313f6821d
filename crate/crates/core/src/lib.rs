//! Supersymmetric quantum mechanics of a particle in the field of two fixed
//! Coulomb centers: superpotentials, zero modes, norms and the
//! quasi-exactly-solvable spectrum.

pub mod geometry;
pub mod groundstates;
pub mod model;
pub mod specfun;
pub mod spectrum;
pub mod verify;

pub use geometry::{Branch, CartesianPoint, EllipticPoint};
pub use model::{ModelError, ModelParams, Sector, Spinor4, WType};
pub use groundstates::{GroundState, GroundStateKind, NormValue};
pub use spectrum::{BoundState, SectorSign, SpectrumEntry};
