//! Finite-difference Hamiltonians.

use crate::geometry::{near_center, CartesianPoint, CENTER_EXCLUSION_RADIUS};

use super::potential::{matrix_from_jet, potential_from_jet, Sector};
use super::spinor::{Spinor4, SpinorField};
use super::superpotential::Superpotential;
use super::ModelError;

fn stencil(p: CartesianPoint, h: f64) -> [CartesianPoint; 5] {
    [
        p,
        p.offset(h, 0.0),
        p.offset(-h, 0.0),
        p.offset(0.0, h),
        p.offset(0.0, -h),
    ]
}

/// Five-point Laplacian; rejects stencils that enter a center-exclusion disk.
pub fn laplacian(field: &dyn SpinorField, p: CartesianPoint, h: f64) -> Result<Spinor4, ModelError> {
    let pts = stencil(p, h);
    if pts.iter().any(|q| near_center(*q, CENTER_EXCLUSION_RADIUS)) {
        return Err(ModelError::Singularity { x1: p.x1, x2: p.x2 });
    }
    let mut vals = [Spinor4::ZERO; 5];
    for (v, q) in vals.iter_mut().zip(pts.iter()) {
        *v = field.value(*q)?;
    }
    Ok((vals[1] + vals[2] + vals[3] + vals[4] - vals[0] * 4.0) * (1.0 / (h * h)))
}

/// The block of `H_S` acting on one Fermi-number sector; other components are zero.
pub fn apply_hamiltonian(
    sector: Sector,
    field: &dyn SpinorField,
    p: CartesianPoint,
    w: &Superpotential,
    h: f64,
) -> Result<Spinor4, ModelError> {
    let lap = laplacian(field, p, h)?;
    let psi = field.value(p)?;
    let hbar = w.params().hbar;
    let jet = w.jet(p)?;
    let kin = -0.5 * hbar * hbar;
    let mut out = Spinor4::ZERO;
    match sector {
        Sector::Zero => out[0] = lap[0] * kin + psi[0] * potential_from_jet(sector, &jet, hbar)?,
        Sector::Two => out[3] = lap[3] * kin + psi[3] * potential_from_jet(sector, &jet, hbar)?,
        Sector::One => {
            let m = matrix_from_jet(&jet, hbar);
            out[1] = lap[1] * kin + psi[1] * m.v11 + psi[2] * m.v12;
            out[2] = lap[2] * kin + psi[1] * m.v12 + psi[2] * m.v22;
        }
    }
    Ok(out)
}

/// All three sectors at once.
pub fn apply_susy_hamiltonian(
    field: &dyn SpinorField,
    p: CartesianPoint,
    w: &Superpotential,
    h: f64,
) -> Result<Spinor4, ModelError> {
    let mut out = Spinor4::ZERO;
    for s in [Sector::Zero, Sector::One, Sector::Two] {
        out = out + apply_hamiltonian(s, field, p, w, h)?;
    }
    Ok(out)
}
