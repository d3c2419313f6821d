//! Sector potentials.

use serde::{Deserialize, Serialize};

use crate::geometry::{distances, CartesianPoint};

use super::superpotential::{ScalarJet, Superpotential};
use super::{ModelError, ModelParams, WType};

/// Below this distance from a center the potentials are treated as singular.
const CENTER_EPS: f64 = 1e-12;

/// Fermi-number sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sector {
    Zero,
    One,
    Two,
}

impl Sector {
    pub fn fermi_number(self) -> usize {
        match self {
            Sector::Zero => 0,
            Sector::One => 1,
            Sector::Two => 2,
        }
    }
}

/// Potential part of the `F = 1` Hamiltonian, symmetric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatrixPotential {
    pub v11: f64,
    pub v12: f64,
    pub v22: f64,
}

/// `½|∇W|² ∓ (ħ̄/2)∇²W` for the scalar sectors; the upper sign is sector 0.
pub fn potential_from_jet(sector: Sector, jet: &ScalarJet, hbar: f64) -> Result<f64, ModelError> {
    let kinetic = 0.5 * jet.grad_sqr();
    let curv = 0.5 * hbar * jet.laplacian();
    match sector {
        Sector::Zero => Ok(kinetic + curv),
        Sector::Two => Ok(kinetic - curv),
        Sector::One => Err(ModelError::Domain(
            "sector 1 has a matrix potential, use matrix_potential".into(),
        )),
    }
}

/// Matrix potential from the jet of `W`.
pub fn matrix_from_jet(jet: &ScalarJet, hbar: f64) -> MatrixPotential {
    let kinetic = 0.5 * jet.grad_sqr();
    let wave = 0.5 * hbar * jet.wave_operator();
    MatrixPotential {
        v11: kinetic - wave,
        v12: -hbar * jet.hess[0][1],
        v22: kinetic + wave,
    }
}

fn check_center(p: CartesianPoint) -> Result<(f64, f64), ModelError> {
    let (r1, r2) = distances(p);
    if r1 < CENTER_EPS || r2 < CENTER_EPS || !r1.is_finite() || !r2.is_finite() {
        return Err(ModelError::Singularity { x1: p.x1, x2: p.x2 });
    }
    Ok((r1, r2))
}

/// Closed-form scalar potential of sector 0 or 2.
pub fn potential(sector: Sector, p: CartesianPoint, params: &ModelParams) -> Result<f64, ModelError> {
    params.validate()?;
    let (r1, r2) = check_center(p)?;
    let (h, d, k) = (params.hbar, params.delta, params.kappa);
    let coulomb = 1.0 / r1 + d / r2;
    let upper = match sector {
        Sector::Zero => 1.0,
        Sector::Two => -1.0,
        Sector::One => {
            return Err(ModelError::Domain(
                "sector 1 has a matrix potential, use matrix_potential".into(),
            ))
        }
    };
    let rr = r1 * r2;
    match params.wtype {
        WType::I => {
            let mut v = 2.0 / (h * h) * (1.0 + d * d + d * (r1 / r2 + r2 / r1 - 4.0 / rr));
            if !params.is_simple_type_i() {
                let s = r1 + r2;
                let su = (s * s - 4.0).max(0.0).sqrt();
                let sv = (4.0 - (r2 - r1).powi(2)).max(0.0).sqrt();
                let lu = params.c1 + k * ((s + su) / 2.0).ln();
                let lv = params.c2 - k * ((r2 - r1) / 2.0).clamp(-1.0, 1.0).asin();
                v += (lu * lu + lv * lv - 2.0 * (1.0 + d) * su * lu + 2.0 * (1.0 - d) * sv * lv)
                    / (2.0 * h * h * rr);
            }
            Ok(v - upper * coulomb)
        }
        WType::IIa | WType::IIb => {
            let u = 0.5 * (r1 + r2);
            let v = (0.5 * (r2 - r1)).clamp(-1.0, 1.0);
            let sa = if params.a == 0 { 1.0 } else { -1.0 };
            let sb = if params.b == 0 { 1.0 } else { -1.0 };
            let u_term = (1.0 + d) * ratio_u(u, d, k);
            let v_term = if d == 1.0 { 0.0 } else { (1.0 - d) * ratio_v(v, d, k) };
            Ok(coulomb + upper * h / (2.0 * rr) * (sa * u_term + sb * v_term))
        }
    }
}

/// `√(u²-1) / √(2(1+δ)u - κ)` with the removable zero at `u = 1` handled.
fn ratio_u(u: f64, d: f64, k: f64) -> f64 {
    let top = 2.0 * (1.0 + d);
    if k == top {
        return ((u + 1.0) / top).sqrt();
    }
    ((u - 1.0) * (u + 1.0)).max(0.0).sqrt() / (top * u - k).sqrt()
}

/// `√(1-v²) / √(2(1-δ)v + κ)` with the removable zero at `v = -1` handled.
fn ratio_v(v: f64, d: f64, k: f64) -> f64 {
    let bottom = 2.0 * (1.0 - d);
    if k == bottom {
        return ((1.0 - v) / bottom).sqrt();
    }
    ((1.0 - v) * (1.0 + v)).max(0.0).sqrt() / (bottom * v + k).sqrt()
}

/// Potential of the `F = 1` doublet.
pub fn matrix_potential(p: CartesianPoint, params: &ModelParams) -> Result<MatrixPotential, ModelError> {
    params.validate()?;
    let (r1, r2) = check_center(p)?;
    if params.is_simple_type_i() {
        let d = params.delta;
        let (x1, x2) = (p.x1, p.x2);
        let (r13, r23) = (r1.powi(3), r2.powi(3));
        let sum = 0.5 * (potential(Sector::Zero, p, params)? + potential(Sector::Two, p, params)?);
        let diff = -2.0
            * (((x1 - 1.0).powi(2) - x2 * x2) / r13 + d * ((x1 + 1.0).powi(2) - x2 * x2) / r23);
        return Ok(MatrixPotential {
            v11: sum + 0.5 * diff,
            v12: -2.0 * (x2 * (x1 - 1.0) / r13 + d * x2 * (x1 + 1.0) / r23),
            v22: sum - 0.5 * diff,
        });
    }
    let w = Superpotential::new(params)?;
    Ok(matrix_from_jet(&w.jet(p)?, params.hbar))
}
