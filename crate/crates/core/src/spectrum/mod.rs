//! Quasi-exactly-solvable levels and, at equal strengths, explicit bound states.
//!
//! The sector sign `+` is the `F = 0` scalar Hamiltonian and `-` the `F = 2` one.

mod bound;
mod razavy;

pub use bound::{
    assemble_bound_state, fermionic_partner, hamiltonian_residual, razavy_residual,
    residual_points, residual_report, u_ode_residual, v_ode_residual, xi_factor, BoundState,
    Normalizability, PartnerField, ResidualReport, XiCoeffs, XiValue, AXIS_STRIP,
};
pub use razavy::{razavy_eigenfunction, RazavyJet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ModelError, ModelParams};
use crate::specfun::{Parity, SpecfunError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("level (n = {n}, m = {m}) is not available; explicit data covers n <= 2, 1 <= m <= n + 1")]
    Unsupported { n: u32, m: u32 },
    #[error("{0}")]
    Domain(String),
    #[error("the chosen xi coefficients make level (n = {n}, m = {m}) vanish identically")]
    Vanishing { n: u32, m: u32 },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Numerical(#[from] SpecfunError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SectorSign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl SectorSign {
    pub fn sign(self) -> f64 {
        match self {
            SectorSign::Plus => 1.0,
            SectorSign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            SectorSign::Plus => "+",
            SectorSign::Minus => "-",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QesBranch {
    /// The hyperbolic `u` equation.
    RazavyU,
    /// The trigonometric `v` equation.
    WhV,
}

/// `E_n = 2(1 ± δ)²/ħ̄² (1 - 1/(n+1)²)`.
pub fn qes_energy(branch: QesBranch, n: u32, params: &ModelParams) -> f64 {
    let c = match branch {
        QesBranch::RazavyU => 1.0 + params.delta,
        QesBranch::WhV => 1.0 - params.delta,
    };
    let k = (n as f64 + 1.0).powi(2);
    2.0 * c * c / (params.hbar * params.hbar) * (1.0 - 1.0 / k)
}

/// Accumulation point `2(1+δ)²/ħ̄²` of the Razavy levels.
pub fn ionization_threshold(params: &ModelParams) -> f64 {
    2.0 * (1.0 + params.delta).powi(2) / (params.hbar * params.hbar)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RazavyParams {
    pub zeta: f64,
    pub m: f64,
    pub lambda: f64,
}

pub fn razavy_params(
    energy: f64,
    symmetry: f64,
    sign: SectorSign,
    params: &ModelParams,
) -> Result<RazavyParams, SpectrumError> {
    let h2 = params.hbar * params.hbar;
    let c2 = (1.0 + params.delta).powi(2);
    let gap = 2.0 * c2 - h2 * energy;
    if !(gap > 0.0) {
        return Err(SpectrumError::Domain(format!(
            "energy {energy} is at or above the ionization threshold {}",
            2.0 * c2 / h2
        )));
    }
    let m_sq = 2.0 * c2 / gap;
    Ok(RazavyParams {
        zeta: sign.sign() * 2.0 / params.hbar * (4.0 * c2 / h2 - 2.0 * energy).sqrt(),
        m: m_sq.sqrt(),
        lambda: m_sq + 4.0 / h2 * (symmetry + 4.0 * c2 / h2),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WhRegime {
    Real,
    /// Between the two thresholds: `N²` is negative and `β` imaginary.
    ComplexN,
    /// `δ = 1`: the equation degenerates to Mathieu's.
    MathieuLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WhParams {
    pub beta: Option<f64>,
    pub n_sq: Option<f64>,
    pub mu: Option<f64>,
    pub regime: WhRegime,
}

pub fn wh_params(
    energy: f64,
    symmetry: f64,
    sign: SectorSign,
    params: &ModelParams,
) -> Result<WhParams, SpectrumError> {
    params.validate()?;
    if params.delta == 1.0 {
        return Ok(WhParams {
            beta: None,
            n_sq: None,
            mu: None,
            regime: WhRegime::MathieuLimit,
        });
    }
    let h2 = params.hbar * params.hbar;
    let c2 = (1.0 - params.delta).powi(2);
    let gap = 2.0 * c2 - h2 * energy;
    if gap == 0.0 {
        return Err(SpectrumError::Domain(format!(
            "energy {energy} sits on the v threshold where N diverges"
        )));
    }
    let n_sq = 2.0 * c2 / gap;
    let mu = n_sq + 4.0 / h2 * (symmetry + 4.0 * c2 / h2);
    let radicand = 4.0 * c2 / h2 - 2.0 * energy;
    if gap > 0.0 {
        Ok(WhParams {
            beta: Some(-sign.sign() * 2.0 / params.hbar * radicand.sqrt()),
            n_sq: Some(n_sq),
            mu: Some(mu),
            regime: WhRegime::Real,
        })
    } else {
        Ok(WhParams {
            beta: None,
            n_sq: Some(n_sq),
            mu: Some(mu),
            regime: WhRegime::ComplexN,
        })
    }
}

fn check_indices(n: u32, m: u32) -> Result<(), SpectrumError> {
    if n > 2 || m == 0 || m > n + 1 {
        return Err(SpectrumError::Unsupported { n, m });
    }
    Ok(())
}

/// Energy of level `n` at `δ = 1`.
pub fn level_energy(n: u32, hbar: f64) -> Result<f64, SpectrumError> {
    let h2 = hbar * hbar;
    match n {
        0 => Ok(0.0),
        1 => Ok(6.0 / h2),
        2 => Ok(64.0 / (9.0 * h2)),
        _ => Err(SpectrumError::Unsupported { n, m: 1 }),
    }
}

/// Eigenvalue `I` of the second invariant on the explicit `δ = 1` states.
pub fn symmetry_eigenvalue(n: u32, m: u32, sign: SectorSign, hbar: f64) -> Result<f64, SpectrumError> {
    check_indices(n, m)?;
    let h2 = hbar * hbar;
    let s = sign.sign();
    let root = (256.0 + 9.0 * h2 * h2).sqrt();
    Ok(match (n, m) {
        (0, 1) => 0.0,
        (1, 1) => -h2 / 4.0 - 12.0 / h2 - 2.0 * s,
        (1, 2) => -h2 / 4.0 - 12.0 / h2 + 2.0 * s,
        (2, 1) => -h2 - 128.0 / (9.0 * h2),
        (2, 2) => -h2 / 2.0 - 128.0 / (9.0 * h2) - root / 6.0,
        (2, 3) => -h2 / 2.0 - 128.0 / (9.0 * h2) + root / 6.0,
        _ => unreachable!(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MathieuParams {
    pub a: f64,
    pub q: f64,
}

/// `a = -(E + I)/ħ̄²`, `q = E/(2ħ̄²)`.
pub fn mathieu_params(n: u32, m: u32, sign: SectorSign, hbar: f64) -> Result<MathieuParams, SpectrumError> {
    let e = level_energy(n, hbar)?;
    let i = symmetry_eigenvalue(n, m, sign, hbar)?;
    let h2 = hbar * hbar;
    Ok(MathieuParams {
        a: -(e + i) / h2,
        q: e / (2.0 * h2),
    })
}

/// One explicit level at `δ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub n: u32,
    pub m: u32,
    pub sector_sign: SectorSign,
    pub parity: Parity,
    pub energy: f64,
    pub symmetry: f64,
    pub razavy: RazavyParams,
    pub mathieu: MathieuParams,
}

impl SpectrumEntry {
    pub fn new(n: u32, m: u32, sign: SectorSign, parity: Parity, hbar: f64) -> Result<Self, SpectrumError> {
        let params = ModelParams::type_i(hbar, 1.0)?;
        let energy = level_energy(n, hbar)?;
        let symmetry = symmetry_eigenvalue(n, m, sign, hbar)?;
        Ok(SpectrumEntry {
            n,
            m,
            sector_sign: sign,
            parity,
            energy,
            symmetry,
            razavy: razavy_params(energy, symmetry, sign, &params)?,
            mathieu: mathieu_params(n, m, sign, hbar)?,
        })
    }
}

/// All explicit `δ = 1` entries: `n <= 2`, every `m`, both sectors and parities.
pub fn spectrum_entries(hbar: f64) -> Result<Vec<SpectrumEntry>, SpectrumError> {
    let mut out = Vec::new();
    for n in 0..=2 {
        for m in 1..=n + 1 {
            for sign in [SectorSign::Plus, SectorSign::Minus] {
                for parity in [Parity::Even, Parity::Odd] {
                    out.push(SpectrumEntry::new(n, m, sign, parity, hbar)?);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn equal(hbar: f64) -> ModelParams {
        ModelParams::type_i(hbar, 1.0).unwrap()
    }

    #[test]
    fn energies() {
        let p = equal(1.0);
        assert_eq!(qes_energy(QesBranch::RazavyU, 0, &p), 0.0);
        assert_eq!(qes_energy(QesBranch::WhV, 0, &p), 0.0);
        assert_relative_eq!(qes_energy(QesBranch::RazavyU, 1, &p), 6.0, max_relative = 1e-15);
        assert_relative_eq!(qes_energy(QesBranch::RazavyU, 2, &p), 64.0 / 9.0, max_relative = 1e-15);
        for n in 0..=2 {
            assert_relative_eq!(
                qes_energy(QesBranch::RazavyU, n, &equal(1.7)),
                level_energy(n, 1.7).unwrap(),
                max_relative = 1e-15
            );
        }
    }

    #[test]
    fn razavy_maps() {
        let p = equal(1.0);
        assert_relative_eq!(razavy_params(0.0, 0.0, SectorSign::Plus, &p).unwrap().m, 1.0);
        assert_relative_eq!(razavy_params(6.0, 0.0, SectorSign::Plus, &p).unwrap().m, 2.0, max_relative = 1e-15);
        assert_relative_eq!(razavy_params(0.0, 0.0, SectorSign::Plus, &p).unwrap().lambda, 65.0);
        assert!(razavy_params(8.0, 0.0, SectorSign::Plus, &p).is_err());
        let zm = razavy_params(6.0, 0.0, SectorSign::Minus, &p).unwrap();
        assert!(zm.zeta < 0.0 && zm.m > 0.0);
    }

    #[test]
    fn wh_maps() {
        let p = ModelParams::type_i(1.0, 0.5).unwrap();
        let w = wh_params(0.0, 0.0, SectorSign::Plus, &p).unwrap();
        assert_eq!(w.regime, WhRegime::Real);
        assert_relative_eq!(w.n_sq.unwrap(), 1.0);
        assert_relative_eq!(w.mu.unwrap(), 5.0);
        let above = wh_params(1.0, 0.0, SectorSign::Plus, &p).unwrap();
        assert_eq!(above.regime, WhRegime::ComplexN);
        assert!(above.beta.is_none());
        let lim = wh_params(1.0, 0.0, SectorSign::Plus, &equal(1.0)).unwrap();
        assert_eq!(lim.regime, WhRegime::MathieuLimit);
    }

    #[test]
    fn symmetry_values() {
        assert_eq!(symmetry_eigenvalue(0, 1, SectorSign::Minus, 2.0).unwrap(), 0.0);
        assert_relative_eq!(
            symmetry_eigenvalue(1, 1, SectorSign::Plus, 1.0).unwrap(),
            -0.25 - 12.0 - 2.0
        );
        assert_relative_eq!(
            symmetry_eigenvalue(2, 3, SectorSign::Plus, 1.0).unwrap(),
            -0.5 - 128.0 / 9.0 + 265f64.sqrt() / 6.0,
            max_relative = 1e-15
        );
        assert!(matches!(
            symmetry_eigenvalue(3, 1, SectorSign::Plus, 1.0),
            Err(SpectrumError::Unsupported { .. })
        ));
        assert!(symmetry_eigenvalue(1, 3, SectorSign::Plus, 1.0).is_err());
    }

    #[test]
    fn symmetry_values_are_distinct_within_a_level() {
        for &h in &[1.0, 2.0, 4.0] {
            for sign in [SectorSign::Plus, SectorSign::Minus] {
                for n in 1..=2 {
                    let vals: Vec<f64> =
                        (1..=n + 1).map(|m| symmetry_eigenvalue(n, m, sign, h).unwrap()).collect();
                    for i in 0..vals.len() {
                        for j in i + 1..vals.len() {
                            assert!((vals[i] - vals[j]).abs() > 1e-9, "h={h} n={n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn inversion_through_lambda() {
        for &h in &[1.0f64, 2.0] {
            let p = equal(h);
            for n in 0..=2u32 {
                for m in 1..=n + 1 {
                    let e = level_energy(n, h).unwrap();
                    let i = symmetry_eigenvalue(n, m, SectorSign::Plus, h).unwrap();
                    let r = razavy_params(e, i, SectorSign::Plus, &p).unwrap();
                    assert_relative_eq!(r.m, (n + 1) as f64, max_relative = 1e-12);
                    let back = h * h / 4.0 * (r.lambda - ((n + 1) as f64).powi(2)) - 16.0 / (h * h);
                    assert_relative_eq!(back, i, max_relative = 1e-12, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn mathieu_lists() {
        for &h in &[1.0f64, 2.0] {
            let h2 = h * h;
            let h4 = h2 * h2;
            let root = (256.0 + 9.0 * h4).sqrt();
            for sign in [SectorSign::Plus, SectorSign::Minus] {
                let s = sign.sign();
                let listed = [
                    ((0, 1), 0.0, 0.0),
                    ((1, 1), 6.0 / h4 + s * 2.0 / h2 + 0.25, 3.0 / h4),
                    ((1, 2), 6.0 / h4 - s * 2.0 / h2 + 0.25, 3.0 / h4),
                    ((2, 1), 1.0 + 64.0 / (9.0 * h4), 32.0 / (9.0 * h4)),
                    ((2, 2), 0.5 + 64.0 / (9.0 * h4) + root / (6.0 * h2), 32.0 / (9.0 * h4)),
                    ((2, 3), 0.5 + 64.0 / (9.0 * h4) - root / (6.0 * h2), 32.0 / (9.0 * h4)),
                ];
                for ((n, m), a, q) in listed {
                    let mp = mathieu_params(n, m, sign, h).unwrap();
                    assert_relative_eq!(mp.a, a, max_relative = 1e-13, epsilon = 1e-14);
                    assert_relative_eq!(mp.q, q, max_relative = 1e-13, epsilon = 1e-14);
                }
            }
        }
        let mp = mathieu_params(1, 1, SectorSign::Plus, 1.0).unwrap();
        assert_relative_eq!(mp.a, 8.25, max_relative = 1e-15);
    }

    #[test]
    fn threshold_is_approached_from_below() {
        let p = ModelParams::type_i(1.3, 0.6).unwrap();
        let limit = ionization_threshold(&p);
        let mut prev = -1.0;
        for n in 0..=50 {
            let e = qes_energy(QesBranch::RazavyU, n, &p);
            assert!(e > prev && e < limit);
            prev = e;
        }
    }

    #[test]
    fn entries_cover_all_combinations() {
        let e = spectrum_entries(1.0).unwrap();
        assert_eq!(e.len(), 6 * 4);
    }
}
