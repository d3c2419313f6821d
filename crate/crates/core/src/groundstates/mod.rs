//! Zero-energy ground states, their norms and density grids.

mod density;
pub(crate) mod norms;

pub use density::{density_grid, Density, DensityGrid, GridSpec};
pub use norms::{
    norm_bosonic_i, norm_direct_2d, norm_fermionic_i, norm_ii, norm_separable, NormMethod,
    NormValue,
};

use serde::{Deserialize, Serialize};

use crate::geometry::{
    distances, s_matrix, to_elliptic, CartesianPoint, EllipticPoint,
};
use crate::model::{
    EllipticJet4, ModelError, ModelParams, Spinor4, SpinorField, SpinorJet, Superpotential, WType,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroundStateKind {
    BosonicI,
    FermionicI,
    BosonicIiSector0,
    BosonicIiSector2,
    FermionicIiComp1,
    FermionicIiComp2,
}

impl GroundStateKind {
    pub const ALL: [GroundStateKind; 6] = [
        GroundStateKind::BosonicI,
        GroundStateKind::FermionicI,
        GroundStateKind::BosonicIiSector0,
        GroundStateKind::BosonicIiSector2,
        GroundStateKind::FermionicIiComp1,
        GroundStateKind::FermionicIiComp2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GroundStateKind::BosonicI => "bosonic_i",
            GroundStateKind::FermionicI => "fermionic_i",
            GroundStateKind::BosonicIiSector0 => "bosonic_ii_sector0",
            GroundStateKind::BosonicIiSector2 => "bosonic_ii_sector2",
            GroundStateKind::FermionicIiComp1 => "fermionic_ii_comp1",
            GroundStateKind::FermionicIiComp2 => "fermionic_ii_comp2",
        }
    }

    pub fn is_type_i(self) -> bool {
        matches!(self, GroundStateKind::BosonicI | GroundStateKind::FermionicI)
    }

    pub fn is_fermionic(self) -> bool {
        matches!(
            self,
            GroundStateKind::FermionicI
                | GroundStateKind::FermionicIiComp1
                | GroundStateKind::FermionicIiComp2
        )
    }

    /// Signs multiplying `F/ħ̄` and `G/ħ̄` in the exponent.
    pub(crate) fn exponent_signs(self) -> (f64, f64) {
        match self {
            GroundStateKind::BosonicI | GroundStateKind::BosonicIiSector0 => (1.0, 1.0),
            GroundStateKind::BosonicIiSector2 => (-1.0, -1.0),
            GroundStateKind::FermionicI | GroundStateKind::FermionicIiComp2 => (1.0, -1.0),
            GroundStateKind::FermionicIiComp1 => (-1.0, 1.0),
        }
    }

    /// Spinor component carrying the state (elliptic frame for fermionic kinds).
    pub fn component(self) -> usize {
        match self {
            GroundStateKind::BosonicI | GroundStateKind::BosonicIiSector0 => 0,
            GroundStateKind::FermionicIiComp1 => 1,
            GroundStateKind::FermionicI | GroundStateKind::FermionicIiComp2 => 2,
            GroundStateKind::BosonicIiSector2 => 3,
        }
    }
}

impl std::fmt::Display for GroundStateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for GroundStateKind {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, ModelError> {
        GroundStateKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ModelError::InvalidParams(format!("unknown ground-state kind '{s}'")))
    }
}

/// An unnormalized zero mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundState {
    kind: GroundStateKind,
    w: Superpotential,
}

impl GroundState {
    pub fn new(kind: GroundStateKind, params: &ModelParams) -> Result<Self, ModelError> {
        let w = Superpotential::new(params)?;
        if kind.is_type_i() {
            if !params.is_simple_type_i() {
                return Err(ModelError::InvalidParams(format!(
                    "{kind} needs wtype I with kappa = c1 = c2 = 0"
                )));
            }
        } else if params.wtype == WType::I {
            return Err(ModelError::InvalidParams(format!("{kind} needs wtype IIa or IIb")));
        }
        Ok(GroundState { kind, w })
    }

    pub fn kind(&self) -> GroundStateKind {
        self.kind
    }

    pub fn params(&self) -> &ModelParams {
        self.w.params()
    }

    pub fn superpotential(&self) -> &Superpotential {
        &self.w
    }

    fn log_amplitude(&self, e: EllipticPoint) -> Result<f64, ModelError> {
        let (su, sv) = self.kind.exponent_signs();
        let hbar = self.params().hbar;
        let mut l = (su * self.w.u_value(e.u)? + sv * self.w.v_value(e.v)?) / hbar;
        if self.kind.is_fermionic() {
            let d = e.focal_product();
            if d <= 0.0 {
                return Err(ModelError::Singularity { x1: e.u * e.v, x2: 0.0 });
            }
            l -= 0.5 * d.ln();
        }
        Ok(l)
    }

    /// Scalar amplitude in the elliptic frame.
    pub fn amplitude(&self, e: EllipticPoint) -> Result<f64, ModelError> {
        Ok(self.log_amplitude(e)?.exp())
    }

    /// `ln |Ψ|²`, usable where the density itself under- or overflows.
    pub fn log_density(&self, p: CartesianPoint) -> Result<f64, ModelError> {
        self.check_point(p)?;
        Ok(2.0 * self.log_amplitude(to_elliptic(p))?)
    }

    fn check_point(&self, p: CartesianPoint) -> Result<(), ModelError> {
        let (r1, r2) = distances(p);
        if self.kind.is_fermionic() && (r1 == 0.0 || r2 == 0.0) {
            return Err(ModelError::Singularity { x1: p.x1, x2: p.x2 });
        }
        Ok(())
    }

    /// Elliptic-frame spinor.
    pub fn elliptic_value(&self, e: EllipticPoint) -> Result<Spinor4, ModelError> {
        Ok(Spinor4::component(self.kind.component(), self.amplitude(e)?))
    }

    /// Elliptic-frame spinor with analytic `(u, v)` partials.
    pub fn elliptic_jet(&self, e: EllipticPoint) -> Result<EllipticJet4, ModelError> {
        let (su, sv) = self.kind.exponent_signs();
        let hbar = self.params().hbar;
        let f = self.amplitude(e)?;
        let (f1, _) = self.w.u_derivatives(e.u);
        let (g1, _) = self.w.v_derivatives(e.v);
        let mut lu = su * f1 / hbar;
        let mut lv = sv * g1 / hbar;
        if self.kind.is_fermionic() {
            let d = e.focal_product();
            lu -= e.u / d;
            lv += e.v / d;
        }
        let k = self.kind.component();
        Ok(EllipticJet4 {
            value: Spinor4::component(k, f),
            du: Spinor4::component(k, lu * f),
            dv: Spinor4::component(k, lv * f),
        })
    }

    /// Cartesian-frame spinor. Fermionic kinds are mapped with `S` at the
    /// mirror point in the upper half plane and reflected back, so that
    /// `(ψ1, ψ2) -> (ψ1, -ψ2)` below the axis.
    pub fn cartesian_value(&self, p: CartesianPoint) -> Result<Spinor4, ModelError> {
        self.check_point(p)?;
        let e = to_elliptic(p);
        if !self.kind.is_fermionic() {
            return self.elliptic_value(e);
        }
        let upper = EllipticPoint { branch: crate::geometry::Branch::Plus, ..e };
        let s = s_matrix(upper)?;
        let mut out = self.elliptic_value(e)?.transform(&s);
        if p.x2 < 0.0 {
            out[2] = -out[2];
        }
        Ok(out)
    }

    /// The fermionic Cartesian spinor built with `S` on the point's own branch,
    /// without the reflection of [`cartesian_value`](Self::cartesian_value).
    pub fn cartesian_value_unreflected(&self, p: CartesianPoint) -> Result<Spinor4, ModelError> {
        self.check_point(p)?;
        let e = to_elliptic(p);
        Ok(self.elliptic_value(e)?.transform(&s_matrix(e)?))
    }

    pub fn density(&self, p: CartesianPoint) -> Result<f64, ModelError> {
        Ok(self.log_density(p)?.exp())
    }

    /// Norm by the method of record: Bessel closed forms for Type I, separable quadrature for Type II.
    pub fn norm(&self) -> Result<NormValue, ModelError> {
        match self.kind {
            GroundStateKind::BosonicI => norm_bosonic_i(self.params()),
            GroundStateKind::FermionicI => norm_fermionic_i(self.params()),
            kind => norm_ii(kind, self.params()),
        }
    }
}

impl SpinorField for GroundState {
    fn value(&self, p: CartesianPoint) -> Result<Spinor4, ModelError> {
        self.cartesian_value(p)
    }

    fn jet(&self, p: CartesianPoint, h: f64) -> Result<SpinorJet, ModelError> {
        if self.kind.is_fermionic() {
            let value = self.value(p)?;
            let d1 = (self.value(p.offset(h, 0.0))? - self.value(p.offset(-h, 0.0))?) * (0.5 / h);
            let d2 = (self.value(p.offset(0.0, h))? - self.value(p.offset(0.0, -h))?) * (0.5 / h);
            return Ok(SpinorJet { value, d1, d2 });
        }
        // Bosonic modes are exp(±W/ħ̄).
        let value = self.value(p)?;
        let (s, _) = self.kind.exponent_signs();
        let grad = self.w.jet(p)?.grad;
        let hbar = self.params().hbar;
        Ok(SpinorJet {
            value,
            d1: value * (s * grad[0] / hbar),
            d2: value * (s * grad[1] / hbar),
        })
    }
}

impl Density for GroundState {
    fn density(&self, p: CartesianPoint) -> Result<f64, ModelError> {
        GroundState::density(self, p)
    }
}

/// The non-normalizable sector-2 partner `exp(-W/ħ̄)` of the Type I bosonic mode.
pub fn bosonic_candidate_sector2_i(p: CartesianPoint, params: &ModelParams) -> Result<Spinor4, ModelError> {
    let w = Superpotential::new(params)?;
    if !params.is_simple_type_i() {
        return Err(ModelError::InvalidParams("needs wtype I with kappa = c1 = c2 = 0".into()));
    }
    Ok(Spinor4::component(3, (-w.value(p)? / params.hbar).exp()))
}
