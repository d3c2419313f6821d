//! Assembled `δ = 1` bound states `η(u) ξ(v)`, their fermionic partners and
//! residual checks.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{
    distances, elliptic_jet, near_center, to_elliptic, CartesianPoint, CENTER_EXCLUSION_RADIUS,
};
use crate::groundstates::norms::{ln_sinh_sqr, log_add, log_integral, mu_cutoff};
use crate::groundstates::{Density, NormMethod, NormValue};
use crate::model::{
    apply_hamiltonian, apply_supercharge_to_jet, ModelError, ModelParams, Sector, Spinor4,
    SpinorField, SpinorJet, Supercharge, Superpotential,
};
use crate::specfun::{mathieu_pair, Parity, SpecfunError};

use super::razavy::ln_eta_sqr;
use super::{razavy_eigenfunction, MathieuParams, RazavyJet, SectorSign, SpectrumEntry, SpectrumError};

/// Half-width of the strip around the `x1` axis left out of 2D residuals:
/// `ξ` and some `η` factors have kinks there.
pub const AXIS_STRIP: f64 = 0.05;

/// `(c1, c2)` for even states or `(d1, d2)` for odd ones, multiplying the
/// even and odd Mathieu solutions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XiCoeffs {
    pub first: f64,
    pub second: f64,
}

impl Default for XiCoeffs {
    fn default() -> Self {
        XiCoeffs {
            first: 1.0,
            second: 0.0,
        }
    }
}

/// `ξ` and `dξ/dv`; the derivative is infinite at `v = ±1` unless it cancels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiValue {
    pub value: f64,
    pub dv: f64,
}

fn require_equal_strengths(params: &ModelParams) -> Result<(), SpectrumError> {
    params.validate()?;
    if params.delta != 1.0 || !params.is_simple_type_i() {
        return Err(SpectrumError::Domain(
            "explicit bound states need wtype I with delta = 1 and kappa = c1 = c2 = 0".into(),
        ));
    }
    Ok(())
}

/// Combination at the angles `z` and `zb = π - z`; returns the value and
/// `d/dz` of it, counting `zb`'s dependence on `z`.
fn combine(
    mp: MathieuParams,
    parity: Parity,
    coeffs: XiCoeffs,
    z: f64,
    zb: f64,
) -> Result<(f64, f64), SpecfunError> {
    let [c, s] = mathieu_pair(mp.a, mp.q, z)?;
    let [cb, sb] = mathieu_pair(mp.a, mp.q, zb)?;
    let sgn = match parity {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
    };
    let (k1, k2) = (0.5 * coeffs.first, 0.5 * coeffs.second);
    let value = k1 * (c.value + sgn * cb.value) + k2 * (s.value + sgn * sb.value);
    let dz = k1 * (c.derivative - sgn * cb.derivative) + k2 * (s.derivative - sgn * sb.derivative);
    Ok((value, dz))
}

fn xi_at(mp: MathieuParams, parity: Parity, coeffs: XiCoeffs, v: f64) -> Result<XiValue, SpectrumError> {
    if !(v.abs() <= 1.0) {
        return Err(SpectrumError::Domain(format!("v = {v} is outside [-1, 1]")));
    }
    // Built from |v| so that reflection symmetry holds bit for bit.
    let za = v.abs().acos();
    let zc = PI - za;
    let (z, zb) = if v >= 0.0 { (za, zc) } else { (zc, za) };
    let (value, dz) = combine(mp, parity, coeffs, z, zb)?;
    let root = ((1.0 - v) * (1.0 + v)).sqrt();
    let dv = if dz == 0.0 { 0.0 } else { -dz / root };
    Ok(XiValue { value, dv })
}

/// The `v` factor `ξ^{nm}` of a `δ = 1` bound state.
pub fn xi_factor(
    n: u32,
    m: u32,
    sign: SectorSign,
    parity: Parity,
    v: f64,
    coeffs: XiCoeffs,
    params: &ModelParams,
) -> Result<XiValue, SpectrumError> {
    require_equal_strengths(params)?;
    let mp = super::mathieu_params(n, m, sign, params.hbar)?;
    xi_at(mp, parity, coeffs, v)
}

/// A bound state of the scalar sector selected by the sector sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    entry: SpectrumEntry,
    coeffs: XiCoeffs,
    w: Superpotential,
}

pub fn assemble_bound_state(
    n: u32,
    m: u32,
    sign: SectorSign,
    parity: Parity,
    coeffs: XiCoeffs,
    params: &ModelParams,
) -> Result<BoundState, SpectrumError> {
    require_equal_strengths(params)?;
    let bs = BoundState {
        entry: SpectrumEntry::new(n, m, sign, parity, params.hbar)?,
        coeffs,
        w: Superpotential::new(params)?,
    };
    // At q = 0 the odd combination of the even solution is exactly zero.
    let mut zero = true;
    for v in [-0.55, 0.2, 0.85] {
        zero &= bs.xi(v)?.value == 0.0;
    }
    if zero {
        return Err(SpectrumError::Vanishing { n, m });
    }
    Ok(bs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Normalizability {
    pub normalizable: bool,
    /// `∫|ψ|²` when finite.
    pub norm: Option<NormValue>,
}

impl BoundState {
    pub fn entry(&self) -> &SpectrumEntry {
        &self.entry
    }

    pub fn coeffs(&self) -> XiCoeffs {
        self.coeffs
    }

    pub fn params(&self) -> &ModelParams {
        self.w.params()
    }

    pub fn superpotential(&self) -> &Superpotential {
        &self.w
    }

    pub fn energy(&self) -> f64 {
        self.entry.energy
    }

    pub fn sector(&self) -> Sector {
        match self.entry.sector_sign {
            SectorSign::Plus => Sector::Zero,
            SectorSign::Minus => Sector::Two,
        }
    }

    pub fn component(&self) -> usize {
        match self.entry.sector_sign {
            SectorSign::Plus => 0,
            SectorSign::Minus => 3,
        }
    }

    pub fn eta(&self, u: f64) -> Result<RazavyJet, SpectrumError> {
        let e = &self.entry;
        razavy_eigenfunction(e.n, e.m, e.sector_sign, u, self.params().hbar)
    }

    pub fn xi(&self, v: f64) -> Result<XiValue, SpectrumError> {
        xi_at(self.entry.mathieu, self.entry.parity, self.coeffs, v)
    }

    /// `η(u) ξ(v)`.
    pub fn amplitude(&self, u: f64, v: f64) -> Result<f64, SpectrumError> {
        Ok(self.eta(u)?.value * self.xi(v)?.value)
    }

    fn amplitude_at(&self, p: CartesianPoint) -> Result<f64, ModelError> {
        let (r1, r2) = distances(p);
        let u = (0.5 * (r1 + r2)).max(1.0);
        let v = (0.5 * (r2 - r1)).clamp(-1.0, 1.0);
        self.amplitude(u, v).map_err(into_model)
    }

    /// Value with analytic first partials. Fails on the `x1` axis, where `ξ`
    /// or `η` may not be differentiable.
    pub fn analytic_jet(&self, p: CartesianPoint) -> Result<SpinorJet, ModelError> {
        let ej = elliptic_jet(p)?;
        let e = to_elliptic(p);
        let eta = self.eta(e.u).map_err(into_model)?;
        let xi = self.xi(e.v).map_err(into_model)?;
        let (a_u, a_v) = (eta.du * xi.value, eta.value * xi.dv);
        let d1 = a_u * ej.grad_u[0] + a_v * ej.grad_v[0];
        let d2 = a_u * ej.grad_u[1] + a_v * ej.grad_v[1];
        if !(d1.is_finite() && d2.is_finite()) {
            return Err(ModelError::Singularity { x1: p.x1, x2: p.x2 });
        }
        let k = self.component();
        Ok(SpinorJet {
            value: Spinor4::component(k, eta.value * xi.value),
            d1: Spinor4::component(k, d1),
            d2: Spinor4::component(k, d2),
        })
    }

    /// Whether `∫|ψ|²` converges, by log-domain quadrature in `(μ, θ)`.
    pub fn normalizability(&self) -> Result<Normalizability, SpectrumError> {
        let e = self.entry;
        let hbar = self.params().hbar;
        let alpha = |mu: f64| Ok(ln_eta_sqr(e.n, e.m, e.sector_sign, mu.cosh(), hbar));
        let envelope = |mu: f64| Ok(alpha(mu)? + 2.0 * mu.cosh().ln());
        let mu_max = match mu_cutoff(&envelope) {
            Ok(m) => m,
            Err(ModelError::Numerical(SpecfunError::Divergent(_))) => {
                return Ok(Normalizability {
                    normalizable: false,
                    norm: None,
                })
            }
            Err(err) => return Err(err.into()),
        };
        let beta = |theta: f64| {
            let (x, _) = combine(e.mathieu, e.parity, self.coeffs, theta, PI - theta)?;
            Ok(if x == 0.0 { f64::NEG_INFINITY } else { 2.0 * x.abs().ln() })
        };
        let zero = |_: f64| 0.0;
        let ln_sin_sqr = |t: f64| {
            let s = t.sin();
            if s <= 0.0 {
                f64::NEG_INFINITY
            } else {
                2.0 * s.ln()
            }
        };
        let a0 = log_integral(&alpha, &zero, (0.0, mu_max))?;
        let a2 = log_integral(&alpha, &ln_sinh_sqr, (0.0, mu_max))?;
        let b0 = log_integral(&beta, &zero, (0.0, PI))?;
        let b2 = log_integral(&beta, &ln_sin_sqr, (0.0, PI))?;
        let ln = 2f64.ln() + log_add(a2.log_magnitude + b0.log_magnitude, a0.log_magnitude + b2.log_magnitude);
        if !ln.is_finite() {
            return Err(SpectrumError::Domain("state vanishes identically".into()));
        }
        Ok(Normalizability {
            normalizable: true,
            norm: Some(NormValue {
                ln,
                rel_error: a0.relative_error().max(a2.relative_error())
                    + b0.relative_error().max(b2.relative_error()),
                method: NormMethod::Quadrature,
                evaluations: a0.evaluations + a2.evaluations + b0.evaluations + b2.evaluations,
            }),
        })
    }
}

fn into_model(e: SpectrumError) -> ModelError {
    match e {
        SpectrumError::Model(m) => m,
        SpectrumError::Numerical(s) => ModelError::Numerical(s),
        other => ModelError::Domain(other.to_string()),
    }
}

impl SpinorField for BoundState {
    fn value(&self, p: CartesianPoint) -> Result<Spinor4, ModelError> {
        Ok(Spinor4::component(self.component(), self.amplitude_at(p)?))
    }

    fn jet(&self, p: CartesianPoint, _h: f64) -> Result<SpinorJet, ModelError> {
        self.analytic_jet(p)
    }
}

impl Density for BoundState {
    fn density(&self, p: CartesianPoint) -> Result<f64, ModelError> {
        let a = self.amplitude_at(p)?;
        Ok(a * a)
    }
}

/// The `F = 1` partner `Q ψ` of a bound state: `Q₊` from sector `+`, `Q₋` from `-`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartnerField {
    state: BoundState,
    which: Supercharge,
    zero_mode: bool,
}

impl PartnerField {
    pub fn state(&self) -> &BoundState {
        &self.state
    }

    pub fn supercharge(&self) -> Supercharge {
        self.which
    }

    /// Set for `E = 0` states, whose image is the zero field.
    pub fn is_zero_mode(&self) -> bool {
        self.zero_mode
    }
}

impl SpinorField for PartnerField {
    fn value(&self, p: CartesianPoint) -> Result<Spinor4, ModelError> {
        if self.zero_mode {
            return Ok(Spinor4::ZERO);
        }
        let jet = self.state.analytic_jet(p)?;
        let grad = self.state.w.jet(p)?.grad;
        Ok(apply_supercharge_to_jet(self.which, &jet, grad, self.state.params().hbar))
    }
}

impl Density for PartnerField {
    fn density(&self, p: CartesianPoint) -> Result<f64, ModelError> {
        Ok(self.value(p)?.norm_sqr())
    }
}

pub fn fermionic_partner(bs: &BoundState) -> PartnerField {
    PartnerField {
        state: *bs,
        which: match bs.entry.sector_sign {
            SectorSign::Plus => Supercharge::Plus,
            SectorSign::Minus => Supercharge::Minus,
        },
        zero_mode: bs.energy() == 0.0,
    }
}

/// Largest pointwise residual of the separated `u` equation
/// `-ħ̄²((u²-1)η'' + uη') + (16(u²-1)/ħ̄² - 4su - 2Eu²)η = Iη`,
/// relative to the sum of the magnitudes of its terms.
pub fn u_ode_residual(bs: &BoundState, us: &[f64]) -> Result<f64, SpectrumError> {
    let e = bs.entry;
    let h2 = bs.params().hbar.powi(2);
    let s = e.sector_sign.sign();
    let mut worst: f64 = 0.0;
    for &u in us {
        let j = bs.eta(u)?;
        let terms = [
            -h2 * (u * u - 1.0) * j.duu,
            -h2 * u * j.du,
            16.0 * (u * u - 1.0) / h2 * j.value,
            -4.0 * s * u * j.value,
            -2.0 * e.energy * u * u * j.value,
            -e.symmetry * j.value,
        ];
        worst = worst.max(relative(&terms));
    }
    Ok(worst)
}

/// Same check in the Razavy form `-η_xx + (ζ cosh 2x - M)² η = λ η`, `u = cosh 2x`.
pub fn razavy_residual(bs: &BoundState, xs: &[f64]) -> Result<f64, SpectrumError> {
    let r = bs.entry.razavy;
    let mut worst: f64 = 0.0;
    for &x in xs {
        let u = (2.0 * x).cosh();
        let j = bs.eta(u)?;
        let eta_xx = 4.0 * ((u * u - 1.0) * j.duu + u * j.du);
        let well = r.zeta * u - r.m;
        worst = worst.max(relative(&[-eta_xx, well * well * j.value, -r.lambda * j.value]));
    }
    Ok(worst)
}

/// The separated `v` equation `-ħ̄²(1-v²)ξ'' + ħ̄² v ξ' + 2E v² ξ + I ξ = 0`,
/// with `ξ''` from central differences of the analytic `ξ'`.
pub fn v_ode_residual(bs: &BoundState, vs: &[f64]) -> Result<f64, SpectrumError> {
    const STEP: f64 = 1e-5;
    let e = bs.entry;
    let h2 = bs.params().hbar.powi(2);
    let mut worst: f64 = 0.0;
    for &v in vs {
        if !(v.abs() < 1.0 - 2.0 * STEP) {
            return Err(SpectrumError::Domain(format!("v = {v} is too close to the axis")));
        }
        let x = bs.xi(v)?;
        let ddv = (bs.xi(v + STEP)?.dv - bs.xi(v - STEP)?.dv) / (2.0 * STEP);
        let terms = [
            -h2 * (1.0 - v * v) * ddv,
            h2 * v * x.dv,
            2.0 * e.energy * v * v * x.value,
            e.symmetry * x.value,
        ];
        worst = worst.max(relative(&terms));
    }
    Ok(worst)
}

fn relative(terms: &[f64]) -> f64 {
    let scale: f64 = terms.iter().map(|t| t.abs()).sum();
    if scale == 0.0 {
        0.0
    } else {
        terms.iter().sum::<f64>().abs() / scale
    }
}

/// Deterministic sample points in `[-2.5, 2.5] × [-2, 2]` that keep a
/// stencil of step `h` clear of the center disks and the axis strip.
pub fn residual_points(nx: usize, ny: usize, h: f64) -> Vec<CartesianPoint> {
    let margin = 2.0 * h;
    let y_lo = AXIS_STRIP + margin + 0.05;
    let mut pts = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        let y = y_lo + (2.0 - y_lo) * j as f64 / (ny.max(2) - 1) as f64;
        for i in 0..nx {
            let x = -2.5 + 5.0 * i as f64 / (nx.max(2) - 1) as f64;
            for p in [CartesianPoint::new(x, y), CartesianPoint::new(x, -y)] {
                if !near_center(p, CENTER_EXCLUSION_RADIUS + margin) {
                    pts.push(p);
                }
            }
        }
    }
    pts
}

/// `‖H ψ - E ψ‖ / ‖ψ‖` over `points`, with the finite-difference Hamiltonian
/// of `sector` and step `h`.
pub fn hamiltonian_residual(
    field: &dyn SpinorField,
    sector: Sector,
    energy: f64,
    w: &Superpotential,
    points: &[CartesianPoint],
    h: f64,
) -> Result<f64, ModelError> {
    let sums = points
        .par_iter()
        .map(|&p| {
            let hpsi = apply_hamiltonian(sector, field, p, w, h)?;
            let psi = field.value(p)?;
            Ok(((hpsi - psi * Complex64::new(energy, 0.0)).norm_sqr(), psi.norm_sqr()))
        })
        .collect::<Result<Vec<(f64, f64)>, ModelError>>()?;
    let (num, den) = sums.iter().fold((0.0, 0.0), |acc, x| (acc.0 + x.0, acc.1 + x.1));
    if den == 0.0 {
        return Err(ModelError::Domain("field vanishes on every sample point".into()));
    }
    Ok((num / den).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub u_ode: f64,
    pub razavy_x: f64,
    pub v_ode: f64,
    pub hamiltonian_2d: f64,
}

/// Default sweep: 30 points per separated equation and the 2D residual with step `1e-3`.
pub fn residual_report(bs: &BoundState) -> Result<ResidualReport, SpectrumError> {
    let us: Vec<f64> = (0..30).map(|k| 1.05 + 0.1 * k as f64).collect();
    let xs: Vec<f64> = (0..30).map(|k| 0.05 + 0.05 * k as f64).collect();
    let vs: Vec<f64> = (0..30).map(|k| -0.95 + 1.9 * k as f64 / 29.0).collect();
    let h = crate::model::DEFAULT_FD_STEP;
    let pts = residual_points(13, 6, h);
    Ok(ResidualReport {
        u_ode: u_ode_residual(bs, &us)?,
        razavy_x: razavy_residual(bs, &xs)?,
        v_ode: v_ode_residual(bs, &vs)?,
        hamiltonian_2d: hamiltonian_residual(bs, bs.sector(), bs.energy(), &bs.w, &pts, h)?,
    })
}
