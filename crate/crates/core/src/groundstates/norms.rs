//! Norms of the zero modes.
//!
//! With `u = cosh μ`, `v = cos θ` the area element of the plane becomes
//! `2 (sinh²μ + sin²θ) dμ dθ` over `μ >= 0`, `θ in [0, π]`, the factor 2
//! counting both half planes. Every zero-mode density separates into
//! `e^{α(μ)} e^{β(θ)}`, up to `1/(u² - v²)` for the fermionic ones.

use std::cell::RefCell;
use std::f64::consts::{LN_10, PI};

use serde::Serialize;

use crate::model::{ModelError, ModelParams, Superpotential};
use crate::specfun::{
    integrate_2d, integrate_log, log_bessel_i, log_bessel_k, BesselOrder, QuadratureOptions,
    QuadratureResult, SingularEnds, SpecfunError,
};

use super::{GroundState, GroundStateKind};

/// Decades below the running maximum at which the `μ` range is cut.
const TRUNCATION_DECADES: f64 = 40.0;
/// Largest `μ` searched before declaring the integral divergent.
const MU_LIMIT: f64 = 60.0;
const MU_STEP: f64 = 0.125;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormMethod {
    Analytic,
    Quadrature,
}

/// A positive norm kept as its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormValue {
    pub ln: f64,
    /// Estimated relative error.
    pub rel_error: f64,
    pub method: NormMethod,
    pub evaluations: usize,
}

impl NormValue {
    pub fn value(&self) -> f64 {
        self.ln.exp()
    }

    pub fn log10(&self) -> f64 {
        self.ln / LN_10
    }

    /// The linear value, or `None` when it lies outside `1e±300`.
    pub fn representable(&self) -> Option<f64> {
        (self.log10().abs() <= 300.0).then(|| self.value())
    }

    pub fn abs_error(&self) -> f64 {
        self.value() * self.rel_error
    }
}

fn bessel_args(params: &ModelParams) -> (f64, f64) {
    let h2 = params.hbar * params.hbar;
    (4.0 * (1.0 + params.delta) / h2, 4.0 * (1.0 - params.delta) / h2)
}

fn require_simple_i(params: &ModelParams) -> Result<(), ModelError> {
    params.validate()?;
    if !params.is_simple_type_i() {
        return Err(ModelError::InvalidParams(
            "closed-form norms need wtype I with kappa = c1 = c2 = 0".into(),
        ));
    }
    Ok(())
}

pub(crate) fn log_add(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Closed-form norm of the Type I bosonic zero mode.
///
/// At `δ = 1` the second term is evaluated through `I1(x)/x -> 1/2`.
pub fn norm_bosonic_i(params: &ModelParams) -> Result<NormValue, ModelError> {
    require_simple_i(params)?;
    let (a, b) = bessel_args(params);
    let h2 = params.hbar * params.hbar;
    let first = (h2 / (4.0 * (1.0 + params.delta))).ln()
        + log_bessel_i(BesselOrder::Zero, b)?
        + log_bessel_k(BesselOrder::One, a)?;
    // ħ̄²/(4(1-δ)) I1(b) = I1(b)/b
    let i1_over_b = if b > 0.0 {
        log_bessel_i(BesselOrder::One, b)? - b.ln()
    } else {
        0.5f64.ln()
    };
    let second = i1_over_b + log_bessel_k(BesselOrder::Zero, a)?;
    Ok(NormValue {
        ln: (2.0 * PI).ln() + log_add(first, second),
        rel_error: 1e-13,
        method: NormMethod::Analytic,
        evaluations: 0,
    })
}

/// Closed-form norm of the Type I fermionic zero mode.
pub fn norm_fermionic_i(params: &ModelParams) -> Result<NormValue, ModelError> {
    require_simple_i(params)?;
    let (a, b) = bessel_args(params);
    Ok(NormValue {
        ln: (2.0 * PI).ln() + log_bessel_k(BesselOrder::Zero, a)? + log_bessel_i(BesselOrder::Zero, b)?,
        rel_error: 1e-13,
        method: NormMethod::Analytic,
        evaluations: 0,
    })
}

fn quad_options() -> QuadratureOptions {
    QuadratureOptions::default().with_rel_tol(1e-10)
}

/// Upper end of the `μ` range, where `ln_g` has dropped [`TRUNCATION_DECADES`]
/// below its running maximum.
pub(crate) fn mu_cutoff(ln_g: &dyn Fn(f64) -> Result<f64, ModelError>) -> Result<f64, ModelError> {
    let drop = TRUNCATION_DECADES * LN_10;
    let mut best = ln_g(0.0)?;
    let mut mu = 0.0;
    while mu < MU_LIMIT {
        mu += MU_STEP;
        let g = ln_g(mu)?;
        if g.is_nan() {
            return Err(SpecfunError::NonFinite { x: mu }.into());
        }
        best = best.max(g);
        if g < best - drop {
            return Ok(mu);
        }
    }
    Err(SpecfunError::Divergent(format!(
        "integrand has not decayed {TRUNCATION_DECADES} decades below its maximum by mu = {MU_LIMIT}"
    ))
    .into())
}

/// Log-domain integral of `weight(x) e^{profile(x)}`; errors from `profile`
/// are carried out of the integrator.
pub(crate) fn log_integral(
    profile: &dyn Fn(f64) -> Result<f64, ModelError>,
    log_weight: &dyn Fn(f64) -> f64,
    range: (f64, f64),
) -> Result<QuadratureResult, ModelError> {
    let failure: RefCell<Option<ModelError>> = RefCell::new(None);
    let f = |x: f64| match profile(x) {
        Ok(p) => p + log_weight(x),
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NEG_INFINITY
        }
    };
    let r = integrate_log(f, range.0, range.1, SingularEnds::NONE, &quad_options());
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(r?)
}

pub(crate) fn ln_sinh_sqr(mu: f64) -> f64 {
    if mu == 0.0 {
        f64::NEG_INFINITY
    } else {
        2.0 * mu.sinh().ln()
    }
}

fn ln_sin_sqr(theta: f64) -> f64 {
    let s = theta.sin();
    if s <= 0.0 {
        f64::NEG_INFINITY
    } else {
        2.0 * s.ln()
    }
}

/// Norm by the separable reduction, valid for every kind.
pub fn norm_separable(kind: GroundStateKind, params: &ModelParams) -> Result<NormValue, ModelError> {
    let state = GroundState::new(kind, params)?;
    let w: Superpotential = *state.superpotential();
    let (su, sv) = kind.exponent_signs();
    let scale = 2.0 / params.hbar;
    let alpha = |mu: f64| Ok(su * scale * w.u_value_mu(mu)?);
    let beta = |theta: f64| Ok(sv * scale * w.v_value_theta(theta)?);

    // Truncate on the bounding weight cosh²μ so that all μ integrals share one range.
    let envelope = |mu: f64| Ok(alpha(mu)? + 2.0 * mu.cosh().ln());
    let mu_max = mu_cutoff(&envelope)?;
    let mu_range = (0.0, mu_max);
    let theta_range = (0.0, PI);
    let zero = |_: f64| 0.0;

    let a0 = log_integral(&alpha, &zero, mu_range)?;
    let b0 = log_integral(&beta, &zero, theta_range)?;
    let (ln, rel, evals) = if kind.is_fermionic() {
        (
            2f64.ln() + a0.log_magnitude + b0.log_magnitude,
            a0.relative_error() + b0.relative_error(),
            a0.evaluations + b0.evaluations,
        )
    } else {
        let a2 = log_integral(&alpha, &ln_sinh_sqr, mu_range)?;
        let b2 = log_integral(&beta, &ln_sin_sqr, theta_range)?;
        let t1 = a2.log_magnitude + b0.log_magnitude;
        let t2 = a0.log_magnitude + b2.log_magnitude;
        let rel = a0.relative_error().max(a2.relative_error())
            + b0.relative_error().max(b2.relative_error());
        (
            2f64.ln() + log_add(t1, t2),
            rel,
            a0.evaluations + a2.evaluations + b0.evaluations + b2.evaluations,
        )
    };
    if !ln.is_finite() {
        return Err(SpecfunError::NonFinite { x: ln }.into());
    }
    Ok(NormValue {
        ln,
        rel_error: rel,
        method: NormMethod::Quadrature,
        evaluations: evals,
    })
}

/// Numerical norm of a Type II zero mode.
pub fn norm_ii(kind: GroundStateKind, params: &ModelParams) -> Result<NormValue, ModelError> {
    if kind.is_type_i() {
        return Err(ModelError::InvalidParams(format!("{kind} is not a Type II kind")));
    }
    norm_separable(kind, params)
}

/// Direct 2D quadrature of `|Ψ|²` over the plane in `(μ, θ)`, without using
/// separability. Intended as an independent check of the other routes.
pub fn norm_direct_2d(kind: GroundStateKind, params: &ModelParams) -> Result<NormValue, ModelError> {
    let state = GroundState::new(kind, params)?;
    let w = *state.superpotential();
    let (su, _) = kind.exponent_signs();
    let envelope = |mu: f64| Ok(su * 2.0 / params.hbar * w.u_value_mu(mu)? + 2.0 * mu.cosh().ln());
    let mu_max = mu_cutoff(&envelope)?;
    let failure: RefCell<Option<ModelError>> = RefCell::new(None);
    let f = |mu: f64, theta: f64| {
        let (u, v) = (mu.cosh(), theta.cos());
        let e = crate::geometry::EllipticPoint::new(u, v, crate::geometry::Branch::Plus);
        let area = mu.sinh().powi(2) + theta.sin().powi(2);
        match state.amplitude(e) {
            Ok(0.0) => 0.0,
            Ok(a) => 2.0 * a * a * area,
            Err(err) => {
                failure.borrow_mut().get_or_insert(err);
                0.0
            }
        }
    };
    let opts = QuadratureOptions::default().with_rel_tol(1e-10);
    let r = integrate_2d(f, (0.0, mu_max), SingularEnds::NONE, (0.0, PI), SingularEnds::NONE, &opts);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let r = r?;
    Ok(NormValue {
        ln: r.log_magnitude,
        rel_error: r.relative_error(),
        method: NormMethod::Quadrature,
        evaluations: r.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn type_i_closed_forms_match_separable_quadrature() {
        for &(hbar, delta) in &[(1.0, 0.5), (2.0, 0.3), (4.0, 1.0), (0.7, 0.9)] {
            let params = ModelParams::type_i(hbar, delta).unwrap();
            let b = norm_bosonic_i(&params).unwrap();
            let bq = norm_separable(GroundStateKind::BosonicI, &params).unwrap();
            assert_relative_eq!(b.value(), bq.value(), max_relative = 1e-8);
            let f = norm_fermionic_i(&params).unwrap();
            let fq = norm_separable(GroundStateKind::FermionicI, &params).unwrap();
            assert_relative_eq!(f.value(), fq.value(), max_relative = 1e-8);
        }
    }

    #[test]
    fn delta_one_limit_is_continuous() {
        let at_one = norm_bosonic_i(&ModelParams::type_i(1.3, 1.0).unwrap()).unwrap();
        let near = norm_bosonic_i(&ModelParams::type_i(1.3, 1.0 - 1e-9).unwrap()).unwrap();
        assert_relative_eq!(at_one.value(), near.value(), max_relative = 1e-7);
    }

    #[test]
    fn log_domain_underflow() {
        let n = norm_bosonic_i(&ModelParams::type_i(0.05, 0.5).unwrap()).unwrap();
        assert!(n.log10() < -500.0);
        assert!(n.representable().is_none());
    }

    #[test]
    fn growing_integrand_is_divergent() {
        // a = 0 makes F grow, so exp(2F/ħ̄) is not integrable.
        let params = ModelParams::type_ii(1.0, 0.5, 3.0, 0, 0).unwrap();
        let r = norm_ii(GroundStateKind::BosonicIiSector0, &params);
        assert!(matches!(r, Err(ModelError::Numerical(SpecfunError::Divergent(_)))), "{r:?}");
    }

    #[test]
    fn type_ii_direct_matches_separable() {
        let params = ModelParams::type_ii(2.0, 0.5, 3.0, 1, 1).unwrap();
        let s = norm_ii(GroundStateKind::BosonicIiSector0, &params).unwrap();
        let d = norm_direct_2d(GroundStateKind::BosonicIiSector0, &params).unwrap();
        assert_relative_eq!(s.value(), d.value(), max_relative = 1e-7);
    }
}
