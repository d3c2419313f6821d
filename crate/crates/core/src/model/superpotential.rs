//! Separable superpotentials `W(u, v) = F(u) + G(v)`.

use crate::geometry::{elliptic_jet, CartesianPoint, EllipticPoint};
use crate::specfun::{integrate, QuadratureOptions, SingularEnds};

use super::{ModelError, ModelParams, WType};

/// Relative tolerance for the Type II quadratures.
const PART_REL_TOL: f64 = 1e-13;

/// A one-variable part with its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparatedPart {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Cartesian gradient and Hessian of `W`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarJet {
    pub grad: [f64; 2],
    pub hess: [[f64; 2]; 2],
}

impl ScalarJet {
    pub fn grad_sqr(&self) -> f64 {
        self.grad[0] * self.grad[0] + self.grad[1] * self.grad[1]
    }

    pub fn laplacian(&self) -> f64 {
        self.hess[0][0] + self.hess[1][1]
    }

    /// `∂1² W - ∂2² W`.
    pub fn wave_operator(&self) -> f64 {
        self.hess[0][0] - self.hess[1][1]
    }
}

fn sign_bit(bit: u8) -> f64 {
    if bit == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superpotential {
    params: ModelParams,
}

impl Superpotential {
    pub fn new(params: &ModelParams) -> Result<Self, ModelError> {
        params.validate()?;
        Ok(Superpotential { params: *params })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// `(F'(u), F''(u))`.
    pub fn u_derivatives(&self, u: f64) -> (f64, f64) {
        let p = &self.params;
        let (delta, kappa, hbar) = (p.delta, p.kappa, p.hbar);
        let a = (u - 1.0) * (u + 1.0);
        match p.wtype {
            WType::I => {
                let mut d1 = -2.0 * (1.0 + delta) / hbar;
                let mut d2 = 0.0;
                if p.c1 != 0.0 || kappa != 0.0 {
                    let s = a.sqrt();
                    let mu = u.acosh();
                    let c = p.c1 + kappa * mu;
                    d1 += c / (hbar * s);
                    d2 += (kappa / a - c * u / (a * s)) / hbar;
                }
                (d1, d2)
            }
            WType::IIa | WType::IIb => {
                let sg = sign_bit(p.a);
                let r = 2.0 * (1.0 + delta) * u - kappa;
                if kappa == 2.0 * (1.0 + delta) {
                    // r = 2(1+δ)(u-1): cancel the common factor.
                    let c = 2.0 * (1.0 + delta);
                    let g = (c / (u + 1.0)).sqrt();
                    return (sg * g, -sg * 0.5 * g / (u + 1.0));
                }
                let sr = r.sqrt();
                let s = a.sqrt();
                (
                    sg * sr / s,
                    sg * ((1.0 + delta) / (sr * s) - u * sr / (a * s)),
                )
            }
        }
    }

    /// `(G'(v), G''(v))`.
    pub fn v_derivatives(&self, v: f64) -> (f64, f64) {
        let p = &self.params;
        let (delta, kappa, hbar) = (p.delta, p.kappa, p.hbar);
        let b = (1.0 - v) * (1.0 + v);
        match p.wtype {
            WType::I => {
                let mut d1 = 2.0 * (1.0 - delta) / hbar;
                let mut d2 = 0.0;
                if p.c2 != 0.0 || kappa != 0.0 {
                    let s = b.sqrt();
                    let c = p.c2 - kappa * v.asin();
                    d1 += c / (hbar * s);
                    d2 += (-kappa / b + c * v / (b * s)) / hbar;
                }
                (d1, d2)
            }
            WType::IIa | WType::IIb => {
                let sg = sign_bit(p.b);
                if delta == 1.0 {
                    let s = b.sqrt();
                    let sk = kappa.sqrt();
                    return (sg * sk / s, sg * v * sk / (b * s));
                }
                let r = 2.0 * (1.0 - delta) * v + kappa;
                if kappa == 2.0 * (1.0 - delta) {
                    let c = 2.0 * (1.0 - delta);
                    let g = (c / (1.0 - v)).sqrt();
                    return (sg * g, sg * 0.5 * g / (1.0 - v));
                }
                let sr = r.sqrt();
                let s = b.sqrt();
                (
                    sg * sr / s,
                    sg * ((1.0 - delta) / (sr * s) + v * sr / (b * s)),
                )
            }
        }
    }

    /// `F(u)`, normalized so that `F(1) = 0` for Type II.
    pub fn u_value(&self, u: f64) -> Result<f64, ModelError> {
        if u < 1.0 {
            return Err(ModelError::Domain(format!("u = {u} below 1")));
        }
        self.u_value_mu(u.acosh())
    }

    /// `F(cosh μ)`.
    pub fn u_value_mu(&self, mu: f64) -> Result<f64, ModelError> {
        let p = &self.params;
        if !(mu >= 0.0) {
            return Err(ModelError::Domain(format!("mu = {mu} must be nonnegative")));
        }
        match p.wtype {
            WType::I => {
                let u = mu.cosh();
                Ok((-2.0 * (1.0 + p.delta) * u + p.c1 * mu + 0.5 * p.kappa * mu * mu) / p.hbar)
            }
            WType::IIa | WType::IIb => {
                if mu == 0.0 {
                    return Ok(0.0);
                }
                let c = 2.0 * (1.0 + p.delta);
                let kappa = p.kappa;
                let r = integrate(
                    |t: f64| (c * t.cosh() - kappa).max(0.0).sqrt(),
                    0.0,
                    mu,
                    SingularEnds::NONE,
                    &part_options(),
                )?;
                Ok(sign_bit(p.a) * r.value())
            }
        }
    }

    /// `G(v)`, normalized so that `G(-1) = 0` for Type II.
    pub fn v_value(&self, v: f64) -> Result<f64, ModelError> {
        if v.abs() > 1.0 {
            return Err(ModelError::Domain(format!("|v| = {} above 1", v.abs())));
        }
        self.v_value_theta(v.acos())
    }

    /// `G(cos θ)` for `θ` in `[0, π]`.
    pub fn v_value_theta(&self, theta: f64) -> Result<f64, ModelError> {
        let p = &self.params;
        let pi = std::f64::consts::PI;
        if !(0.0..=pi).contains(&theta) {
            return Err(ModelError::Domain(format!("theta = {theta} outside [0, pi]")));
        }
        match p.wtype {
            WType::I => {
                let v = theta.cos();
                let th = v.asin();
                Ok((2.0 * (1.0 - p.delta) * v + p.c2 * th - 0.5 * p.kappa * th * th) / p.hbar)
            }
            WType::IIa | WType::IIb => {
                if theta >= pi {
                    return Ok(0.0);
                }
                let c = 2.0 * (1.0 - p.delta);
                let kappa = p.kappa;
                let r = integrate(
                    |phi: f64| (c * phi.cos() + kappa).max(0.0).sqrt(),
                    theta,
                    pi,
                    SingularEnds::NONE,
                    &part_options(),
                )?;
                Ok(sign_bit(p.b) * r.value())
            }
        }
    }

    pub fn u_part(&self, u: f64) -> Result<SeparatedPart, ModelError> {
        let (d1, d2) = self.u_derivatives(u);
        Ok(SeparatedPart {
            value: self.u_value(u)?,
            d1,
            d2,
        })
    }

    pub fn v_part(&self, v: f64) -> Result<SeparatedPart, ModelError> {
        let (d1, d2) = self.v_derivatives(v);
        Ok(SeparatedPart {
            value: self.v_value(v)?,
            d1,
            d2,
        })
    }

    pub fn elliptic_value(&self, e: EllipticPoint) -> Result<f64, ModelError> {
        Ok(self.u_value(e.u)? + self.v_value(e.v)?)
    }

    pub fn value(&self, p: CartesianPoint) -> Result<f64, ModelError> {
        let e = crate::geometry::to_elliptic(p);
        self.elliptic_value(e)
    }

    /// Gradient and Hessian by the chain rule through `u(x)` and `v(x)`.
    pub fn jet(&self, p: CartesianPoint) -> Result<ScalarJet, ModelError> {
        let j = elliptic_jet(p).map_err(|_| ModelError::Singularity { x1: p.x1, x2: p.x2 })?;
        let (f1, f2) = self.u_derivatives(j.u.max(1.0));
        let (g1, g2) = self.v_derivatives(j.v.clamp(-1.0, 1.0));
        let mut grad = [0.0; 2];
        let mut hess = [[0.0; 2]; 2];
        for i in 0..2 {
            grad[i] = f1 * j.grad_u[i] + g1 * j.grad_v[i];
            for k in 0..2 {
                hess[i][k] = f2 * j.grad_u[i] * j.grad_u[k]
                    + f1 * j.hess_u[i][k]
                    + g2 * j.grad_v[i] * j.grad_v[k]
                    + g1 * j.hess_v[i][k];
            }
        }
        Ok(ScalarJet { grad, hess })
    }
}

fn part_options() -> QuadratureOptions {
    QuadratureOptions::default()
        .with_rel_tol(PART_REL_TOL)
        .with_abs_tol(1e-15)
}

/// Type I superpotential at an elliptic point.
pub fn superpotential_i(e: EllipticPoint, params: &ModelParams) -> Result<f64, ModelError> {
    if params.wtype != WType::I {
        return Err(ModelError::InvalidParams("superpotential_i needs wtype I".into()));
    }
    Superpotential::new(params)?.elliptic_value(e)
}

/// Type II superpotential `F_a(u) + G_b(v)` at an elliptic point.
pub fn superpotential_ii(e: EllipticPoint, params: &ModelParams) -> Result<f64, ModelError> {
    if params.wtype == WType::I {
        return Err(ModelError::InvalidParams("superpotential_ii needs wtype IIa or IIb".into()));
    }
    Superpotential::new(params)?.elliptic_value(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{distances, to_elliptic, Branch};
    use approx::assert_relative_eq;

    #[test]
    fn type_i_at_midpoint() {
        let p = ModelParams::type_i(0.7, 0.5).unwrap();
        let w = superpotential_i(EllipticPoint::new(1.0, 0.0, Branch::Plus), &p).unwrap();
        assert_relative_eq!(w, -2.0 * 1.5 / 0.7, max_relative = 1e-15);
    }

    #[test]
    fn type_i_elliptic_equals_cartesian_form() {
        let params = ModelParams::type_i(1.3, 0.4).unwrap();
        let w = Superpotential::new(&params).unwrap();
        for &(x1, x2) in &[(0.3, 0.2), (-2.0, 1.0), (4.0, -3.0), (0.0, 0.01)] {
            let p = CartesianPoint::new(x1, x2);
            let (r1, r2) = distances(p);
            let cart = -(2.0 * r1 + 2.0 * 0.4 * r2) / 1.3;
            assert_relative_eq!(w.value(p).unwrap(), cart, max_relative = 1e-13);
        }
    }

    #[test]
    fn type_ii_parts_vanish_at_origin_of_integration() {
        let params = ModelParams::type_ii(1.0, 0.5, 3.0, 1, 0).unwrap();
        let w = Superpotential::new(&params).unwrap();
        assert_eq!(w.u_value(1.0).unwrap(), 0.0);
        assert_eq!(w.v_value(-1.0).unwrap(), 0.0);
    }

    #[test]
    fn type_ii_top_of_window_closed_form() {
        // κ = 2(1+δ): the u integrand is 2 sqrt(1+δ) sinh(t/2).
        let params = ModelParams::type_ii(1.0, 0.5, 3.0, 0, 0).unwrap();
        let w = Superpotential::new(&params).unwrap();
        for &u in &[1.001f64, 2.0, 7.5, 40.0] {
            let exact = 4.0 * 1.5f64.sqrt() * (((u + 1.0) / 2.0).sqrt() - 1.0);
            assert_relative_eq!(w.u_value(u).unwrap(), exact, max_relative = 1e-12);
        }
        assert_relative_eq!(w.u_value(2.0).unwrap(), 1.101_020_514_433_643_8, max_relative = 1e-12);
    }

    #[test]
    fn derivatives_match_values() {
        let cases = [
            ModelParams::type_ii(1.0, 0.5, 2.2, 1, 0).unwrap(),
            ModelParams::type_ii(1.0, 0.5, 3.0, 0, 1).unwrap(),
            ModelParams::type_ii(1.0, 0.3, 1.4, 1, 1).unwrap(),
            ModelParams::type_i_family(0.8, 0.6, 0.7, -0.4, 0.9).unwrap(),
        ];
        let h = 1e-5;
        for params in cases {
            let w = Superpotential::new(&params).unwrap();
            for &u in &[1.2, 2.5, 6.0] {
                let fd = (w.u_value(u + h).unwrap() - w.u_value(u - h).unwrap()) / (2.0 * h);
                let (d1, d2) = w.u_derivatives(u);
                assert_relative_eq!(d1, fd, max_relative = 1e-7);
                let fd2 = (w.u_derivatives(u + h).0 - w.u_derivatives(u - h).0) / (2.0 * h);
                assert_relative_eq!(d2, fd2, max_relative = 1e-6, epsilon = 1e-9);
            }
            for &v in &[-0.8, -0.1, 0.5, 0.9] {
                let fd = (w.v_value(v + h).unwrap() - w.v_value(v - h).unwrap()) / (2.0 * h);
                let (d1, d2) = w.v_derivatives(v);
                assert_relative_eq!(d1, fd, max_relative = 1e-7);
                let fd2 = (w.v_derivatives(v + h).0 - w.v_derivatives(v - h).0) / (2.0 * h);
                assert_relative_eq!(d2, fd2, max_relative = 1e-6, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn cartesian_jet_matches_finite_differences() {
        let params = ModelParams::type_ii(1.5, 0.5, 2.5, 1, 0).unwrap();
        let w = Superpotential::new(&params).unwrap();
        let p = CartesianPoint::new(0.4, 0.7);
        let jet = w.jet(p).unwrap();
        let h = 1e-4;
        let gx = (w.value(p.offset(h, 0.0)).unwrap() - w.value(p.offset(-h, 0.0)).unwrap()) / (2.0 * h);
        let gy = (w.value(p.offset(0.0, h)).unwrap() - w.value(p.offset(0.0, -h)).unwrap()) / (2.0 * h);
        assert_relative_eq!(jet.grad[0], gx, max_relative = 1e-7);
        assert_relative_eq!(jet.grad[1], gy, max_relative = 1e-7);
        let hxy = (w.jet(p.offset(0.0, h)).unwrap().grad[0] - w.jet(p.offset(0.0, -h)).unwrap().grad[0]) / (2.0 * h);
        assert_relative_eq!(jet.hess[0][1], hxy, max_relative = 1e-6);
        assert_relative_eq!(jet.hess[0][1], jet.hess[1][0], max_relative = 1e-14);
    }

    #[test]
    fn branch_even() {
        let params = ModelParams::type_ii(1.0, 0.5, 2.0, 1, 1).unwrap();
        let w = Superpotential::new(&params).unwrap();
        let p = CartesianPoint::new(0.3, 0.9);
        let q = CartesianPoint::new(0.3, -0.9);
        assert_eq!(w.value(p).unwrap(), w.value(q).unwrap());
        assert_eq!(to_elliptic(q).branch, Branch::Minus);
    }

    #[test]
    fn wrong_type_is_rejected() {
        let params = ModelParams::type_i(1.0, 0.5).unwrap();
        let e = EllipticPoint::new(1.5, 0.0, Branch::Plus);
        assert!(superpotential_ii(e, &params).is_err());
    }
}
