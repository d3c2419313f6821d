//! Supercharges in the Cartesian and elliptic frames.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::{metric, CartesianPoint, EllipticPoint};

use super::spinor::{Spinor4, SpinorField, SpinorJet};
use super::superpotential::Superpotential;
use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Supercharge {
    /// Raises the Fermi number.
    Plus,
    /// Lowers the Fermi number.
    Minus,
}

/// Cartesian supercharge from a spinor jet and the gradient of `W`.
pub fn apply_supercharge_to_jet(which: Supercharge, jet: &SpinorJet, grad_w: [f64; 2], hbar: f64) -> Spinor4 {
    let psi = &jet.value;
    let s = match which {
        Supercharge::Plus => -1.0,
        Supercharge::Minus => 1.0,
    };
    // D_j ψ_k = ħ̄ ∂_j ψ_k + s W_j ψ_k
    let d1 = |k: usize| jet.d1[k] * hbar + psi[k] * (s * grad_w[0]);
    let d2 = |k: usize| jet.d2[k] * hbar + psi[k] * (s * grad_w[1]);
    let zero = Complex64::new(0.0, 0.0);
    let out = match which {
        Supercharge::Plus => [zero, d1(0), d2(0), -d2(1) + d1(2)],
        Supercharge::Minus => [d1(1) + d2(2), -d2(3), d1(3), zero],
    };
    Spinor4(out) * Complex64::new(0.0, hbar.sqrt())
}

/// Cartesian supercharge applied to a field at `p`.
pub fn apply_supercharge(
    which: Supercharge,
    field: &dyn SpinorField,
    p: CartesianPoint,
    w: &Superpotential,
    h: f64,
) -> Result<Spinor4, ModelError> {
    let jet = field.jet(p, h)?;
    let grad = w.jet(p)?.grad;
    Ok(apply_supercharge_to_jet(which, &jet, grad, w.params().hbar))
}

/// A supercharge composed with a field, itself a field.
pub struct SuperchargedField<'a> {
    pub which: Supercharge,
    pub inner: &'a dyn SpinorField,
    pub w: Superpotential,
    pub h: f64,
}

impl SpinorField for SuperchargedField<'_> {
    fn value(&self, p: CartesianPoint) -> Result<Spinor4, ModelError> {
        apply_supercharge(self.which, self.inner, p, &self.w, self.h)
    }
}

/// Value and `(u, v)` partials of an elliptic-frame spinor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticJet4 {
    pub value: Spinor4,
    pub du: Spinor4,
    pub dv: Spinor4,
}

/// Elliptic-frame supercharge at an interior point.
pub fn apply_elliptic_supercharge(
    which: Supercharge,
    jet: &EllipticJet4,
    e: EllipticPoint,
    w: &Superpotential,
) -> Result<Spinor4, ModelError> {
    let m = metric(e)?;
    let hbar = w.params().hbar;
    let (f1, _) = w.u_derivatives(e.u);
    let (g1, _) = w.v_derivatives(e.v);
    let d = e.focal_product();
    let cu = hbar * e.u / d;
    let cv = hbar * e.v / d;
    let psi = &jet.value;
    let s = match which {
        Supercharge::Plus => -1.0,
        Supercharge::Minus => 1.0,
    };
    let nu = |k: usize| jet.du[k] * hbar + psi[k] * (s * f1);
    let nv = |k: usize| jet.dv[k] * hbar + psi[k] * (s * g1);
    let zero = Complex64::new(0.0, 0.0);
    let out = match which {
        Supercharge::Plus => [
            zero,
            nu(0) * m.e_u1,
            nv(0) * m.e_v2,
            -(nv(1) - psi[1] * cv) * m.e_v2 + (nu(2) + psi[2] * cu) * m.e_u1,
        ],
        Supercharge::Minus => [
            (nu(1) + psi[1] * cu) * m.e_u1 + (nv(2) - psi[2] * cv) * m.e_v2,
            -nv(3) * m.e_v2,
            nu(3) * m.e_u1,
            zero,
        ],
    };
    Ok(Spinor4(out) * Complex64::new(0.0, -hbar.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{distances, s_matrix, to_cartesian, Branch};
    use crate::model::{FnField, ModelParams};

    fn test_spinor(p: CartesianPoint) -> Result<Spinor4, ModelError> {
        let g = (-0.3 * (p.x1 * p.x1 + p.x2 * p.x2)).exp();
        Ok(Spinor4::from_real([
            (1.0 + p.x1) * g,
            (p.x2 - 0.5 * p.x1 * p.x2) * g,
            (0.3 + p.x1 * p.x1) * g,
            (p.x1 - p.x2) * g,
        ]))
    }

    #[test]
    fn sparsity_on_top_component() {
        let params = ModelParams::type_i(1.0, 0.5).unwrap();
        let w = Superpotential::new(&params).unwrap();
        let f = FnField(|p: CartesianPoint| Ok(Spinor4::component(3, p.x1.exp())));
        let q = apply_supercharge(Supercharge::Plus, &f, CartesianPoint::new(0.3, 0.4), &w, 1e-3).unwrap();
        assert_eq!(q, Spinor4::ZERO);
    }

    #[test]
    fn bosonic_zero_mode_is_annihilated() {
        let params = ModelParams::type_i(0.8, 0.5).unwrap();
        let w = Superpotential::new(&params).unwrap();
        let h2 = 0.64;
        let f = FnField(move |p: CartesianPoint| {
            let (r1, r2) = distances(p);
            Ok(Spinor4::component(0, (-(2.0 * r1 + 1.0 * r2) / h2).exp()))
        });
        for &(x1, x2) in &[(0.2, 0.5), (-1.5, 1.0), (2.0, -0.7)] {
            let p = CartesianPoint::new(x1, x2);
            let q = apply_supercharge(Supercharge::Plus, &f, p, &w, 1e-4).unwrap();
            let scale = f.value(p).unwrap().norm();
            assert!(q.norm() / scale < 1e-6, "{}", q.norm() / scale);
        }
    }

    #[test]
    fn nilpotent() {
        let params = ModelParams::type_i(1.0, 0.5).unwrap();
        let w = Superpotential::new(&params).unwrap();
        let f = FnField(test_spinor);
        for which in [Supercharge::Plus, Supercharge::Minus] {
            let once = SuperchargedField { which, inner: &f, w, h: 1e-3 };
            let p = CartesianPoint::new(0.3, 0.8);
            let twice = apply_supercharge(which, &once, p, &w, 1e-3).unwrap();
            assert!(twice.norm() / f.value(p).unwrap().norm() < 1e-5);
        }
    }

    /// Elliptic-frame field `S(u, v) ψ(x(u, v))`, differentiated in `(u, v)`.
    fn elliptic_jet_of(f: &dyn SpinorField, e: EllipticPoint, h: f64) -> EllipticJet4 {
        let at = |u: f64, v: f64| {
            let ep = EllipticPoint::new(u, v, e.branch);
            f.value(to_cartesian(ep)).unwrap().transform(&s_matrix(ep).unwrap())
        };
        EllipticJet4 {
            value: at(e.u, e.v),
            du: (at(e.u + h, e.v) - at(e.u - h, e.v)) * (0.5 / h),
            dv: (at(e.u, e.v + h) - at(e.u, e.v - h)) * (0.5 / h),
        }
    }

    #[test]
    fn s_conjugation_on_plus_branch() {
        let params = ModelParams::type_i(1.0, 0.5).unwrap();
        let w = Superpotential::new(&params).unwrap();
        let f = FnField(test_spinor);
        for &(u, v) in &[(1.6, 0.2), (2.5, -0.6), (1.3, 0.7)] {
            let e = EllipticPoint::new(u, v, Branch::Plus);
            let p = to_cartesian(e);
            let ej = elliptic_jet_of(&f, e, 1e-5);
            for which in [Supercharge::Plus, Supercharge::Minus] {
                let c = apply_elliptic_supercharge(which, &ej, e, &w).unwrap();
                let back = c.transform(&s_matrix(e).unwrap());
                let q = apply_supercharge(which, &f, p, &w, 1e-5).unwrap();
                assert!((back - q).norm() < 1e-7 * (1.0 + q.norm()), "{which:?} {u} {v}");
            }
        }
    }
}
