//! Coordinates of the two-center plane.
//!
//! Centers sit at `(1, 0)` (distance `r1`) and `(-1, 0)` (distance `r2`).
//! Elliptic coordinates are `u = (r1 + r2)/2 >= 1`, `v = (r2 - r1)/2 in [-1, 1]`;
//! the map is two-to-one, so the sign of `x2` travels along as [`Branch`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Radius of the disks around the centers excluded from finite-difference checks.
pub const CENTER_EXCLUSION_RADIUS: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GeometryError {
    #[error("elliptic frame is degenerate at u = {u}, v = {v} (requires u > 1 and |v| < 1)")]
    Degenerate { u: f64, v: f64 },
    #[error("point ({x1}, {x2}) coincides with a center")]
    AtCenter { x1: f64, x2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartesianPoint {
    pub x1: f64,
    pub x2: f64,
}

impl CartesianPoint {
    pub const fn new(x1: f64, x2: f64) -> Self {
        CartesianPoint { x1, x2 }
    }

    pub fn offset(self, d1: f64, d2: f64) -> Self {
        CartesianPoint::new(self.x1 + d1, self.x2 + d2)
    }

    /// Mirror image under `x1 -> -x1` (exchanges the two centers).
    pub fn mirrored(self) -> Self {
        CartesianPoint::new(-self.x1, self.x2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticPoint {
    pub u: f64,
    pub v: f64,
    pub branch: Branch,
}

impl EllipticPoint {
    pub const fn new(u: f64, v: f64, branch: Branch) -> Self {
        EllipticPoint { u, v, branch }
    }

    /// `u^2 - v^2`, which equals `r1 r2`.
    pub fn focal_product(&self) -> f64 {
        (self.u - self.v) * (self.u + self.v)
    }

    fn check_interior(&self) -> Result<(), GeometryError> {
        if self.u > 1.0 && self.v.abs() < 1.0 {
            Ok(())
        } else {
            Err(GeometryError::Degenerate {
                u: self.u,
                v: self.v,
            })
        }
    }
}

/// Metric, zweibein and area element at an interior elliptic point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricData {
    pub g_uu: f64,
    pub g_vv: f64,
    pub e_u1: f64,
    pub e_v2: f64,
    pub jacobian_weight: f64,
}

/// The six independent Christoffel symbols; `u_uv` is `Γ^u_{uv}`, and so on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Christoffel {
    pub u_uu: f64,
    pub v_vv: f64,
    pub u_uv: f64,
    pub v_uu: f64,
    pub u_vv: f64,
    pub v_uv: f64,
}

pub fn distances(p: CartesianPoint) -> (f64, f64) {
    ((p.x1 - 1.0).hypot(p.x2), (p.x1 + 1.0).hypot(p.x2))
}

pub fn to_elliptic(p: CartesianPoint) -> EllipticPoint {
    let (r1, r2) = distances(p);
    let u = (0.5 * (r1 + r2)).max(1.0);
    let v = (0.5 * (r2 - r1)).clamp(-1.0, 1.0);
    let branch = if p.x2 >= 0.0 {
        Branch::Plus
    } else {
        Branch::Minus
    };
    EllipticPoint { u, v, branch }
}

pub fn to_cartesian(e: EllipticPoint) -> CartesianPoint {
    let x2 = ((e.u - 1.0) * (e.u + 1.0) * (1.0 - e.v) * (1.0 + e.v))
        .max(0.0)
        .sqrt();
    CartesianPoint::new(e.u * e.v, e.branch.sign() * x2)
}

pub fn metric(e: EllipticPoint) -> Result<MetricData, GeometryError> {
    e.check_interior()?;
    let d = e.focal_product();
    let a = (e.u - 1.0) * (e.u + 1.0);
    let b = (1.0 - e.v) * (1.0 + e.v);
    Ok(MetricData {
        g_uu: d / a,
        g_vv: d / b,
        e_u1: (a / d).sqrt(),
        e_v2: (b / d).sqrt(),
        jacobian_weight: d / (a * b).sqrt(),
    })
}

pub fn christoffel(e: EllipticPoint) -> Result<Christoffel, GeometryError> {
    e.check_interior()?;
    let (u, v) = (e.u, e.v);
    let d = e.focal_product();
    let a = (u - 1.0) * (u + 1.0);
    let b = (1.0 - v) * (1.0 + v);
    Ok(Christoffel {
        u_uu: -u * b / (d * a),
        v_vv: v * a / (d * b),
        u_uv: -v / d,
        v_uu: v * b / (d * a),
        u_vv: -u * a / (d * b),
        v_uv: u / d,
    })
}

/// Matrix relating the elliptic-frame spinor basis to the Cartesian one.
pub fn s_matrix(e: EllipticPoint) -> Result<[[f64; 4]; 4], GeometryError> {
    let m = metric(e)?;
    let (p, q) = (e.v * m.e_u1, e.u * m.e_v2);
    Ok([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, -p, -q, 0.0],
        [0.0, -q, p, 0.0],
        [0.0, 0.0, 0.0, -1.0],
    ])
}

/// True when `p` lies within `radius` of either center.
pub fn near_center(p: CartesianPoint, radius: f64) -> bool {
    let (r1, r2) = distances(p);
    r1 < radius || r2 < radius
}

/// Elliptic coordinates with their Cartesian gradients and Hessians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticJet {
    pub r1: f64,
    pub r2: f64,
    pub u: f64,
    pub v: f64,
    pub grad_u: [f64; 2],
    pub grad_v: [f64; 2],
    pub hess_u: [[f64; 2]; 2],
    pub hess_v: [[f64; 2]; 2],
}

fn distance_jet(dx: f64, dy: f64) -> (f64, [f64; 2], [[f64; 2]; 2]) {
    let r = dx.hypot(dy);
    let n = [dx / r, dy / r];
    let hess = [
        [(1.0 - n[0] * n[0]) / r, -n[0] * n[1] / r],
        [-n[0] * n[1] / r, (1.0 - n[1] * n[1]) / r],
    ];
    (r, n, hess)
}

pub fn elliptic_jet(p: CartesianPoint) -> Result<EllipticJet, GeometryError> {
    let (r1, n1, h1) = distance_jet(p.x1 - 1.0, p.x2);
    let (r2, n2, h2) = distance_jet(p.x1 + 1.0, p.x2);
    if r1 == 0.0 || r2 == 0.0 {
        return Err(GeometryError::AtCenter { x1: p.x1, x2: p.x2 });
    }
    let mut hess_u = [[0.0; 2]; 2];
    let mut hess_v = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            hess_u[i][j] = 0.5 * (h1[i][j] + h2[i][j]);
            hess_v[i][j] = 0.5 * (h2[i][j] - h1[i][j]);
        }
    }
    Ok(EllipticJet {
        r1,
        r2,
        u: 0.5 * (r1 + r2),
        v: 0.5 * (r2 - r1),
        grad_u: [0.5 * (n1[0] + n2[0]), 0.5 * (n1[1] + n2[1])],
        grad_v: [0.5 * (n2[0] - n1[0]), 0.5 * (n2[1] - n1[1])],
        hess_u,
        hess_v,
    })
}

/// Converts a Cartesian gradient `(∂1, ∂2)` into elliptic partials `(∂u, ∂v)`.
pub fn gradient_to_elliptic(e: EllipticPoint, grad: [f64; 2]) -> Result<[f64; 2], GeometryError> {
    e.check_interior()?;
    let s = e.branch.sign();
    let a = (e.u - 1.0) * (e.u + 1.0);
    let b = (1.0 - e.v) * (1.0 + e.v);
    let dx2_du = s * e.u * (b / a).sqrt();
    let dx2_dv = -s * e.v * (a / b).sqrt();
    Ok([
        e.v * grad[0] + dx2_du * grad[1],
        e.u * grad[0] + dx2_dv * grad[1],
    ])
}
