//! Incomplete elliptic integrals via Carlson symmetric forms.
//!
//! The second argument is the parameter `m = k^2`:
//! `F(phi, m) = ∫_0^phi dθ / sqrt(1 - m sin^2 θ)`.

use std::f64::consts::{FRAC_PI_2, PI};

use super::SpecfunError;

const ERRTOL: f64 = 1e-3;

/// Carlson's `R_F(x, y, z)`; at most one argument may be zero.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        let ave = (x + y + z) / 3.0;
        let dx = 1.0 - x / ave;
        let dy = 1.0 - y / ave;
        let dz = 1.0 - z / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / ave.sqrt();
        }
    }
}

/// Carlson's `R_D(x, y, z)`; `z > 0` and at most one of `x, y` zero.
pub fn carlson_rd(x: f64, y: f64, z: f64) -> f64 {
    const C1: f64 = 3.0 / 14.0;
    const C2: f64 = 1.0 / 6.0;
    const C3: f64 = 9.0 / 22.0;
    const C4: f64 = 3.0 / 26.0;
    const C5: f64 = 0.25 * C3;
    const C6: f64 = 1.5 * C4;
    let (mut x, mut y, mut z) = (x, y, z);
    let mut sum = 0.0;
    let mut fac = 1.0;
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (z + lambda));
        fac *= 0.25;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        let ave = 0.2 * (x + y + 3.0 * z);
        let dx = (ave - x) / ave;
        let dy = (ave - y) / ave;
        let dz = (ave - z) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            let ea = dx * dy;
            let eb = dz * dz;
            let ec = ea - eb;
            let ed = ea - 6.0 * eb;
            let ee = ed + ec + ec;
            return 3.0 * sum
                + fac
                    * (1.0
                        + ed * (-C1 + C5 * ed - C6 * dz * ee)
                        + dz * (C2 * ee + dz * (-C3 * ec + dz * C4 * ea)))
                    / (ave * ave.sqrt());
        }
    }
}

fn check(function: &'static str, phi: f64, m: f64) -> Result<(), SpecfunError> {
    if !phi.is_finite() || !m.is_finite() {
        return Err(SpecfunError::Domain {
            function,
            value: if phi.is_finite() { m } else { phi },
            reason: "arguments must be finite",
        });
    }
    let s = phi.sin();
    let reduced = phi.abs() > FRAC_PI_2;
    if m * s * s > 1.0 || (reduced && m > 1.0) {
        return Err(SpecfunError::Domain {
            function,
            value: m,
            reason: "m sin^2(phi) > 1 gives a complex result",
        });
    }
    Ok(())
}

/// Splits `phi = j pi + r` with `r` in `[-pi/2, pi/2]`.
fn reduce(phi: f64) -> (f64, f64) {
    let j = (phi / PI).round();
    (j, phi - j * PI)
}

/// Incomplete integral of the first kind `F(phi | m)`.
pub fn elliptic_f(phi: f64, m: f64) -> Result<f64, SpecfunError> {
    check("elliptic_f", phi, m)?;
    let (j, r) = reduce(phi);
    let s = r.sin();
    let c = r.cos();
    if m == 1.0 {
        if j != 0.0 || r.abs() == FRAC_PI_2 {
            return Ok(f64::INFINITY.copysign(phi));
        }
        return Ok(s.atanh());
    }
    let part = s * carlson_rf(c * c, 1.0 - m * s * s, 1.0);
    if j == 0.0 {
        return Ok(part);
    }
    let complete = carlson_rf(0.0, 1.0 - m, 1.0);
    Ok(2.0 * j * complete + part)
}

/// Incomplete integral of the second kind `E(phi | m)`.
pub fn elliptic_e(phi: f64, m: f64) -> Result<f64, SpecfunError> {
    check("elliptic_e", phi, m)?;
    let (j, r) = reduce(phi);
    let s = r.sin();
    let c = r.cos();
    let part = if m == 1.0 {
        s
    } else {
        let cc = c * c;
        let q = 1.0 - m * s * s;
        s * carlson_rf(cc, q, 1.0) - m / 3.0 * s * s * s * carlson_rd(cc, q, 1.0)
    };
    if j == 0.0 {
        return Ok(part);
    }
    let complete = if m == 1.0 {
        1.0
    } else {
        carlson_rf(0.0, 1.0 - m, 1.0) - m / 3.0 * carlson_rd(0.0, 1.0 - m, 1.0)
    };
    Ok(2.0 * j * complete + part)
}
