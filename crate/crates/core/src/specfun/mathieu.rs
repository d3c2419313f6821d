//! Mathieu functions by Taylor-series integration of
//! `w'' + (a - 2q cos 2z) w = 0`.
//!
//! The even solution has `w(0) = 1, w'(0) = 0`, the odd one `w(0) = 0, w'(0) = 1`.
//! No Floquet normalization is applied.

use serde::Serialize;

use super::SpecfunError;

const MAX_ORDER: usize = 60;
const SERIES_TOL: f64 = 1e-17;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MathieuValue {
    pub value: f64,
    pub derivative: f64,
}

/// Transition matrix over one step of length `h` starting at `z0`:
/// columns are the value/derivative at `z0 + h` of the solutions with
/// initial data `(1, 0)` and `(0, 1)` at `z0`.
fn step_matrix(a: f64, q: f64, z0: f64, h: f64) -> Result<[[f64; 2]; 2], String> {
    // p(z0 + t) = sum_j p[j] t^j, scaled by h^j so that everything is O(1).
    let mut p = [0.0; MAX_ORDER];
    let phase = 2.0 * z0;
    let mut fact = 1.0;
    let mut pow = 1.0;
    for (j, pj) in p.iter_mut().enumerate() {
        if j > 0 {
            fact *= j as f64;
            pow *= 2.0 * h;
        }
        let c = (phase + j as f64 * std::f64::consts::FRAC_PI_2).cos();
        *pj = 2.0 * q * c * pow / fact * h * h;
    }
    p[0] -= a * h * h;

    let mut out = [[0.0; 2]; 2];
    for (col, init) in [(1.0, 0.0), (0.0, 1.0)].into_iter().enumerate() {
        // c[k] = w_k h^k
        let mut c = [0.0; MAX_ORDER + 2];
        c[0] = init.0;
        c[1] = init.1 * h;
        let mut value = c[0] + c[1];
        let mut deriv = c[1];
        let mut quiet = 0;
        let mut converged = false;
        for k in 0..MAX_ORDER {
            let conv: f64 = (0..=k).map(|j| p[j] * c[k - j]).sum();
            c[k + 2] = conv / ((k + 2) as f64 * (k + 1) as f64);
            value += c[k + 2];
            deriv += (k + 2) as f64 * c[k + 2];
            if c[k + 2].abs() * (k + 2) as f64 <= SERIES_TOL * (1.0 + value.abs() + deriv.abs()) {
                quiet += 1;
                if quiet >= 3 {
                    converged = true;
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        if !converged {
            return Err(format!("Taylor series did not converge within order {MAX_ORDER}"));
        }
        out[0][col] = value;
        out[1][col] = deriv / h;
    }
    Ok(out)
}

/// Even and odd solutions at `z`, in that order.
pub fn mathieu_pair(a: f64, q: f64, z: f64) -> Result<[MathieuValue; 2], SpecfunError> {
    let fail = |z: f64, reason: String| SpecfunError::Mathieu { a, q, z, reason };
    if !(a.is_finite() && q.is_finite() && z.is_finite()) {
        return Err(fail(z, "non-finite input".into()));
    }
    // state[i] = (w, w') of solution i
    let mut state = [[1.0, 0.0], [0.0, 1.0]];
    let h_max = 0.5 / (1.0 + a.abs() + 2.0 * q.abs()).sqrt();
    let steps = (z.abs() / h_max).ceil().max(1.0) as usize;
    let h = z / steps as f64;
    if h != 0.0 {
        for s in 0..steps {
            let z0 = s as f64 * h;
            let m = step_matrix(a, q, z0, h).map_err(|r| fail(z0, r))?;
            for st in state.iter_mut() {
                let (w, dw) = (st[0], st[1]);
                st[0] = m[0][0] * w + m[0][1] * dw;
                st[1] = m[1][0] * w + m[1][1] * dw;
                if !st[0].is_finite() || !st[1].is_finite() {
                    return Err(fail(z0 + h, "solution overflowed".into()));
                }
            }
        }
    }
    Ok([
        MathieuValue {
            value: state[0][0],
            derivative: state[0][1],
        },
        MathieuValue {
            value: state[1][0],
            derivative: state[1][1],
        },
    ])
}

/// Mathieu solution of the requested parity with its derivative at `z`.
pub fn mathieu(parity: Parity, a: f64, q: f64, z: f64) -> Result<MathieuValue, SpecfunError> {
    let [even, odd] = mathieu_pair(a, q, z)?;
    Ok(match parity {
        Parity::Even => even,
        Parity::Odd => odd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn normalization_at_origin() {
        let e = mathieu(Parity::Even, 3.3, -1.7, 0.0).unwrap();
        let o = mathieu(Parity::Odd, 3.3, -1.7, 0.0).unwrap();
        assert_eq!((e.value, e.derivative), (1.0, 0.0));
        assert_eq!((o.value, o.derivative), (0.0, 1.0));
    }

    #[test]
    fn harmonic_limit() {
        let e = mathieu(Parity::Even, 4.0, 0.0, PI / 4.0).unwrap();
        assert!(e.value.abs() < 1e-14);
        assert_relative_eq!(e.derivative, -2.0, max_relative = 1e-14);
        let o = mathieu(Parity::Odd, 2.25, 0.0, 2.0).unwrap();
        assert_relative_eq!(o.value, (1.5f64 * 2.0).sin() / 1.5, max_relative = 1e-13);
        // a < 0 grows like cosh
        let e = mathieu(Parity::Even, -1.0, 0.0, 3.0).unwrap();
        assert_relative_eq!(e.value, 3f64.cosh(), max_relative = 1e-13);
    }

    #[test]
    fn negative_z_reflects_parity() {
        let [e, o] = mathieu_pair(1.3, 0.8, 1.1).unwrap();
        let [em, om] = mathieu_pair(1.3, 0.8, -1.1).unwrap();
        assert_relative_eq!(em.value, e.value, max_relative = 1e-13);
        assert_relative_eq!(om.value, -o.value, max_relative = 1e-13);
    }

    #[test]
    fn ode_residual_by_finite_differences() {
        let (a, q, z) = (1.0, 0.5, 1.0);
        let h = 1e-3;
        let d = |z: f64| mathieu(Parity::Even, a, q, z).unwrap().derivative;
        let second = (-d(z + 2.0 * h) + 8.0 * d(z + h) - 8.0 * d(z - h) + d(z - 2.0 * h)) / (12.0 * h);
        let w = mathieu(Parity::Even, a, q, z).unwrap().value;
        let residual = second + (a - 2.0 * q * (2.0 * z).cos()) * w;
        assert!(residual.abs() <= 1e-10, "residual {residual}");
    }

    #[test]
    fn known_periodic_solution() {
        // At the characteristic value a_0(q = 1) the even solution is pi-periodic.
        let a0 = -0.455_138_604_107_414;
        let e = mathieu(Parity::Even, a0, 1.0, PI).unwrap();
        assert_relative_eq!(e.value, 1.0, max_relative = 1e-9);
        assert!(e.derivative.abs() < 1e-9);
    }

    #[test]
    fn overflow_is_reported() {
        let r = mathieu(Parity::Even, -1e6, 0.0, 3.0);
        assert!(r.is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn wronskian_is_one(a in -1.0f64..25.0, q in -4.0f64..4.0, z in -PI..PI) {
            let [e, o] = mathieu_pair(a, q, z).unwrap();
            let w = e.value * o.derivative - e.derivative * o.value;
            prop_assert!((w - 1.0).abs() < 1e-9, "W = {w}");
        }
    }
}
