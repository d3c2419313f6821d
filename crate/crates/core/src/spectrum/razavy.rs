//! Closed-form `u` factors of the `δ = 1` bound states.

use super::{check_indices, SectorSign, SpectrumError};

/// `η` and its first two `u` derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RazavyJet {
    pub value: f64,
    pub du: f64,
    pub duu: f64,
}

/// Every factor has the shape `e^{-c u} P(u)`; returns `c` and `(P, P', P'')`.
fn factor(n: u32, m: u32, s: f64, hbar: f64, u: f64) -> (f64, [f64; 3]) {
    let h2 = hbar * hbar;
    match (n, m) {
        (0, 1) => (4.0 * s / h2, [1.0, 0.0, 0.0]),
        (1, 1) | (1, 2) => {
            let (sign, shift) = if m == 1 { (1.0, 1.0) } else { (-1.0, -1.0) };
            let w = 2.0 * (u + shift);
            if w <= 0.0 {
                return (2.0 * s / h2, [0.0, f64::INFINITY * sign, f64::NEG_INFINITY * sign]);
            }
            let p = w.sqrt();
            (2.0 * s / h2, [sign * p, sign / p, -sign / (p * p * p)])
        }
        (2, 1) => {
            let w = (u - 1.0) * (u + 1.0);
            if w <= 0.0 {
                return (4.0 * s / (3.0 * h2), [0.0, f64::NEG_INFINITY, f64::INFINITY]);
            }
            let p = -2.0 * w.sqrt();
            (4.0 * s / (3.0 * h2), [p, 4.0 * u / p, 4.0 / p - 16.0 * u * u / (p * p * p)])
        }
        (2, 2) | (2, 3) => {
            let root = (9.0 * h2 * h2 + 256.0).sqrt();
            let pm = if m == 2 { 1.0 } else { -1.0 };
            let p = 2.0 * u - s * 3.0 * h2 / 8.0 + pm * s * root / 8.0;
            (4.0 * s / (3.0 * h2), [p, 2.0, 0.0])
        }
        _ => unreachable!(),
    }
}

/// `η^{nm}(u)` at `δ = 1` with its derivatives; unnormalized.
///
/// Factors carrying `√(u ± 1)` have unbounded derivatives at `u = 1`.
pub fn razavy_eigenfunction(
    n: u32,
    m: u32,
    sign: SectorSign,
    u: f64,
    hbar: f64,
) -> Result<RazavyJet, SpectrumError> {
    check_indices(n, m)?;
    if !(u >= 1.0 && u.is_finite()) {
        return Err(SpectrumError::Domain(format!("u = {u} is outside [1, inf)")));
    }
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(SpectrumError::Domain(format!("hbar = {hbar} must be positive")));
    }
    let (c, [p, dp, ddp]) = factor(n, m, sign.sign(), hbar, u);
    let e = (-c * u).exp();
    let (du, duu) = if p == 0.0 && !dp.is_finite() {
        (dp, ddp)
    } else {
        (e * (dp - c * p), e * (ddp - 2.0 * c * dp + c * c * p))
    };
    Ok(RazavyJet {
        value: e * p,
        du,
        duu,
    })
}

/// Natural log of `η²`; `-inf` at zeros.
pub(crate) fn ln_eta_sqr(n: u32, m: u32, sign: SectorSign, u: f64, hbar: f64) -> f64 {
    let (c, [p, _, _]) = factor(n, m, sign.sign(), hbar, u);
    if p == 0.0 {
        f64::NEG_INFINITY
    } else {
        2.0 * (p.abs().ln() - c * u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn spot_values() {
        let e = razavy_eigenfunction(0, 1, SectorSign::Plus, 1.0, 2.0).unwrap();
        assert_relative_eq!(e.value, (-1.0f64).exp(), max_relative = 1e-15);
        assert_eq!(razavy_eigenfunction(2, 1, SectorSign::Plus, 1.0, 1.0).unwrap().value, 0.0);
        assert!(razavy_eigenfunction(3, 1, SectorSign::Plus, 2.0, 1.0).is_err());
        assert!(razavy_eigenfunction(1, 1, SectorSign::Plus, 0.5, 1.0).is_err());
    }

    #[test]
    fn derivatives_match_differences() {
        let h = 1e-5;
        for (n, m) in [(0, 1), (1, 1), (1, 2), (2, 1), (2, 2), (2, 3)] {
            for sign in [SectorSign::Plus, SectorSign::Minus] {
                for &u in &[1.3, 2.0, 3.7] {
                    let f = |x: f64| razavy_eigenfunction(n, m, sign, x, 1.4).unwrap();
                    let j = f(u);
                    let d1 = (f(u + h).value - f(u - h).value) / (2.0 * h);
                    let d2 = (f(u + h).du - f(u - h).du) / (2.0 * h);
                    assert_relative_eq!(j.du, d1, max_relative = 1e-7, epsilon = 1e-9);
                    assert_relative_eq!(j.duu, d2, max_relative = 1e-7, epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn log_square_matches() {
        let j = razavy_eigenfunction(2, 2, SectorSign::Plus, 2.5, 1.0).unwrap();
        assert_relative_eq!(
            ln_eta_sqr(2, 2, SectorSign::Plus, 2.5, 1.0),
            (j.value * j.value).ln(),
            max_relative = 1e-13
        );
    }
}
