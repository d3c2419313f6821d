//! Modified Bessel functions of orders 0 and 1.
//!
//! `I` uses its power series (all terms positive) up to `x = 40` and the
//! Hankel asymptotic expansion beyond. `K` uses the logarithmic series below
//! `x = 2` and Temme's continued fraction (CF2) above.

use std::f64::consts::PI;

use super::SpecfunError;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 40.0;
const K_SERIES_LIMIT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselOrder {
    Zero,
    One,
}

fn check_nonnegative(function: &'static str, x: f64) -> Result<(), SpecfunError> {
    if x.is_nan() || x < 0.0 {
        return Err(SpecfunError::Domain {
            function,
            value: x,
            reason: "requires x >= 0",
        });
    }
    Ok(())
}

fn check_positive(function: &'static str, x: f64) -> Result<(), SpecfunError> {
    if x.is_nan() || x <= 0.0 {
        return Err(SpecfunError::Domain {
            function,
            value: x,
            reason: "requires x > 0",
        });
    }
    Ok(())
}

/// Unscaled power series for `(I0, I1)`.
fn i_series(x: f64) -> (f64, f64) {
    let t = 0.25 * x * x;
    let mut term0 = 1.0;
    let mut term1 = 0.5 * x;
    let mut s0 = term0;
    let mut s1 = term1;
    for k in 1..500 {
        let kf = k as f64;
        term0 *= t / (kf * kf);
        term1 *= t / (kf * (kf + 1.0));
        s0 += term0;
        s1 += term1;
        if term0 <= s0 * 1e-17 && term1 <= s1 * 1e-17 {
            break;
        }
    }
    (s0, s1)
}

/// Hankel expansion of `sqrt(2 pi x) e^{-x} I_nu(x)`.
fn i_asymptotic_reduced(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = -term * (mu - odd * odd) / (kf * 8.0 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `e^{-x} (I0(x), I1(x))` for `x >= 0`.
fn i_scaled_pair(x: f64) -> (f64, f64) {
    if x <= SERIES_LIMIT {
        let (i0, i1) = i_series(x);
        let e = (-x).exp();
        (i0 * e, i1 * e)
    } else {
        let pre = 1.0 / (2.0 * PI * x).sqrt();
        (
            pre * i_asymptotic_reduced(0.0, x),
            pre * i_asymptotic_reduced(1.0, x),
        )
    }
}

/// Series for `(K0, K1)` at small argument.
fn k_series(x: f64) -> (f64, f64) {
    let (i0, i1) = i_series(x);
    let t = 0.25 * x * x;
    let ln_half = (0.5 * x).ln();
    // K0 = -(ln(x/2) + gamma) I0 + sum_{k>=1} H_k t^k / (k!)^2
    let mut harmonic = 0.0;
    let mut term = 1.0;
    let mut sum0 = 0.0;
    // K1 = 1/x + ln(x/2) I1 - (x/4) sum_{k>=0} (psi(k+1) + psi(k+2)) t^k / (k! (k+1)!)
    let mut psi_k1 = -EULER_GAMMA;
    let mut psi_k2 = 1.0 - EULER_GAMMA;
    let mut term1 = 1.0;
    let mut sum1 = psi_k1 + psi_k2;
    for k in 1..200 {
        let kf = k as f64;
        harmonic += 1.0 / kf;
        term *= t / (kf * kf);
        sum0 += harmonic * term;
        psi_k1 += 1.0 / kf;
        psi_k2 += 1.0 / (kf + 1.0);
        term1 *= t / (kf * (kf + 1.0));
        sum1 += (psi_k1 + psi_k2) * term1;
        if term <= 1e-18 && term1 <= 1e-18 {
            break;
        }
    }
    let k0 = -(ln_half + EULER_GAMMA) * i0 + sum0;
    let k1 = 1.0 / x + ln_half * i1 - 0.25 * x * sum1;
    (k0, k1)
}

/// `e^{x} (K0(x), K1(x))` from Temme's continued fraction, valid for `x >= 2`.
fn k_scaled_cf2(x: f64) -> (f64, f64) {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..100_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

fn k_scaled_pair(x: f64) -> (f64, f64) {
    if x < K_SERIES_LIMIT {
        let (k0, k1) = k_series(x);
        let e = x.exp();
        (k0 * e, k1 * e)
    } else {
        k_scaled_cf2(x)
    }
}

fn pick(order: BesselOrder, pair: (f64, f64)) -> f64 {
    match order {
        BesselOrder::Zero => pair.0,
        BesselOrder::One => pair.1,
    }
}

/// `I_n(x)`; overflows to infinity past `x ~ 713`, where [`log_bessel_i`] applies.
pub fn bessel_i(order: BesselOrder, x: f64) -> Result<f64, SpecfunError> {
    check_nonnegative("bessel_i", x)?;
    if x <= SERIES_LIMIT {
        return Ok(pick(order, i_series(x)));
    }
    Ok(bessel_i_scaled(order, x)? * x.exp())
}

/// `e^{-x} I_n(x)`.
pub fn bessel_i_scaled(order: BesselOrder, x: f64) -> Result<f64, SpecfunError> {
    check_nonnegative("bessel_i_scaled", x)?;
    Ok(pick(order, i_scaled_pair(x)))
}

/// `ln I_n(x)`; `-inf` for `I1(0)`.
pub fn log_bessel_i(order: BesselOrder, x: f64) -> Result<f64, SpecfunError> {
    check_nonnegative("log_bessel_i", x)?;
    Ok(pick(order, i_scaled_pair(x)).ln() + x)
}

/// `K_n(x)`; underflows to zero past `x ~ 705`, where [`log_bessel_k`] applies.
pub fn bessel_k(order: BesselOrder, x: f64) -> Result<f64, SpecfunError> {
    check_positive("bessel_k", x)?;
    if x < K_SERIES_LIMIT {
        return Ok(pick(order, k_series(x)));
    }
    Ok(pick(order, k_scaled_cf2(x)) * (-x).exp())
}

/// `e^{x} K_n(x)`.
pub fn bessel_k_scaled(order: BesselOrder, x: f64) -> Result<f64, SpecfunError> {
    check_positive("bessel_k_scaled", x)?;
    Ok(pick(order, k_scaled_pair(x)))
}

/// `ln K_n(x)`.
pub fn log_bessel_k(order: BesselOrder, x: f64) -> Result<f64, SpecfunError> {
    check_positive("log_bessel_k", x)?;
    Ok(pick(order, k_scaled_pair(x)).ln() - x)
}

/// `I1(x) / x`, continuous at the origin where it equals 1/2.
pub fn i1_over_x(x: f64) -> Result<f64, SpecfunError> {
    check_nonnegative("i1_over_x", x)?;
    if x <= SERIES_LIMIT {
        let t = 0.25 * x * x;
        let mut term = 0.5;
        let mut sum = term;
        for k in 1..500 {
            let kf = k as f64;
            term *= t / (kf * (kf + 1.0));
            sum += term;
            if term <= sum * 1e-17 {
                break;
            }
        }
        return Ok(sum);
    }
    Ok(bessel_i(BesselOrder::One, x)? / x)
}
