//! Adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! Infinite limits are handled by rational maps onto a finite interval.
//! Inverse square-root endpoint singularities are removed by substitution:
//! `x = a + 2 sinh^2(mu/2)` at a flagged left end, `x = b - 2 sinh^2(mu/2)` at a
//! flagged right end, and `x = c - h cos(theta)` when both ends are flagged.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use super::SpecfunError;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const INITIAL_PIECES: usize = 8;

/// Sign of a quadrature result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(x: f64) -> Self {
        if x > 0.0 {
            Sign::Positive
        } else if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Negative => -1.0,
            Sign::Zero => 0.0,
            Sign::Positive => 1.0,
        }
    }
}

/// Integral value and error estimate, both stored as natural logarithms so that
/// magnitudes far outside the `f64` range survive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub log_magnitude: f64,
    pub sign: Sign,
    pub log_abs_error: f64,
    pub evaluations: usize,
}

impl QuadratureResult {
    pub fn from_value(value: f64, abs_error: f64, evaluations: usize) -> Self {
        let sign = Sign::of(value);
        QuadratureResult {
            log_magnitude: if sign == Sign::Zero {
                f64::NEG_INFINITY
            } else {
                value.abs().ln()
            },
            sign,
            log_abs_error: abs_error.abs().ln(),
            evaluations,
        }
    }

    /// Linear value; overflows to infinity or underflows to zero outside the `f64` range.
    pub fn value(&self) -> f64 {
        match self.sign {
            Sign::Zero => 0.0,
            s => s.as_f64() * self.log_magnitude.exp(),
        }
    }

    pub fn abs_error_estimate(&self) -> f64 {
        self.log_abs_error.exp()
    }

    pub fn log10_magnitude(&self) -> f64 {
        self.log_magnitude / std::f64::consts::LN_10
    }

    /// Error estimate relative to the magnitude.
    pub fn relative_error(&self) -> f64 {
        (self.log_abs_error - self.log_magnitude).exp()
    }
}

/// Tolerances and limits for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of bisections applied to any one initial piece.
    pub max_depth: u32,
    pub max_evaluations: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            rel_tol: 1e-9,
            abs_tol: 0.0,
            max_depth: 60,
            max_evaluations: 2_000_000,
        }
    }
}

impl QuadratureOptions {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }
}

/// Which endpoints carry an inverse square-root singularity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SingularEnds {
    pub left: bool,
    pub right: bool,
}

impl SingularEnds {
    pub const NONE: SingularEnds = SingularEnds {
        left: false,
        right: false,
    };
    pub const LEFT: SingularEnds = SingularEnds {
        left: true,
        right: false,
    };
    pub const RIGHT: SingularEnds = SingularEnds {
        left: false,
        right: true,
    };
    pub const BOTH: SingularEnds = SingularEnds {
        left: true,
        right: true,
    };
}

#[derive(Debug, Clone, Copy)]
enum Substitution {
    Identity,
    CoshLeft { a: f64 },
    CoshRight { b: f64 },
    CosBoth { a: f64, b: f64 },
}

impl Substitution {
    /// Returns `(x, dx/dy)`.
    fn apply(self, y: f64) -> (f64, f64) {
        match self {
            Substitution::Identity => (y, 1.0),
            Substitution::CoshLeft { a } => {
                let s = (0.5 * y).sinh();
                (a + 2.0 * s * s, y.sinh())
            }
            Substitution::CoshRight { b } => {
                let s = (0.5 * y).sinh();
                (b - 2.0 * s * s, y.sinh())
            }
            Substitution::CosBoth { a, b } => {
                let h = 0.5 * (b - a);
                let x = if y < std::f64::consts::FRAC_PI_2 {
                    let s = (0.5 * y).sin();
                    a + 2.0 * h * s * s
                } else {
                    let c = (0.5 * y).cos();
                    b - 2.0 * h * c * c
                };
                (x, h * y.sin())
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Compactify {
    Finite,
    Upper { y0: f64 },
    Lower { y1: f64 },
    Both,
}

/// Composite change of variables `t -> y -> x` onto a finite `t` interval.
#[derive(Debug, Clone, Copy)]
struct Mapping {
    sub: Substitution,
    outer: Compactify,
    t0: f64,
    t1: f64,
}

impl Mapping {
    fn new(a: f64, b: f64, ends: SingularEnds) -> Result<Self, SpecfunError> {
        if a.is_nan() || b.is_nan() || a >= b {
            return Err(SpecfunError::Domain {
                function: "integrate",
                value: a,
                reason: "limits must satisfy a < b",
            });
        }
        if (ends.left && !a.is_finite()) || (ends.right && !b.is_finite()) {
            return Err(SpecfunError::Domain {
                function: "integrate",
                value: if ends.left { a } else { b },
                reason: "singular endpoint flag on an infinite limit",
            });
        }
        let (sub, y0, y1) = match (ends.left, ends.right) {
            (false, false) => (Substitution::Identity, a, b),
            (true, true) => (Substitution::CosBoth { a, b }, 0.0, std::f64::consts::PI),
            (true, false) => {
                let y1 = if b.is_finite() {
                    (b - a + 1.0).acosh()
                } else {
                    f64::INFINITY
                };
                (Substitution::CoshLeft { a }, 0.0, y1)
            }
            (false, true) => {
                let y1 = if a.is_finite() {
                    (b - a + 1.0).acosh()
                } else {
                    f64::INFINITY
                };
                (Substitution::CoshRight { b }, 0.0, y1)
            }
        };
        let (outer, t0, t1) = match (y0.is_finite(), y1.is_finite()) {
            (true, true) => (Compactify::Finite, y0, y1),
            (true, false) => (Compactify::Upper { y0 }, 0.0, 1.0),
            (false, true) => (Compactify::Lower { y1 }, 0.0, 1.0),
            (false, false) => (Compactify::Both, -1.0, 1.0),
        };
        Ok(Mapping { sub, outer, t0, t1 })
    }

    /// Returns `(x, dx/dt)`, or `None` when `t` maps to infinity.
    fn apply(&self, t: f64) -> Option<(f64, f64)> {
        let (y, jy) = match self.outer {
            Compactify::Finite => (t, 1.0),
            Compactify::Upper { y0 } => {
                let d = 1.0 - t;
                (y0 + t / d, 1.0 / (d * d))
            }
            Compactify::Lower { y1 } => {
                let d = 1.0 - t;
                (y1 - t / d, 1.0 / (d * d))
            }
            Compactify::Both => {
                let d = 1.0 - t * t;
                (t / d, (1.0 + t * t) / (d * d))
            }
        };
        if !y.is_finite() || !jy.is_finite() {
            return None;
        }
        let (x, jx) = self.sub.apply(y);
        if !x.is_finite() || !jx.is_finite() {
            return None;
        }
        Some((x, jx * jy))
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    result: f64,
    error: f64,
    floor: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

struct Outcome {
    value: f64,
    error: f64,
    evaluations: usize,
}

enum Failure {
    NonFinite(f64),
    Limit { error: f64, tolerance: f64, evaluations: usize },
}

fn gk15<G: FnMut(f64) -> f64>(g: &mut G, a: f64, b: f64, depth: u32) -> Result<Segment, f64> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = g(centre);
    if !fc.is_finite() {
        return Err(centre);
    }
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = g(centre - dx);
        let f2 = g(centre + dx);
        if !f1.is_finite() {
            return Err(centre - dx);
        }
        if !f2.is_finite() {
            return Err(centre + dx);
        }
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(floor);
    }
    Ok(Segment {
        a,
        b,
        result,
        error,
        floor,
        depth,
    })
}

fn adaptive<G: FnMut(f64) -> f64>(
    mut g: G,
    t0: f64,
    t1: f64,
    opts: &QuadratureOptions,
) -> Result<Outcome, Failure> {
    let mut heap = BinaryHeap::new();
    let mut settled: Vec<Segment> = Vec::new();
    let mut depth_limited = false;
    let mut evaluations = 0usize;
    let width = (t1 - t0) / INITIAL_PIECES as f64;
    for k in 0..INITIAL_PIECES {
        let a = t0 + width * k as f64;
        let b = if k + 1 == INITIAL_PIECES {
            t1
        } else {
            a + width
        };
        let seg = gk15(&mut g, a, b, 0).map_err(Failure::NonFinite)?;
        evaluations += 15;
        heap.push(seg);
    }
    let tolerance = |value: f64| opts.abs_tol.max(opts.rel_tol * value.abs());
    loop {
        let (value, error) = heap
            .iter()
            .chain(settled.iter())
            .fold((0.0, 0.0), |(v, e), s| (v + s.result, e + s.error));
        if error <= tolerance(value) {
            return Ok(Outcome {
                value,
                error,
                evaluations,
            });
        }
        let Some(worst) = heap.pop() else {
            if depth_limited {
                return Err(Failure::Limit {
                    error,
                    tolerance: tolerance(value),
                    evaluations,
                });
            }
            // Every remaining piece sits at its roundoff floor.
            return Ok(Outcome {
                value,
                error,
                evaluations,
            });
        };
        if worst.error <= worst.floor * (1.0 + 1e-12) {
            settled.push(worst);
            continue;
        }
        if worst.depth >= opts.max_depth {
            depth_limited = true;
            settled.push(worst);
            continue;
        }
        if evaluations + 30 > opts.max_evaluations {
            return Err(Failure::Limit {
                error,
                tolerance: tolerance(value),
                evaluations,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk15(&mut g, worst.a, mid, worst.depth + 1).map_err(Failure::NonFinite)?;
        let right = gk15(&mut g, mid, worst.b, worst.depth + 1).map_err(Failure::NonFinite)?;
        evaluations += 30;
        heap.push(left);
        heap.push(right);
    }
}

fn failure_to_error(failure: Failure, mapping: &Mapping) -> SpecfunError {
    match failure {
        Failure::NonFinite(t) => SpecfunError::NonFinite {
            x: mapping.apply(t).map_or(t, |(x, _)| x),
        },
        Failure::Limit {
            error,
            tolerance,
            evaluations,
        } => SpecfunError::NoConvergence {
            error,
            tolerance,
            evaluations,
        },
    }
}

/// Integrates `f` over `[a, b]`. Either limit may be infinite.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    ends: SingularEnds,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult, SpecfunError> {
    let mapping = Mapping::new(a, b, ends)?;
    let g = |t: f64| match mapping.apply(t) {
        Some((x, jac)) if jac != 0.0 => f(x) * jac,
        _ => 0.0,
    };
    let out = adaptive(g, mapping.t0, mapping.t1, opts)
        .map_err(|e| failure_to_error(e, &mapping))?;
    Ok(QuadratureResult::from_value(
        out.value,
        out.error,
        out.evaluations,
    ))
}

/// Integrates a positive function supplied through its natural logarithm.
///
/// The integrand is rescaled by its largest sampled value before exponentiation,
/// so results like `1e-300` or `1e300` do not underflow or overflow.
pub fn integrate_log<F: Fn(f64) -> f64>(
    log_f: F,
    a: f64,
    b: f64,
    ends: SingularEnds,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult, SpecfunError> {
    let mapping = Mapping::new(a, b, ends)?;
    let log_g = |t: f64| match mapping.apply(t) {
        Some((x, jac)) if jac > 0.0 => log_f(x) + jac.ln(),
        _ => f64::NEG_INFINITY,
    };
    const PROBES: usize = 256;
    let mut shift = f64::NEG_INFINITY;
    for k in 0..PROBES {
        let t = mapping.t0 + (mapping.t1 - mapping.t0) * (k as f64 + 0.5) / PROBES as f64;
        let lg = log_g(t);
        if lg.is_nan() || lg == f64::INFINITY {
            return Err(SpecfunError::NonFinite {
                x: mapping.apply(t).map_or(t, |(x, _)| x),
            });
        }
        shift = shift.max(lg);
    }
    for _attempt in 0..4 {
        if shift == f64::NEG_INFINITY {
            return Ok(QuadratureResult {
                log_magnitude: f64::NEG_INFINITY,
                sign: Sign::Zero,
                log_abs_error: f64::NEG_INFINITY,
                evaluations: PROBES,
            });
        }
        let seen = Cell::new(f64::NEG_INFINITY);
        let g = |t: f64| {
            let lg = log_g(t);
            if lg > seen.get() {
                seen.set(lg);
            }
            if lg.is_nan() {
                f64::NAN
            } else {
                (lg - shift).exp()
            }
        };
        match adaptive(g, mapping.t0, mapping.t1, opts) {
            Ok(out) => {
                let mag = if out.value > 0.0 {
                    shift + out.value.ln()
                } else {
                    f64::NEG_INFINITY
                };
                return Ok(QuadratureResult {
                    log_magnitude: mag,
                    sign: Sign::of(out.value),
                    log_abs_error: shift + out.error.ln(),
                    evaluations: out.evaluations + PROBES,
                });
            }
            Err(Failure::NonFinite(_)) if seen.get() > shift && seen.get().is_finite() => {
                // A peak the probes missed overflowed; rescale to it and retry.
                shift = seen.get();
            }
            Err(e) => return Err(failure_to_error(e, &mapping)),
        }
    }
    Err(SpecfunError::NonFinite { x: a })
}

/// Nested integration of `f(x, y)` over a rectangle; limits may be infinite.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    x_range: (f64, f64),
    x_ends: SingularEnds,
    y_range: (f64, f64),
    y_ends: SingularEnds,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult, SpecfunError> {
    let inner_opts = opts.with_rel_tol(opts.rel_tol * 0.1);
    let inner_failure: Cell<Option<SpecfunError>> = Cell::new(None);
    let evaluations = Cell::new(0usize);
    let outer = |x: f64| {
        match integrate(|y| f(x, y), y_range.0, y_range.1, y_ends, &inner_opts) {
            Ok(r) => {
                evaluations.set(evaluations.get() + r.evaluations);
                r.value()
            }
            Err(e) => {
                let prev = inner_failure.take();
                inner_failure.set(Some(prev.unwrap_or(e)));
                0.0
            }
        }
    };
    let result = integrate(outer, x_range.0, x_range.1, x_ends, opts)?;
    if let Some(e) = inner_failure.take() {
        return Err(e);
    }
    Ok(QuadratureResult {
        evaluations: evaluations.get(),
        ..result
    })
}
