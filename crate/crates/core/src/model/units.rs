use super::ModelError;

/// Non-dimensional Planck constant `ħ / sqrt(m d α)` from SI inputs.
///
/// `d` is half the center separation and `alpha` the Coulomb coupling of the
/// stronger center, in SI units.
pub fn nondimensionalize(hbar_si: f64, m: f64, d: f64, alpha: f64) -> Result<f64, ModelError> {
    for (name, x) in [("hbar", hbar_si), ("m", m), ("d", d), ("alpha", alpha)] {
        if !(x.is_finite() && x > 0.0) {
            return Err(ModelError::Domain(format!("{name} must be positive, got {x}")));
        }
    }
    Ok(hbar_si / (m * d * alpha).sqrt())
}
