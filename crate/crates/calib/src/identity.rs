//! Closed-form parameter identities.
//!
//! Early in an epidemic the infected stock grows at rate g0 = (R0 − 1)/T_inf
//! where T_inf = 1/ρ is the mean infectious span, so observing (R0, g0) pins
//! the recovery rate. Separately, an interior agent meets d · π · p² others
//! per day, so a daily contact target pins the contagion radius given the
//! density.

use crate::CalibError;

/// Recovery rate implied by the basic reproduction number and the initial
/// daily growth rate: ρ = g0 / (r0 − 1).
pub fn rho_from_growth(r0: f64, g0: f64) -> Result<f64, CalibError> {
    if !(r0 > 1.0) {
        return Err(CalibError::DegenerateGrowthIdentity { r0 });
    }
    if !(g0 > 0.0) {
        return Err(CalibError::NonPositiveGrowth(g0));
    }
    Ok(g0 / (r0 - 1.0))
}

/// Mean infectious span implied by the same identity: T_inf = (r0 − 1)/g0.
pub fn infectious_span(r0: f64, g0: f64) -> Result<f64, CalibError> {
    rho_from_growth(r0, g0).map(f64::recip)
}

/// Contagion radius whose contact circle yields `c_target` daily contacts at
/// the given density: p = sqrt(c_target / (density · π)). The radius must
/// fit inside the city.
pub fn radius_for_contacts(
    c_target: f64,
    density: f64,
    city_side: f64,
) -> Result<f64, CalibError> {
    if !(c_target >= 0.0 && c_target.is_finite() && density > 0.0 && density.is_finite()) {
        return Err(CalibError::BadContactInputs);
    }
    let radius = (c_target / (density * std::f64::consts::PI)).sqrt();
    if radius >= city_side {
        return Err(CalibError::RadiusExceedsCity { radius, city_side });
    }
    Ok(radius)
}
