//! Closed-form bounds used when reading experiment output.

use crate::error::ExperimentError;

/// Discrete-time Kingman bound on the mean of a G/G/1 backlog with arrival
/// mean `lambda`, arrival second moment `m2x`, service mean `mu` and service
/// second moment `m2y`:
///
/// ```text
/// (m2x + m2y - 2 lambda mu) / (2 (mu - lambda))
/// ```
pub fn kingman_bound(lambda: f64, m2x: f64, mu: f64, m2y: f64) -> Result<f64, ExperimentError> {
    if [lambda, m2x, mu, m2y].iter().any(|v| !v.is_finite()) {
        return Err(ExperimentError::OutOfRange("moments must be finite".into()));
    }
    if lambda >= mu {
        return Err(ExperimentError::Unstable { lambda, mu });
    }
    Ok((m2x + m2y - 2.0 * lambda * mu) / (2.0 * (mu - lambda)))
}

/// Binomial concentration bounds for deviation `x` around `mean`:
/// the lower-tail bound `exp(-x^2 / (2 mean))` and the upper-tail bound
/// `exp(-x^2 / (2 (mean + x/3)))`.
pub fn binomial_tail_bounds(mean: f64, x: f64) -> Result<(f64, f64), ExperimentError> {
    if !(mean.is_finite() && mean > 0.0) {
        return Err(ExperimentError::OutOfRange(format!("mean = {mean} must be positive")));
    }
    if !(x.is_finite() && x > 0.0) {
        return Err(ExperimentError::OutOfRange(format!("x = {x} must be positive")));
    }
    let lower = (-x * x / (2.0 * mean)).exp();
    let upper = (-x * x / (2.0 * (mean + x / 3.0))).exp();
    Ok((lower, upper))
}
