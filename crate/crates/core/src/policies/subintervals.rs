//! Subinterval lengths for the lower-envelope phase.
//!
//! A batch of `b` slots is cut into `I_0, I_1, ..., I_ell` with `I_0 = d`.
//! During `I_u` (`u >= 1`) the policy serves only arrivals from `I_{u-1}`,
//! so each `I_u` should not exceed the envelope degree that `I_{u-1}`'s
//! arrivals are likely to support.

use crate::error::ParamError;

/// Linearly shrinking lengths: `I_u = floor(d - 19 u sqrt(d ln f))` for
/// `u < ell`, and `I_ell = b - sum_{u<ell} I_u`, where `ell` is the first
/// index with `0 <= I_ell <= d - 19 ell sqrt(d ln f)`.
pub fn subintervals_theoretical(b: u64, d: u64, log_f: f64) -> Result<(usize, Vec<u64>), ParamError> {
    if d == 0 {
        return Err(ParamError::InfeasibleSubintervals("d must be positive".into()));
    }
    let step = 19.0 * (d as f64 * log_f).sqrt();
    let shrunk = |u: usize| d as f64 - u as f64 * step;
    let mut intervals = Vec::new();
    let mut used: u64 = 0;
    for ell in 1.. {
        let prev = shrunk(ell - 1).floor();
        if prev < 1.0 {
            return Err(ParamError::InfeasibleSubintervals(format!(
                "I_{} = {prev} is not positive before the batch of {b} slots is covered",
                ell - 1
            )));
        }
        let prev = prev as u64;
        intervals.push(prev);
        used += prev;
        if used > b {
            return Err(ParamError::InfeasibleSubintervals(format!(
                "lengths overshoot b = {b} at ell = {ell}"
            )));
        }
        let last = b - used;
        if last as f64 <= shrunk(ell) {
            intervals.push(last);
            return Ok((ell, intervals));
        }
    }
    unreachable!()
}

/// Geometric shrink: `I_0 = d`, then
/// `I_u = max(1, floor(rho I_{u-1} - sqrt(c_f rho I_{u-1} ln f)))`, iterated
/// until the lengths cover `b`; the final subinterval is truncated so the
/// lengths sum to `b` exactly.
pub fn subintervals_adaptive(b: u64, d: u64, rho: f64, f: f64, c_f: f64) -> Result<(usize, Vec<u64>), ParamError> {
    if d == 0 || b <= d {
        return Err(ParamError::OutOfRange(format!("need b > d >= 1, got b = {b}, d = {d}")));
    }
    let log_f = f.ln();
    let mut intervals = vec![d];
    let mut used = d;
    let mut prev = d;
    while used < b {
        let p = prev as f64;
        let next = (rho * p - (c_f * rho * p * log_f).sqrt()).floor();
        let next = if next >= 1.0 { next as u64 } else { 1 };
        let next = next.min(b - used);
        intervals.push(next);
        used += next;
        prev = next;
    }
    Ok((intervals.len() - 1, intervals))
}
