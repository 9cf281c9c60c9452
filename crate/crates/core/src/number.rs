//! Scalar number theory: distance to the nearest integer, shifted norms and
//! the pointwise Littlewood statistics.
//!
//! Conventions: the shift enters with a minus sign (‖nα − γ_n‖), logarithms
//! are natural, and statistics start at n = 2 because ln 1 = 0.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// First index at which the logarithmic statistics are defined.
pub const STATISTIC_START: u64 = 2;

/// ‖x‖, the distance from `x` to the nearest integer.
pub fn dist_to_nearest_int(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return domain(format!("distance to nearest integer of non-finite {x}"));
    }
    Ok(nearest_int_dist(x))
}

#[inline(always)]
pub(crate) fn nearest_int_dist(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// ‖n·x − shift‖ without precondition checks.
#[inline(always)]
pub fn shifted_norm_unchecked(n: u64, x: f64, shift: f64) -> f64 {
    nearest_int_dist((n as f64) * x - shift)
}

/// ‖n·x − shift‖ for n ≥ 1.
pub fn shifted_norm(n: u64, x: f64, shift: f64) -> Result<f64> {
    if n < 1 {
        return domain("shifted norm needs n >= 1");
    }
    if !(x.is_finite() && shift.is_finite()) {
        return domain(format!("shifted norm of non-finite input (x = {x}, shift = {shift})"));
    }
    Ok(shifted_norm_unchecked(n, x, shift))
}

#[inline(always)]
pub(crate) fn n_log_n(n: u64) -> f64 {
    let x = n as f64;
    x * x.ln()
}

/// s_n = n·ln n·‖nα − γ_n‖·‖nβ − δ_n‖.
pub fn littlewood_statistic(n: u64, alpha: f64, beta: f64, shifts: (f64, f64)) -> Result<f64> {
    if n < STATISTIC_START {
        return domain(format!("statistic needs n >= {STATISTIC_START}, got {n}"));
    }
    let a = shifted_norm(n, alpha, shifts.0)?;
    let b = shifted_norm(n, beta, shifts.1)?;
    Ok(n_log_n(n) * a * b)
}

/// The unshifted pair `(n ln n ‖nα‖‖nβ‖, n (ln n)² ‖nα‖‖nβ‖)`.
pub fn deterministic_statistics(n: u64, alpha: f64, beta: f64) -> Result<(f64, f64)> {
    if n < STATISTIC_START {
        return domain(format!("statistic needs n >= {STATISTIC_START}, got {n}"));
    }
    let base = littlewood_statistic(n, alpha, beta, (0.0, 0.0))?;
    Ok((base, base * (n as f64).ln()))
}

/// One checkpoint of a statistic trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatisticPoint {
    pub n: u64,
    pub value: f64,
    pub running_min: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_int_examples() {
        assert_eq!(dist_to_nearest_int(0.75).unwrap(), 0.25);
        assert_eq!(dist_to_nearest_int(-3.0).unwrap(), 0.0);
        assert!((dist_to_nearest_int(10.3).unwrap() - 0.3).abs() < 1e-14);
        assert_eq!(dist_to_nearest_int(0.5).unwrap(), 0.5);
        assert_eq!(dist_to_nearest_int(-0.5).unwrap(), 0.5);
        assert!(dist_to_nearest_int(f64::NAN).is_err());
        assert!(dist_to_nearest_int(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn shifted_norm_examples() {
        assert_eq!(shifted_norm(2, 0.5, 0.0).unwrap(), 0.0);
        assert_eq!(shifted_norm(1, 0.25, 0.5).unwrap(), 0.25);
        assert!(shifted_norm(0, 0.25, 0.5).is_err());
    }

    #[test]
    fn statistic_examples() {
        for n in 2..50 {
            assert_eq!(littlewood_statistic(n, 3.0, -1.0, (0.0, 0.0)).unwrap(), 0.0);
        }
        let v = littlewood_statistic(2, 0.25, 0.25, (0.0, 0.0)).unwrap();
        assert!((v - 2f64.ln() / 2.0).abs() < 1e-15);
        assert!(littlewood_statistic(1, 0.25, 0.25, (0.0, 0.0)).is_err());
    }

    #[test]
    fn deterministic_examples() {
        let (a, b) = deterministic_statistics(2, 0.25, 0.25).unwrap();
        assert!((a - 2f64.ln() / 2.0).abs() < 1e-15);
        assert!((b - 2f64.ln().powi(2) / 2.0).abs() < 1e-15);
        // p/q = 3/7: both components vanish on multiples of 7.
        let x = 3.0 / 7.0;
        for k in 1..200u64 {
            let (a, b) = deterministic_statistics(7 * k, x, x).unwrap();
            assert!(a < 1e-9 && b < 1e-9, "n = {}", 7 * k);
        }
        assert!(deterministic_statistics(1, 0.1, 0.1).is_err());
    }
}
