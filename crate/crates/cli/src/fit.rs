//! Least-squares slope of `log(count)` against `log(X)`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FitError {
    #[error("need at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("count at X = {0} is not positive")]
    NonPositiveCount(u64),
    #[error("X values must be strictly increasing")]
    NotIncreasing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// `(X, count)` with counts as decimal strings.
    pub points: Vec<(u64, String)>,
    pub slope: f64,
    pub intercept: f64,
    /// Largest `|log(count) - (intercept + slope·log X)|`.
    pub max_residual: f64,
}

/// Natural log of a positive integer of any size.
pub fn ln_big(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().expect("64-bit head");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn fit_exponent(points: &[(u64, BigInt)]) -> Result<FitResult, FitError> {
    if points.len() < 2 {
        return Err(FitError::TooFewPoints(points.len()));
    }
    if points.windows(2).any(|w| w[0].0 >= w[1].0) || points[0].0 == 0 {
        return Err(FitError::NotIncreasing);
    }
    if let Some((x, _)) = points.iter().find(|(_, c)| !c.is_positive()) {
        return Err(FitError::NonPositiveCount(*x));
    }
    let xs: Vec<f64> = points.iter().map(|(x, _)| (*x as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, c)| ln_big(c)).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).abs()).fold(0.0, f64::max);
    Ok(FitResult { points: points.iter().map(|(x, c)| (*x, c.to_string())).collect(), slope, intercept, max_residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(u64, u64)]) -> Vec<(u64, BigInt)> {
        v.iter().map(|&(x, c)| (x, BigInt::from(c))).collect()
    }

    #[test]
    fn exact_power_law() {
        let f = fit_exponent(&pts(&[(2, 4), (4, 16), (8, 64)])).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-9);
        assert!(f.max_residual < 1e-9);
        assert!(f.intercept.abs() < 1e-9);
    }

    #[test]
    fn linear_counts() {
        let f = fit_exponent(&pts(&[(8, 8), (16, 16), (32, 32)])).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-12);
    }

    #[test]
    fn huge_counts() {
        let x: BigInt = BigInt::from(1) << 2000;
        let y: BigInt = BigInt::from(1) << 4000;
        let f = fit_exponent(&[(2, x), (4, y)]).unwrap();
        assert!((f.slope - 2000.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(fit_exponent(&pts(&[(2, 4)])), Err(FitError::TooFewPoints(1)));
        assert_eq!(fit_exponent(&pts(&[(4, 4), (2, 4)])), Err(FitError::NotIncreasing));
        assert_eq!(fit_exponent(&pts(&[(2, 4), (4, 0)])), Err(FitError::NonPositiveCount(4)));
    }
}
