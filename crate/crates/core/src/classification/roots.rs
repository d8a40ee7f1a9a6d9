use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use super::tsets::CoefficientSets;
use crate::algebra::MultiPoly;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBoundCheck {
    pub count: u64,
    pub bound: BigInt,
    pub ok: bool,
}

/// Counts integer roots `(z, h)` of a nonzero polynomial in two variables
/// with `|z| <= X` and `|h| <= X^r`, against `2d(2X^r + 1)`.
pub fn root_bound_check(psi: &MultiPoly, x: u64, r: u32) -> Result<RootBoundCheck> {
    if psi.nvars() != 2 {
        return Err(Error::ArityMismatch { expected: 2, got: psi.nvars() });
    }
    if psi.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let hmax = (x as i64).checked_pow(r).ok_or_else(|| Error::InvalidParams("X^r overflows".into()))?;
    let d = psi.total_degree().unwrap_or(0);
    let xi = x as i64;
    let mut count = 0u64;
    for z in -xi..=xi {
        let slice = psi.specialize(&[Some(BigInt::from(z)), None])?;
        if slice.is_zero() {
            count += 2 * hmax as u64 + 1;
            continue;
        }
        for h in -hmax..=hmax {
            if slice.eval_i64(&[0, h])?.is_zero() {
                count += 1;
            }
        }
    }
    let bound = BigInt::from(2 * d) * BigInt::from(2 * hmax + 1);
    Ok(RootBoundCheck { count, ok: BigInt::from(count) <= bound, bound })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionCount {
    /// Whether some element of `T_{n,m}` is nonzero at the fixed prefix.
    pub hypothesis: bool,
    /// Pairs `(z_{m+1}, h_{m+1})` in `[1, X] × [-X^r, X^r]` killing `T_{n,m+1}`.
    pub count: u64,
    /// `6 D X^r` with `D` the largest total degree in `T_{n,m+1}`.
    pub bound: BigInt,
    /// Every element of `T_{n,m+1}` is identically zero in `(z_{m+1}, h_{m+1})`
    /// after fixing the prefix; expected exactly when the hypothesis fails.
    pub identically_zero: bool,
}

/// Fixes `(z_1..z_m; h_1..h_m)` and counts the common roots of `T_{n,m+1}`
/// in the remaining pair.
pub fn extension_count(
    sets: &CoefficientSets,
    m: usize,
    z: &[i64],
    h: &[i64],
    x: u64,
    r: u32,
) -> Result<ExtensionCount> {
    if m > sets.n || z.len() != m || h.len() != m {
        return Err(Error::InvalidParams("prefix does not match the sublevel".into()));
    }
    let zb: Vec<BigInt> = z.iter().map(|&v| BigInt::from(v)).collect();
    let hb: Vec<BigInt> = h.iter().map(|&v| BigInt::from(v)).collect();
    let hypothesis = sets.eval(m, &zb, &hb)?.iter().any(|v| !v.is_zero());

    let upper = sets.get(m + 1);
    // zh(m+1): z1..z_{m+1}, h1..h_{m+1}
    let mut fixed: Vec<Option<BigInt>> = alloc::vec![None; 2 * (m + 1)];
    for i in 0..m {
        fixed[i] = Some(zb[i].clone());
        fixed[m + 1 + i] = Some(hb[i].clone());
    }
    let slices: Vec<MultiPoly> = upper.iter().map(|p| p.specialize(&fixed)).collect::<Result<_>>()?;
    let identically_zero = slices.iter().all(MultiPoly::is_zero);

    let hmax = (x as i64).checked_pow(r).ok_or_else(|| Error::InvalidParams("X^r overflows".into()))?;
    let mut point = alloc::vec![0i64; 2 * (m + 1)];
    let mut count = 0u64;
    for zn in 1..=x as i64 {
        for hn in -hmax..=hmax {
            point[m] = zn;
            point[2 * m + 1] = hn;
            let mut all = true;
            for s in &slices {
                if !s.eval_i64(&point)?.is_zero() {
                    all = false;
                    break;
                }
            }
            if all {
                count += 1;
            }
        }
    }
    let d = upper.iter().filter_map(MultiPoly::total_degree).max().unwrap_or(0);
    let bound = BigInt::from(6 * d as u64) * BigInt::from(hmax);
    Ok(ExtensionCount { hypothesis, count, bound, identically_zero })
}
