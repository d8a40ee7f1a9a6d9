//! Dense linear algebra used by the dependency search: rank modulo a prime
//! and fraction-free integer elimination.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{add_mod, mul_mod};

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Dimension of the right kernel of `rows` over `GF(p)`.
///
/// Every row must have the same length; that length is the column count.
pub fn nullity_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = pow_mod(rows[rank][c], p - 2, p);
        for v in &mut rows[rank][c..] {
            *v = mul_mod(*v, inv, p);
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[c] == 0 {
                continue;
            }
            let factor = p - row[c];
            for j in c..ncols {
                row[j] = add_mod(row[j], mul_mod(factor, pivot_row[j], p), p);
            }
        }
        rank += 1;
    }
    ncols - rank
}

/// Kernel basis of an integer matrix, one primitive integer vector per
/// free column (in column order).
///
/// Elimination is fraction-free (Bareiss); rationals appear only in the
/// final back-substitution and are cleared before returning.
pub fn integer_kernel(mut m: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let ncols = m.first().map_or(0, Vec::len);
    let nrows = m.len();
    let mut prev = BigInt::one();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let (head, tail) = m.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            let lead = core::mem::take(&mut row[c]);
            for j in c + 1..ncols {
                let v = &prow[c] * &row[j] - &lead * &prow[j];
                let (q, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss step not exact");
                row[j] = q;
            }
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }

    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = alloc::vec![BigRational::zero(); ncols];
            x[f] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate().rev() {
                if pc > f {
                    continue;
                }
                let mut acc = BigRational::zero();
                for j in pc + 1..ncols {
                    if !m[i][j].is_zero() && !x[j].is_zero() {
                        acc += BigRational::from_integer(m[i][j].clone()) * &x[j];
                    }
                }
                x[pc] = -acc / BigRational::from_integer(m[i][pc].clone());
            }
            clear_denominators(&x)
        })
        .collect()
}

fn clear_denominators(x: &[BigRational]) -> Vec<BigInt> {
    let l = x.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let ints: Vec<BigInt> = x.iter().map(|q| (q * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|v| v / &g).collect()
}

/// Gcd of a vector's entries made positive, or zero for a zero vector.
pub(crate) fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x)).abs()
}
