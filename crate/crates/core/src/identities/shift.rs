use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::systems::{binomial, UniPoly};
use crate::{Error, Result};

fn check_inputs(f1: &UniPoly, h: &[BigInt], a: &[BigInt]) -> Result<()> {
    if h.len() != a.len() {
        return Err(Error::ArityMismatch { expected: h.len(), got: a.len() });
    }
    if h.iter().all(Zero::is_zero) {
        return Err(Error::ZeroHVector);
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if a[i] == a[j] {
                return Err(Error::RepeatedShift(i + 1, j + 1));
            }
        }
    }
    let k = f1.degree().unwrap_or(0);
    if h.len() > k {
        return Err(Error::InvalidParams(alloc::format!("{} shifts exceed the degree {k}", h.len())));
    }
    Ok(())
}

/// `Σ_l h_l f(z + a_l)` by shifting and summing polynomials.
pub fn shift_direct(f1: &UniPoly, h: &[BigInt], a: &[BigInt]) -> UniPoly {
    let len = f1.coeffs().len();
    let mut total = alloc::vec![BigInt::zero(); len];
    for (hl, al) in h.iter().zip(a) {
        // Horner in the shifted variable: p <- p·(z + a) + c
        let mut p: Vec<BigInt> = Vec::new();
        for c in f1.coeffs().iter().rev() {
            let mut next = alloc::vec![BigInt::zero(); p.len() + 1];
            for (i, pi) in p.iter().enumerate() {
                next[i + 1] += pi;
                next[i] += pi * al;
            }
            next[0] += c;
            p = next;
        }
        for (i, pi) in p.iter().enumerate() {
            total[i] += pi * hl;
        }
    }
    UniPoly::new(total)
}

/// Coefficients `d_i = Σ_{j>=i} c_j binom(j, i) Σ_l h_l a_l^{j-i}` of
/// `F(z) = Σ_l h_l f_1(z + a_l)`, checked against [`shift_direct`].
///
/// With at most `deg f_1` distinct shifts and `h ≠ 0`, `F` is nonconstant.
pub fn shift_poly_coeffs(f1: &UniPoly, h: &[BigInt], a: &[BigInt]) -> Result<UniPoly> {
    check_inputs(f1, h, a)?;
    let c = f1.coeffs();
    let k = c.len().saturating_sub(1);
    let power_sum = |e: usize| -> BigInt { h.iter().zip(a).map(|(hl, al)| hl * num_traits::pow(al.clone(), e)).sum() };
    let moments: Vec<BigInt> = (0..=k).map(power_sum).collect();
    let d: Vec<BigInt> =
        (0..=k).map(|i| (i..=k).map(|j| &c[j] * binomial(j as u32, i as u32) * &moments[j - i]).sum()).collect();
    let formula = UniPoly::new(d);
    if formula != shift_direct(f1, h, a) {
        return Err(Error::Inconsistent("shift coefficients disagree with direct expansion".into()));
    }
    if formula.degree().unwrap_or(0) == 0 {
        return Err(Error::Inconsistent("shifted sum is constant".into()));
    }
    Ok(formula)
}
