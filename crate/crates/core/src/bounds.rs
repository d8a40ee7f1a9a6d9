//! Exponents and parameter ranges of the mean value estimates, computed
//! exactly over the rationals.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Every derived quantity for one choice of `(s, k, r, κ, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundParams {
    pub s: u32,
    pub k: u32,
    pub r: u32,
    pub kappa: u32,
    pub t: usize,
    /// `deg f_j`; the monomial tuple `k-r, …, 0` unless given.
    pub degrees: Vec<u32>,
    /// `s - v`.
    pub u: BigRational,
    /// `r(r-1)/(4κ)`.
    pub v: BigRational,
    /// `(1 - 1/(2κ)) k(k+1)/2`.
    pub w: BigRational,
    /// `(r-1) - (r-1)/(2κ)`.
    pub delta: BigRational,
    /// `2κ <= k - r + 2`.
    pub kappa_in_range: bool,
    /// `s` does not exceed the sliced range `sliced_s_max`.
    pub s_in_range: bool,
    /// `4s <= (k-r)(k+r+1) + 2`.
    pub aux_constraint: bool,
    /// Named exponents and ranges, in a fixed order.
    pub targets: Vec<(&'static str, BigRational)>,
}

impl BoundParams {
    pub fn target(&self, name: &str) -> Option<&BigRational> {
        self.targets.iter().find(|(n, _)| *n == name).map(|(_, v)| v)
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Computes all ranges and exponents for the given parameters.
///
/// `degrees` may be empty, meaning the monomial tuple of length `k - r + 1`.
pub fn bound_calculator(s: u32, k: u32, r: u32, kappa: u32, degrees: &[u32]) -> Result<BoundParams> {
    if r == 0 || k <= r {
        return Err(Error::InvalidParams(format!("need k > r >= 1, got k={k}, r={r}")));
    }
    if kappa == 0 || s == 0 {
        return Err(Error::InvalidParams("s and κ must be positive".into()));
    }
    let degrees: Vec<u32> = if degrees.is_empty() { (0..=k - r).rev().collect() } else { degrees.to_vec() };
    let t = degrees.len();
    let (si, ki, ri, ka) = (s as i64, k as i64, r as i64, kappa as i64);
    let kk = ki * (ki + 1);

    let v = frac(ri * (ri - 1), 4 * ka);
    let u = q(si) - &v;
    let w = (q(1) - frac(1, 2 * ka)) * frac(kk, 2);
    let delta = q(ri - 1) - frac(ri - 1, 2 * ka);
    let sliced_s_max = frac(kk, 2) - frac(kk - ri * (ri - 1), 4 * ka);

    // the two parity choices of κ at r = 1
    let parity_kappa = if ki % 2 == 1 { (ki + 1) / 2 } else { ki / 2 };
    let diagonal_parity = frac(kk, 2) - frac(kk, 4 * parity_kappa);

    let u1_moment = if w.is_zero() { BigRational::zero() } else { &u / &w * q(kk) };
    let aux_exponent = q(ri * (2 * si - 1) + 1);
    let deg_sum: i64 = degrees.iter().map(|&d| d as i64).sum();
    let aux_second = q(2 * si * (ri + 1) - t as i64 * ri - deg_sum);
    let vinogradov = core::cmp::max(q(si), q(2 * si) - frac(ki * ki + ki - 2 * ri, 2));
    let aux_rhs = (ki - ri) * (ki + ri + 1) + 2;

    let targets = alloc::vec![
        ("diagonal_s_max", frac(ki * ki - 1, 2)),
        ("diagonal_s_max_parity", diagonal_parity),
        ("sliced_s_max", sliced_s_max.clone()),
        ("sliced_excess", delta.clone()),
        ("sliced_exponent", q(si) + &delta),
        ("aux_exponent", aux_exponent.clone()),
        ("aux_conjecture_first", aux_exponent),
        ("aux_conjecture_second", aux_second),
        ("u1_moment", u1_moment.clone()),
        ("u1_exponent", u1_moment / q(2)),
        ("u2_exponent", frac(ri * (ri - 1), 2) + q(ri * (2 * ka - 1) + 1)),
        ("vinogradov_exponent", vinogradov),
        ("aux_constraint_rhs", q(aux_rhs)),
        ("kappa_ceiling", frac(ki - ri + 2, 2)),
        ("kappa_conjectural", q(aux_rhs / 4)),
    ];
    Ok(BoundParams {
        s,
        k,
        r,
        kappa,
        t,
        degrees,
        u,
        v,
        w,
        delta,
        kappa_in_range: 2 * ka <= ki - ri + 2,
        s_in_range: q(si) <= sliced_s_max,
        aux_constraint: 4 * si <= aux_rhs,
        targets,
    })
}

/// `a/b` written as an integer when `b = 1`.
pub fn format_rational(x: &BigRational) -> alloc::string::String {
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
