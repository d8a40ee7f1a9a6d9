//! Certified search for integer linear relations among polynomials and for
//! algebraic relations among a family of generators.
//!
//! Candidate kernels are screened by evaluating at random points modulo two
//! primes just below 2^62. A nontrivial screen is followed by an exact
//! kernel computation over random integer points and a symbolic expansion
//! that certifies the relation; nothing uncertified is returned.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::{content, integer_kernel, nullity_mod};
use super::monomial::Monomial;
use super::poly::{mul_mod, MultiPoly, VarOrder};
use crate::{Error, Result};

const SCREEN_PRIMES: [u64; 2] = [4_611_686_018_427_387_847, 4_611_686_018_427_387_817];

#[derive(Clone, Debug)]
pub struct DependencyOptions {
    pub seed: u64,
    /// Evaluation points beyond the column count.
    pub extra_points: usize,
    /// Integer sample points are drawn from `[-sample_bound, sample_bound]`.
    pub sample_bound: i64,
    pub max_attempts: u32,
}

impl Default for DependencyOptions {
    fn default() -> Self {
        DependencyOptions { seed: 0x5eed_0f51_1ce0, extra_points: 8, sample_bound: 1000, max_attempts: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyResult {
    pub found: bool,
    /// Primitive integer coefficients, one per input column; empty when not found.
    pub coefficients: Vec<BigInt>,
    pub degree: u32,
    /// For algebraic searches, the relation as a polynomial in `w1..`.
    pub relation: Option<MultiPoly>,
}

impl DependencyResult {
    fn none() -> Self {
        DependencyResult { found: false, coefficients: Vec::new(), degree: 0, relation: None }
    }
}

/// All exponent vectors in `nvars` variables of total degree at most
/// `degree`, in increasing graded-lex order.
pub fn monomials_up_to(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(prefix: &mut Vec<u32>, left: usize, budget: u32, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial::new(prefix.clone()));
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            rec(prefix, left - 1, budget - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(nvars), nvars, degree, &mut out);
    out.sort();
    out
}

/// Finds a primitive integer vector `c` with `Σ c_i polys_i = 0`.
///
/// The sign is fixed so the first nonzero coefficient is positive.
pub fn linear_dependency(polys: &[MultiPoly], opts: &DependencyOptions) -> Result<DependencyResult> {
    let first = polys.first().ok_or_else(|| Error::InvalidParams("no polynomials given".into()))?;
    let vars = first.vars().clone();
    if polys.iter().any(|p| *p.vars() != vars) {
        return Err(Error::VarOrderMismatch);
    }
    let certify = |c: &[BigInt]| {
        let mut acc = MultiPoly::zero(&vars);
        for (p, ci) in polys.iter().zip(c) {
            if !ci.is_zero() {
                acc = &acc + &p.scale(ci);
            }
        }
        acc.is_zero()
    };
    let found = kernel_search(
        polys.len(),
        vars.len(),
        |pt, p| polys.iter().map(|q| q.eval_mod(pt, p).expect("arity checked")).collect(),
        |pt| polys.iter().map(|q| q.eval(pt).expect("arity checked")).collect(),
        certify,
        opts,
    )?;
    Ok(match found {
        None => DependencyResult::none(),
        Some(mut c) => {
            if c.iter().find(|v| !v.is_zero()).is_some_and(Signed::is_negative) {
                c.iter_mut().for_each(|v| *v = -&*v);
            }
            let degree = polys
                .iter()
                .zip(&c)
                .filter(|(_, ci)| !ci.is_zero())
                .filter_map(|(p, _)| p.total_degree())
                .max()
                .unwrap_or(0);
            DependencyResult { found: true, coefficients: c, degree, relation: None }
        }
    })
}

/// Looks for a polynomial relation of total degree at most `degree_cap`
/// among `generators`, over all monomials in `w1..w_m` up to that degree.
///
/// The returned relation is primitive with a positive coefficient on its
/// graded-lex leading monomial.
pub fn algebraic_dependency(
    generators: &[MultiPoly],
    degree_cap: u32,
    opts: &DependencyOptions,
) -> Result<DependencyResult> {
    let first = generators.first().ok_or_else(|| Error::InvalidParams("no generators given".into()))?;
    let vars = first.vars().clone();
    if generators.iter().any(|p| *p.vars() != vars) {
        return Err(Error::VarOrderMismatch);
    }
    let wvars = VarOrder::w(generators.len());
    let monos = monomials_up_to(generators.len(), degree_cap);
    let build = |c: &[BigInt]| -> MultiPoly {
        let terms =
            monos.iter().zip(c).filter(|(_, ci)| !ci.is_zero()).map(|(m, ci)| (m.exponents().to_vec(), ci.clone()));
        MultiPoly::from_terms(&wvars, terms).expect("arity matches")
    };
    let certify = |c: &[BigInt]| {
        let psi = build(c);
        !psi.is_zero() && psi.compose(generators).is_ok_and(|e| e.is_zero())
    };
    let eval_mod = |pt: &[u64], p: u64| {
        let vals: Vec<u64> = generators.iter().map(|g| g.eval_mod(pt, p).expect("arity checked")).collect();
        let pows = powers(&vals, degree_cap, |a, b| mul_mod(*a, *b, p), 1);
        monos
            .iter()
            .map(|m| m.exponents().iter().enumerate().fold(1u64, |acc, (i, &e)| mul_mod(acc, pows[i][e as usize], p)))
            .collect()
    };
    let eval_exact = |pt: &[BigInt]| {
        let vals: Vec<BigInt> = generators.iter().map(|g| g.eval(pt).expect("arity checked")).collect();
        let pows = powers(&vals, degree_cap, |a, b| a * b, BigInt::one());
        monos
            .iter()
            .map(|m| m.exponents().iter().enumerate().fold(BigInt::one(), |acc, (i, &e)| acc * &pows[i][e as usize]))
            .collect()
    };
    let found = kernel_search(monos.len(), vars.len(), eval_mod, eval_exact, certify, opts)?;
    Ok(match found {
        None => DependencyResult::none(),
        Some(c) => {
            let psi = build(&c);
            let normalized = psi.normalized();
            let sign = if normalized == psi { BigInt::one() } else { -BigInt::one() };
            let coefficients = c.iter().map(|v| v * &sign).collect();
            DependencyResult {
                found: true,
                coefficients,
                degree: normalized.total_degree().unwrap_or(0),
                relation: Some(normalized),
            }
        }
    })
}

fn powers<T: Clone>(vals: &[T], max: u32, mul: impl Fn(&T, &T) -> T, one: T) -> Vec<Vec<T>> {
    vals.iter()
        .map(|v| {
            let mut row = vec![one.clone()];
            for k in 1..=max as usize {
                let next = mul(&row[k - 1], v);
                row.push(next);
            }
            row
        })
        .collect()
}

fn kernel_search(
    ncols: usize,
    nvars: usize,
    eval_mod: impl Fn(&[u64], u64) -> Vec<u64>,
    eval_exact: impl Fn(&[BigInt]) -> Vec<BigInt>,
    certify: impl Fn(&[BigInt]) -> bool,
    opts: &DependencyOptions,
) -> Result<Option<Vec<BigInt>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let npts = ncols + opts.extra_points.max(1);

    // a primitive relation survives reduction modulo every prime, so a
    // trivial kernel at either prime rules relations out
    for &p in &SCREEN_PRIMES {
        let rows: Vec<Vec<u64>> = (0..npts)
            .map(|_| {
                let pt: Vec<u64> = (0..nvars).map(|_| rng.gen_range(0..p)).collect();
                eval_mod(&pt, p)
            })
            .collect();
        if nullity_mod(rows, p) == 0 {
            return Ok(None);
        }
    }

    let mut rows_wanted = npts;
    let mut bound = opts.sample_bound.max(2);
    for _ in 0..opts.max_attempts.max(1) {
        let rows: Vec<Vec<BigInt>> = (0..rows_wanted)
            .map(|_| {
                let pt: Vec<BigInt> = (0..nvars).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
                eval_exact(&pt)
            })
            .collect();
        let kernel = integer_kernel(rows);
        let Some(candidate) = kernel.into_iter().next() else {
            return Ok(None);
        };
        debug_assert!(content(&candidate).is_one());
        if certify(&candidate) {
            return Ok(Some(candidate));
        }
        rows_wanted *= 2;
        bound = bound.saturating_mul(8);
    }
    Err(Error::Inconsistent("kernel candidate failed symbolic certification".into()))
}
