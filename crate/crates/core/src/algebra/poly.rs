use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::monomial::Monomial;
use crate::{Error, Result};

/// Ordered list of variable names shared by polynomials that interact.
///
/// The position of a name is the position of its exponent in every
/// [`Monomial`]; earlier variables weigh more in the graded-lex order.
#[derive(Clone, Debug)]
pub struct VarOrder(Arc<[String]>);

impl VarOrder {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        VarOrder(names.into_iter().map(Into::into).collect::<Vec<_>>().into())
    }

    /// `z1..zn, h1..hn`, the order used for every σ-form expansion.
    pub fn zh(n: usize) -> Self {
        let z = (1..=n).map(|i| format!("z{i}"));
        let h = (1..=n).map(|i| format!("h{i}"));
        VarOrder::new(z.chain(h))
    }

    /// `w1..w_count`.
    pub fn w(count: usize) -> Self {
        VarOrder::new((1..=count).map(|i| format!("w{i}")))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

impl PartialEq for VarOrder {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for VarOrder {}

/// Sparse polynomial with arbitrary-precision integer coefficients.
///
/// Zero coefficients are never stored, so two polynomials over the same
/// [`VarOrder`] are equal exactly when their term maps are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    vars: VarOrder,
    terms: BTreeMap<Monomial, BigInt>,
}

impl MultiPoly {
    pub fn zero(vars: &VarOrder) -> Self {
        MultiPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &VarOrder, c: impl Into<BigInt>) -> Self {
        let mut p = MultiPoly::zero(vars);
        p.add_term(Monomial::one(vars.len()), c.into());
        p
    }

    pub fn one(vars: &VarOrder) -> Self {
        MultiPoly::constant(vars, 1)
    }

    /// The variable at `index`.
    pub fn var(vars: &VarOrder, index: usize) -> Self {
        assert!(index < vars.len(), "variable index {index} out of range");
        let mut p = MultiPoly::zero(vars);
        p.add_term(Monomial::var(vars.len(), index), BigInt::one());
        p
    }

    /// The variable called `name`; panics if the order has no such name.
    pub fn named(vars: &VarOrder, name: &str) -> Self {
        let i = vars.index_of(name).unwrap_or_else(|| panic!("unknown variable {name}"));
        MultiPoly::var(vars, i)
    }

    pub fn from_terms<I>(vars: &VarOrder, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut p = MultiPoly::zero(vars);
        for (exps, c) in terms {
            if exps.len() != vars.len() {
                return Err(Error::ArityMismatch { expected: vars.len(), got: exps.len() });
            }
            p.add_term(Monomial::new(exps), c);
        }
        Ok(p)
    }

    pub fn vars(&self) -> &VarOrder {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms from the leading (largest) monomial down.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Constant term value when the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Highest combined degree in the variables at `indices`.
    pub fn degree_in(&self, indices: &[usize]) -> Option<u32> {
        self.terms.keys().map(|m| indices.iter().map(|&i| m.exponents()[i]).sum()).max()
    }

    /// Degrees in two variable blocks, e.g. the z-block and the h-block.
    pub fn bidegree(&self, first: &[usize], second: &[usize]) -> Option<(u32, u32)> {
        Some((self.degree_in(first)?, self.degree_in(second)?))
    }

    /// True when every term has the same combined degree in `indices`.
    pub fn is_homogeneous_in(&self, indices: &[usize]) -> bool {
        let mut degs = self.terms.keys().map(|m| indices.iter().map(|&i| m.exponents()[i]).sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &MultiPoly) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VarOrderMismatch)
        }
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_same(other)?;
        let mut out = MultiPoly::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        MultiPoly { vars: self.vars.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient `self / divisor` under graded-lex multivariate division.
    ///
    /// Fails with [`Error::NotDivisible`] as soon as a leading term of the
    /// running remainder is not an integer multiple of the divisor's leading
    /// term; for exact division this is equivalent to a nonzero remainder.
    pub fn divide_exact(&self, divisor: &MultiPoly) -> Result<MultiPoly> {
        self.check_same(divisor)?;
        let (lm_d, lc_d) = match divisor.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::DivisionByZero),
        };
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(&self.vars);
        while let Some((lm_r, lc_r)) = rem.leading_term() {
            if !lm_d.divides(lm_r) {
                return Err(Error::NotDivisible);
            }
            let (q, r) = lc_r.div_rem(&lc_d);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            let m = lm_d.quotient_of(lm_r);
            for (md, cd) in &divisor.terms {
                rem.add_term(md.mul(&m), -(cd * &q));
            }
            quot.add_term(m, q);
        }
        Ok(quot)
    }

    pub fn eval(&self, point: &[BigInt]) -> Result<BigInt> {
        if point.len() != self.nvars() {
            return Err(Error::ArityMismatch { expected: self.nvars(), got: point.len() });
        }
        let powers = self.power_table(point, |a, b| a * b, BigInt::one());
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= &powers[i][e as usize];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Convenience wrapper over [`MultiPoly::eval`] for small integer points.
    pub fn eval_i64(&self, point: &[i64]) -> Result<BigInt> {
        let p: Vec<BigInt> = point.iter().map(|&v| BigInt::from(v)).collect();
        self.eval(&p)
    }

    /// Value modulo the prime `p` (`p < 2^63`), with point coordinates in `[0, p)`.
    pub fn eval_mod(&self, point: &[u64], p: u64) -> Result<u64> {
        if point.len() != self.nvars() {
            return Err(Error::ArityMismatch { expected: self.nvars(), got: point.len() });
        }
        let powers = self.power_table(point, |a, b| mul_mod(*a, *b, p), 1u64 % p);
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = bigint_mod(c, p);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = mul_mod(t, powers[i][e as usize], p);
                }
            }
            acc = add_mod(acc, t, p);
        }
        Ok(acc)
    }

    fn power_table<T: Clone>(&self, point: &[T], mul: impl Fn(&T, &T) -> T, one: T) -> Vec<Vec<T>> {
        let mut maxe = vec![0u32; self.nvars()];
        for m in self.terms.keys() {
            for (i, &e) in m.exponents().iter().enumerate() {
                maxe[i] = maxe[i].max(e);
            }
        }
        point
            .iter()
            .zip(&maxe)
            .map(|(x, &e)| {
                let mut row = Vec::with_capacity(e as usize + 1);
                row.push(one.clone());
                for k in 1..=e as usize {
                    let next = mul(&row[k - 1], x);
                    row.push(next);
                }
                row
            })
            .collect()
    }

    /// Substitutes `subs[i]` for variable `i`; every substitute must share one
    /// variable order, which becomes the order of the result.
    pub fn compose(&self, subs: &[MultiPoly]) -> Result<MultiPoly> {
        if subs.len() != self.nvars() {
            return Err(Error::ArityMismatch { expected: self.nvars(), got: subs.len() });
        }
        let target = match subs.first() {
            Some(s) => s.vars.clone(),
            None => {
                return Ok(MultiPoly::constant(&VarOrder::new::<_, String>([]), self.coeff(&Monomial::one(0))));
            }
        };
        if subs.iter().any(|s| s.vars != target) {
            return Err(Error::VarOrderMismatch);
        }
        let mut cache: Vec<Vec<MultiPoly>> = subs.iter().map(|s| vec![MultiPoly::one(&target), s.clone()]).collect();
        let mut out = MultiPoly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(&target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = &cache[i][cache[i].len() - 1] * &subs[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][e as usize];
            }
            for (mm, cc) in t.terms {
                out.add_term(mm, cc);
            }
        }
        Ok(out)
    }

    /// Fixes the variables with `Some` value, keeping the variable order.
    pub fn specialize(&self, values: &[Option<BigInt>]) -> Result<MultiPoly> {
        if values.len() != self.nvars() {
            return Err(Error::ArityMismatch { expected: self.nvars(), got: values.len() });
        }
        let mut out = MultiPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps = m.exponents().to_vec();
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    if exps[i] > 0 {
                        coeff *= num_traits::pow(v.clone(), exps[i] as usize);
                        exps[i] = 0;
                    }
                }
            }
            out.add_term(Monomial::new(exps), coeff);
        }
        Ok(out)
    }

    /// Moves the polynomial into `target`, sending variable `i` to
    /// `map[i]`. Variables mapped to `None` must not occur.
    pub fn embed(&self, target: &VarOrder, map: &[Option<usize>]) -> Result<MultiPoly> {
        if map.len() != self.nvars() {
            return Err(Error::ArityMismatch { expected: self.nvars(), got: map.len() });
        }
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.len()];
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) if j < target.len() => exps[j] += e,
                    _ => return Err(Error::VarOrderMismatch),
                }
            }
            out.add_term(Monomial::new(exps), c.clone());
        }
        Ok(out)
    }

    /// Splits the polynomial by its exponents in the variables at `indices`.
    ///
    /// Keys are the exponent vectors restricted to `indices`; values are the
    /// coefficient polynomials, which keep this variable order but no longer
    /// involve the selected variables.
    pub fn coefficients_in(&self, indices: &[usize]) -> BTreeMap<Monomial, MultiPoly> {
        let mut out: BTreeMap<Monomial, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key = Monomial::new(indices.iter().map(|&i| m.exponents()[i]).collect());
            let mut rest = m.exponents().to_vec();
            for &i in indices {
                rest[i] = 0;
            }
            out.entry(key).or_insert_with(|| MultiPoly::zero(&self.vars)).add_term(Monomial::new(rest), c.clone());
        }
        out
    }

    /// Gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn normalized(&self) -> MultiPoly {
        let mut g = self.content();
        if g.is_zero() {
            return self.clone();
        }
        if self.leading_term().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            g = -g;
        }
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c / &g)).collect();
        MultiPoly { vars: self.vars.clone(), terms }
    }

    /// Largest absolute coefficient, used for bound estimates.
    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn sum_abs_coeffs(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }
}

impl fmt::Display for MultiPoly {
    /// Canonical text: `coeff*var^e*...` terms, leading monomial first,
    /// variables in declared order, exponent written only when above one.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms().enumerate() {
            let mag = c.abs();
            match (n, c.is_negative()) {
                (0, false) => write!(f, "{mag}")?,
                (0, true) => write!(f, "-{mag}")?,
                (_, false) => write!(f, " + {mag}")?,
                (_, true) => write!(f, " - {mag}")?,
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", self.vars.names()[i])?,
                    _ => write!(f, "*{}^{}", self.vars.names()[i], e)?,
                }
            }
        }
        Ok(())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("variable orders differ")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("variable orders differ")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("variable orders differ")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-BigInt::one())
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

pub(crate) fn bigint_mod(c: &BigInt, p: u64) -> u64 {
    let r = c.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue below modulus")
}
