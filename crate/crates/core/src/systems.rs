//! Univariate polynomial tuples and the σ-forms built from them.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{MultiPoly, VarOrder};
use crate::{Error, Result};

/// Integer polynomial in one variable, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<BigInt>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        UniPoly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, z: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * z + c)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    /// This polynomial in the variable `index` of `vars`.
    pub fn to_multi(&self, vars: &VarOrder, index: usize) -> MultiPoly {
        let terms = self.coeffs.iter().enumerate().map(|(e, c)| {
            let mut exps = vec![0u32; vars.len()];
            exps[index] = e as u32;
            (exps, c.clone())
        });
        MultiPoly::from_terms(vars, terms).expect("arity matches")
    }

    /// Comma-separated ascending coefficients, the tuple file line format.
    pub fn to_coeff_line(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        self.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    }

    pub fn parse_coeff_line(line: &str) -> Result<UniPoly> {
        let coeffs = line
            .split(',')
            .map(|c| c.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("bad coefficient `{}`", c.trim()))))
            .collect::<Result<Vec<_>>>()?;
        Ok(UniPoly::new(coeffs))
    }

    /// Drops the factor `z^m` with `m` maximal.
    fn strip_zero_roots(&self) -> UniPoly {
        let m = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        UniPoly { coeffs: self.coeffs[m..].to_vec() }
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sep = match (first, c.is_negative()) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            f.write_str(sep)?;
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("z")?,
                (1, false) => write!(f, "{mag}*z")?,
                (_, true) => write!(f, "z^{e}")?,
                (_, false) => write!(f, "{mag}*z^{e}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// `(f_1, …, f_t)` with strictly decreasing degrees and no common positive
/// integer root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WellConditionedTuple {
    polys: Vec<UniPoly>,
}

impl WellConditionedTuple {
    pub fn t(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[UniPoly] {
        &self.polys
    }

    /// `f_j` with 1-based `j`.
    pub fn poly(&self, j: usize) -> Result<&UniPoly> {
        if j == 0 || j > self.polys.len() {
            return Err(Error::IndexOutOfRange { index: j, len: self.polys.len() });
        }
        Ok(&self.polys[j - 1])
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.polys.iter().map(|p| p.degree().unwrap_or(0)).collect()
    }

    /// `(f_1, …, f_len)`, re-validated.
    pub fn prefix(&self, len: usize) -> Result<WellConditionedTuple> {
        if len == 0 || len > self.polys.len() {
            return Err(Error::IndexOutOfRange { index: len, len: self.polys.len() });
        }
        validate_tuple(self.polys[..len].to_vec())
    }

    /// One polynomial per line, comma-separated ascending coefficients.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for p in &self.polys {
            s.push_str(&p.to_coeff_line());
            s.push('\n');
        }
        s
    }

    /// Short human-readable form such as `(z^2, z, 1)`.
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.polys.iter().map(ToString::to_string).collect();
        format!("({})", parts.join(", "))
    }
}

/// Reads the tuple text format; blank lines and `#` comments are skipped.
pub fn parse_tuple_text(text: &str) -> Result<WellConditionedTuple> {
    let polys = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(UniPoly::parse_coeff_line)
        .collect::<Result<Vec<_>>>()?;
    validate_tuple(polys)
}

const ROOT_SCAN_LIMIT: u64 = 10_000_000;

pub fn validate_tuple(polys: Vec<UniPoly>) -> Result<WellConditionedTuple> {
    if polys.is_empty() {
        return Err(Error::InvalidParams("tuple is empty".into()));
    }
    if let Some(i) = polys.iter().position(UniPoly::is_zero) {
        return Err(Error::InvalidParams(format!("f_{} is the zero polynomial", i + 1)));
    }
    for (i, w) in polys.windows(2).enumerate() {
        let (prev, cur) = (w[0].degree().unwrap_or(0), w[1].degree().unwrap_or(0));
        if cur >= prev {
            return Err(Error::DegreesNotStrictlyDecreasing { index: i + 2, degree: cur, previous: prev });
        }
    }

    // integer roots of the lowest-degree member divide its stripped constant
    // term; the next member contributes its candidates too
    let t = polys.len();
    let mut candidates: Vec<BigInt> = positive_root_candidates(&polys[t - 1])?;
    if t >= 2 {
        candidates.extend(positive_root_candidates(&polys[t - 2])?);
    }
    candidates.sort();
    candidates.dedup();
    for z in candidates {
        if polys.iter().all(|p| p.eval(&z).is_zero()) {
            return Err(Error::CommonPositiveRoot(z));
        }
    }
    Ok(WellConditionedTuple { polys })
}

/// Positive divisors of the stripped constant term that are also below the
/// Cauchy root bound.
fn positive_root_candidates(p: &UniPoly) -> Result<Vec<BigInt>> {
    let g = p.strip_zero_roots();
    if g.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let c0 = g.coeffs[0].abs();
    let lead = g.leading_coeff().expect("nonzero").abs();
    let max_lower = g.coeffs[..g.coeffs.len() - 1].iter().map(Signed::abs).max().unwrap_or_default();
    let cauchy = BigInt::one() + max_lower.div_ceil(&lead);
    let limit = if cauchy < c0 { cauchy } else { c0.clone() };
    let mut out = Vec::new();
    if let Some(l) = limit.to_u64().filter(|&l| l <= ROOT_SCAN_LIMIT) {
        for d in 1..=l {
            let d = BigInt::from(d);
            if c0.is_multiple_of(&d) {
                out.push(d);
            }
        }
        return Ok(out);
    }
    let root = c0.sqrt();
    let Some(r) = root.to_u64().filter(|&r| r <= ROOT_SCAN_LIMIT) else {
        return Err(Error::InvalidParams("constant term too large for the root screen".into()));
    };
    for d in 1..=r {
        let d = BigInt::from(d);
        if c0.is_multiple_of(&d) {
            let e = &c0 / &d;
            if d <= limit {
                out.push(d);
            }
            if e <= limit {
                out.push(e);
            }
        }
    }
    Ok(out)
}

/// `σ_{j,n}(z; h) = h_1 f_j(z_1) + … + h_n f_j(z_n)` over `z1..zn, h1..hn`.
pub fn sigma(f: &WellConditionedTuple, j: usize, n: usize) -> Result<MultiPoly> {
    sigma_of(f.poly(j)?, n)
}

/// `σ_{1,n}, …, σ_{count,n}` sharing one variable order.
pub fn sigma_forms(f: &WellConditionedTuple, count: usize, n: usize) -> Result<Vec<MultiPoly>> {
    let vars = VarOrder::zh(n);
    (1..=count).map(|j| Ok(sigma_in(f.poly(j)?, n, &vars))).collect()
}

pub(crate) fn sigma_of(fj: &UniPoly, n: usize) -> Result<MultiPoly> {
    if n == 0 {
        return Err(Error::InvalidParams("σ needs n >= 1".into()));
    }
    Ok(sigma_in(fj, n, &VarOrder::zh(n)))
}

fn sigma_in(fj: &UniPoly, n: usize, vars: &VarOrder) -> MultiPoly {
    let mut acc = MultiPoly::zero(vars);
    for i in 0..n {
        let term = &MultiPoly::var(vars, n + i) * &fj.to_multi(vars, i);
        acc = &acc + &term;
    }
    acc
}

/// `f_j(z) = z^{k-r+1-j}` for `1 <= j <= k-r+1`.
pub fn monomial_tuple(k: u32, r: u32) -> Result<WellConditionedTuple> {
    if r == 0 || r >= k {
        return Err(Error::InvalidParams(format!("need 1 <= r < k, got k={k}, r={r}")));
    }
    let t = (k - r + 1) as usize;
    validate_tuple((1..=t).map(|j| UniPoly::monomial(t - j)).collect())
}

/// Weight of `h z^{j-r}` in the shifted system: zero below the slice,
/// `binom(j, r)` from it on.
pub fn omega(j: u32, r: u32) -> BigInt {
    if j < r {
        return BigInt::zero();
    }
    binomial(j, r)
}

pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Sizes of one sliced system instance: `s` pairs per side, top degree `k`,
/// omitted degree `r`, box `[1, X]`, h-range `[-H, H]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SliceParams {
    pub s: u32,
    pub k: u32,
    pub r: u32,
    pub x: u64,
    pub h: u64,
}

impl SliceParams {
    pub fn new(s: u32, k: u32, r: u32, x: u64, h: u64) -> Result<Self> {
        if r == 0 || r >= k {
            return Err(Error::InvalidParams(format!("need 1 <= r < k, got k={k}, r={r}")));
        }
        if s == 0 || x == 0 || h == 0 {
            return Err(Error::InvalidParams("s, X and H must be positive".into()));
        }
        Ok(SliceParams { s, k, r, x, h })
    }
}
