//! Table-free recounts used to validate the fast counts.
//!
//! Power-sum systems are nested loops comparing every pair of sides.
//! Auxiliary systems loop over multisets of `z`, solve `M(z) h = 0` exactly
//! by rational row reduction, loop over all free `h` coordinates but one,
//! and count the last one as an interval intersected with a residue class.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{timed, CountConfig, CountParams, CountReport, Method};
use crate::systems::{omega, WellConditionedTuple};
use crate::{Error, Result};

const VALUE_BITS: u64 = 120;

/// One solution `(z_i, h_i)_{i <= n}` of an auxiliary system.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AuxSolution {
    pub z: Vec<i64>,
    pub h: Vec<i64>,
}

/// Counts the system by exhaustive enumeration.
pub fn brute_force_oracle(params: &CountParams, cfg: &CountConfig) -> Result<CountReport> {
    let (count, elapsed) = timed(|| match params {
        CountParams::Sliced { s, k, r, x } => {
            let degrees: Vec<u32> = (1..=*k).filter(|j| j != r).collect();
            power_pairs(*s, &degrees, *x, cfg)
        }
        CountParams::Vmvt { sigma, d, x } => {
            let degrees: Vec<u32> = (1..=*d).collect();
            power_pairs(*sigma, &degrees, *x, cfg)
        }
        CountParams::Aux { f, s, x, h, .. } => aux_count(f, 2 * *s as usize, *x, *h, cfg),
        CountParams::Lifted { s, k, r, x, h } => lifted(*s, *k, *r, *x, *h, cfg),
    });
    Ok(CountReport { params: params.clone(), count: count?, method: Method::Naive, elapsed })
}

fn ensure_ceiling(size: BigInt, cfg: &CountConfig) -> Result<()> {
    match size.to_u128() {
        Some(n) if n <= cfg.oracle_ceiling => Ok(()),
        n => Err(Error::CeilingExceeded { size: n.unwrap_or(u128::MAX), ceiling: cfg.oracle_ceiling }),
    }
}

fn ensure_fits(bound: BigInt) -> Result<()> {
    if bound.bits() >= VALUE_BITS {
        return Err(Error::InvalidParams(format!("oracle values up to {bound} exceed 128-bit arithmetic")));
    }
    Ok(())
}

/// Power sums of every tuple in `[1, X]^s`, row-major over the tuple index.
fn side_sums(s: u32, degrees: &[u32], x: u64) -> Vec<i128> {
    let count = (x as usize).pow(s);
    let mut out = Vec::with_capacity(count * degrees.len());
    let mut tuple = vec![1u64; s as usize];
    for _ in 0..count {
        for &j in degrees {
            out.push(tuple.iter().map(|&v| (v as i128).pow(j)).sum());
        }
        for slot in tuple.iter_mut().rev() {
            if *slot < x {
                *slot += 1;
                break;
            }
            *slot = 1;
        }
    }
    out
}

fn power_pairs(s: u32, degrees: &[u32], x: u64, cfg: &CountConfig) -> Result<BigInt> {
    if s == 0 || x == 0 || degrees.is_empty() {
        return Err(Error::InvalidParams("empty system".into()));
    }
    ensure_ceiling(BigInt::from(x).pow(2 * s), cfg)?;
    ensure_fits(BigInt::from(s) * BigInt::from(x).pow(*degrees.iter().max().unwrap()))?;
    let sums = side_sums(s, degrees, x);
    let w = degrees.len();
    let rows = sums.len() / w;
    let row = |i: usize| &sums[i * w..(i + 1) * w];
    let matches = |i: usize| (0..rows).filter(|&j| row(i) == row(j)).count() as u64;
    Ok(BigInt::from(par_sum(rows, matches)))
}

fn lifted(s: u32, k: u32, r: u32, x: u64, h: u64, cfg: &CountConfig) -> Result<BigInt> {
    if s == 0 || x == 0 || r == 0 || r >= k {
        return Err(Error::InvalidParams(format!("bad shifted system s={s}, k={k}, r={r}, X={x}")));
    }
    ensure_ceiling(BigInt::from(2 * x).pow(2 * s) * BigInt::from(x), cfg)?;
    ensure_fits(BigInt::from(s) * BigInt::from(2 * x).pow(k))?;
    ensure_fits(omega(k, r) * BigInt::from(h) * BigInt::from(x).pow(k - r))?;
    let degrees: Vec<u32> = (1..=k).collect();
    let weights: Vec<i128> = degrees.iter().map(|&j| omega(j, r).to_i128().expect("small")).collect();
    let sums = side_sums(s, &degrees, 2 * x);
    let w = degrees.len();
    let rows = sums.len() / w;
    let ri = (r - 1) as usize;
    let per_u = |u: usize| {
        let su = &sums[u * w..(u + 1) * w];
        let mut found = 0u64;
        for v in 0..rows {
            let sv = &sums[v * w..(v + 1) * w];
            if (0..ri).any(|j| su[j] != sv[j]) {
                continue;
            }
            let hv = su[ri] - sv[ri];
            if hv.unsigned_abs() > h as u128 {
                continue;
            }
            for z in 1..=x as i128 {
                let ok = (ri + 1..w).all(|j| su[j] - sv[j] == weights[j] * hv * z.pow((j - ri) as u32));
                if ok {
                    found += 1;
                }
            }
        }
        found
    };
    Ok(BigInt::from(par_sum(rows, per_u)))
}

/// Values `f_j(z)` for `z in [1, X]`, indexed `[z - 1][j - 1]`.
fn value_table(f: &WellConditionedTuple, x: u64, h: u64, n: usize) -> Result<Vec<Vec<i128>>> {
    let mut table = Vec::with_capacity(x as usize);
    let mut max = BigInt::from(0);
    for z in 1..=x {
        let row: Vec<BigInt> = f.polys().iter().map(|p| p.eval(&BigInt::from(z))).collect();
        for v in &row {
            max = max.max(v.magnitude().clone().into());
        }
        table.push(row);
    }
    ensure_fits(max * BigInt::from(h) * BigInt::from(n))?;
    Ok(table.into_iter().map(|row| row.iter().map(|v| v.to_i128().expect("bounded")).collect()).collect())
}

struct AuxWalk<'a> {
    vals: &'a [Vec<i128>],
    h: i64,
    n: usize,
}

impl AuxWalk<'_> {
    /// Visits every solution extending the first `zs.len()` chosen pairs.
    fn walk(
        &self,
        zs: &mut Vec<i64>,
        hs: &mut Vec<i64>,
        partial: &mut [i128],
        emit: &mut impl FnMut(&[i64], &[i64], i64),
    ) {
        let t = partial.len();
        if zs.len() + 1 == self.n {
            for z in 1..=self.vals.len() as i64 {
                let fz = &self.vals[z as usize - 1];
                // no common positive root, so the last h is determined
                let j0 = (0..t).find(|&j| fz[j] != 0).expect("well-conditioned tuple");
                if partial[j0] % fz[j0] != 0 {
                    continue;
                }
                let hv = -partial[j0] / fz[j0];
                if hv.unsigned_abs() > self.h as u128 {
                    continue;
                }
                if (0..t).all(|j| partial[j] + hv * fz[j] == 0) {
                    zs.push(z);
                    emit(zs, hs, hv as i64);
                    zs.pop();
                }
            }
            return;
        }
        for z in 1..=self.vals.len() as i64 {
            let fz = &self.vals[z as usize - 1];
            for hv in -self.h..=self.h {
                for j in 0..t {
                    partial[j] += hv as i128 * fz[j];
                }
                zs.push(z);
                hs.push(hv);
                self.walk(zs, hs, partial, emit);
                zs.pop();
                hs.pop();
                for j in 0..t {
                    partial[j] -= hv as i128 * fz[j];
                }
            }
        }
    }
}

fn aux_setup(f: &WellConditionedTuple, n: usize, x: u64, h: u64, cfg: &CountConfig) -> Result<Vec<Vec<i128>>> {
    if n < 2 || x == 0 || h == 0 || h > i64::MAX as u64 / 2 {
        return Err(Error::InvalidParams(format!("bad auxiliary system n={n}, X={x}, H={h}")));
    }
    let size = BigInt::from(x).pow(n as u32) * BigInt::from(2 * h + 1).pow(n as u32 - 1);
    ensure_ceiling(size, cfg)?;
    value_table(f, x, h, n)
}

fn aux_count(f: &WellConditionedTuple, n: usize, x: u64, h: u64, cfg: &CountConfig) -> Result<BigInt> {
    if n < 2 || x == 0 || h == 0 || h > i64::MAX as u64 / 2 {
        return Err(Error::InvalidParams(format!("bad auxiliary system n={n}, X={x}, H={h}")));
    }
    let vals = value_table(f, x, h, n)?;
    let classes = multisets(x as usize, n);
    let kernels = classes.iter().map(|(zs, _)| Kernel::new(&vals, zs)).collect::<Result<Vec<_>>>()?;
    let side = BigInt::from(2 * h + 1);
    let work = kernels.iter().fold(BigInt::zero(), |acc, k| acc + side.pow(k.free.saturating_sub(1) as u32));
    ensure_ceiling(work, cfg)?;
    for k in &kernels {
        k.check_range(h)?;
    }
    let total = par_sum(classes.len(), |i| classes[i].1 * kernels[i].count_box(h as i128));
    Ok(BigInt::from(total))
}

/// Nondecreasing `z` sequences in `[1, x]^n` (0-based) with the number of
/// orderings of each.
fn multisets(x: usize, n: usize) -> Vec<(Vec<usize>, u128)> {
    fn rec(start: usize, x: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, u128)>) {
        if cur.len() == n {
            let mut weight: u128 = (1..=n as u128).product();
            let mut i = 0;
            while i < n {
                let run = cur[i..].iter().take_while(|&&v| v == cur[i]).count();
                weight /= (1..=run as u128).product::<u128>();
                i += run;
            }
            out.push((cur.clone(), weight));
            return;
        }
        for z in start..x {
            cur.push(z);
            rec(z, x, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, x, n, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Solution space of `Σ_i h_i f_j(z_i) = 0` for fixed `z`, as
/// `l·h_p = -Σ_f a_{p,f} h_f` over the free coordinates `f`.
struct Kernel {
    free: usize,
    rows: Vec<Vec<i128>>,
    l: i128,
}

impl Kernel {
    fn new(vals: &[Vec<i128>], zs: &[usize]) -> Result<Kernel> {
        let t = vals[0].len();
        let n = zs.len();
        let mut m: Vec<Vec<BigRational>> =
            (0..t).map(|j| zs.iter().map(|&z| BigRational::from_integer(BigInt::from(vals[z][j]))).collect()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..t).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(r, p);
            let inv = m[r][c].recip();
            for v in m[r].iter_mut() {
                *v *= &inv;
            }
            let prow = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && !row[c].is_zero() {
                    let factor = row[c].clone();
                    for (v, pv) in row.iter_mut().zip(&prow) {
                        *v -= &factor * pv;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == t {
                break;
            }
        }
        let free_cols: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let l = m[..r]
            .iter()
            .flat_map(|row| free_cols.iter().map(move |&f| row[f].denom().clone()))
            .fold(BigInt::one(), |acc, d| acc.lcm(&d));
        let small =
            |v: BigInt| v.to_i128().ok_or_else(|| Error::InvalidParams("kernel entries exceed 128 bits".into()));
        let rows = m[..r]
            .iter()
            .map(|row| {
                free_cols
                    .iter()
                    .map(|&f| small((&row[f] * BigRational::from_integer(l.clone())).to_integer()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Kernel { free: free_cols.len(), rows, l: small(l)? })
    }

    /// Rejects kernels whose residue arithmetic could overflow `i128`.
    fn check_range(&self, h: u64) -> Result<()> {
        let widest = self.rows.iter().map(|r| r.iter().map(|a| a.unsigned_abs()).sum::<u128>()).max().unwrap_or(0);
        let limit = 1u128 << 60;
        if self.l.unsigned_abs() >= limit || widest.saturating_mul(h as u128 + 1) >= limit {
            return Err(Error::InvalidParams("kernel too large for exact residue counting".into()));
        }
        Ok(())
    }

    /// Points `h in [-H, H]^n` of the kernel.
    fn count_box(&self, h: i128) -> u128 {
        if self.free == 0 {
            return 1;
        }
        let last = self.free - 1;
        let l = self.l;
        // per row: d x ≡ -c (mod l) reduces to x ≡ (-c/g)·inv (mod l/g)
        let steps: Vec<(i128, i128, i128, i128)> = self
            .rows
            .iter()
            .map(|row| {
                let d = -row[last];
                let g = d.gcd(&l);
                let m = l / g;
                let inv = if m == 1 { 0 } else { mod_inverse((d / g).rem_euclid(m), m) };
                (d, g, m, inv)
            })
            .collect();
        let mut fixed = vec![-h; last];
        let mut total = 0u128;
        loop {
            total += self.count_last(&fixed, &steps, h);
            let Some(pos) = fixed.iter().rposition(|&v| v < h) else { break };
            fixed[pos] += 1;
            for v in &mut fixed[pos + 1..] {
                *v = -h;
            }
        }
        total
    }

    fn count_last(&self, fixed: &[i128], steps: &[(i128, i128, i128, i128)], h: i128) -> u128 {
        let l = self.l;
        let (mut lo, mut hi) = (-h, h);
        let (mut res, mut modulus) = (0i128, 1i128);
        for (row, &(d, g, m, inv)) in self.rows.iter().zip(steps) {
            let c: i128 = -row.iter().zip(fixed).map(|(a, v)| a * v).sum::<i128>();
            // need l | c + d x and |c + d x| <= l h
            if d == 0 {
                if c % l != 0 || c.abs() > l * h {
                    return 0;
                }
                continue;
            }
            if c % g != 0 {
                return 0;
            }
            let r = ((-c / g).rem_euclid(m) * inv).rem_euclid(m);
            let Some(next) = crt(res, modulus, r, m) else { return 0 };
            (res, modulus) = next;
            let (c, d) = if d < 0 { (-c, -d) } else { (c, d) };
            lo = lo.max(Integer::div_ceil(&(-l * h - c), &d));
            hi = hi.min(Integer::div_floor(&(l * h - c), &d));
        }
        if lo > hi {
            return 0;
        }
        let first = lo + (res - lo).rem_euclid(modulus);
        if first > hi {
            0
        } else {
            ((hi - first) / modulus + 1) as u128
        }
    }
}

fn mod_inverse(a: i128, m: i128) -> i128 {
    let e = a.extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m)
}

/// Joint solution of `x ≡ a1 (mod m1)` and `x ≡ a2 (mod m2)`.
fn crt(a1: i128, m1: i128, a2: i128, m2: i128) -> Option<(i128, i128)> {
    let e = m1.extended_gcd(&m2);
    let diff = a2 - a1;
    if diff % e.gcd != 0 {
        return None;
    }
    let lcm = m1 / e.gcd * m2;
    let step = (diff / e.gcd).rem_euclid(m2 / e.gcd) * e.x.rem_euclid(m2 / e.gcd) % (m2 / e.gcd);
    Some(((a1 + m1 * step).rem_euclid(lcm), lcm))
}

/// Every solution of `Σ_{i <= n} h_i f_j(z_i) = 0` (all `j`) with
/// `|h_i| <= H` and `z_i in [1, X]`, in lexicographic order of
/// `(z_1, h_1, z_2, h_2, …)`.
pub fn aux_solutions(
    f: &WellConditionedTuple,
    n: usize,
    x: u64,
    h: u64,
    cfg: &CountConfig,
) -> Result<Vec<AuxSolution>> {
    let vals = aux_setup(f, n, x, h, cfg)?;
    let walker = AuxWalk { vals: &vals, h: h as i64, n };
    let mut out = Vec::new();
    let mut partial = vec![0i128; f.t()];
    walker.walk(&mut Vec::new(), &mut Vec::new(), &mut partial, &mut |zs, hs, last| {
        let mut hs = hs.to_vec();
        hs.push(last);
        out.push(AuxSolution { z: zs.to_vec(), h: hs });
    });
    out.sort();
    Ok(out)
}

fn par_sum<T: Into<u128>>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> u128 {
    #[cfg(feature = "std")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(|i| f(i).into()).sum()
    }
    #[cfg(not(feature = "std"))]
    {
        (0..n).map(|i| f(i).into()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{monomial_tuple, validate_tuple, UniPoly};

    fn run(p: CountParams) -> BigInt {
        brute_force_oracle(&p, &CountConfig::default()).unwrap().count
    }

    #[test]
    fn known_values() {
        assert_eq!(run(CountParams::Sliced { s: 1, k: 2, r: 1, x: 10 }), BigInt::from(10));
        assert_eq!(run(CountParams::Vmvt { sigma: 2, d: 1, x: 3 }), BigInt::from(19));
        let one = validate_tuple(vec![UniPoly::from_i64s(&[1])]).unwrap();
        assert_eq!(run(CountParams::Aux { f: one, s: 1, r: 1, x: 3, h: 3 }), BigInt::from(63));
        let lin = monomial_tuple(2, 1).unwrap();
        assert_eq!(run(CountParams::Aux { f: lin, s: 1, r: 1, x: 3, h: 3 }), BigInt::from(27));
        assert_eq!(run(CountParams::Lifted { s: 1, k: 2, r: 1, x: 2, h: 2 }), BigInt::from(10));
    }

    #[test]
    fn kernel_count_matches_listing() {
        let tuples = [
            monomial_tuple(3, 1).unwrap(),
            monomial_tuple(2, 1).unwrap(),
            validate_tuple(vec![UniPoly::from_i64s(&[3, -1, 2]), UniPoly::from_i64s(&[-1, 2])]).unwrap(),
            validate_tuple(vec![UniPoly::from_i64s(&[0, 0, 0, 1]), UniPoly::from_i64s(&[5])]).unwrap(),
        ];
        for f in &tuples {
            for (n, x, h) in [(2, 4, 3), (3, 3, 2), (4, 3, 2), (4, 2, 3)] {
                let listed = aux_solutions(f, n, x, h, &CountConfig::default()).unwrap().len();
                let counted = aux_count(f, n, x, h, &CountConfig::default()).unwrap();
                assert_eq!(counted, BigInt::from(listed), "{} n={n} X={x} H={h}", f.describe());
            }
        }
    }

    #[test]
    fn residue_combination() {
        assert_eq!(crt(2, 3, 3, 5), Some((8, 15)));
        assert_eq!(crt(1, 4, 3, 6), Some((9, 12)));
        assert_eq!(crt(0, 4, 1, 6), None);
        assert_eq!(multisets(3, 2).iter().map(|(_, w)| w).sum::<u128>(), 9);
    }

    #[test]
    fn ceiling_is_enforced() {
        let cfg = CountConfig { oracle_ceiling: 100, ..CountConfig::default() };
        let e = brute_force_oracle(&CountParams::Sliced { s: 2, k: 3, r: 1, x: 5 }, &cfg).unwrap_err();
        assert_eq!(e, Error::CeilingExceeded { size: 625, ceiling: 100 });
    }

    #[test]
    fn listed_solutions_solve_the_system() {
        let f = monomial_tuple(3, 1).unwrap();
        let sols = aux_solutions(&f, 4, 3, 2, &CountConfig::default()).unwrap();
        let count = run(CountParams::Aux { f: f.clone(), s: 2, r: 1, x: 3, h: 2 });
        assert_eq!(BigInt::from(sols.len()), count);
        for sol in &sols {
            for p in f.polys() {
                let total: BigInt = sol.z.iter().zip(&sol.h).map(|(&z, &h)| p.eval(&BigInt::from(z)) * h).sum();
                assert_eq!(total, BigInt::from(0));
            }
        }
    }
}
