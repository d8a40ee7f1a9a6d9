//! Meet-in-the-middle counts.
//!
//! Each side of a system is `s` atoms (a variable, or an `(h, z)` pair). The
//! table of one side is built by `s` convolutions of the atom table, each
//! split by the value of the newly added atom and merged by summation. The
//! other side is never materialized: it is the same table read at `-key`
//! (auxiliary system), `key` (power sums) or `key + δ` (shifted system).
//!
//! When the full table would exceed the key limit, the last convolution is
//! done one value of the first key component at a time, so only the slices
//! `c` and `-c` are alive together.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::keys::{scaled_box, KeySpace, Packed, Wide};
use super::{timed, CountConfig, CountParams, CountReport, Method, PowerKey, RepMap};
use crate::systems::{omega, WellConditionedTuple};
use crate::{Error, Result};

type Table<K> = HashMap<K, u64>;

/// Atom value vectors with multiplicities, deduplicated.
struct Atoms {
    arity: usize,
    items: Vec<(Vec<BigInt>, u64)>,
}

impl Atoms {
    fn collect(arity: usize, raw: impl IntoIterator<Item = Vec<BigInt>>) -> Atoms {
        let mut agg: BTreeMap<Vec<BigInt>, u64> = BTreeMap::new();
        for v in raw {
            *agg.entry(v).or_insert(0) += 1;
        }
        Atoms { arity, items: agg.into_iter().collect() }
    }

    /// Moves component `j` to the end of every atom.
    fn move_to_last(&mut self, j: usize) {
        for (v, _) in &mut self.items {
            let c = v.remove(j);
            v.push(c);
        }
    }

    fn mass(&self) -> u64 {
        self.items.iter().map(|(_, m)| m).sum()
    }

    /// Per-component `(min, max)` over all atoms, each widened to contain 0.
    fn extremes(&self) -> Vec<(BigInt, BigInt)> {
        (0..self.arity)
            .map(|j| {
                self.items.iter().fold((BigInt::zero(), BigInt::zero()), |(lo, hi), (v, _)| {
                    (lo.min(v[j].clone()), hi.max(v[j].clone()))
                })
            })
            .collect()
    }
}

/// How a table of `s`-atom sums is stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Plan {
    Whole,
    Sliced,
}

fn multiset_bound(a: u128, s: u32) -> u128 {
    let mut m: u128 = 1;
    for i in 0..s as u128 {
        m = m.saturating_mul(a + i) / (i + 1);
    }
    m
}

/// Whole tables above this many keys are built slice by slice instead.
const SLICE_ABOVE: u128 = 1 << 20;

fn check_mass(atoms: &Atoms, s: u32) -> Result<()> {
    // tuples of one side must fit u64 multiplicities
    let mass = BigInt::from(atoms.mass()).pow(s);
    if mass > BigInt::from(u64::MAX) {
        return Err(Error::InvalidParams(format!("{mass} tuples per side overflow 64-bit multiplicities")));
    }
    Ok(())
}

/// Requires the whole `s`-fold table to fit the key limit.
fn check_whole(atoms: &Atoms, s: u32, cfg: &CountConfig) -> Result<()> {
    check_mass(atoms, s)?;
    // keys depend only on the multiset of atoms
    if multiset_bound(atoms.items.len() as u128, s) > cfg.max_keys as u128 {
        return Err(Error::CapacityExceeded { limit: cfg.max_keys });
    }
    Ok(())
}

fn plan(atoms: &Atoms, s: u32, cfg: &CountConfig) -> Result<Plan> {
    check_mass(atoms, s)?;
    let a = atoms.items.len() as u128;
    let limit = cfg.max_keys as u128;
    let whole = multiset_bound(a, s);
    if whole <= limit.min(SLICE_ABOVE) {
        Ok(Plan::Whole)
    } else if s >= 2 && multiset_bound(a, s - 1) <= limit {
        Ok(Plan::Sliced)
    } else if whole <= limit {
        Ok(Plan::Whole)
    } else {
        Err(Error::CapacityExceeded { limit: cfg.max_keys })
    }
}

fn build_table<S: KeySpace>(space: &S, atoms: &Atoms, s: u32) -> Table<S::Key> {
    let deltas: Vec<(S::Delta, u64)> = atoms
        .items
        .iter()
        .map(|(v, m)| {
            let comps: Vec<S::Comp> = v.iter().map(|c| space.comp(c)).collect();
            (space.delta(&comps), *m)
        })
        .collect();
    let mut table: Table<S::Key> = HashMap::new();
    table.insert(space.zero_key(), 1);
    for _ in 0..s {
        table = convolve(space, &table, &deltas);
    }
    table
}

#[cfg(feature = "std")]
fn convolve<S: KeySpace>(space: &S, prev: &Table<S::Key>, deltas: &[(S::Delta, u64)]) -> Table<S::Key> {
    use rayon::prelude::*;
    deltas
        .par_iter()
        .fold(HashMap::new, |mut acc, (d, m)| {
            add_shifted(space, &mut acc, prev, d, *m);
            acc
        })
        .reduce(HashMap::new, merge)
}

#[cfg(not(feature = "std"))]
fn convolve<S: KeySpace>(space: &S, prev: &Table<S::Key>, deltas: &[(S::Delta, u64)]) -> Table<S::Key> {
    let mut acc = HashMap::new();
    for (d, m) in deltas {
        add_shifted(space, &mut acc, prev, d, *m);
    }
    acc
}

fn add_shifted<S: KeySpace>(space: &S, acc: &mut Table<S::Key>, prev: &Table<S::Key>, d: &S::Delta, m: u64) {
    acc.reserve(prev.len());
    for (k, c) in prev {
        *acc.entry(space.shift(k, d)).or_insert(0) += c * m;
    }
}

#[cfg(feature = "std")]
fn merge<K: core::hash::Hash + Eq>(a: Table<K>, b: Table<K>) -> Table<K> {
    let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    for (k, c) in small {
        *big.entry(k).or_insert(0) += c;
    }
    big
}

/// Exact sum of `u64` products without BigInt work per term.
#[derive(Default)]
struct Accum {
    low: u128,
    high: BigInt,
}

impl Accum {
    #[inline]
    fn add(&mut self, v: u128) {
        match self.low.checked_add(v) {
            Some(x) => self.low = x,
            None => {
                self.high += BigInt::from(self.low);
                self.low = v;
            }
        }
    }

    fn absorb(mut self, other: Accum) -> Accum {
        self.high += other.high;
        self.add(other.low);
        self
    }

    fn total(self) -> BigInt {
        self.high + BigInt::from(self.low)
    }
}

fn sum_squares<K>(table: &Table<K>) -> BigInt {
    let mut acc = Accum::default();
    for c in table.values() {
        acc.add(*c as u128 * *c as u128);
    }
    acc.total()
}

fn sum_against_negation<S: KeySpace>(space: &S, table: &Table<S::Key>) -> BigInt {
    let mut acc = Accum::default();
    for (k, c) in table {
        if let Some(other) = space.negate(k).and_then(|nk| table.get(&nk)) {
            acc.add(*c as u128 * *other as u128);
        }
    }
    acc.total()
}

/// `Σ_v R(v) Σ_δ m_δ R(v + δ)`.
fn sum_against_shifts<S: KeySpace>(space: &S, table: &Table<S::Key>, deltas: &Atoms) -> BigInt {
    let deltas: Vec<(Vec<S::Comp>, u64)> =
        deltas.items.iter().map(|(v, m)| (v.iter().map(|c| space.comp(c)).collect(), *m)).collect();
    let entries: Vec<(Vec<S::Comp>, u64)> = table.iter().map(|(k, c)| (space.unpack(k), *c)).collect();
    let one_entry = |acc: Accum, (v, cv): &(Vec<S::Comp>, u64)| {
        let mut inner = Accum::default();
        for (d, m) in &deltas {
            if let Some(cu) = space.pack_sum(v, d).and_then(|k| table.get(&k)) {
                inner.add(*cu as u128 * *m as u128);
            }
        }
        acc.absorb(mul_accum(inner.total(), *cv))
    };
    #[cfg(feature = "std")]
    {
        use rayon::prelude::*;
        entries.par_iter().fold(Accum::default, one_entry).reduce(Accum::default, Accum::absorb).total()
    }
    #[cfg(not(feature = "std"))]
    {
        entries.iter().fold(Accum::default(), one_entry).total()
    }
}

/// How the table is paired with itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pairing {
    /// `Σ R(K)^2`.
    Same,
    /// `Σ R(K) R(-K)`.
    Negation,
}

/// The pairing sum over the `s`-fold table, built slice by slice along the
/// last key component from the `(s-1)`-fold table and the atoms.
fn sliced_sum<S: KeySpace>(space: &S, atoms: &Atoms, s: u32, pairing: Pairing) -> BigInt {
    let prev = build_table(space, atoms, s - 1);
    let mut prev_groups: BTreeMap<BigInt, Vec<(S::Key, u64)>> = BTreeMap::new();
    for (k, c) in prev {
        let top = space.to_big(space.unpack(&k).last().expect("nonempty key"));
        prev_groups.entry(top).or_default().push((k, c));
    }
    let mut atom_groups: BTreeMap<BigInt, Vec<(S::Delta, u64)>> = BTreeMap::new();
    for (v, m) in &atoms.items {
        let comps: Vec<S::Comp> = v.iter().map(|c| space.comp(c)).collect();
        atom_groups.entry(v[v.len() - 1].clone()).or_default().push((space.delta(&comps), *m));
    }
    let tops: BTreeSet<BigInt> = prev_groups.keys().flat_map(|g| atom_groups.keys().map(move |a| g + a)).collect();

    let slice = |c: &BigInt| -> Table<S::Key> {
        let mut t: Table<S::Key> = HashMap::new();
        for (g, entries) in &prev_groups {
            let Some(ds) = atom_groups.get(&(c - g)) else { continue };
            for (d, m) in ds {
                for (k, v) in entries {
                    *t.entry(space.shift(k, d)).or_insert(0) += v * m;
                }
            }
        }
        t
    };
    let targets: Vec<&BigInt> = match pairing {
        Pairing::Same => tops.iter().collect(),
        Pairing::Negation => tops.iter().filter(|c| !c.is_negative() && tops.contains(&-*c)).collect(),
    };
    let one = |mut acc: Accum, c: &&BigInt| {
        let here = slice(c);
        match pairing {
            Pairing::Same => {
                for v in here.values() {
                    acc.add(*v as u128 * *v as u128);
                }
            }
            Pairing::Negation => {
                // slice -c paired with slice c gives the same sum again
                let there = if c.is_zero() { None } else { Some(slice(&-*c)) };
                let other = there.as_ref().unwrap_or(&here);
                for (k, v) in &here {
                    if let Some(o) = space.negate(k).and_then(|nk| other.get(&nk)) {
                        let p = *v as u128 * *o as u128;
                        acc.add(p);
                        if there.is_some() {
                            acc.add(p);
                        }
                    }
                }
            }
        }
        acc
    };
    #[cfg(feature = "std")]
    {
        use rayon::prelude::*;
        targets.par_iter().fold(Accum::default, one).reduce(Accum::default, Accum::absorb).total()
    }
    #[cfg(not(feature = "std"))]
    {
        targets.iter().fold(Accum::default(), one).total()
    }
}

/// Largest slice held as a dense array.
const DENSE_SLICE: u128 = 1 << 22;

/// Moves the component with the cheapest slice grouping last.
fn choose_slicing(atoms: &mut Atoms, s: u32) {
    let bounds = scaled_box(&atoms.extremes(), s);
    let cost = |j: usize| {
        let distinct: BTreeSet<&BigInt> = atoms.items.iter().map(|(v, _)| &v[j]).collect();
        (&bounds[j].1 - &bounds[j].0 + 1u32) * BigInt::from(distinct.len())
    };
    if let Some(j) = (0..atoms.arity).min_by_key(|&j| cost(j)) {
        atoms.move_to_last(j);
    }
}

/// One slice of the full table, indexed by the low part of the packed key.
enum Slice {
    /// Dense counts plus the indices made nonzero, so clearing is cheap.
    Dense(Vec<u64>, Vec<usize>),
    Sparse(HashMap<usize, u64>),
}

impl Slice {
    fn new(m: usize) -> Slice {
        if m as u128 <= DENSE_SLICE {
            Slice::Dense(vec![0; m], Vec::new())
        } else {
            Slice::Sparse(HashMap::new())
        }
    }

    fn clear(&mut self) {
        match self {
            Slice::Dense(buf, touched) => {
                for i in touched.drain(..) {
                    buf[i] = 0;
                }
            }
            Slice::Sparse(map) => map.clear(),
        }
    }

    #[inline]
    fn add(&mut self, i: usize, v: u64) {
        match self {
            Slice::Dense(buf, touched) => {
                if buf[i] == 0 {
                    touched.push(i);
                }
                buf[i] += v;
            }
            Slice::Sparse(map) => *map.entry(i).or_insert(0) += v,
        }
    }

    fn get(&self, i: usize) -> u64 {
        match self {
            Slice::Dense(buf, _) => buf[i],
            Slice::Sparse(map) => map.get(&i).copied().unwrap_or(0),
        }
    }

    fn for_each(&self, mut f: impl FnMut(usize, u64)) {
        match self {
            Slice::Dense(buf, touched) => touched.iter().for_each(|&i| f(i, buf[i])),
            Slice::Sparse(map) => map.iter().for_each(|(&i, &v)| f(i, v)),
        }
    }
}

/// [`sliced_sum`] on packed keys: the top component selects the slice and
/// the rest of the key indexes into it.
fn packed_sliced_sum(space: &Packed, atoms: &Atoms, s: u32, pairing: Pairing) -> BigInt {
    let m = space.slice_len() as usize;
    let (span, lo) = space.top();
    let span = span as usize;
    let prev = build_table(space, atoms, s - 1);
    let mut prev_groups: Vec<Vec<(usize, u64)>> = vec![Vec::new(); span];
    for (k, c) in prev {
        prev_groups[(k / m as u128) as usize].push(((k % m as u128) as usize, c));
    }
    let occupied: Vec<usize> = (0..span).filter(|&i| !prev_groups[i].is_empty()).collect();
    let mut by_top: BTreeMap<i128, Vec<(isize, u64)>> = BTreeMap::new();
    for (v, mult) in &atoms.items {
        let comps: Vec<i128> = v.iter().map(|c| space.comp(c)).collect();
        let off = space.low_offset(&comps) as isize;
        by_top.entry(comps[comps.len() - 1]).or_default().push((off, *mult));
    }
    let atom_groups: Vec<(i128, Vec<(isize, u64)>)> = by_top.into_iter().collect();

    // slice index i holds top component lo + i; a prev group at index g
    // meets the atoms with top value i - g
    let fill = |i: usize, out: &mut Slice| {
        out.clear();
        for (top, ds) in &atom_groups {
            let g = i as i128 - top;
            if g < 0 || g >= span as i128 || prev_groups[g as usize].is_empty() {
                continue;
            }
            let group = &prev_groups[g as usize];
            for &(off, mult) in ds {
                for &(rem, c) in group {
                    out.add((rem as isize + off) as usize, c * mult);
                }
            }
        }
    };
    let smallest = occupied.first().copied().unwrap_or(0) as i128 + atom_groups.first().map_or(0, |a| a.0);
    let largest = occupied.last().copied().unwrap_or(0) as i128 + atom_groups.last().map_or(0, |a| a.0);
    let live = |i: usize| (i as i128) >= smallest && (i as i128) <= largest;
    let targets: Vec<usize> = match pairing {
        Pairing::Same => (0..span).filter(|&i| live(i)).collect(),
        // top value lo + i pairs with -(lo + i), at index span - 1 - i
        Pairing::Negation => (span / 2..span).filter(|&i| live(i) && live(span - 1 - i)).collect(),
    };
    debug_assert!(pairing == Pairing::Same || lo == -((span as i128 - 1) / 2));
    let one = |state: Option<(Accum, Slice, Slice)>, &i: &usize| {
        let (mut acc, mut here, mut there) = state.unwrap_or_else(|| (Accum::default(), Slice::new(m), Slice::new(m)));
        fill(i, &mut here);
        match pairing {
            Pairing::Same => here.for_each(|_, v| acc.add(v as u128 * v as u128)),
            Pairing::Negation => {
                let j = span - 1 - i;
                let twice = j != i;
                if twice {
                    fill(j, &mut there);
                }
                let other = if twice { &there } else { &here };
                here.for_each(|r, v| {
                    let p = v as u128 * other.get(m - 1 - r) as u128;
                    acc.add(p);
                    if twice {
                        acc.add(p);
                    }
                });
            }
        }
        Some((acc, here, there))
    };
    #[cfg(feature = "std")]
    {
        use rayon::prelude::*;
        targets
            .par_iter()
            .fold(|| None, one)
            .map(|st| st.map(|(acc, _, _)| acc).unwrap_or_default())
            .reduce(Accum::default, Accum::absorb)
            .total()
    }
    #[cfg(not(feature = "std"))]
    {
        targets.iter().fold(None, one).map(|st| st.0).unwrap_or_default().total()
    }
}

fn mul_accum(v: BigInt, by: u64) -> Accum {
    match (&v * BigInt::from(by)).to_u128() {
        Some(x) => Accum { low: x, high: BigInt::zero() },
        None => Accum { low: 0, high: v * BigInt::from(by) },
    }
}

/// Runs `f` in the packed key space when the box fits, else with wide keys.
macro_rules! with_space {
    ($bounds:expr, $arity:expr, |$space:ident| $body:expr) => {{
        match Packed::new(&$bounds) {
            Some(p) => {
                let $space = &p;
                $body
            }
            None => {
                let w = Wide::new($arity);
                let $space = &w;
                $body
            }
        }
    }};
}

/// Pairing sum for a table too large to store whole.
fn sliced_count(mut atoms: Atoms, s: u32, pairing: Pairing) -> BigInt {
    choose_slicing(&mut atoms, s);
    let bounds = scaled_box(&atoms.extremes(), s);
    if let Some(p) = Packed::new(&bounds) {
        if pairing == Pairing::Same || p.is_symmetric() {
            return packed_sliced_sum(&p, &atoms, s, pairing);
        }
    }
    with_space!(bounds, atoms.arity, |space| sliced_sum(space, &atoms, s, pairing))
}

fn power_atoms(degrees: &[u32], x: u64) -> Atoms {
    Atoms::collect(degrees.len(), (1..=x).map(|v| degrees.iter().map(|&j| BigInt::from(v).pow(j)).collect()))
}

fn active_degrees(k: u32, r: u32) -> Vec<u32> {
    (1..=k).filter(|&j| j != r).collect()
}

fn check_box(s: u32, x: u64) -> Result<()> {
    if s == 0 || x == 0 {
        return Err(Error::InvalidParams("s and X must be positive".into()));
    }
    Ok(())
}

/// Representation map of the power sums of `x in [1, X]^s` in the degrees
/// `1..=k` other than `r`; `r = 0` keeps every degree.
pub fn rep_power_sums(s: u32, k: u32, r: u32, x: u64, cfg: &CountConfig) -> Result<RepMap> {
    check_box(s, x)?;
    if k == 0 || r > k {
        return Err(Error::InvalidParams(format!("need 0 <= r <= k and k >= 1, got k={k}, r={r}")));
    }
    let atoms = power_atoms(&active_degrees(k, r), x);
    check_whole(&atoms, s, cfg)?;
    let bounds = scaled_box(&atoms.extremes(), s);
    let mut out = RepMap::default();
    with_space!(bounds, atoms.arity, |space| {
        let table = build_table(space, &atoms, s);
        for (key, c) in &table {
            let vals = space.unpack(key).iter().map(|c| space.to_big(c)).collect();
            out.insert(PowerKey(vals), BigInt::from(*c));
        }
    });
    Ok(out)
}

fn power_sum_count(s: u32, degrees: &[u32], x: u64, cfg: &CountConfig) -> Result<BigInt> {
    let atoms = power_atoms(degrees, x);
    if plan(&atoms, s, cfg)? == Plan::Sliced {
        return Ok(sliced_count(atoms, s, Pairing::Same));
    }
    let bounds = scaled_box(&atoms.extremes(), s);
    let count = with_space!(bounds, atoms.arity, |space| sum_squares(&build_table(space, &atoms, s)));
    Ok(count)
}

/// Number of solutions of `Σ x_i^j = Σ y_i^j` (`1 <= j <= k`, `j != r`)
/// with all variables in `[1, X]`.
pub fn count_sliced(s: u32, k: u32, r: u32, x: u64, cfg: &CountConfig) -> Result<CountReport> {
    check_box(s, x)?;
    if r == 0 || r >= k {
        return Err(Error::InvalidParams(format!("need 1 <= r < k, got k={k}, r={r}")));
    }
    let (count, elapsed) = timed(|| power_sum_count(s, &active_degrees(k, r), x, cfg));
    Ok(CountReport { params: CountParams::Sliced { s, k, r, x }, count: count?, method: Method::Mitm, elapsed })
}

/// Number of solutions of the full Vinogradov system of degree `d` with
/// `sigma` variables per side in `[1, X]`.
pub fn count_vmvt(sigma: u32, d: u32, x: u64, cfg: &CountConfig) -> Result<CountReport> {
    check_box(sigma, x)?;
    if d == 0 {
        return Err(Error::InvalidParams("degree must be positive".into()));
    }
    let (count, elapsed) = timed(|| power_sum_count(sigma, &active_degrees(d, 0), x, cfg));
    Ok(CountReport { params: CountParams::Vmvt { sigma, d, x }, count: count?, method: Method::Mitm, elapsed })
}

/// Number of `(h_i, z_i)_{i <= 2s}` with `|h_i| <= H`, `z_i in [1, X]` and
/// `Σ h_i f_j(z_i) = 0` for every polynomial of `f`. `H` defaults to `X^r`.
pub fn count_aux(
    f: &WellConditionedTuple,
    s: u32,
    r: u32,
    x: u64,
    h: Option<u64>,
    cfg: &CountConfig,
) -> Result<CountReport> {
    check_box(s, x)?;
    let h = match h {
        Some(h) => h,
        None => default_h(1, r, x)?,
    };
    if h == 0 {
        return Err(Error::InvalidParams("H must be positive".into()));
    }
    let (count, elapsed) = timed(|| -> Result<BigInt> {
        let values: Vec<Vec<BigInt>> =
            (1..=x).map(|z| f.polys().iter().map(|p| p.eval(&BigInt::from(z))).collect()).collect();
        let hb = h as i128;
        let atoms = Atoms::collect(
            f.t(),
            (-hb..=hb).flat_map(|hv| {
                let hv = BigInt::from(hv);
                values.iter().map(move |fz| fz.iter().map(|v| v * &hv).collect::<Vec<_>>())
            }),
        );
        if plan(&atoms, s, cfg)? == Plan::Sliced {
            return Ok(sliced_count(atoms, s, Pairing::Negation));
        }
        let bounds = scaled_box(&atoms.extremes(), s);
        Ok(with_space!(bounds, atoms.arity, |space| sum_against_negation(space, &build_table(space, &atoms, s))))
    });
    Ok(CountReport {
        params: CountParams::Aux { f: f.clone(), s, r, x, h },
        count: count?,
        method: Method::Mitm,
        elapsed,
    })
}

/// Number of `(u, v, h, z)` with `u, v in [1, 2X]^s`, `|h| <= H`, `z in [1, X]`
/// and `Σ (u_i^j - v_i^j) = ω_j h z^{j-r}` for `1 <= j <= k`, where
/// `ω_j = binom(j, r)` for `j >= r` and zero below. `H` defaults to `s X^r`.
///
/// Shifting `(x, y)` by `z` embeds the sliced system injectively, so
/// `X · I_{s,k,r}(X) <= N` holds exactly.
pub fn count_lifted(s: u32, k: u32, r: u32, x: u64, h: Option<u64>, cfg: &CountConfig) -> Result<CountReport> {
    check_box(s, x)?;
    if r == 0 || r >= k {
        return Err(Error::InvalidParams(format!("need 1 <= r < k, got k={k}, r={r}")));
    }
    let h = match h {
        Some(h) => h,
        None => default_h(s, r, x)?,
    };
    let (count, elapsed) = timed(|| -> Result<BigInt> {
        let degrees: Vec<u32> = (1..=k).collect();
        let atoms = power_atoms(&degrees, 2 * x);
        check_whole(&atoms, s, cfg)?;
        let weights: Vec<BigInt> = degrees.iter().map(|&j| omega(j, r)).collect();
        let hb = h as i128;
        let deltas = Atoms::collect(
            degrees.len(),
            (-hb..=hb).flat_map(|hv| {
                let (weights, degrees) = (&weights, &degrees);
                (1..=x).map(move |z| {
                    degrees
                        .iter()
                        .zip(weights)
                        .map(|(&j, w)| {
                            if w.is_zero() {
                                BigInt::zero()
                            } else {
                                w * BigInt::from(hv) * BigInt::from(z).pow(j - r)
                            }
                        })
                        .collect::<Vec<_>>()
                })
            }),
        );
        let bounds = scaled_box(&atoms.extremes(), s);
        // v + δ must be representable before its range check
        let packable = deltas
            .extremes()
            .iter()
            .zip(&bounds)
            .all(|((dl, dh), (l, hi))| (l + dl).abs().bits() < 126 && (hi + dh).abs().bits() < 126);
        let count = if packable {
            with_space!(bounds, atoms.arity, |space| {
                let table = build_table(space, &atoms, s);
                sum_against_shifts(space, &table, &deltas)
            })
        } else {
            let space = &Wide::new(atoms.arity);
            let table = build_table(space, &atoms, s);
            sum_against_shifts(space, &table, &deltas)
        };
        Ok(count)
    });
    Ok(CountReport { params: CountParams::Lifted { s, k, r, x, h }, count: count?, method: Method::Mitm, elapsed })
}

/// `scale · X^r` as a `u64`.
pub(crate) fn default_h(scale: u32, r: u32, x: u64) -> Result<u64> {
    (BigInt::from(scale) * BigInt::from(x).pow(r))
        .to_u64()
        .filter(|h| *h < (1u64 << 62))
        .ok_or_else(|| Error::InvalidParams(format!("default H = {scale}·{x}^{r} is too large")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{monomial_tuple, validate_tuple, UniPoly};
    use alloc::vec;

    fn cfg() -> CountConfig {
        CountConfig::default()
    }

    #[test]
    fn rep_maps() {
        let m = rep_power_sums(1, 2, 1, 3, &cfg()).unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(m.get(&[4]), BigInt::from(1));
        let m = rep_power_sums(2, 3, 1, 2, &cfg()).unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(m.get(&[5, 9]), BigInt::from(2));
        assert_eq!(m.get(&[2, 2]), BigInt::from(1));
        assert_eq!(m.total_mass(), BigInt::from(4));
        let m = rep_power_sums(1, 3, 2, 2, &cfg()).unwrap();
        assert_eq!(m.get(&[2, 8]), BigInt::from(1));
    }

    #[test]
    fn sliced_counts() {
        assert_eq!(count_sliced(1, 2, 1, 10, &cfg()).unwrap().count, BigInt::from(10));
        assert_eq!(count_sliced(1, 3, 2, 7, &cfg()).unwrap().count, BigInt::from(7));
        assert_eq!(count_sliced(2, 3, 1, 5, &cfg()).unwrap().count, BigInt::from(45));
    }

    #[test]
    fn vinogradov_counts() {
        assert_eq!(count_vmvt(1, 4, 9, &cfg()).unwrap().count, BigInt::from(9));
        assert_eq!(count_vmvt(2, 1, 3, &cfg()).unwrap().count, BigInt::from(19));
        assert_eq!(count_vmvt(2, 2, 3, &cfg()).unwrap().count, BigInt::from(15));
    }

    #[test]
    fn aux_counts() {
        let one = validate_tuple(vec![UniPoly::from_i64s(&[1])]).unwrap();
        assert_eq!(count_aux(&one, 1, 1, 3, Some(3), &cfg()).unwrap().count, BigInt::from(63));
        let lin = monomial_tuple(2, 1).unwrap();
        assert_eq!(count_aux(&lin, 1, 1, 3, Some(3), &cfg()).unwrap().count, BigInt::from(27));
    }

    #[test]
    fn lifted_counts() {
        let r = count_lifted(1, 2, 1, 2, None, &cfg()).unwrap();
        assert_eq!(r.count, BigInt::from(10));
        assert_eq!(r.params, CountParams::Lifted { s: 1, k: 2, r: 1, x: 2, h: 2 });
    }

    #[test]
    fn capacity_is_enforced() {
        let tight = CountConfig { max_keys: 10, ..cfg() };
        assert_eq!(count_sliced(2, 3, 1, 20, &tight).unwrap_err(), Error::CapacityExceeded { limit: 10 });
    }

    #[test]
    fn sliced_tables_agree_with_whole() {
        // the pair bound exceeds the limit but single atoms fit
        let f = monomial_tuple(3, 1).unwrap();
        let tight = CountConfig { max_keys: 200, ..cfg() };
        for (s, x, h) in [(2, 5, 5), (2, 3, 7)] {
            let whole = count_aux(&f, s, 1, x, Some(h), &cfg()).unwrap().count;
            assert_eq!(count_aux(&f, s, 1, x, Some(h), &tight).unwrap().count, whole);
        }
        let tight = CountConfig { max_keys: 30, ..cfg() };
        assert_eq!(count_sliced(2, 3, 1, 5, &tight).unwrap().count, BigInt::from(45));
        assert_eq!(count_vmvt(2, 2, 12, &tight).unwrap().count, count_vmvt(2, 2, 12, &cfg()).unwrap().count);
    }

    #[test]
    fn wide_keys_agree_with_packed() {
        // degree 40 powers overflow 128-bit boxes
        let wide = count_vmvt(2, 40, 4, &cfg()).unwrap().count;
        assert_eq!(wide, BigInt::from(2 * 16 - 4));
    }
}
