//! Key spaces for representation tables.
//!
//! A key is the vector of equation values of a partial tuple. When every
//! component stays in a box whose volume fits in 128 bits the vector is
//! packed into one `u128` by mixed radix; adding an atom is then a single
//! wrapping addition. Otherwise keys are boxed big integer vectors.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::hash::Hash;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

pub(crate) trait KeySpace: Sync {
    type Comp: Clone + Send + Sync;
    type Key: Clone + Hash + Eq + Send + Sync;
    /// Precomputed offset of one atom.
    type Delta: Clone + Send + Sync;

    fn comp(&self, v: &BigInt) -> Self::Comp;
    fn zero_key(&self) -> Self::Key;
    fn delta(&self, atom: &[Self::Comp]) -> Self::Delta;
    /// Adds an atom whose result is known to lie in the box.
    fn shift(&self, key: &Self::Key, d: &Self::Delta) -> Self::Key;
    fn unpack(&self, key: &Self::Key) -> Vec<Self::Comp>;
    /// Key of `a + b`, or `None` when it leaves the box.
    fn pack_sum(&self, a: &[Self::Comp], b: &[Self::Comp]) -> Option<Self::Key>;
    /// Key of the negated vector, or `None` when it leaves the box.
    fn negate(&self, key: &Self::Key) -> Option<Self::Key>;
    fn to_big(&self, c: &Self::Comp) -> BigInt;
}

/// Mixed-radix packing of a box `lo <= v <= hi`.
pub(crate) struct Packed {
    lo: Vec<i128>,
    hi: Vec<i128>,
    span: Vec<u128>,
    mult: Vec<u128>,
    volume: u128,
    symmetric: bool,
}

const HEADROOM: i128 = 1 << 125;

impl Packed {
    /// `None` when the box volume or its corners do not fit comfortably.
    pub(crate) fn new(bounds: &[(BigInt, BigInt)]) -> Option<Packed> {
        let mut lo = Vec::with_capacity(bounds.len());
        let mut hi = Vec::with_capacity(bounds.len());
        let mut span = Vec::with_capacity(bounds.len());
        let mut mult = Vec::with_capacity(bounds.len());
        let mut volume: u128 = 1;
        for (l, h) in bounds {
            let (l, h) = (l.to_i128()?, h.to_i128()?);
            if l < -HEADROOM || h > HEADROOM || l > h {
                return None;
            }
            let width = (h - l) as u128 + 1;
            mult.push(volume);
            volume = volume.checked_mul(width)?;
            lo.push(l);
            hi.push(h);
            span.push(width);
        }
        let symmetric = lo.iter().zip(&hi).all(|(l, h)| *l == -*h);
        Some(Packed { lo, hi, span, mult, volume, symmetric })
    }
}

impl Packed {
    /// Keys sharing the most significant component form one contiguous
    /// run of this length.
    pub(crate) fn slice_len(&self) -> u128 {
        self.mult.last().copied().unwrap_or(1)
    }

    /// Span of the most significant component and its lower end.
    pub(crate) fn top(&self) -> (u128, i128) {
        (self.span.last().copied().unwrap_or(1), self.lo.last().copied().unwrap_or(0))
    }

    pub(crate) fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Signed offset of an atom within a slice, ignoring the top component.
    pub(crate) fn low_offset(&self, atom: &[i128]) -> i128 {
        let n = atom.len().saturating_sub(1);
        atom[..n].iter().zip(&self.mult).map(|(a, m)| a * *m as i128).sum()
    }
}

impl KeySpace for Packed {
    type Comp = i128;
    type Key = u128;
    type Delta = u128;

    fn comp(&self, v: &BigInt) -> i128 {
        v.to_i128().expect("component inside the packed box")
    }

    fn zero_key(&self) -> u128 {
        self.lo.iter().zip(&self.mult).map(|(l, m)| (-l) as u128 * m).sum()
    }

    fn delta(&self, atom: &[i128]) -> u128 {
        atom.iter().zip(&self.mult).fold(0u128, |acc, (a, m)| acc.wrapping_add((*a as u128).wrapping_mul(*m)))
    }

    #[inline]
    fn shift(&self, key: &u128, d: &u128) -> u128 {
        key.wrapping_add(*d)
    }

    fn unpack(&self, key: &u128) -> Vec<i128> {
        let mut rest = *key;
        self.span
            .iter()
            .zip(&self.lo)
            .map(|(w, l)| {
                let c = (rest % w) as i128 + l;
                rest /= w;
                c
            })
            .collect()
    }

    #[inline]
    fn pack_sum(&self, a: &[i128], b: &[i128]) -> Option<u128> {
        let mut acc = 0u128;
        for j in 0..a.len() {
            let v = a[j] + b[j];
            if v < self.lo[j] || v > self.hi[j] {
                return None;
            }
            acc += (v - self.lo[j]) as u128 * self.mult[j];
        }
        Some(acc)
    }

    fn negate(&self, key: &u128) -> Option<u128> {
        if self.symmetric {
            return Some(self.volume - 1 - key);
        }
        let neg: Vec<i128> = self.unpack(key).into_iter().map(|c| -c).collect();
        let zero = alloc::vec![0i128; neg.len()];
        self.pack_sum(&neg, &zero)
    }

    fn to_big(&self, c: &i128) -> BigInt {
        BigInt::from(*c)
    }
}

/// Unbounded keys as boxed big integer vectors.
pub(crate) struct Wide {
    arity: usize,
}

impl Wide {
    pub(crate) fn new(arity: usize) -> Wide {
        Wide { arity }
    }
}

impl KeySpace for Wide {
    type Comp = BigInt;
    type Key = Box<[BigInt]>;
    type Delta = Box<[BigInt]>;

    fn comp(&self, v: &BigInt) -> BigInt {
        v.clone()
    }

    fn zero_key(&self) -> Box<[BigInt]> {
        alloc::vec![BigInt::zero(); self.arity].into_boxed_slice()
    }

    fn delta(&self, atom: &[BigInt]) -> Box<[BigInt]> {
        atom.into()
    }

    fn shift(&self, key: &Box<[BigInt]>, d: &Box<[BigInt]>) -> Box<[BigInt]> {
        key.iter().zip(d.iter()).map(|(a, b)| a + b).collect()
    }

    fn unpack(&self, key: &Box<[BigInt]>) -> Vec<BigInt> {
        key.to_vec()
    }

    fn pack_sum(&self, a: &[BigInt], b: &[BigInt]) -> Option<Box<[BigInt]>> {
        Some(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    fn negate(&self, key: &Box<[BigInt]>) -> Option<Box<[BigInt]>> {
        Some(key.iter().map(|c| -c).collect())
    }

    fn to_big(&self, c: &BigInt) -> BigInt {
        c.clone()
    }
}

/// Box `[min(0, s·lo), max(0, s·hi)]` per component, from per-atom extremes.
pub(crate) fn scaled_box(extremes: &[(BigInt, BigInt)], s: u32) -> Vec<(BigInt, BigInt)> {
    let s = BigInt::from(s);
    extremes
        .iter()
        .map(|(l, h)| {
            let lo = if l.is_negative() { l * &s } else { BigInt::zero() };
            let hi = if h.is_positive() { h * &s } else { BigInt::zero() };
            (lo, hi)
        })
        .collect()
}
