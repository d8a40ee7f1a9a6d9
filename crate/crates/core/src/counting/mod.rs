//! Exact solution counts of the mean values as lattice point counts.
//!
//! Every count is `Σ_key R(key)·R(±key)` for a representation table `R`
//! built by convolving a single-variable (or single-pair) table with itself.
//! The [`brute_force_oracle`] recounts the same systems by direct
//! enumeration without tables, for validation.

mod keys;
mod mitm;
mod oracle;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::time::Duration;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::systems::WellConditionedTuple;

pub use mitm::{count_aux, count_lifted, count_sliced, count_vmvt, rep_power_sums};
pub use oracle::{aux_solutions, brute_force_oracle, AuxSolution};

/// Limits shared by all counting routines.
#[derive(Clone, Debug)]
pub struct CountConfig {
    /// Upper bound on distinct keys of a representation table.
    pub max_keys: usize,
    /// Upper bound on tuples visited by the oracle.
    pub oracle_ceiling: u128,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig { max_keys: 60_000_000, oracle_ceiling: 100_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Mitm,
    Naive,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Mitm => "mitm",
            Method::Naive => "naive",
        }
    }
}

/// Which system is counted, with its sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CountParams {
    /// `Σ x_i^j = Σ y_i^j` for `1 <= j <= k`, `j != r`, over `[1, X]`.
    Sliced { s: u32, k: u32, r: u32, x: u64 },
    /// `Σ_{i<=2s} h_i f_j(z_i) = 0` for every `f_j`, `|h_i| <= H`, `z_i` in `[1, X]`.
    Aux { f: WellConditionedTuple, s: u32, r: u32, x: u64, h: u64 },
    /// The full Vinogradov system of degree `d` with `sigma` variables per side.
    Vmvt { sigma: u32, d: u32, x: u64 },
    /// The shifted system: `u, v` in `[1, 2X]^s`, `|h| <= H`, `z` in `[1, X]`.
    Lifted { s: u32, k: u32, r: u32, x: u64, h: u64 },
}

impl CountParams {
    pub fn experiment(&self) -> &'static str {
        match self {
            CountParams::Sliced { .. } => "count-i",
            CountParams::Aux { .. } => "count-a",
            CountParams::Vmvt { .. } => "count-j",
            CountParams::Lifted { .. } => "count-lifted",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub params: CountParams,
    pub count: BigInt,
    pub method: Method,
    /// Wall time; zero when built without the `std` feature.
    pub elapsed: Duration,
}

/// Values of the active equations for one side of a system.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PowerKey(pub Vec<BigInt>);

impl PowerKey {
    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// Fixed-width encoding: arity as `u32` little-endian, then every value as
    /// a 16-byte little-endian two's-complement integer. `None` when a value
    /// does not fit in 128 bits.
    pub fn encode(&self) -> Option<Vec<u8>> {
        let mut out = Vec::with_capacity(4 + 16 * self.0.len());
        out.extend_from_slice(&(self.0.len() as u32).to_le_bytes());
        for v in &self.0 {
            out.extend_from_slice(&v.to_i128()?.to_le_bytes());
        }
        Some(out)
    }

    pub fn decode(bytes: &[u8]) -> Option<PowerKey> {
        let arity = u32::from_le_bytes(bytes.get(..4)?.try_into().ok()?) as usize;
        if bytes.len() != 4 + 16 * arity {
            return None;
        }
        let vals = bytes[4..]
            .chunks_exact(16)
            .map(|c| BigInt::from(i128::from_le_bytes(c.try_into().expect("16 bytes"))))
            .collect();
        Some(PowerKey(vals))
    }
}

/// Representation map: how many tuples produce each key.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RepMap {
    entries: BTreeMap<PowerKey, BigInt>,
}

impl RepMap {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &[i64]) -> BigInt {
        let k = PowerKey(key.iter().map(|&v| BigInt::from(v)).collect());
        self.entries.get(&k).cloned().unwrap_or_default()
    }

    /// Entries in increasing key order.
    pub fn iter(&self) -> impl Iterator<Item = (&PowerKey, &BigInt)> {
        self.entries.iter()
    }

    /// Number of tuples represented.
    pub fn total_mass(&self) -> BigInt {
        self.entries.values().fold(BigInt::zero(), |a, b| a + b)
    }

    /// `Σ R(key)^2`.
    pub fn sum_of_squares(&self) -> BigInt {
        self.entries.values().map(|c| c * c).fold(BigInt::zero(), |a, b| a + b)
    }

    pub(crate) fn insert(&mut self, key: PowerKey, mult: BigInt) {
        self.entries.insert(key, mult);
    }
}

pub(crate) fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    #[cfg(feature = "std")]
    {
        let start = std::time::Instant::now();
        let out = f();
        (out, start.elapsed())
    }
    #[cfg(not(feature = "std"))]
    {
        (f(), Duration::ZERO)
    }
}
