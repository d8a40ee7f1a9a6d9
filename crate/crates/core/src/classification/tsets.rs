use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::algebra::{MultiPoly, VarOrder};
use crate::identities::{psi_expansion, PsiResult};
use crate::systems::WellConditionedTuple;
use crate::{Error, Result};

/// The sets `T_{n,m}` for `0 <= m <= n+1`; `sets[m]` lives over `zh(m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientSets {
    pub n: usize,
    pub sets: Vec<Vec<MultiPoly>>,
}

impl CoefficientSets {
    pub fn get(&self, m: usize) -> &[MultiPoly] {
        &self.sets[m]
    }

    /// Evaluates every element of `T_{n,m}` at `(z_1..z_m; h_1..h_m)`.
    pub fn eval(&self, m: usize, z: &[BigInt], h: &[BigInt]) -> Result<Vec<BigInt>> {
        if z.len() != m || h.len() != m {
            return Err(Error::ArityMismatch { expected: m, got: z.len().min(h.len()) });
        }
        let point: Vec<BigInt> = z.iter().chain(h).cloned().collect();
        self.sets[m].iter().map(|p| p.eval(&point)).collect()
    }
}

/// Builds `T_{n,n+1} = {Ψ_n(σ_{·,n+1})}` and each lower set from the nonzero
/// coefficients of the one above in `(z_{m+1}, h_{m+1})`.
///
/// Coefficients are listed per parent in increasing order of their
/// `(z_{m+1}, h_{m+1})` monomial, duplicates dropped.
pub fn build_t_sets(f: &WellConditionedTuple, psi: &PsiResult) -> Result<CoefficientSets> {
    let n = psi.n;
    let top = psi_expansion(&psi.psi, f, n + 1)?;
    if top.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut sets: Vec<Vec<MultiPoly>> = alloc::vec![Vec::new(); n + 2];
    sets[n + 1].push(top);
    for m in (0..=n).rev() {
        let below = VarOrder::zh(m);
        // zh(m+1) is z1..z_{m+1}, h1..h_{m+1}
        let map: Vec<Option<usize>> = (0..2 * (m + 1))
            .map(|i| match i {
                i if i < m => Some(i),
                i if i == m || i == 2 * m + 1 => None,
                i => Some(i - 1),
            })
            .collect();
        let mut out: Vec<MultiPoly> = Vec::new();
        for parent in &sets[m + 1] {
            for coeff in parent.coefficients_in(&[m, 2 * m + 1]).into_values() {
                if coeff.is_zero() {
                    continue;
                }
                let c = coeff.embed(&below, &map)?;
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        sets[m] = out;
    }
    Ok(CoefficientSets { n, sets })
}
