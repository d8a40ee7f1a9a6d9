use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::combinations;
use super::tsets::{build_t_sets, CoefficientSets};
use crate::counting::AuxSolution;
use crate::identities::{default_degree_cap, find_psi, PsiOptions, PsiResult};
use crate::systems::WellConditionedTuple;
use crate::{Error, Result};

/// Largest `s` whose labels need no relation above level 2.
const MAX_PAIRS: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LabelKind {
    S0,
    T { n: usize, m: usize },
    Ss { s: usize },
}

impl fmt::Display for LabelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelKind::S0 => write!(f, "S_0"),
            LabelKind::T { n, m } => write!(f, "T_{{{n},{m}}}"),
            LabelKind::Ss { s } => write!(f, "S_{s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionLabel {
    pub kind: LabelKind,
    /// 1-based indices where the lower relation is nonzero; empty for `S_0`.
    pub witness_j: Vec<usize>,
    /// 1-based indices, disjoint from `witness_j`, where an element of
    /// `T_{n,m}` is nonzero; empty unless `kind` is `T` with `m >= 1`.
    pub witness_iota: Vec<usize>,
    /// Position in `T_{n,m}` of that element.
    pub witness_phi: Option<usize>,
}

/// Labels solutions of `Σ_{i <= 2s} h_i f_j(z_i) = 0` (`1 <= j <= 2s-1`)
/// by the least level `n`, then the least sublevel `m`.
pub struct Classifier {
    f: WellConditionedTuple,
    s: usize,
    /// `Ψ_0..Ψ_{s-1}`.
    psis: Vec<PsiResult>,
    /// `T_{n,·}` for `1 <= n < s`, at index `n`.
    tsets: Vec<Option<CoefficientSets>>,
}

struct Point<'a> {
    sol: &'a AuxSolution,
    /// `f_j(z_i)` at `[i][j]`.
    vals: Vec<Vec<BigInt>>,
}

impl Point<'_> {
    fn sigma(&self, idx: &[usize], count: usize) -> Vec<BigInt> {
        (0..count).map(|j| idx.iter().map(|&i| &self.vals[i][j] * self.sol.h[i]).sum()).collect()
    }

    fn zh(&self, idx: &[usize]) -> (Vec<BigInt>, Vec<BigInt>) {
        (
            idx.iter().map(|&i| BigInt::from(self.sol.z[i])).collect(),
            idx.iter().map(|&i| BigInt::from(self.sol.h[i])).collect(),
        )
    }
}

impl Classifier {
    pub fn new(f: &WellConditionedTuple, s: u32, opts: &PsiOptions) -> Result<Classifier> {
        if s == 0 {
            return Err(Error::InvalidParams("s must be positive".into()));
        }
        if s > MAX_PAIRS {
            return Err(Error::LevelCapExceeded(s as usize - 1));
        }
        let s = s as usize;
        if f.t() < 2 * s - 1 {
            return Err(Error::ArityMismatch { expected: 2 * s - 1, got: f.t() });
        }
        let psis = (0..s).map(|n| find_psi(f, n, default_degree_cap(n), opts)).collect::<Result<Vec<_>>>()?;
        let tsets = (0..s)
            .map(|n| if n == 0 { Ok(None) } else { build_t_sets(f, &psis[n]).map(Some) })
            .collect::<Result<Vec<_>>>()?;
        Ok(Classifier { f: f.clone(), s, psis, tsets })
    }

    pub fn pairs(&self) -> usize {
        self.s
    }

    pub fn psi(&self, n: usize) -> &PsiResult {
        &self.psis[n]
    }

    pub fn t_sets(&self, n: usize) -> Option<&CoefficientSets> {
        self.tsets.get(n).and_then(Option::as_ref)
    }

    fn point<'a>(&self, sol: &'a AuxSolution) -> Result<Point<'a>> {
        let n = 2 * self.s;
        if sol.z.len() != n || sol.h.len() != n {
            return Err(Error::ArityMismatch { expected: n, got: sol.z.len().min(sol.h.len()) });
        }
        let count = 2 * self.s - 1;
        let vals: Vec<Vec<BigInt>> =
            sol.z.iter().map(|&z| self.f.polys()[..count].iter().map(|p| p.eval(&BigInt::from(z))).collect()).collect();
        let pt = Point { sol, vals };
        let all: Vec<usize> = (0..n).collect();
        if pt.sigma(&all, count).iter().any(|v| !v.is_zero()) {
            return Err(Error::NotASolution);
        }
        Ok(pt)
    }

    /// `Ψ_n(σ_{·,n+1})` at the atoms `idx` (`idx.len() == n + 1`).
    fn relation_at(&self, pt: &Point<'_>, n: usize, idx: &[usize]) -> BigInt {
        let w = pt.sigma(idx, 2 * n + 1);
        self.psis[n].psi.eval(&w).expect("arity 2n+1")
    }

    /// First `n`-subset (lexicographic) where `Ψ_{n-1}` is nonzero.
    fn lower_witnesses(&self, pt: &Point<'_>, n: usize) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..2 * self.s).collect();
        combinations(&all, n).into_iter().filter(|j| !self.relation_at(pt, n - 1, j).is_zero()).collect()
    }

    pub fn classify(&self, sol: &AuxSolution) -> Result<SolutionLabel> {
        let pt = self.point(sol)?;
        let all: Vec<usize> = (0..2 * self.s).collect();
        for n in 0..self.s {
            let cond_i = combinations(&all, n + 1).iter().all(|i| self.relation_at(&pt, n, i).is_zero());
            if !cond_i {
                continue;
            }
            if n == 0 {
                return Ok(SolutionLabel {
                    kind: LabelKind::S0,
                    witness_j: Vec::new(),
                    witness_iota: Vec::new(),
                    witness_phi: None,
                });
            }
            // (i) failed at n - 1, so some witness exists
            let js = self.lower_witnesses(&pt, n);
            let sets = self.tsets[n].as_ref().expect("built for 1 <= n < s");
            for m in 0..=n {
                for j in &js {
                    if let Some((iota, phi)) = self.sublevel(&pt, sets, j, m)? {
                        return Ok(SolutionLabel {
                            kind: LabelKind::T { n, m },
                            witness_j: one_based(j),
                            witness_iota: one_based(&iota),
                            witness_phi: phi,
                        });
                    }
                }
            }
            return Err(Error::Inconsistent(format!("no sublevel found at level {n}")));
        }
        let js = self.lower_witnesses(&pt, self.s);
        let j = js.first().ok_or_else(|| Error::Inconsistent("no level applies".into()))?;
        Ok(SolutionLabel {
            kind: LabelKind::Ss { s: self.s },
            witness_j: one_based(j),
            witness_iota: Vec::new(),
            witness_phi: None,
        })
    }

    /// Conditions (iii) and (iv) at sublevel `m` outside `j`.
    #[allow(clippy::type_complexity)]
    fn sublevel(
        &self,
        pt: &Point<'_>,
        sets: &CoefficientSets,
        j: &[usize],
        m: usize,
    ) -> Result<Option<(Vec<usize>, Option<usize>)>> {
        let rest: Vec<usize> = (0..2 * self.s).filter(|i| !j.contains(i)).collect();
        for i in combinations(&rest, m + 1) {
            let (z, h) = pt.zh(&i);
            if sets.eval(m + 1, &z, &h)?.iter().any(|v| !v.is_zero()) {
                return Ok(None);
            }
        }
        if m == 0 {
            return Ok(Some((Vec::new(), None)));
        }
        for iota in combinations(&rest, m) {
            let (z, h) = pt.zh(&iota);
            if let Some(p) = sets.eval(m, &z, &h)?.iter().position(|v| !v.is_zero()) {
                return Ok(Some((iota, Some(p))));
            }
        }
        Ok(None)
    }

    /// Re-evaluates the nonvanishing conditions named by the witnesses.
    pub fn verify_witnesses(&self, sol: &AuxSolution, label: &SolutionLabel) -> Result<bool> {
        let pt = self.point(sol)?;
        let j: Vec<usize> = label.witness_j.iter().map(|i| i - 1).collect();
        let n = match label.kind {
            LabelKind::S0 => return Ok(j.is_empty()),
            LabelKind::T { n, .. } => n,
            LabelKind::Ss { s } => s,
        };
        if j.len() != n || self.relation_at(&pt, n - 1, &j).is_zero() {
            return Ok(false);
        }
        if let LabelKind::T { n, m } = label.kind {
            if m == 0 {
                return Ok(label.witness_iota.is_empty());
            }
            let iota: Vec<usize> = label.witness_iota.iter().map(|i| i - 1).collect();
            if iota.len() != m || iota.iter().any(|i| j.contains(i)) {
                return Ok(false);
            }
            let sets = self.tsets[n].as_ref().expect("built");
            let (z, h) = pt.zh(&iota);
            let vals = sets.eval(m, &z, &h)?;
            return Ok(label.witness_phi.and_then(|p| vals.get(p)).is_some_and(|v| !v.is_zero()));
        }
        Ok(true)
    }

    /// For an `S_s` label: the common value `N` of `Ψ_{s-1}` on the witness
    /// atoms and on the complementary atoms with negated `h`, and whether
    /// `h_1⋯h_s ∏_{i<j}(z_i - z_j)` over the witness atoms divides it.
    pub fn divisibility_diagnostic(&self, sol: &AuxSolution, label: &SolutionLabel) -> Result<Option<(BigInt, bool)>> {
        let LabelKind::Ss { s } = label.kind else {
            return Ok(None);
        };
        let pt = self.point(sol)?;
        let i: Vec<usize> = label.witness_j.iter().map(|x| x - 1).collect();
        let big_n = self.relation_at(&pt, s - 1, &i);
        let comp: Vec<usize> = (0..2 * s).filter(|x| !i.contains(x)).collect();
        let w: Vec<BigInt> = pt.sigma(&comp, 2 * s - 1).into_iter().map(|v| -v).collect();
        let other = self.psis[s - 1].psi.eval(&w)?;
        if other != big_n {
            return Err(Error::Inconsistent("complementary relation values differ".into()));
        }
        let mut d = BigInt::from(1);
        for (a, &x) in i.iter().enumerate() {
            d *= sol.h[x];
            for &y in &i[a + 1..] {
                d *= sol.z[x] - sol.z[y];
            }
        }
        let divides = !d.is_zero() && big_n.is_multiple_of(&d);
        Ok(Some((big_n, divides)))
    }

    /// Label histogram over a solution list.
    pub fn histogram(&self, sols: &[AuxSolution]) -> Result<BTreeMap<LabelKind, u64>> {
        let labels = self.classify_all(sols)?;
        let mut out = BTreeMap::new();
        for l in labels {
            *out.entry(l.kind).or_insert(0) += 1;
        }
        Ok(out)
    }

    pub fn classify_all(&self, sols: &[AuxSolution]) -> Result<Vec<SolutionLabel>> {
        #[cfg(feature = "std")]
        {
            use rayon::prelude::*;
            sols.par_iter().map(|s| self.classify(s)).collect()
        }
        #[cfg(not(feature = "std"))]
        {
            sols.iter().map(|s| self.classify(s)).collect()
        }
    }
}

fn one_based(idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|i| i + 1).collect()
}
