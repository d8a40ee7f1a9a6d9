use alloc::vec::Vec;

use crate::algebra::{algebraic_dependency, DependencyOptions, MultiPoly, VarOrder};
use crate::systems::{sigma_forms, WellConditionedTuple};
use crate::{Error, Result};

use super::det::vandermonde;

/// Highest level searched without an explicit opt-in.
const MAX_DEFAULT_LEVEL: usize = 2;

#[derive(Clone, Debug, Default)]
pub struct PsiOptions {
    pub dependency: DependencyOptions,
    /// Allows levels above 2, whose searches grow quickly.
    pub allow_high_level: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiResult {
    /// Relation in `w1..w_{2n+1}`.
    pub psi: MultiPoly,
    pub n: usize,
    pub total_degree: u32,
    /// Vanishing at level `n` and nonvanishing at level `n+1` both checked.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiResult {
    /// Cofactor over `z1..z_{n+1}, h1..h_{n+1}`.
    pub phi: MultiPoly,
    pub n: usize,
}

/// Degree cap used when none is given: 8 at level 1, 10 at level 2.
pub fn default_degree_cap(n: usize) -> u32 {
    match n {
        0 => 1,
        1 => 8,
        _ => 10,
    }
}

/// `Ψ(σ_{1,level}, …, σ_{2n+1,level})` over `z1..z_level, h1..h_level`.
pub fn psi_expansion(psi: &MultiPoly, f: &WellConditionedTuple, level: usize) -> Result<MultiPoly> {
    let count = psi.nvars();
    if count == 0 || count.is_multiple_of(2) {
        return Err(Error::ArityMismatch { expected: 2 * (count / 2) + 1, got: count });
    }
    if f.t() < count {
        return Err(Error::ArityMismatch { expected: count, got: f.t() });
    }
    psi.compose(&sigma_forms(f, count, level)?)
}

/// The relation in `w1..w_{2n+1}` vanishes on the level-`n` forms.
pub fn check_vanishing(psi: &MultiPoly, f: &WellConditionedTuple, n: usize) -> Result<bool> {
    expect_level(psi, n)?;
    Ok(psi_expansion(psi, f, n)?.is_zero())
}

/// The relation does not vanish on the level-`(n+1)` forms.
pub fn check_nonvanishing(psi: &MultiPoly, f: &WellConditionedTuple, n: usize) -> Result<bool> {
    expect_level(psi, n)?;
    Ok(!psi_expansion(psi, f, n + 1)?.is_zero())
}

fn expect_level(psi: &MultiPoly, n: usize) -> Result<()> {
    if psi.nvars() != 2 * n + 1 {
        return Err(Error::ArityMismatch { expected: 2 * n + 1, got: psi.nvars() });
    }
    Ok(())
}

/// Minimal-degree polynomial relation among `σ_{1,n}, …, σ_{2n+1,n}`.
///
/// Degrees `1, 2, …, degree_cap` are tried in turn, so the result has the
/// least possible total degree. Uses `f_1..f_{2n+1}`.
pub fn find_psi(f: &WellConditionedTuple, n: usize, degree_cap: u32, opts: &PsiOptions) -> Result<PsiResult> {
    let count = 2 * n + 1;
    if f.t() < count {
        return Err(Error::ArityMismatch { expected: count, got: f.t() });
    }
    if n > MAX_DEFAULT_LEVEL && !opts.allow_high_level {
        return Err(Error::LevelCapExceeded(n));
    }
    if degree_cap == 0 {
        return Err(Error::InvalidParams("degree cap must be at least 1".into()));
    }
    if n == 0 {
        // no variables: every σ is zero and w1 is the natural relation
        let psi = MultiPoly::var(&VarOrder::w(1), 0);
        let certified = check_vanishing(&psi, f, 0)? && check_nonvanishing(&psi, f, 0)?;
        return Ok(PsiResult { psi, n, total_degree: 1, certified });
    }
    let gens = sigma_forms(f, count, n)?;
    for d in 1..=degree_cap {
        let found = algebraic_dependency(&gens, d, &opts.dependency)?;
        if let Some(psi) = found.relation {
            let certified = check_vanishing(&psi, f, n)? && check_nonvanishing(&psi, f, n)?;
            if !certified {
                return Err(Error::Inconsistent("minimal relation vanishes one level up".into()));
            }
            let total_degree = psi.total_degree().unwrap_or(0);
            return Ok(PsiResult { psi, n, total_degree, certified });
        }
    }
    Err(Error::NotFoundWithinCap { cap: degree_cap })
}

/// `h_1 ⋯ h_{n+1} ∏_{i<j} (z_i - z_j)` over `zh(n+1)`.
fn phi_divisor(n: usize) -> MultiPoly {
    let vars = VarOrder::zh(n + 1);
    let hs = (0..=n).fold(MultiPoly::one(&vars), |acc, i| &acc * &MultiPoly::var(&vars, n + 1 + i));
    let zs: Vec<usize> = (0..=n).collect();
    &hs * &vandermonde(&vars, &zs)
}

/// Divides the level-`(n+1)` expansion of `Ψ_n` by
/// `h_1 ⋯ h_{n+1} ∏_{i<j} (z_i - z_j)`.
pub fn extract_phi(psi: &PsiResult, f: &WellConditionedTuple) -> Result<PhiResult> {
    let n = psi.n;
    expect_level(&psi.psi, n)?;
    let expansion = psi_expansion(&psi.psi, f, n + 1)?;
    let phi = expansion.divide_exact(&phi_divisor(n))?;
    if phi.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(PhiResult { phi, n })
}

/// `Φ_n · h_1 ⋯ h_{n+1} ∏_{i<j} (z_i - z_j)`.
pub fn recombine_phi(phi: &PhiResult) -> Result<MultiPoly> {
    phi.phi.try_mul(&phi_divisor(phi.n))
}

/// `(w4 w1 - w3 w2)^2 (w5 w3 - w4^2) - (w5 w1 - w3^2)(w4 w2 - w3^2)^2`.
///
/// With `w_j = Σ h_i z_i^{5-j}` this is the moment form
/// `(s1 s4 - s2 s3)^2 (s0 s2 - s1^2) - (s0 s4 - s2^2)(s1 s3 - s2^2)^2`.
pub fn sextic_relation() -> MultiPoly {
    let v = VarOrder::w(5);
    let w = |i: usize| MultiPoly::var(&v, i - 1);
    let a = &(&w(4) * &w(1)) - &(&w(3) * &w(2));
    let b = &(&w(5) * &w(3)) - &w(4).pow(2);
    let c = &(&w(5) * &w(1)) - &w(3).pow(2);
    let d = &(&w(4) * &w(2)) - &w(3).pow(2);
    &(&a.pow(2) * &b) - &(&c * &d.pow(2))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    /// `(h1+h2)(h1z1²+h2z2²) - (h1z1+h2z2)² = h1h2(z1-z2)²` term for term.
    pub quadratic_identity: bool,
    /// The sextic vanishes on two-atom moments.
    pub sextic_vanishes: bool,
    /// Three-atom sextic is divisible by `h1h2h3 ∏(z_i-z_j)^2`.
    pub sextic_divisible: bool,
    /// The quotient of that division.
    pub f63: MultiPoly,
    /// Degree of `F` in the `z` and in the `h` variables.
    pub f63_bidegree: (u32, u32),
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.quadratic_identity && self.sextic_vanishes && self.sextic_divisible && self.f63_bidegree == (6, 3)
    }
}

/// Expands the two explicit moment identities and extracts `F_{6,3}`.
pub fn builtin_identities_check() -> Result<IdentityReport> {
    let v2 = VarOrder::zh(2);
    let var = |v: &VarOrder, name: &str| MultiPoly::named(v, name);
    let (z1, z2, h1, h2) = (var(&v2, "z1"), var(&v2, "z2"), var(&v2, "h1"), var(&v2, "h2"));
    let lhs = &(&(&h1 + &h2) * &(&(&h1 * &z1.pow(2)) + &(&h2 * &z2.pow(2)))) - &(&(&h1 * &z1) + &(&h2 * &z2)).pow(2);
    let rhs = &(&h1 * &h2) * &(&z1 - &z2).pow(2);
    let quadratic_identity = lhs.try_sub(&rhs)?.is_zero();

    let f = crate::systems::monomial_tuple(5, 1)?;
    let sextic = sextic_relation();
    let sextic_vanishes = psi_expansion(&sextic, &f, 2)?.is_zero();

    let three = psi_expansion(&sextic, &f, 3)?;
    let vars = three.vars().clone();
    let hs = (3..6).fold(MultiPoly::one(&vars), |acc, i| &acc * &MultiPoly::var(&vars, i));
    let divisor = &hs * &vandermonde(&vars, &[0, 1, 2]).pow(2);
    let (sextic_divisible, f63) = match three.divide_exact(&divisor) {
        Ok(q) => (true, q),
        Err(Error::NotDivisible) => (false, MultiPoly::zero(&vars)),
        Err(e) => return Err(e),
    };
    let f63_bidegree = f63.bidegree(&[0, 1, 2], &[3, 4, 5]).unwrap_or((0, 0));
    Ok(IdentityReport { quadratic_identity, sextic_vanishes, sextic_divisible, f63, f63_bidegree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{monomial_tuple, validate_tuple, UniPoly};
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn level_zero() {
        let f = monomial_tuple(3, 1).unwrap();
        let r = find_psi(&f, 0, 1, &PsiOptions::default()).unwrap();
        assert_eq!(r.psi.to_string(), "1*w1");
        assert!(r.certified);
        let phi = extract_phi(&r, &f).unwrap();
        assert_eq!(phi.phi.to_string(), "1*z1^2");
    }

    #[test]
    fn level_one_quadratic() {
        let f = monomial_tuple(3, 1).unwrap();
        let r = find_psi(&f, 1, 8, &PsiOptions::default()).unwrap();
        assert_eq!(r.psi.to_string(), "1*w1*w3 - 1*w2^2");
        assert_eq!(r.total_degree, 2);
        let phi = extract_phi(&r, &f).unwrap();
        assert_eq!(phi.phi.to_string(), "1*z1 - 1*z2");
        assert_eq!(recombine_phi(&phi).unwrap(), psi_expansion(&r.psi, &f, 2).unwrap());
    }

    #[test]
    fn level_one_cubic() {
        let f = validate_tuple(vec![UniPoly::monomial(3), UniPoly::monomial(1), UniPoly::monomial(0)]).unwrap();
        let r = find_psi(&f, 1, 8, &PsiOptions::default()).unwrap();
        assert_eq!(r.psi.to_string(), "1*w1*w3^2 - 1*w2^3");
        assert!(matches!(find_psi(&f, 1, 2, &PsiOptions::default()), Err(Error::NotFoundWithinCap { cap: 2 })));
    }

    #[test]
    fn checks_reject_bad_candidates() {
        let f = monomial_tuple(3, 1).unwrap();
        let w1 = MultiPoly::var(&VarOrder::w(3), 0);
        assert!(!check_vanishing(&w1, &f, 1).unwrap());
        assert!(!check_nonvanishing(&MultiPoly::zero(&VarOrder::w(3)), &f, 1).unwrap());
        assert!(check_vanishing(&MultiPoly::var(&VarOrder::w(1), 0), &f, 0).unwrap());
        assert!(matches!(check_vanishing(&w1, &f, 2), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn level_two_moments() {
        let f = monomial_tuple(5, 1).unwrap();
        let r = find_psi(&f, 2, 10, &PsiOptions::default()).unwrap();
        assert_eq!(r.total_degree, 3);
        // the 3x3 Hankel determinant of s0..s4 with s_j = w_{5-j}
        assert_eq!(r.psi.to_string(), "1*w1*w3*w5 - 1*w1*w4^2 - 1*w2^2*w5 + 2*w2*w3*w4 - 1*w3^3");
        let phi = extract_phi(&r, &f).unwrap();
        assert_eq!(recombine_phi(&phi).unwrap(), psi_expansion(&r.psi, &f, 3).unwrap());
        let vand = vandermonde(phi.phi.vars(), &[0, 1, 2]);
        assert!(phi.phi == vand || phi.phi == -&vand, "{}", phi.phi);
    }

    #[test]
    fn high_levels_need_opt_in() {
        let f = monomial_tuple(8, 1).unwrap();
        assert_eq!(find_psi(&f, 3, 4, &PsiOptions::default()), Err(Error::LevelCapExceeded(3)));
    }

    #[test]
    fn builtin_identities() {
        let rep = builtin_identities_check().unwrap();
        assert!(rep.all_hold(), "{rep:?}");
    }
}
