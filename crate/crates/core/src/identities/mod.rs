//! Dependency polynomials `Ψ_n`, their cofactors `Φ_n`, the block
//! determinants `D_n`, the Vandermonde quotient `Θ` and the shifted
//! coefficient formula.

mod det;
mod psi;
mod shift;

pub use det::{det_block, determinant, theta_factor, vandermonde, BlockDet, Minor, ThetaResult};
pub use psi::{
    builtin_identities_check, check_nonvanishing, check_vanishing, default_degree_cap, extract_phi, find_psi,
    psi_expansion, recombine_phi, sextic_relation, IdentityReport, PhiResult, PsiOptions, PsiResult,
};
pub use shift::{shift_direct, shift_poly_coeffs};
