//! Exact multivariate polynomial arithmetic over the integers.

mod dependency;
mod linalg;
mod monomial;
mod parse;
mod poly;

pub use dependency::{algebraic_dependency, linear_dependency, monomials_up_to, DependencyOptions, DependencyResult};
pub use linalg::{integer_kernel, nullity_mod};
pub use monomial::Monomial;
pub use poly::{MultiPoly, VarOrder};
