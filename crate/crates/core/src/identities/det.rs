use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::algebra::{MultiPoly, VarOrder};
use crate::systems::WellConditionedTuple;
use crate::{Error, Result};

/// Determinant of a square matrix of polynomials sharing one variable order,
/// by cofactor expansion along the first row.
pub fn determinant(m: &[Vec<MultiPoly>], vars: &VarOrder) -> Result<MultiPoly> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidParams("matrix is not square".into()));
    }
    let cols: Vec<usize> = (0..n).collect();
    Ok(det_rec(m, 0, &cols, vars))
}

fn det_rec(m: &[Vec<MultiPoly>], row: usize, cols: &[usize], vars: &VarOrder) -> MultiPoly {
    if cols.is_empty() {
        return MultiPoly::one(vars);
    }
    let mut acc = MultiPoly::zero(vars);
    for (pos, &c) in cols.iter().enumerate() {
        if m[row][c].is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = &m[row][c] * &det_rec(m, row + 1, &rest, vars);
        acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// `∏_{i<j} (x_i - x_j)` over the variables at `indices`, in that order.
pub fn vandermonde(vars: &VarOrder, indices: &[usize]) -> MultiPoly {
    let mut acc = MultiPoly::one(vars);
    for (a, &i) in indices.iter().enumerate() {
        for &j in &indices[a + 1..] {
            acc = &acc * &(&MultiPoly::var(vars, i) - &MultiPoly::var(vars, j));
        }
    }
    acc
}

/// One term of the two-row Laplace expansion of `det(D_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minor {
    /// Columns (1-based, increasing) taken by the two expansion rows.
    pub cols: (usize, usize),
    pub u: MultiPoly,
    pub v: MultiPoly,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDet {
    pub n: usize,
    pub det: MultiPoly,
    /// Expansion along the rows `h_1 f'(z_1)` and `f(z_1)`; empty for `n = 0`.
    pub minors: Vec<Minor>,
}

impl BlockDet {
    /// `Σ sign · U(a) · V(a)`.
    pub fn expansion(&self) -> MultiPoly {
        let vars = self.det.vars();
        self.minors.iter().fold(MultiPoly::zero(vars), |acc, m| {
            let t = &m.u * &m.v;
            if m.sign > 0 {
                &acc + &t
            } else {
                &acc - &t
            }
        })
    }
}

/// The `(2n+1) × (2n+1)` matrix with rows `h_i f_j'(z_i)` for `i <= n`
/// followed by rows `f_j(z_i)` for `i <= n+1`, over `z1..z_{n+1}, h1..h_{n+1}`,
/// its determinant and its two-row Laplace expansion.
pub fn det_block(f: &WellConditionedTuple, n: usize) -> Result<BlockDet> {
    let size = 2 * n + 1;
    if f.t() < size {
        return Err(Error::ArityMismatch { expected: size, got: f.t() });
    }
    let vars = VarOrder::zh(n + 1);
    let polys = &f.polys()[..size];
    let mut rows: Vec<Vec<MultiPoly>> = Vec::with_capacity(size);
    for i in 0..n {
        let h = MultiPoly::var(&vars, n + 1 + i);
        rows.push(polys.iter().map(|p| &h * &p.derivative().to_multi(&vars, i)).collect());
    }
    for i in 0..=n {
        rows.push(polys.iter().map(|p| p.to_multi(&vars, i)).collect());
    }
    let det = determinant(&rows, &vars)?;
    let mut minors = Vec::new();
    if n > 0 {
        let (r1, r2) = (0, n);
        let others: Vec<usize> = (0..size).filter(|&r| r != r1 && r != r2).collect();
        for a1 in 0..size {
            for a2 in a1 + 1..size {
                let u = &(&rows[r1][a1] * &rows[r2][a2]) - &(&rows[r1][a2] * &rows[r2][a1]);
                let rest: Vec<usize> = (0..size).filter(|&c| c != a1 && c != a2).collect();
                let sub: Vec<Vec<MultiPoly>> =
                    others.iter().map(|&r| rest.iter().map(|&c| rows[r][c].clone()).collect()).collect();
                let v = determinant(&sub, &vars)?;
                // (-1)^{(row sum) + (column sum)} with 1-based indices
                let parity = (r1 + 1 + r2 + 1 + a1 + 1 + a2 + 1) % 2;
                minors.push(Minor { cols: (a1 + 1, a2 + 1), u, v, sign: if parity == 0 { 1 } else { -1 } });
            }
        }
    }
    Ok(BlockDet { n, det, minors })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaResult {
    pub m: usize,
    /// `det(f_j(z_i)) / ∏_{i<j}(z_i - z_j)` over `z1..zm`.
    pub theta: MultiPoly,
    pub determinant: MultiPoly,
    /// `(point, Θ(point))` at equally spaced points far from the roots.
    pub samples: Vec<(Vec<BigInt>, BigInt)>,
}

impl ThetaResult {
    pub fn min_abs_sample(&self) -> Option<BigInt> {
        self.samples.iter().map(|(_, v)| v.abs()).min()
    }
}

/// Vandermonde quotient of the first `m` polynomials of `f`.
pub fn theta_factor(f: &WellConditionedTuple, m: usize) -> Result<ThetaResult> {
    if m == 0 || m > f.t() {
        return Err(Error::InvalidParams(format!("need 1 <= m <= {}, got {m}", f.t())));
    }
    let names: Vec<String> = (1..=m).map(|i| format!("z{i}")).collect();
    let vars = VarOrder::new(names);
    let rows: Vec<Vec<MultiPoly>> =
        (0..m).map(|i| f.polys()[..m].iter().map(|p| p.to_multi(&vars, i)).collect()).collect();
    let det = determinant(&rows, &vars)?;
    let idx: Vec<usize> = (0..m).collect();
    let theta = det.divide_exact(&vandermonde(&vars, &idx))?;

    let scale: BigInt = f.polys().iter().flat_map(|p| p.coeffs().iter().map(|c| c.abs())).sum();
    let base: BigInt = (scale * BigInt::from(10)).max(BigInt::from(10));
    let mut samples = Vec::new();
    for mult in [1u32, 2, 5] {
        for step in [1u32, 2, 3, 7] {
            let start = &base * mult;
            let point: Vec<BigInt> = (0..m).map(|i| &start + BigInt::from(step * i as u32)).collect();
            let value = theta.eval(&point)?;
            samples.push((point, value));
        }
    }
    Ok(ThetaResult { m, theta, determinant: det, samples })
}
