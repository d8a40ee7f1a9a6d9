//! Coefficient hierarchies `T_{n,m}` and the labelling of solutions of
//! `σ_{j,2s}(z; h) = 0` (`1 <= j <= 2s-1`) into the types `S_0`, `T_{n,m}`
//! and `S_s`.

mod label;
mod roots;
mod tsets;

pub use label::{Classifier, LabelKind, SolutionLabel};
pub use roots::{extension_count, root_bound_check, ExtensionCount, RootBoundCheck};
pub use tsets::{build_t_sets, CoefficientSets};

use alloc::vec::Vec;

/// All `k`-element subsequences of `items` in lexicographic order.
pub(crate) fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}
