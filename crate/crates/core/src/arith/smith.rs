//! Smith normal form over the localization ℤ_(p).
//!
//! Every nonzero rational is `p^a · u` with `u` a unit of ℤ_(p), so the local
//! ring is a discrete valuation ring and elimination with a pivot of minimal
//! valuation only ever uses integral multipliers.

use num_traits::Zero;

use super::matrix::RationalMatrix;
use super::rational::{RationalScalar, ValuationContext};

/// `input = left · diag(p^exponents, 0 …) · right` with `left`, `right`
/// invertible over ℤ_(p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub left: RationalMatrix,
    pub exponents: Vec<i64>,
    pub right: RationalMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// The `rows × cols` middle factor.
    pub fn middle(&self, ctx: &ValuationContext) -> RationalMatrix {
        let mut d = RationalMatrix::zeros(self.left.cols(), self.right.rows());
        for (i, &a) in self.exponents.iter().enumerate() {
            d[(i, i)] = ctx.pow(a);
        }
        d
    }

    pub fn reconstruct(&self, ctx: &ValuationContext) -> RationalMatrix {
        &(&self.left * &self.middle(ctx)) * &self.right
    }
}

/// Pivot choice: minimal valuation in the remaining block, ties broken by the
/// lowest `(row, col)` in row-major order.
fn find_pivot(a: &RationalMatrix, t: usize, ctx: &ValuationContext) -> Option<(usize, usize, i64)> {
    let mut best: Option<(usize, usize, i64)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            if let Some(v) = ctx.valuation(&a[(i, j)]).finite() {
                if best.map_or(true, |(_, _, bv)| v < bv) {
                    best = Some((i, j, v));
                }
            }
        }
    }
    best
}

pub fn smith_local(m: &RationalMatrix, ctx: &ValuationContext) -> SmithDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    // Invariant: m = left · a · right.
    let mut left = RationalMatrix::identity(rows);
    let mut right = RationalMatrix::identity(cols);
    let mut exponents = Vec::new();

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj, v)) = find_pivot(&a, t, ctx) else {
            break;
        };
        a.swap_rows(t, pi);
        left.swap_cols(t, pi);
        a.swap_cols(t, pj);
        right.swap_rows(t, pj);

        let unit = ctx.unit_part(&a[(t, t)]);
        a.scale_row(t, &unit.recip());
        left.scale_col(t, &unit);

        let pivot = ctx.pow(v);
        for i in t + 1..rows {
            if a[(i, t)].is_zero() {
                continue;
            }
            let c: RationalScalar = &a[(i, t)] / &pivot;
            a.add_row_multiple(i, t, &-c.clone());
            left.add_col_multiple(t, i, &c);
        }
        for j in t + 1..cols {
            if a[(t, j)].is_zero() {
                continue;
            }
            let c: RationalScalar = &a[(t, j)] / &pivot;
            a.add_col_multiple(j, t, &-c.clone());
            right.add_row_multiple(t, j, &c);
        }
        exponents.push(v);
        t += 1;
    }

    SmithDecomposition {
        left,
        rank: exponents.len(),
        exponents,
        right,
    }
}
