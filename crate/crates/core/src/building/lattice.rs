use std::fmt;

use num_traits::Zero;

use crate::arith::{smith_local, RationalMatrix, RationalScalar, ValuationContext};
use crate::error::{Error, Result};

/// Linear subspace of ℚ^n spanned by independent columns.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: RationalMatrix,
}

impl Subspace {
    pub fn new(basis: RationalMatrix) -> Result<Self> {
        if basis.rank() < basis.cols() {
            return Err(Error::RankDeficient);
        }
        Ok(Subspace { basis })
    }

    /// Span of arbitrary (possibly dependent) columns.
    pub fn span(generators: &RationalMatrix) -> Self {
        let (_, pivots) = generators.rref();
        let cols: Vec<_> = pivots.iter().map(|&j| generators.column(j)).collect();
        Subspace {
            basis: RationalMatrix::from_columns(generators.rows(), &cols),
        }
    }

    pub fn zero(n: usize) -> Self {
        Subspace {
            basis: RationalMatrix::zeros(n, 0),
        }
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            basis: RationalMatrix::identity(n),
        }
    }

    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(&self.basis.hcat(&other.basis))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let n = self.ambient_dim();
        let stacked = self
            .basis
            .hcat(&other.basis.scale(&-RationalScalar::from_integer(1.into())));
        let k = stacked.kernel_basis();
        let coeffs = k.row_range(0..self.dim());
        Subspace {
            basis: if coeffs.cols() == 0 {
                RationalMatrix::zeros(n, 0)
            } else {
                &self.basis * &coeffs
            },
        }
    }

    /// Same span.
    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.sum(other).dim() == self.dim()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        self.sum(other).dim() == self.dim()
    }

    /// Image under an invertible linear map.
    pub fn transform(&self, g: &RationalMatrix) -> Subspace {
        Subspace {
            basis: g * &self.basis,
        }
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace{:?}", self.basis)
    }
}

/// A ℤ_(p)-lattice given by the independent columns of its basis matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    basis: RationalMatrix,
    ctx: ValuationContext,
}

impl Lattice {
    pub fn new(basis: RationalMatrix, ctx: &ValuationContext) -> Result<Self> {
        if basis.rank() < basis.cols() {
            return Err(Error::RankDeficient);
        }
        Ok(Lattice {
            basis,
            ctx: ctx.clone(),
        })
    }

    /// The standard lattice ℤ_(p)^n.
    pub fn standard(n: usize, ctx: &ValuationContext) -> Self {
        Lattice {
            basis: RationalMatrix::identity(n),
            ctx: ctx.clone(),
        }
    }

    /// Lattice generated by arbitrary columns, reduced to a canonical basis.
    pub fn generated_by(generators: &RationalMatrix, ctx: &ValuationContext) -> Self {
        Lattice {
            basis: module_hnf(generators, ctx),
            ctx: ctx.clone(),
        }
    }

    pub(crate) fn from_parts_unchecked(basis: RationalMatrix, ctx: &ValuationContext) -> Self {
        Lattice {
            basis,
            ctx: ctx.clone(),
        }
    }

    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn ctx(&self) -> &ValuationContext {
        &self.ctx
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient_dim()
    }

    pub fn span(&self) -> Subspace {
        Subspace {
            basis: self.basis.clone(),
        }
    }

    /// `p^k · self`
    pub fn scaled(&self, k: i64) -> Lattice {
        Lattice {
            basis: self.basis.scale(&self.ctx.pow(k)),
            ctx: self.ctx.clone(),
        }
    }

    pub fn transform(&self, g: &RationalMatrix) -> Lattice {
        Lattice {
            basis: g * &self.basis,
            ctx: self.ctx.clone(),
        }
    }

    /// Canonical basis of the module (not of its homothety class).
    pub fn hnf(&self) -> RationalMatrix {
        module_hnf(&self.basis, &self.ctx)
    }

    /// Same module.
    pub fn same_module(&self, other: &Lattice) -> bool {
        self.hnf() == other.hnf()
    }

    /// `other ⊂ self`, for a full-rank `self`.
    pub fn contains(&self, other: &Lattice) -> Result<bool> {
        self.require_full_rank()?;
        let coords = self.basis.solve(&other.basis)?;
        let integral = coords.entries().all(|x| self.ctx.is_integral(x));
        Ok(integral)
    }

    pub(crate) fn require_full_rank(&self) -> Result<()> {
        if self.is_full_rank() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "lattice of rank {} in dimension {}",
                self.rank(),
                self.ambient_dim()
            )))
        }
    }

    /// An ℤ_(p)-basis of this full-rank lattice whose first `dim W` vectors
    /// span `W`; those vectors are a basis of `W ∩ self`.
    pub fn split_basis(&self, w: &Subspace) -> Result<RationalMatrix> {
        self.require_full_rank()?;
        let coords = self.basis.solve(w.basis())?;
        let smith = smith_local(&coords, &self.ctx);
        debug_assert_eq!(smith.rank, w.dim());
        Ok(&self.basis * &smith.left)
    }

    /// The saturated sublattice `W ∩ self`.
    pub fn intersect_subspace(&self, w: &Subspace) -> Result<Lattice> {
        let split = self.split_basis(w)?;
        Ok(Lattice {
            basis: split.column_range(0..w.dim()),
            ctx: self.ctx.clone(),
        })
    }

    /// Module sum `self + other`.
    pub fn sum(&self, other: &Lattice) -> Lattice {
        Lattice::generated_by(&self.basis.hcat(&other.basis), &self.ctx)
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice(p={}){:?}", self.ctx.prime(), self.basis)
    }
}

/// Column Hermite normal form of the ℤ_(p)-module generated by the columns.
///
/// Rows are scanned top to bottom. In each row the remaining column of minimal
/// valuation (lowest index on ties) becomes the pivot, is scaled by a unit to
/// exactly `p^a`, clears the row in all later columns, and reduces the entries
/// of earlier pivot columns in that row to canonical residues mod `p^a`.
/// Zero columns are dropped, so the result has `rank` columns.
pub fn module_hnf(generators: &RationalMatrix, ctx: &ValuationContext) -> RationalMatrix {
    let n = generators.rows();
    let mut cols = generators.columns();
    let mut placed = 0;
    for i in 0..n {
        let mut best: Option<(usize, i64)> = None;
        for (j, col) in cols.iter().enumerate().skip(placed) {
            if let Some(v) = ctx.valuation(&col[i]).finite() {
                if best.map_or(true, |(_, bv)| v < bv) {
                    best = Some((j, v));
                }
            }
        }
        let Some((j, a)) = best else {
            continue;
        };
        cols.swap(placed, j);
        let unit = ctx.unit_part(&cols[placed][i]).recip();
        for x in cols[placed].iter_mut() {
            *x *= &unit;
        }
        let pivot = ctx.pow(a);
        let pivot_col = cols[placed].clone();
        for (jj, col) in cols.iter_mut().enumerate() {
            if jj == placed || col[i].is_zero() {
                continue;
            }
            let target = if jj > placed {
                RationalScalar::zero()
            } else {
                ctx.residue(&col[i], a)
            };
            let c = (&col[i] - &target) / &pivot;
            if c.is_zero() {
                continue;
            }
            for (x, pv) in col.iter_mut().zip(&pivot_col) {
                *x -= &c * pv;
            }
        }
        placed += 1;
    }
    cols.truncate(placed);
    RationalMatrix::from_columns(n, &cols)
}

/// Homothety class of a lattice, stored as its unique canonical representative:
/// the Hermite normal form rescaled so that its smallest pivot exponent is 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeClass {
    canonical: Lattice,
}

impl LatticeClass {
    pub fn new(lattice: &Lattice) -> Result<Self> {
        if lattice.basis.rank() < lattice.rank() {
            return Err(Error::RankDeficient);
        }
        Ok(Self::of_module(&lattice.basis, &lattice.ctx))
    }

    /// Class of the module generated by the (possibly dependent) columns.
    pub fn of_module(generators: &RationalMatrix, ctx: &ValuationContext) -> Self {
        let h = module_hnf(generators, ctx);
        let min_pivot = pivot_exponents(&h, ctx).into_iter().min().unwrap_or(0);
        let basis = if min_pivot == 0 {
            h
        } else {
            module_hnf(&h.scale(&ctx.pow(-min_pivot)), ctx)
        };
        LatticeClass {
            canonical: Lattice {
                basis,
                ctx: ctx.clone(),
            },
        }
    }

    pub fn canonical(&self) -> &Lattice {
        &self.canonical
    }

    pub fn basis(&self) -> &RationalMatrix {
        &self.canonical.basis
    }

    pub fn ctx(&self) -> &ValuationContext {
        &self.canonical.ctx
    }

    pub fn ambient_dim(&self) -> usize {
        self.canonical.ambient_dim()
    }

    pub fn rank(&self) -> usize {
        self.canonical.rank()
    }

    /// Exponents `a_i` of the pivots `p^{a_i}` of the canonical basis.
    pub fn pivot_profile(&self) -> Vec<i64> {
        pivot_exponents(self.basis(), self.ctx())
    }
}

impl fmt::Debug for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{:?}}}", self.canonical.basis)
    }
}

/// Pivot exponents of an HNF produced by [`module_hnf`]: the first nonzero entry
/// of each column is its pivot.
fn pivot_exponents(h: &RationalMatrix, ctx: &ValuationContext) -> Vec<i64> {
    (0..h.cols())
        .filter_map(|j| {
            (0..h.rows())
                .find(|&i| !h[(i, j)].is_zero())
                .map(|i| ctx.val(&h[(i, j)]))
        })
        .collect()
}
