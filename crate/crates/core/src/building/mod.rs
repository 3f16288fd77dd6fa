//! Vertices of the Bruhat-Tits building of PGL(n) over ℚ_p as homothety
//! classes of ℤ_(p)-lattices.

mod geodesic;
mod lattice;

pub use geodesic::{geodesic_between, CombinatorialGeodesic, GeodesicIndex};
pub use lattice::{module_hnf, Lattice, LatticeClass, Subspace};

use crate::error::{Error, Result};

fn check_pair(x: &LatticeClass, y: &LatticeClass) -> Result<()> {
    if x.ambient_dim() != y.ambient_dim() || x.ctx() != y.ctx() {
        return Err(Error::DimensionMismatch(
            "classes live in different spaces".into(),
        ));
    }
    x.canonical().require_full_rank()?;
    y.canonical().require_full_rank()
}

/// `(r, s)` for the canonical representatives `M` of `x` and `L` of `y`:
/// `s = min{k : p^k L ⊂ M}` and `r = max{k : M ⊂ p^k L}`.
pub fn inclusion_bounds(x: &LatticeClass, y: &LatticeClass) -> Result<(i64, i64)> {
    check_pair(x, y)?;
    let (m, l) = (x.basis(), y.basis());
    let ctx = x.ctx();
    let l_in_m = m.solve(l)?;
    let m_in_l = l.solve(m)?;
    let s = -l_in_m.min_valuation(ctx).ok_or(Error::Singular)?;
    let r = m_in_l.min_valuation(ctx).ok_or(Error::Singular)?;
    Ok((r, s))
}

pub fn combinatorial_distance(x: &LatticeClass, y: &LatticeClass) -> Result<u64> {
    let (r, s) = inclusion_bounds(x, y)?;
    Ok((s - r) as u64)
}

pub fn adjacent(x: &LatticeClass, y: &LatticeClass) -> Result<bool> {
    Ok(combinatorial_distance(x, y)? == 1)
}

fn check_boundary(x: &LatticeClass, w: &Subspace) -> Result<()> {
    if w.ambient_dim() != x.ambient_dim() {
        return Err(Error::DimensionMismatch("subspace and lattice".into()));
    }
    if w.dim() == 0 || w.dim() >= w.ambient_dim() {
        return Err(Error::Shape(format!(
            "boundary subspace must be proper and nonzero, got dimension {}",
            w.dim()
        )));
    }
    Ok(())
}

/// The module `(W ∩ M) + p^k M` for the canonical representative `M` of `x`.
fn reduction_module(x: &LatticeClass, w: &Subspace, k: i64) -> Result<Lattice> {
    let m = x.canonical();
    let split = m.split_basis(w)?;
    let mut cols = split.columns();
    let pk = x.ctx().pow(k);
    for col in cols.iter_mut().skip(w.dim()) {
        for e in col.iter_mut() {
            *e *= &pk;
        }
    }
    let basis = crate::arith::RationalMatrix::from_columns(x.ambient_dim(), &cols);
    Ok(Lattice::generated_by(&basis, x.ctx()))
}

/// The vertex at distance `k` from `x` on the half-geodesic from `x` toward
/// the boundary point of `W`.
pub fn half_geodesic_vertex(x: &LatticeClass, w: &Subspace, k: u64) -> Result<LatticeClass> {
    check_boundary(x, w)?;
    if k == 0 {
        return Ok(x.clone());
    }
    let module = reduction_module(x, w, k as i64)?;
    LatticeClass::new(&module)
}

/// Whether `(W1 ∩ M) + p^m M = (W2 ∩ M) + p^m M` for the canonical
/// representative `M` of `x`.
pub fn reduction_segment_equal(
    x: &LatticeClass,
    w1: &Subspace,
    w2: &Subspace,
    m: u64,
) -> Result<bool> {
    check_boundary(x, w1)?;
    check_boundary(x, w2)?;
    let a = reduction_module(x, w1, m as i64)?;
    let b = reduction_module(x, w2, m as i64)?;
    Ok(a.basis() == b.basis())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{RationalMatrix, ValuationContext};

    fn ctx(p: u64) -> ValuationContext {
        ValuationContext::new(p).unwrap()
    }

    fn class(c: &ValuationContext, rows: &[&[i64]]) -> LatticeClass {
        LatticeClass::new(&Lattice::new(RationalMatrix::from_i64(rows), c).unwrap()).unwrap()
    }

    fn span(rows: &[&[i64]]) -> Subspace {
        Subspace::new(RationalMatrix::from_i64(rows)).unwrap()
    }

    #[test]
    fn distances() {
        let c = ctx(3);
        let std = class(&c, &[&[1, 0], &[0, 1]]);
        let d2 = class(&c, &[&[1, 0], &[0, 9]]);
        let d1 = class(&c, &[&[1, 0], &[0, 3]]);
        assert_eq!(combinatorial_distance(&std, &std).unwrap(), 0);
        assert_eq!(combinatorial_distance(&std, &d2).unwrap(), 2);
        assert_eq!(combinatorial_distance(&d2, &std).unwrap(), 2);
        let (r, s) = inclusion_bounds(&std, &d2).unwrap();
        assert_eq!(s - r, 2);
        assert!(adjacent(&std, &d1).unwrap());
        assert!(!adjacent(&std, &d2).unwrap());
        assert!(!adjacent(&std, &std).unwrap());

        let c2 = ctx(2);
        let std3 = class(&c2, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let d = class(&c2, &[&[1, 0, 0], &[0, 2, 0], &[0, 0, 4]]);
        assert_eq!(combinatorial_distance(&std3, &d).unwrap(), 2);
    }

    #[test]
    fn half_geodesics() {
        let c = ctx(2);
        let std = class(&c, &[&[1, 0], &[0, 1]]);
        let e1 = span(&[&[1], &[0]]);
        assert_eq!(half_geodesic_vertex(&std, &e1, 0).unwrap(), std);
        assert_eq!(
            half_geodesic_vertex(&std, &e1, 3).unwrap(),
            class(&c, &[&[1, 0], &[0, 8]])
        );
        let diag = span(&[&[1], &[1]]);
        assert_eq!(
            half_geodesic_vertex(&std, &diag, 1).unwrap(),
            class(&c, &[&[1, 0], &[1, 2]])
        );
    }

    #[test]
    fn reduction_segments() {
        let c = ctx(3);
        let std = class(&c, &[&[1, 0], &[0, 1]]);
        let w1 = span(&[&[1], &[0]]);
        let w2 = span(&[&[1], &[3]]);
        assert!(reduction_segment_equal(&std, &w1, &w1, 4).unwrap());
        assert!(reduction_segment_equal(&std, &w1, &w2, 1).unwrap());
        assert!(!reduction_segment_equal(&std, &w1, &w2, 2).unwrap());
    }

    #[test]
    fn geodesic_vertices() {
        let c = ctx(5);
        let e1 = span(&[&[1], &[0]]);
        let e2 = span(&[&[0], &[1]]);
        let m1 = Lattice::new(e1.basis().clone(), &c).unwrap();
        let m2 = Lattice::new(e2.basis().clone(), &c).unwrap();
        let g = geodesic_between(&e1, &e2, &m1, &m2).unwrap();
        assert_eq!(g.vertex(2), class(&c, &[&[1, 0], &[0, 25]]));
        assert_eq!(g.vertex(0), class(&c, &[&[1, 0], &[0, 1]]));
        for k in -5..5 {
            assert!(adjacent(&g.vertex(k), &g.vertex(k + 1)).unwrap());
        }
        assert_eq!(g.on_geodesic(&g.vertex(3), -6..=6), Some(3));
        assert_eq!(g.on_geodesic(&class(&c, &[&[1, 0], &[1, 5]]), -6..=6), None);
        let shifted = LatticeClass::new(&g.vertex_lattice(-2).scaled(4)).unwrap();
        assert_eq!(g.on_geodesic(&shifted, -6..=6), Some(-2));

        assert_eq!(g.distor(&g.vertex(0), &g.vertex(0), -3..=3).unwrap(), 0);
        assert_eq!(g.distor(&g.vertex(0), &g.vertex(1), -3..=3).unwrap(), -1);

        assert!(matches!(
            geodesic_between(&e1, &e1, &m1, &m1),
            Err(Error::NotComplementary)
        ));
    }
}
