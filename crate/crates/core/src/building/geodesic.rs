use std::collections::HashMap;
use std::ops::RangeInclusive;

use super::lattice::{Lattice, LatticeClass, Subspace};
use crate::error::{Error, Result};

/// The geodesic between two complementary boundary subspaces determined by
/// lattices `M_w ⊂ W` and `M_w2 ⊂ W2`. Its vertices are the classes
/// `{M_w + p^k M_w2}`, `k ∈ ℤ`, and it is oriented from `W` toward `W2`, i.e.
/// in the direction of decreasing `k`.
#[derive(Clone, Debug)]
pub struct CombinatorialGeodesic {
    w: Subspace,
    w2: Subspace,
    m_w: Lattice,
    m_w2: Lattice,
}

impl CombinatorialGeodesic {
    pub fn between(w: &Subspace, w2: &Subspace, m_w: &Lattice, m_w2: &Lattice) -> Result<Self> {
        let n = w.ambient_dim();
        if w2.ambient_dim() != n || m_w.ambient_dim() != n || m_w2.ambient_dim() != n {
            return Err(Error::DimensionMismatch("geodesic data".into()));
        }
        if w.dim() + w2.dim() != n || w.sum(w2).dim() != n {
            return Err(Error::NotComplementary);
        }
        if m_w.rank() != w.dim() || !w.contains(&m_w.span()) {
            return Err(Error::Shape(
                "lattice does not span the first subspace".into(),
            ));
        }
        if m_w2.rank() != w2.dim() || !w2.contains(&m_w2.span()) {
            return Err(Error::Shape(
                "lattice does not span the second subspace".into(),
            ));
        }
        Ok(CombinatorialGeodesic {
            w: w.clone(),
            w2: w2.clone(),
            m_w: m_w.clone(),
            m_w2: m_w2.clone(),
        })
    }

    pub fn w(&self) -> &Subspace {
        &self.w
    }

    pub fn w2(&self) -> &Subspace {
        &self.w2
    }

    pub fn class_w(&self) -> LatticeClass {
        LatticeClass::of_module(self.m_w.basis(), self.m_w.ctx())
    }

    pub fn class_w2(&self) -> LatticeClass {
        LatticeClass::of_module(self.m_w2.basis(), self.m_w2.ctx())
    }

    /// The lattice `M_w + p^k M_w2`.
    pub fn vertex_lattice(&self, k: i64) -> Lattice {
        let basis = self.m_w.basis().hcat(self.m_w2.scaled(k).basis());
        Lattice::from_parts_unchecked(basis, self.m_w.ctx())
    }

    pub fn vertex(&self, k: i64) -> LatticeClass {
        LatticeClass::of_module(self.vertex_lattice(k).basis(), self.m_w.ctx())
    }

    /// Position of `x` on the geodesic, if it lies there within `window`.
    pub fn on_geodesic(&self, x: &LatticeClass, window: RangeInclusive<i64>) -> Option<i64> {
        window.into_iter().find(|&k| &self.vertex(k) == x)
    }

    /// All vertices with index in `window`, for repeated membership queries.
    pub fn index(&self, window: RangeInclusive<i64>) -> GeodesicIndex {
        let by_class = window.clone().map(|k| (self.vertex(k), k)).collect();
        GeodesicIndex { window, by_class }
    }

    /// Oriented distance from `x` to `y` along the geodesic.
    pub fn distor(
        &self,
        x: &LatticeClass,
        y: &LatticeClass,
        window: RangeInclusive<i64>,
    ) -> Result<i64> {
        let kx = self
            .on_geodesic(x, window.clone())
            .ok_or(Error::NotOnGeodesic)?;
        let ky = self.on_geodesic(y, window).ok_or(Error::NotOnGeodesic)?;
        Ok(kx - ky)
    }
}

/// Vertices of a geodesic over a finite window keyed by class.
#[derive(Clone, Debug)]
pub struct GeodesicIndex {
    window: RangeInclusive<i64>,
    by_class: HashMap<LatticeClass, i64>,
}

impl GeodesicIndex {
    pub fn window(&self) -> RangeInclusive<i64> {
        self.window.clone()
    }

    pub fn position(&self, x: &LatticeClass) -> Option<i64> {
        self.by_class.get(x).copied()
    }

    pub fn len(&self) -> usize {
        self.by_class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_class.is_empty()
    }

    pub fn classes(&self) -> impl Iterator<Item = &LatticeClass> {
        self.by_class.keys()
    }
}

pub fn geodesic_between(
    w: &Subspace,
    w2: &Subspace,
    m_w: &Lattice,
    m_w2: &Lattice,
) -> Result<CombinatorialGeodesic> {
    CombinatorialGeodesic::between(w, w2, m_w, m_w2)
}
