//! JSON documents for instances, results and building queries.
//!
//! Rationals are strings `"a"` or `"a/b"`, complex numbers are `{"re": …, "im": …}`
//! objects (a bare number is accepted as a real), and matrices are row-major
//! arrays. A subspace is given by an `n × d` matrix whose columns form a basis.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arch::ArchQuadruple;
use crate::arith::{format_rational, parse_rational, RationalMatrix, ValuationContext};
use crate::building::{Lattice, LatticeClass, Subspace};
use crate::error::{Error, Result};
use crate::nonarch::CycleQuadruple;
use crate::symspace::{c, CMatrix, ComplexSubspace, MetricClass};

pub mod rational_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(
        m: &RationalMatrix,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = m
            .to_rows()
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<RationalMatrix, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        from_strings(&rows).map_err(serde::de::Error::custom)
    }

    pub fn from_strings(rows: &[Vec<String>]) -> Result<RationalMatrix> {
        let parsed = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| parse_rational(x))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if parsed.is_empty() {
            return Err(Error::Parse("empty matrix".into()));
        }
        RationalMatrix::from_rows(parsed)
    }
}

pub mod opt_rational_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(
        m: &Option<RationalMatrix>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match m {
            Some(m) => rational_matrix::serialize(m, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<RationalMatrix>, D::Error> {
        let rows = Option::<Vec<Vec<String>>>::deserialize(d)?;
        rows.map(|r| rational_matrix::from_strings(&r))
            .transpose()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ComplexJson {
    Pair { re: f64, im: f64 },
    Real(f64),
}

pub mod complex_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<ComplexJson>> = (0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .map(|j| ComplexJson::Pair {
                        re: m[(i, j)].re,
                        im: m[(i, j)].im,
                    })
                    .collect()
            })
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<CMatrix, D::Error> {
        let rows = Vec::<Vec<ComplexJson>>::deserialize(d)?;
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.is_empty() || cols == 0 || rows.iter().any(|r| r.len() != cols) {
            return Err(serde::de::Error::custom(
                "matrix rows must be nonempty and of equal length",
            ));
        }
        let mut m = CMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, z) in r.iter().enumerate() {
                let (re, im) = match *z {
                    ComplexJson::Pair { re, im } => (re, im),
                    ComplexJson::Real(re) => (re, 0.0),
                };
                if !re.is_finite() || !im.is_finite() {
                    return Err(serde::de::Error::custom("non-finite entry"));
                }
                m[(i, j)] = c(re, im);
            }
        }
        Ok(m)
    }
}

pub mod opt_complex_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(
        m: &Option<CMatrix>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match m {
            Some(m) => complex_matrix::serialize(m, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<CMatrix>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "complex_matrix")] CMatrix);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

/// An intersection problem at one place.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "place", rename_all = "lowercase")]
pub enum InstanceDocument {
    Finite(FiniteInstance),
    Archimedean(ArchInstance),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteInstance {
    pub n: usize,
    pub prime: u64,
    #[serde(rename = "A", with = "rational_matrix")]
    pub a: RationalMatrix,
    #[serde(rename = "B", with = "rational_matrix")]
    pub b: RationalMatrix,
    #[serde(rename = "C", with = "rational_matrix")]
    pub c: RationalMatrix,
    #[serde(rename = "D", with = "rational_matrix")]
    pub d: RationalMatrix,
    /// Lattice bases in `A` and `B`; the bases of `A`, `B` themselves by default.
    #[serde(
        rename = "L_A",
        default,
        skip_serializing_if = "Option::is_none",
        with = "opt_rational_matrix"
    )]
    pub l_a: Option<RationalMatrix>,
    #[serde(
        rename = "L_B",
        default,
        skip_serializing_if = "Option::is_none",
        with = "opt_rational_matrix"
    )]
    pub l_b: Option<RationalMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchInstance {
    pub n: usize,
    #[serde(rename = "A", with = "complex_matrix")]
    pub a: CMatrix,
    #[serde(rename = "B", with = "complex_matrix")]
    pub b: CMatrix,
    #[serde(rename = "C", with = "complex_matrix")]
    pub c: CMatrix,
    #[serde(rename = "D", with = "complex_matrix")]
    pub d: CMatrix,
    /// Gram matrices of the metrics on the given bases of `A` and `B`; identity by default.
    #[serde(
        rename = "h_A",
        default,
        skip_serializing_if = "Option::is_none",
        with = "opt_complex_matrix"
    )]
    pub h_a: Option<CMatrix>,
    #[serde(
        rename = "h_B",
        default,
        skip_serializing_if = "Option::is_none",
        with = "opt_complex_matrix"
    )]
    pub h_b: Option<CMatrix>,
    /// Ambient `n × n` Gram matrix whose restriction to `C ∩ D` is used; identity by default.
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "opt_complex_matrix"
    )]
    pub h0: Option<CMatrix>,
    /// Ambient metric for the Green-function evaluation; identity by default.
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "opt_complex_matrix"
    )]
    pub metric: Option<CMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn check_shape(name: &str, rows: usize, cols: usize, n: usize, d: usize) -> Result<()> {
    if rows != n || cols != d {
        return Err(Error::Shape(format!(
            "{name} is {rows}x{cols}, expected {n}x{d}"
        )));
    }
    Ok(())
}

fn check_bases(n: usize, shapes: [(&str, (usize, usize)); 4]) -> Result<(usize, usize)> {
    if n < 2 {
        return Err(Error::Shape("n must be at least 2".into()));
    }
    let p = shapes[0].1 .1;
    let q = shapes[2].1 .1;
    for (i, (name, (r, c))) in shapes.iter().enumerate() {
        check_shape(name, *r, *c, n, if i < 2 { p } else { q })?;
    }
    if p + q != n {
        return Err(Error::Shape(format!(
            "dim A + dim C = {} differs from n = {n}",
            p + q
        )));
    }
    Ok((p, q))
}

impl FiniteInstance {
    pub fn context(&self) -> Result<ValuationContext> {
        ValuationContext::new(self.prime)
    }

    /// Validates shapes and ranks and builds the quadruple; the error is a
    /// hypothesis failure when the data is well formed but violates the
    /// standing assumptions.
    pub fn quadruple(&self) -> Result<CycleQuadruple> {
        let ctx = self.context()?;
        let shapes = [
            ("A", (self.a.rows(), self.a.cols())),
            ("B", (self.b.rows(), self.b.cols())),
            ("C", (self.c.rows(), self.c.cols())),
            ("D", (self.d.rows(), self.d.cols())),
        ];
        check_bases(self.n, shapes)?;
        let sub = |m: &RationalMatrix| Subspace::new(m.clone());
        let (a, b, c, d) = (sub(&self.a)?, sub(&self.b)?, sub(&self.c)?, sub(&self.d)?);
        let lattice =
            |l: &Option<RationalMatrix>, w: &RationalMatrix, name: &str| -> Result<Lattice> {
                let basis = l.clone().unwrap_or_else(|| w.clone());
                check_shape(name, basis.rows(), basis.cols(), w.rows(), w.cols())?;
                Lattice::new(basis, &ctx)
            };
        let l_a = lattice(&self.l_a, &self.a, "L_A")?;
        let l_b = lattice(&self.l_b, &self.b, "L_B")?;
        CycleQuadruple::with_lattices(a, b, c, d, l_a, l_b, &ctx)
    }

    pub fn from_quadruple(q: &CycleQuadruple, seed: Option<u64>) -> Self {
        FiniteInstance {
            n: q.n(),
            prime: q.ctx.prime(),
            a: q.a.basis().clone(),
            b: q.b.basis().clone(),
            c: q.c.basis().clone(),
            d: q.d.basis().clone(),
            l_a: Some(q.l_a.basis().clone()),
            l_b: Some(q.l_b.basis().clone()),
            seed,
        }
    }
}

impl ArchInstance {
    pub fn quadruple(&self) -> Result<ArchQuadruple> {
        let n = self.n;
        let shapes = [
            ("A", self.a.shape()),
            ("B", self.b.shape()),
            ("C", self.c.shape()),
            ("D", self.d.shape()),
        ];
        let (p, _) = check_bases(n, shapes)?;
        let sub = |m: &CMatrix| ComplexSubspace::new(m.clone());
        let (a, b, c, d) = (sub(&self.a)?, sub(&self.b)?, sub(&self.c)?, sub(&self.d)?);
        let metric =
            |h: &Option<CMatrix>, w: &ComplexSubspace, name: &str| -> Result<MetricClass> {
                let gram = h.clone().unwrap_or_else(|| CMatrix::identity(p, p));
                check_shape(name, gram.nrows(), gram.ncols(), p, p)?;
                MetricClass::new(w.clone(), gram)
            };
        let h_a = metric(&self.h_a, &a, "h_A")?;
        let h_b = metric(&self.h_b, &b, "h_B")?;
        let h0 = self.h0.clone().unwrap_or_else(|| CMatrix::identity(n, n));
        check_shape("h0", h0.nrows(), h0.ncols(), n, n)?;
        ArchQuadruple::with_metrics(a, b, c, d, h_a, h_b, h0)
    }

    pub fn ambient_metric(&self) -> Result<CMatrix> {
        let m = self
            .metric
            .clone()
            .unwrap_or_else(|| CMatrix::identity(self.n, self.n));
        check_shape("metric", m.nrows(), m.ncols(), self.n, self.n)?;
        Ok(m)
    }

    pub fn from_quadruple(q: &ArchQuadruple, seed: Option<u64>) -> Self {
        ArchInstance {
            n: q.n(),
            a: q.a.basis().clone(),
            b: q.b.basis().clone(),
            c: q.c.basis().clone(),
            d: q.d.basis().clone(),
            h_a: Some(q.h_a.gram.clone()),
            h_b: Some(q.h_b.gram.clone()),
            h0: Some(q.h0.clone()),
            metric: None,
            seed,
        }
    }
}

/// Input of the `building` subcommands. Which fields are required depends on
/// the query.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildingDocument {
    pub prime: u64,
    /// Basis of a full lattice representing the starting vertex.
    #[serde(with = "rational_matrix")]
    pub x: RationalMatrix,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "opt_rational_matrix"
    )]
    pub y: Option<RationalMatrix>,
    #[serde(
        rename = "W",
        default,
        skip_serializing_if = "Option::is_none",
        with = "opt_rational_matrix"
    )]
    pub w: Option<RationalMatrix>,
    #[serde(
        rename = "W1",
        default,
        skip_serializing_if = "Option::is_none",
        with = "opt_rational_matrix"
    )]
    pub w1: Option<RationalMatrix>,
    #[serde(
        rename = "W2",
        default,
        skip_serializing_if = "Option::is_none",
        with = "opt_rational_matrix"
    )]
    pub w2: Option<RationalMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
}

impl BuildingDocument {
    pub fn context(&self) -> Result<ValuationContext> {
        ValuationContext::new(self.prime)
    }

    pub fn class(&self, basis: &RationalMatrix) -> Result<LatticeClass> {
        if !basis.is_square() {
            return Err(Error::Shape(
                "vertex lattices must be given by square bases".into(),
            ));
        }
        LatticeClass::new(&Lattice::new(basis.clone(), &self.context()?)?)
    }

    pub fn field<'a>(value: &'a Option<RationalMatrix>, name: &str) -> Result<&'a RationalMatrix> {
        value
            .as_ref()
            .ok_or_else(|| Error::Parse(format!("missing field {name}")))
    }
}

/// Rows of a rational matrix as strings.
pub fn matrix_strings(m: &RationalMatrix) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(format_rational).collect())
        .collect()
}

pub fn parse_instance(text: &str) -> Result<InstanceDocument> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_building(text: &str) -> Result<BuildingDocument> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}
