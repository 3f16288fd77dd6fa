//! Runs every applicable method on an instance and assembles the result document.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::arch;
use crate::building::{
    combinatorial_distance, half_geodesic_vertex, reduction_segment_equal, Subspace,
};
use crate::error::{Error, Result};
use crate::io::{matrix_strings, ArchInstance, BuildingDocument, FiniteInstance, InstanceDocument};
use crate::nonarch;

/// Largest accepted difference between real-valued methods.
pub const ARCH_TOLERANCE: f64 = 1e-8;

/// Process exit status of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// All methods that ran agree.
    Ok,
    /// The input could not be read or is malformed.
    Schema,
    /// Some method could not run because the input violates its hypotheses.
    HypothesisFailed,
    /// Two methods produced different values.
    Mismatch,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Schema => 1,
            Status::HypothesisFailed => 2,
            Status::Mismatch => 3,
        }
    }
}

/// Errors that mean "malformed input" rather than "valid input outside the
/// theorem's scope".
pub fn is_schema_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse(_)
            | Error::Shape(_)
            | Error::DimensionMismatch(_)
            | Error::RankDeficient
            | Error::NotPrime(_)
    ) || matches!(e, Error::NotPositiveDefinite)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteValues {
    pub algebraic: Option<i64>,
    pub geometric: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteGates {
    #[serde(rename = "A")]
    pub gate_a: Vec<Vec<String>>,
    #[serde(rename = "B")]
    pub gate_b: Vec<Vec<String>>,
    pub k_a: i64,
    pub k_b: i64,
    pub alpha_val: i64,
    pub beta_val: i64,
    pub window: [i64; 2],
    pub constructive_agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteResult {
    pub n: usize,
    pub prime: u64,
    pub p: usize,
    pub q: usize,
    pub value: Option<i64>,
    pub method: String,
    pub values: FiniteValues,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distor: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gates: Option<FiniteGates>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shortcut: Option<String>,
    pub diagnostics: Vec<String>,
    pub mismatch: bool,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArchValues {
    pub closed_form: Option<f64>,
    pub geometric: Option<f64>,
    pub levine: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArchGateReport {
    pub t_a: f64,
    pub t_b: f64,
    pub residual_a: f64,
    pub residual_b: f64,
    pub roots_a: Vec<f64>,
    pub roots_b: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArchResult {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub value: Option<f64>,
    pub method: String,
    pub values: ArchValues,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gates: Option<ArchGateReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shortcut: Option<String>,
    pub diagnostics: Vec<String>,
    pub mismatch: bool,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "place", rename_all = "lowercase")]
pub enum ResultDocument {
    Finite(FiniteResult),
    Archimedean(ArchResult),
}

impl ResultDocument {
    pub fn status(&self) -> Status {
        match self {
            ResultDocument::Finite(r) => r.status,
            ResultDocument::Archimedean(r) => r.status,
        }
    }

    /// The agreed value, as a real number.
    pub fn value(&self) -> Option<f64> {
        match self {
            ResultDocument::Finite(r) => r.value.map(|v| v as f64),
            ResultDocument::Archimedean(r) => r.value,
        }
    }
}

fn method_label(names: &[&str]) -> String {
    match names.len() {
        0 => "none".into(),
        1 => names[0].into(),
        2 => "both".into(),
        _ => "all".into(),
    }
}

fn status_of(ran: usize, expected: usize, mismatch: bool) -> Status {
    if mismatch {
        Status::Mismatch
    } else if ran < expected {
        Status::HypothesisFailed
    } else {
        Status::Ok
    }
}

/// Evaluates an instance. Malformed input is an error; everything else,
/// including hypothesis failures, is reported in the document.
pub fn intersect(doc: &InstanceDocument, timing: bool) -> Result<ResultDocument> {
    let start = Instant::now();
    let mut out = match doc {
        InstanceDocument::Finite(inst) => ResultDocument::Finite(intersect_finite(inst)?),
        InstanceDocument::Archimedean(inst) => ResultDocument::Archimedean(intersect_arch(inst)?),
    };
    if timing {
        let ms = start.elapsed().as_secs_f64() * 1e3;
        match &mut out {
            ResultDocument::Finite(r) => r.timing_ms = Some(ms),
            ResultDocument::Archimedean(r) => r.timing_ms = Some(ms),
        }
    }
    Ok(out)
}

fn hypothesis_or_schema<T>(
    r: Result<T>,
    diagnostics: &mut Vec<String>,
    label: &str,
) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e) if is_schema_error(&e) => Err(e),
        Err(e) => {
            diagnostics.push(format!("{label}: {e}"));
            Ok(None)
        }
    }
}

fn intersect_finite(inst: &FiniteInstance) -> Result<FiniteResult> {
    let shape = (inst.a.cols(), inst.c.cols());
    let mut diagnostics = Vec::new();
    let quad = match inst.quadruple() {
        Ok(q) => q,
        Err(e) if is_schema_error(&e) => return Err(e),
        Err(e) => {
            diagnostics.push(format!("input: {e}"));
            return Ok(FiniteResult {
                n: inst.n,
                prime: inst.prime,
                p: shape.0,
                q: shape.1,
                value: None,
                method: "none".into(),
                values: FiniteValues {
                    algebraic: None,
                    geometric: None,
                },
                distor: None,
                gates: None,
                shortcut: None,
                diagnostics,
                mismatch: false,
                status: Status::HypothesisFailed,
                timing_ms: None,
            });
        }
    };
    let algebraic = hypothesis_or_schema(
        nonarch::intersection_algebraic(&quad),
        &mut diagnostics,
        "algebraic",
    )?;
    let geometric = hypothesis_or_schema(
        nonarch::intersection_geometric(&quad),
        &mut diagnostics,
        "geometric",
    )?;

    let mut ran = Vec::new();
    if algebraic.is_some() {
        ran.push("algebraic");
    }
    if geometric.is_some() {
        ran.push("geometric");
    }
    let geo_value = geometric.as_ref().map(|g| g.value);
    let mismatch = matches!((algebraic, geo_value), (Some(a), Some(g)) if a != g);
    if mismatch {
        diagnostics.push("algebraic and geometric values differ".into());
    }
    let gates = geometric.as_ref().and_then(|g| g.gates.as_ref());
    if let Some(g) = gates {
        if !g.constructive_agrees {
            diagnostics.push("searched gates differ from the constructed ones".into());
        }
    }
    Ok(FiniteResult {
        n: quad.n(),
        prime: inst.prime,
        p: quad.p(),
        q: quad.q(),
        value: if mismatch {
            None
        } else {
            algebraic.or(geo_value)
        },
        method: method_label(&ran),
        values: FiniteValues {
            algebraic,
            geometric: geo_value,
        },
        distor: gates.map(|g| g.distor),
        gates: gates.map(|g| FiniteGates {
            gate_a: matrix_strings(g.gate_a.basis()),
            gate_b: matrix_strings(g.gate_b.basis()),
            k_a: g.k_a,
            k_b: g.k_b,
            alpha_val: g.alpha_val,
            beta_val: g.beta_val,
            window: [*g.window.start(), *g.window.end()],
            constructive_agrees: g.constructive_agrees,
        }),
        shortcut: geometric
            .as_ref()
            .and_then(|g| g.shortcut.map(String::from)),
        status: status_of(ran.len(), 2, mismatch),
        diagnostics,
        mismatch,
        timing_ms: None,
    })
}

fn intersect_arch(inst: &ArchInstance) -> Result<ArchResult> {
    let shape = (inst.a.ncols(), inst.c.ncols());
    let mut diagnostics = Vec::new();
    let metric = inst.ambient_metric()?;
    let quad = match inst.quadruple() {
        Ok(q) => q,
        Err(e) if is_schema_error(&e) => return Err(e),
        Err(e) => {
            diagnostics.push(format!("input: {e}"));
            return Ok(ArchResult {
                n: inst.n,
                p: shape.0,
                q: shape.1,
                value: None,
                method: "none".into(),
                values: ArchValues {
                    closed_form: None,
                    geometric: None,
                    levine: None,
                },
                alpha: None,
                beta: None,
                distor: None,
                gates: None,
                shortcut: None,
                diagnostics,
                mismatch: false,
                status: Status::HypothesisFailed,
                timing_ms: None,
            });
        }
    };
    let closed = hypothesis_or_schema(
        arch::intersection_closed_form(&quad),
        &mut diagnostics,
        "closed form",
    )?;
    let geometric = hypothesis_or_schema(
        arch::intersection_geometric(&quad),
        &mut diagnostics,
        "geometric",
    )?;
    let levine = if quad.p() == 1 {
        hypothesis_or_schema(
            arch::levine_pairing_p1(&quad, &metric),
            &mut diagnostics,
            "levine",
        )?
    } else {
        None
    };
    let expected = if quad.p() == 1 { 3 } else { 2 };

    let geo_value = geometric.as_ref().map(|g| g.value);
    let mut ran = Vec::new();
    let mut values = Vec::new();
    for (name, v) in [
        ("closed_form", closed),
        ("geometric", geo_value),
        ("levine", levine),
    ] {
        if let Some(v) = v {
            ran.push(name);
            values.push(v);
        }
    }
    let spread = values
        .iter()
        .fold(0.0f64, |acc, &v| acc.max((v - values[0]).abs()));
    let mismatch = !values.is_empty() && !(spread <= ARCH_TOLERANCE);
    if mismatch {
        diagnostics.push(format!("methods differ by {spread:e}"));
    }
    let gates = geometric.as_ref().and_then(|g| g.gates.as_ref());
    if let Some(g) = gates {
        for (label, gp) in [("A", &g.gate_a), ("B", &g.gate_b)] {
            if gp.roots.len() > 1 {
                diagnostics.push(format!(
                    "gate {label}: {} sign changes found",
                    gp.roots.len()
                ));
            }
        }
    }
    Ok(ArchResult {
        n: quad.n(),
        p: quad.p(),
        q: quad.q(),
        value: if mismatch {
            None
        } else {
            closed.or(geo_value).or(levine)
        },
        method: method_label(&ran),
        values: ArchValues {
            closed_form: closed,
            geometric: geo_value,
            levine,
        },
        alpha: gates.map(|g| g.alpha),
        beta: gates.map(|g| g.beta),
        distor: gates.map(|g| g.distor),
        gates: gates.map(|g| ArchGateReport {
            t_a: g.gate_a.t,
            t_b: g.gate_b.t,
            residual_a: g.gate_a.residual,
            residual_b: g.gate_b.residual,
            roots_a: g.gate_a.roots.clone(),
            roots_b: g.gate_b.roots.clone(),
        }),
        shortcut: geometric
            .as_ref()
            .and_then(|g| g.shortcut.map(String::from)),
        status: status_of(ran.len(), expected, mismatch),
        diagnostics,
        mismatch,
        timing_ms: None,
    })
}

/// `building half-geodesic`: the vertices `0..=k_max` of the half-geodesic
/// from `x` toward `W`, as canonical bases.
pub fn building_half_geodesic(doc: &BuildingDocument) -> Result<serde_json::Value> {
    let x = doc.class(&doc.x)?;
    let w = Subspace::new(BuildingDocument::field(&doc.w, "W")?.clone())?;
    let k_max = doc
        .k_max
        .ok_or_else(|| Error::Parse("missing field k_max".into()))?;
    let vertices = (0..=k_max)
        .map(|k| half_geodesic_vertex(&x, &w, k).map(|v| matrix_strings(v.basis())))
        .collect::<Result<Vec<_>>>()?;
    Ok(serde_json::json!({ "vertices": vertices }))
}

/// `building distance`: combinatorial distance between `x` and `y`.
pub fn building_distance(doc: &BuildingDocument) -> Result<serde_json::Value> {
    let x = doc.class(&doc.x)?;
    let y = doc.class(BuildingDocument::field(&doc.y, "y")?)?;
    let d = combinatorial_distance(&x, &y)?;
    Ok(serde_json::json!({ "distance": d, "adjacent": d == 1 }))
}

/// `building reduction-equal`: whether the half-geodesics from `x` toward `W1`
/// and `W2` share their first `m + 1` vertices.
pub fn building_reduction_equal(doc: &BuildingDocument) -> Result<serde_json::Value> {
    let x = doc.class(&doc.x)?;
    let w1 = Subspace::new(BuildingDocument::field(&doc.w1, "W1")?.clone())?;
    let w2 = Subspace::new(BuildingDocument::field(&doc.w2, "W2")?.clone())?;
    let m = doc
        .m
        .ok_or_else(|| Error::Parse("missing field m".into()))?;
    if m == 0 {
        return Err(Error::Parse("m must be positive".into()));
    }
    Ok(serde_json::json!({ "equal": reduction_segment_equal(&x, &w1, &w2, m)? }))
}
