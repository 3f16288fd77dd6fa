//! Local intersection number of `ℙ(A) − ℙ(B)` and `ℙ(C) − ℙ(D)` at the
//! infinite place.
//!
//! Three computations are provided: the closed form `2p·log(β/α)` built from
//! pushed-forward metrics, `√p/√q · distor` between the gate points of `A` and `B`
//! on a geodesic of the symmetric space, and for `p = 1` a direct evaluation of
//! Levine's Green function.

use crate::error::{Error, Hypothesis, Result};
use crate::symspace::linalg::{cholesky, hermitize, inverse, kernel, max_abs, solve};
use crate::symspace::{
    gate_point, geodesic_from_metrics, ArchGeodesic, CMatrix, ComplexSubspace, GatePoint,
};

pub use crate::symspace::MetricClass;

/// Two pairs of complex subspaces with metrics on `A` and `B` and an ambient
/// metric whose restriction to `C ∩ D` is used for the geodesic.
#[derive(Clone, Debug)]
pub struct ArchQuadruple {
    pub a: ComplexSubspace,
    pub b: ComplexSubspace,
    pub c: ComplexSubspace,
    pub d: ComplexSubspace,
    pub h_a: MetricClass,
    pub h_b: MetricClass,
    pub h0: CMatrix,
}

impl ArchQuadruple {
    /// Standard metrics on the given bases and the standard ambient metric.
    pub fn new(
        a: ComplexSubspace,
        b: ComplexSubspace,
        c: ComplexSubspace,
        d: ComplexSubspace,
    ) -> Result<Self> {
        let n = a.ambient_dim();
        let h_a = MetricClass::standard(a.clone());
        let h_b = MetricClass::standard(b.clone());
        Self::with_metrics(a, b, c, d, h_a, h_b, CMatrix::identity(n, n))
    }

    pub fn with_metrics(
        a: ComplexSubspace,
        b: ComplexSubspace,
        c: ComplexSubspace,
        d: ComplexSubspace,
        h_a: MetricClass,
        h_b: MetricClass,
        h0: CMatrix,
    ) -> Result<Self> {
        let n = a.ambient_dim();
        if [&b, &c, &d].iter().any(|s| s.ambient_dim() != n) || h0.shape() != (n, n) {
            return Err(Error::DimensionMismatch(
                "subspaces in different ambient spaces".into(),
            ));
        }
        let (p, q) = (a.dim(), c.dim());
        if b.dim() != p || d.dim() != q || p + q != n || p == 0 || p > q {
            return Err(Hypothesis::Dimensions.into());
        }
        if h_a.subspace != a || h_b.subspace != b {
            return Err(Error::Shape(
                "metrics must live on the bases of A and B".into(),
            ));
        }
        cholesky(&hermitize(&h0))?;
        for (x, y, label) in [
            (&a, &c, "A∩C"),
            (&a, &d, "A∩D"),
            (&b, &c, "B∩C"),
            (&b, &d, "B∩D"),
        ] {
            if !x.intersect(y).is_zero() {
                return Err(Hypothesis::ImproperIntersection(label).into());
            }
        }
        Ok(ArchQuadruple {
            a,
            b,
            c,
            d,
            h_a,
            h_b,
            h0,
        })
    }

    pub fn n(&self) -> usize {
        self.a.ambient_dim()
    }

    pub fn p(&self) -> usize {
        self.a.dim()
    }

    pub fn q(&self) -> usize {
        self.c.dim()
    }

    pub fn swap_ab(&self) -> Self {
        ArchQuadruple {
            a: self.b.clone(),
            b: self.a.clone(),
            h_a: self.h_b.clone(),
            h_b: self.h_a.clone(),
            ..self.clone()
        }
    }

    pub fn swap_cd(&self) -> Self {
        ArchQuadruple {
            c: self.d.clone(),
            d: self.c.clone(),
            ..self.clone()
        }
    }

    pub fn span_ab(&self) -> ComplexSubspace {
        self.a.sum(&self.b)
    }
}

fn hcat(blocks: &[&CMatrix]) -> CMatrix {
    let n = blocks[0].nrows();
    let total = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(n, total);
    let mut at = 0;
    for b in blocks {
        out.view_mut((0, at), b.shape()).copy_from(b);
        at += b.ncols();
    }
    out
}

/// Gram matrix of `h ∘ π^{-1}` on the basis of `target`, where `π` projects onto
/// `target` along `along` and is a bijection from `h`'s subspace onto `target`.
pub fn metric_pushforward(
    h: &MetricClass,
    target: &ComplexSubspace,
    along: &ComplexSubspace,
) -> Result<MetricClass> {
    let n = target.ambient_dim();
    let d = target.dim();
    if h.subspace.dim() != d || d + along.dim() != n {
        return Err(Error::SingularProjection);
    }
    let frame = hcat(&[target.basis(), along.basis()]);
    let coords = solve(&frame, h.subspace.basis()).map_err(|_| Error::SingularProjection)?;
    let t = coords.rows(0, d).into_owned();
    let t_inv = inverse(&t).map_err(|_| Error::SingularProjection)?;
    let gram = hermitize(&(t_inv.adjoint() * &h.gram * t_inv));
    MetricClass::new(target.clone(), gram)
}

/// `c` with `gram2 = c · gram1`, accepted when the relative Frobenius residual is
/// at most `1e-9`.
pub fn metric_proportionality(h1: &MetricClass, h2: &MetricClass) -> Result<f64> {
    if h1.gram.shape() != h2.gram.shape() {
        return Err(Error::DimensionMismatch("Gram matrices".into()));
    }
    let d = h1.gram.nrows() as f64;
    let c = (solve(&h1.gram, &h2.gram)?.trace().re) / d;
    let resid = (&h2.gram - &h1.gram * crate::symspace::real(c)).norm();
    if c > 0.0 && resid <= 1e-9 * h2.gram.norm() {
        Ok(c)
    } else {
        Err(Error::NotProportional)
    }
}

/// Greedily extends `start` by basis vectors of `within`, always taking the one
/// farthest from the current span, until it complements `avoid` inside `within`.
fn extend_to_complement(
    start: &ComplexSubspace,
    avoid: &ComplexSubspace,
    within: &ComplexSubspace,
) -> ComplexSubspace {
    let target = within.dim() - avoid.dim();
    let mut chosen = start.orthonormal_basis();
    let candidates = within.basis();
    while chosen.ncols() < target {
        let acc = hcat(&[&chosen, &avoid.orthonormal_basis()]);
        let q = ComplexSubspace::span(&acc).orthonormal_basis();
        let mut best = (0.0, 0);
        for j in 0..candidates.ncols() {
            let v = candidates.column(j).into_owned();
            let resid = &v - &q * (q.adjoint() * &v);
            let score = resid.norm() / v.norm();
            if score > best.0 {
                best = (score, j);
            }
        }
        let v = candidates.column(best.1).into_owned();
        chosen = hcat(&[
            &chosen,
            &CMatrix::from_column_slice(v.nrows(), 1, v.as_slice()),
        ]);
    }
    ComplexSubspace::span(&chosen)
}

/// Complements `C′`, `D′` of `C ∩ D` in `C`, `D` with `⟨A,B⟩ ⊆ C′ ⊕ D′`.
pub fn construct_complements(q: &ArchQuadruple) -> Result<(ComplexSubspace, ComplexSubspace)> {
    if q.c.sum(&q.d).dim() != q.n() {
        return Err(Hypothesis::NotSpanning.into());
    }
    let u = q.span_ab();
    let uc = u.intersect(&q.c);
    let ud = u.intersect(&q.d);
    let cd = q.c.intersect(&q.d);
    if uc.dim() + ud.dim() != u.dim() || !uc.intersect(&q.d).is_zero() {
        return Err(Hypothesis::Complements.into());
    }
    Ok((
        extend_to_complement(&uc, &cd, &q.c),
        extend_to_complement(&ud, &cd, &q.d),
    ))
}

/// Complements with the pushed-forward metrics and the scalars `α`, `β`.
#[derive(Clone, Debug)]
pub struct ArchData {
    pub cd: ComplexSubspace,
    pub cprime: ComplexSubspace,
    pub dprime: ComplexSubspace,
    pub h_cprime: MetricClass,
    pub h_dprime: MetricClass,
    pub alpha: f64,
    pub beta: f64,
}

pub fn arch_data(q: &ArchQuadruple) -> Result<ArchData> {
    let (cprime, dprime) = construct_complements(q)?;
    let cd = q.c.intersect(&q.d);
    if cprime.dim() != q.p() || dprime.dim() != q.p() {
        return Err(Hypothesis::Complements.into());
    }
    let along_c = cd.sum(&dprime);
    let along_d = cd.sum(&cprime);
    let h_cprime = metric_pushforward(&q.h_a, &cprime, &along_c)?;
    let h_dprime = metric_pushforward(&q.h_a, &dprime, &along_d)?;
    let hb_c = metric_pushforward(&q.h_b, &cprime, &along_c)?;
    let hb_d = metric_pushforward(&q.h_b, &dprime, &along_d)?;
    let alpha2 = metric_proportionality(&hb_c, &h_cprime)
        .map_err(|_| Hypothesis::MetricsNotProportional("C′"))?;
    let beta2 = metric_proportionality(&hb_d, &h_dprime)
        .map_err(|_| Hypothesis::MetricsNotProportional("D′"))?;
    Ok(ArchData {
        cd,
        cprime,
        dprime,
        h_cprime,
        h_dprime,
        alpha: alpha2.sqrt(),
        beta: beta2.sqrt(),
    })
}

/// Degenerate configurations whose intersection number is 0 without further work.
pub fn degenerate_case(q: &ArchQuadruple) -> Option<&'static str> {
    if q.a.same_as(&q.b) {
        return Some("A = B");
    }
    if q.c.same_as(&q.d) {
        return Some("C = D");
    }
    if q.p() == 1 {
        let u = q.span_ab();
        if u.intersect(&q.c).same_as(&u.intersect(&q.d)) {
            return Some("⟨A,B⟩∩C = ⟨A,B⟩∩D");
        }
    }
    None
}

/// `2p · log(β/α)`
pub fn intersection_closed_form(q: &ArchQuadruple) -> Result<f64> {
    if degenerate_case(q).is_some() {
        return Ok(0.0);
    }
    let data = arch_data(q)?;
    Ok(2.0 * q.p() as f64 * (data.beta / data.alpha).ln())
}

#[derive(Clone, Debug)]
pub struct ArchGates {
    pub gate_a: GatePoint,
    pub gate_b: GatePoint,
    /// `t_B − t_A`, the oriented distance from `A∗γ` to `B∗γ`.
    pub distor: f64,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Clone, Debug)]
pub struct ArchGeometricOutcome {
    pub value: f64,
    pub shortcut: Option<&'static str>,
    pub gates: Option<ArchGates>,
}

/// The geodesic joining `C` (metric `h0 ⊕ h_C′`) and `D′` (metric `h_D′`),
/// parametrized so that increasing `t` runs from `C` toward `D′`.
pub fn gate_geodesic(q: &ArchQuadruple, data: &ArchData) -> Result<ArchGeodesic> {
    let k = data.cd.basis();
    let c_basis = hcat(&[k, data.cprime.basis()]);
    let (dk, dp) = (k.ncols(), data.cprime.dim());
    let mut gram = CMatrix::zeros(dk + dp, dk + dp);
    gram.view_mut((0, 0), (dk, dk))
        .copy_from(&hermitize(&(k.adjoint() * &q.h0 * k)));
    gram.view_mut((dk, dk), (dp, dp))
        .copy_from(&data.h_cprime.gram);
    let h_c = MetricClass::new(ComplexSubspace::new(c_basis)?, gram)?;
    geodesic_from_metrics(&data.h_dprime, &h_c)
}

/// `√p/√q · distor_γ(A∗γ, B∗γ)`
pub fn intersection_geometric(q: &ArchQuadruple) -> Result<ArchGeometricOutcome> {
    if let Some(reason) = degenerate_case(q) {
        return Ok(ArchGeometricOutcome {
            value: 0.0,
            shortcut: Some(reason),
            gates: None,
        });
    }
    let data = arch_data(q)?;
    let geo = gate_geodesic(q, &data)?;
    let gate_a = gate_point(&geo, &q.a, None)?;
    let gate_b = gate_point(&geo, &q.b, None)?;
    let distor = gate_b.t - gate_a.t;
    let value = (q.p() as f64 / q.q() as f64).sqrt() * distor;
    Ok(ArchGeometricOutcome {
        value,
        shortcut: None,
        gates: Some(ArchGates {
            gate_a,
            gate_b,
            distor,
            alpha: data.alpha,
            beta: data.beta,
        }),
    })
}

/// `log|φ_D(x)|² − log|φ_C(x)|²`, i.e. `Λ_C − Λ_D` at `x`, with `φ_W` a linear
/// form cutting out `W` normalized in the dual of `metric`.
fn levine_difference(x: &CMatrix, phi_c: &CMatrix, phi_d: &CMatrix, metric: &CMatrix) -> f64 {
    let tau = (x.adjoint() * metric * x)[(0, 0)].re.ln();
    let sigma = |phi: &CMatrix| (phi * x)[(0, 0)].norm_sqr().ln();
    (tau - sigma(phi_c)) - (tau - sigma(phi_d))
}

/// Linear form vanishing on the hyperplane `W`, of unit length for the metric
/// dual to `metric`.
fn unit_annihilator(w: &ComplexSubspace, metric: &CMatrix) -> Result<CMatrix> {
    let k = kernel(&w.basis().transpose());
    if k.ncols() != 1 {
        return Err(Error::WrongCodimension(w.ambient_dim() - w.dim()));
    }
    let phi = k.transpose();
    let dual = inverse(metric)?;
    let norm = (&phi * dual * phi.adjoint())[(0, 0)].re.sqrt();
    Ok(phi / crate::symspace::real(norm))
}

/// Evaluation of `(Λ_C − Λ_D)(a) − (Λ_C − Λ_D)(b)` for `p = 1`, using the
/// ambient Hermitian metric `metric`.
pub fn levine_pairing_p1(q: &ArchQuadruple, metric: &CMatrix) -> Result<f64> {
    if q.p() != 1 {
        return Err(Error::WrongCodimension(q.p()));
    }
    let metric = hermitize(metric);
    cholesky(&metric)?;
    if max_abs(&metric) == 0.0 {
        return Err(Error::NotPositiveDefinite);
    }
    let phi_c = unit_annihilator(&q.c, &metric)?;
    let phi_d = unit_annihilator(&q.d, &metric)?;
    let a = q.a.basis().clone();
    let b = q.b.basis().clone();
    Ok(levine_difference(&a, &phi_c, &phi_d, &metric)
        - levine_difference(&b, &phi_c, &phi_d, &metric))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symspace::real;

    fn col(v: &[f64]) -> ComplexSubspace {
        ComplexSubspace::new(CMatrix::from_iterator(
            v.len(),
            1,
            v.iter().map(|&x| real(x)),
        ))
        .unwrap()
    }

    fn example() -> ArchQuadruple {
        ArchQuadruple::new(
            col(&[1.0, 1.0]),
            col(&[1.0, 2.0]),
            col(&[1.0, 0.0]),
            col(&[0.0, 1.0]),
        )
        .unwrap()
    }

    #[test]
    fn pushforward_examples() {
        let h = MetricClass::standard(col(&[1.0, 1.0]));
        let pushed = metric_pushforward(&h, &col(&[0.0, 1.0]), &col(&[1.0, 0.0])).unwrap();
        assert!((pushed.gram[(0, 0)].re - 1.0).abs() < 1e-15);
        let same = metric_pushforward(&h, &col(&[1.0, 1.0]), &col(&[1.0, 0.0])).unwrap();
        assert!((same.gram[(0, 0)].re - 1.0).abs() < 1e-15);
        let scaled =
            metric_pushforward(&h.scaled(3.0), &col(&[0.0, 1.0]), &col(&[1.0, 0.0])).unwrap();
        assert!((scaled.gram[(0, 0)].re - 3.0).abs() < 1e-14);
    }

    #[test]
    fn proportionality_examples() {
        let s = ComplexSubspace::new(CMatrix::identity(2, 2)).unwrap();
        let h1 = MetricClass::standard(s.clone());
        assert!((metric_proportionality(&h1, &h1.scaled(3.0)).unwrap() - 3.0).abs() < 1e-15);
        let h2 = MetricClass::new(s, crate::symspace::linalg::diag_real(&[1.0, 2.0])).unwrap();
        assert!(matches!(
            metric_proportionality(&h1, &h2),
            Err(Error::NotProportional)
        ));
    }

    #[test]
    fn two_dimensional_example() {
        let q = example();
        let expect = 2.0 * 2f64.ln();
        assert!((intersection_closed_form(&q).unwrap() - expect).abs() < 1e-12);
        assert!((intersection_closed_form(&q.swap_ab()).unwrap() + expect).abs() < 1e-12);
        let out = intersection_geometric(&q).unwrap();
        assert!((out.value - expect).abs() < 1e-9, "{}", out.value);
        let gates = out.gates.unwrap();
        assert!((gates.alpha - 1.0).abs() < 1e-12 && (gates.beta - 2.0).abs() < 1e-12);
        let metric = CMatrix::identity(2, 2);
        assert!((levine_pairing_p1(&q, &metric).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn rescaled_metric_changes_nothing() {
        let q = example();
        let mut r = q.clone();
        r.h_b = r.h_b.scaled(7.5);
        assert!(
            (intersection_closed_form(&r).unwrap() - intersection_closed_form(&q).unwrap()).abs()
                < 1e-12
        );
    }

    #[test]
    fn equal_cycles() {
        let q = example();
        let same = ArchQuadruple::new(q.a.clone(), q.a.clone(), q.c.clone(), q.d.clone()).unwrap();
        assert_eq!(intersection_closed_form(&same).unwrap(), 0.0);
        assert_eq!(
            levine_pairing_p1(&same, &CMatrix::identity(2, 2)).unwrap(),
            0.0
        );
    }
}
