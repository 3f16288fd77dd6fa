//! Local intersection number of `ℙ(A) − ℙ(B)` and `ℙ(C) − ℙ(D)` at a finite prime.
//!
//! Two independent computations are provided: the valuation of a ratio of
//! four determinants, and `p · distor` between the gate vertices of `A` and `B`
//! on a geodesic of the Bruhat-Tits building joining `C` to a complement `D′`
//! of `C ∩ D` in `D`.

use std::ops::RangeInclusive;

use crate::arith::{smith_local, RationalMatrix, ValuationContext};
use crate::building::{
    half_geodesic_vertex, CombinatorialGeodesic, GeodesicIndex, Lattice, LatticeClass, Subspace,
};
use crate::error::{Error, Hypothesis, Result};

/// Two pairs of linear subspaces with `dim A = dim B = p`, `dim C = dim D = q`,
/// `p + q = n`, `p ≤ q`, each of `A`, `B` meeting each of `C`, `D` trivially,
/// together with lattices `L_A ⊂ A` and `L_B ⊂ B`.
#[derive(Clone, Debug)]
pub struct CycleQuadruple {
    pub a: Subspace,
    pub b: Subspace,
    pub c: Subspace,
    pub d: Subspace,
    pub l_a: Lattice,
    pub l_b: Lattice,
    pub ctx: ValuationContext,
}

impl CycleQuadruple {
    /// Uses the lattices spanned by the given bases of `A` and `B`.
    pub fn new(
        a: Subspace,
        b: Subspace,
        c: Subspace,
        d: Subspace,
        ctx: &ValuationContext,
    ) -> Result<Self> {
        let l_a = Lattice::new(a.basis().clone(), ctx)?;
        let l_b = Lattice::new(b.basis().clone(), ctx)?;
        Self::with_lattices(a, b, c, d, l_a, l_b, ctx)
    }

    pub fn with_lattices(
        a: Subspace,
        b: Subspace,
        c: Subspace,
        d: Subspace,
        l_a: Lattice,
        l_b: Lattice,
        ctx: &ValuationContext,
    ) -> Result<Self> {
        let n = a.ambient_dim();
        if [&b, &c, &d].iter().any(|s| s.ambient_dim() != n) {
            return Err(Error::DimensionMismatch(
                "subspaces in different ambient spaces".into(),
            ));
        }
        let (p, q) = (a.dim(), c.dim());
        if b.dim() != p || d.dim() != q || p + q != n || p == 0 || p > q {
            return Err(Hypothesis::Dimensions.into());
        }
        if l_a.rank() != p || !a.same_as(&l_a.span()) {
            return Err(Error::Shape("L_A must be a full lattice in A".into()));
        }
        if l_b.rank() != p || !b.same_as(&l_b.span()) {
            return Err(Error::Shape("L_B must be a full lattice in B".into()));
        }
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
        Ok(CycleQuadruple {
            a,
            b,
            c,
            d,
            l_a,
            l_b,
            ctx: ctx.clone(),
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
        CycleQuadruple {
            a: self.b.clone(),
            b: self.a.clone(),
            l_a: self.l_b.clone(),
            l_b: self.l_a.clone(),
            ..self.clone()
        }
    }

    pub fn swap_cd(&self) -> Self {
        CycleQuadruple {
            c: self.d.clone(),
            d: self.c.clone(),
            ..self.clone()
        }
    }

    /// `⟨A, B⟩`
    pub fn span_ab(&self) -> Subspace {
        self.a.sum(&self.b)
    }
}

/// `v(det f(a) · det g(b) / (det f(b) · det g(a)))` where `f`, `g` are bases
/// of the linear forms vanishing on `C`, `D`.
pub fn intersection_algebraic(q: &CycleQuadruple) -> Result<i64> {
    let f = q.c.basis().annihilator_basis()?;
    let g = q.d.basis().annihilator_basis()?;
    let v = |forms: &RationalMatrix, vecs: &Subspace| -> Result<i64> {
        let det = (forms * vecs.basis()).determinant()?;
        Ok(q.ctx.val(&det))
    };
    Ok(v(&f, &q.a)? + v(&g, &q.b)? - v(&f, &q.b)? - v(&g, &q.a)?)
}

/// Greedily extends `start` by columns of `within` until it complements `avoid`
/// inside `within`.
fn extend_to_complement(start: &Subspace, avoid: &Subspace, within: &Subspace) -> Subspace {
    let target = within.dim() - avoid.dim();
    let mut chosen = start.basis().columns();
    let mut acc = start.sum(avoid);
    for v in within.basis().columns() {
        if chosen.len() == target {
            break;
        }
        let single = Subspace::span(&RationalMatrix::from_columns(
            within.ambient_dim(),
            &[v.clone()],
        ));
        let grown = acc.sum(&single);
        if grown.dim() > acc.dim() {
            acc = grown;
            chosen.push(v);
        }
    }
    Subspace::span(&RationalMatrix::from_columns(within.ambient_dim(), &chosen))
}

/// Complements `C′` of `C ∩ D` in `C` and `D′` of `C ∩ D` in `D` with
/// `⟨A, B⟩ ⊆ C′ ⊕ D′`, built from `⟨A,B⟩ ∩ C` and `⟨A,B⟩ ∩ D`.
pub fn construct_complements(q: &CycleQuadruple) -> Result<(Subspace, Subspace)> {
    let n = q.n();
    if q.c.sum(&q.d).dim() != n {
        return Err(Hypothesis::NotSpanning.into());
    }
    let u = q.span_ab();
    let uc = u.intersect(&q.c);
    let ud = u.intersect(&q.d);
    let cd = q.c.intersect(&q.d);
    if uc.dim() + ud.dim() != u.dim() || !uc.intersect(&q.d).is_zero() {
        return Err(Hypothesis::Complements.into());
    }
    let cprime = extend_to_complement(&uc, &cd, &q.c);
    let dprime = extend_to_complement(&ud, &cd, &q.d);
    debug_assert!(cprime.sum(&dprime).contains(&u));
    Ok((cprime, dprime))
}

/// Everything the gate construction needs, expressed in the frame
/// `[C∩D | C′ | D′]` of the ambient space.
#[derive(Clone, Debug)]
pub struct GateData {
    pub cprime: Subspace,
    pub dprime: Subspace,
    pub cd: Subspace,
    pub m0: Lattice,
    pub m_cprime: Lattice,
    pub m_dprime: Lattice,
    pub alpha_val: i64,
    pub beta_val: i64,
    /// Largest absolute invariant-factor exponent of the projected lattices.
    pub spread: i64,
}

impl GateData {
    /// The geodesic through `{M_0 + M_C′ + p^k M_D′}`, from `C` toward `D′`.
    pub fn geodesic(&self, c: &Subspace) -> Result<CombinatorialGeodesic> {
        let m_c = Lattice::new(self.m0.basis().hcat(self.m_cprime.basis()), self.m0.ctx())?;
        CombinatorialGeodesic::between(c, &self.dprime, &m_c, &self.m_dprime)
    }

    /// Indices of `γ` that the gate search examines. The gates sit at `0` and
    /// `β − α`, and `|α|, |β| ≤ 2·spread`.
    pub fn window(&self) -> RangeInclusive<i64> {
        let s = 4 * self.spread + 2;
        -s..=s
    }
}

/// Exponent `e` with `target = p^e · (unit change of basis) · reference`, for two
/// square coordinate matrices; `None` if the lattices are not homothetic.
fn homothety_exponent(
    reference: &RationalMatrix,
    target: &RationalMatrix,
    ctx: &ValuationContext,
) -> Result<Option<i64>> {
    let rel = reference.solve(target)?;
    let smith = smith_local(&rel, ctx);
    if smith.rank != rel.cols() {
        return Ok(None);
    }
    let e = smith.exponents[0];
    Ok(smith.exponents.iter().all(|&x| x == e).then_some(e))
}

fn max_abs_exponent(m: &RationalMatrix, ctx: &ValuationContext) -> i64 {
    smith_local(m, ctx)
        .exponents
        .iter()
        .map(|e| e.abs())
        .max()
        .unwrap_or(0)
}

/// Projects the lattices onto `C′` and `D′` and finds `α`, `β` with
/// `p_C′(L_B) = p^α p_C′(L_A)` and `p_D′(L_B) = p^β p_D′(L_A)`.
pub fn gate_data(q: &CycleQuadruple, cprime: &Subspace, dprime: &Subspace) -> Result<GateData> {
    let ctx = &q.ctx;
    let cd = q.c.intersect(&q.d);
    let (k, pp) = (cd.dim(), cprime.dim());
    if dprime.dim() != pp || pp != q.p() {
        return Err(Hypothesis::Complements.into());
    }
    let frame = RationalMatrix::hcat_all(q.n(), &[cd.basis(), cprime.basis(), dprime.basis()]);
    let coords_a = frame.solve(q.l_a.basis())?;
    let coords_b = frame.solve(q.l_b.basis())?;
    let on_c = |m: &RationalMatrix| m.row_range(k..k + pp);
    let on_d = |m: &RationalMatrix| m.row_range(k + pp..k + 2 * pp);
    let (ac, bc, ad, bd) = (
        on_c(&coords_a),
        on_c(&coords_b),
        on_d(&coords_a),
        on_d(&coords_b),
    );

    let alpha_val =
        homothety_exponent(&ac, &bc, ctx)?.ok_or(Hypothesis::LatticesNotEquivalent("C′"))?;
    let beta_val =
        homothety_exponent(&ad, &bd, ctx)?.ok_or(Hypothesis::LatticesNotEquivalent("D′"))?;
    let spread = [&ac, &bc, &ad, &bd]
        .iter()
        .map(|m| max_abs_exponent(m, ctx))
        .max()
        .unwrap_or(0);

    Ok(GateData {
        m0: Lattice::new(cd.basis().clone(), ctx)?,
        m_cprime: Lattice::new(cprime.basis() * &ac, ctx)?,
        m_dprime: Lattice::new(dprime.basis() * &ad, ctx)?,
        cprime: cprime.clone(),
        dprime: dprime.clone(),
        cd,
        alpha_val,
        beta_val,
        spread,
    })
}

/// `(α, β)` valuations for the given complements.
pub fn scalar_valuations(
    q: &CycleQuadruple,
    cprime: &Subspace,
    dprime: &Subspace,
) -> Result<(i64, i64)> {
    let data = gate_data(q, cprime, dprime)?;
    Ok((data.alpha_val, data.beta_val))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    A,
    B,
}

/// `{M_D′ + M_C′ + M_0}` for `A`, `{p^(β−α) M_D′ + M_C′ + M_0}` for `B`.
pub fn gate_vertex_constructive(data: &GateData, which: Which) -> LatticeClass {
    let k = match which {
        Which::A => 0,
        Which::B => data.beta_val - data.alpha_val,
    };
    let basis = RationalMatrix::hcat_all(
        data.cd.ambient_dim(),
        &[
            data.m0.basis(),
            data.m_cprime.basis(),
            data.m_dprime.scaled(k).basis(),
        ],
    );
    LatticeClass::of_module(&basis, data.m0.ctx())
}

/// First vertex `x` of `γ`, walking from `C` toward `D′`, such that the first
/// step of the half-geodesic from `x` toward `W` leaves `γ`. Returns the vertex
/// and its index.
pub fn gate_vertex_search(gamma: &GeodesicIndex, target: &Subspace) -> Result<(LatticeClass, i64)> {
    let window = gamma.window();
    let mut positions: Vec<(i64, &LatticeClass)> = gamma
        .classes()
        .map(|x| (gamma.position(x).expect("indexed"), x))
        .collect();
    positions.sort_by(|a, b| b.0.cmp(&a.0));
    for (k, x) in positions {
        let step = half_geodesic_vertex(x, target, 1)?;
        if gamma.position(&step).is_none() {
            return Ok((x.clone(), k));
        }
    }
    Err(Error::GateNotFound(*window.start(), *window.end()))
}

/// All vertices in the window that satisfy the gate condition.
pub fn gate_candidates(gamma: &GeodesicIndex, target: &Subspace) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for x in gamma.classes() {
        if gamma
            .position(&half_geodesic_vertex(x, target, 1)?)
            .is_none()
        {
            out.push(gamma.position(x).expect("indexed"));
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    Ok(out)
}

/// Result of the geodesic computation.
#[derive(Clone, Debug)]
pub struct GeometricOutcome {
    pub value: i64,
    /// Set when the value was determined without building a geodesic.
    pub shortcut: Option<&'static str>,
    pub gates: Option<Gates>,
}

#[derive(Clone, Debug)]
pub struct Gates {
    pub gate_a: LatticeClass,
    pub gate_b: LatticeClass,
    pub k_a: i64,
    pub k_b: i64,
    pub distor: i64,
    pub alpha_val: i64,
    pub beta_val: i64,
    pub window: RangeInclusive<i64>,
    pub cprime: Subspace,
    pub dprime: Subspace,
    /// Whether the searched gates agree with the ones built from `α`, `β`.
    pub constructive_agrees: bool,
}

/// Degenerate configurations whose intersection number is 0 without further work.
pub fn degenerate_case(q: &CycleQuadruple) -> Option<&'static str> {
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

/// `p · distor_γ(A∗γ, B∗γ)`
pub fn intersection_geometric(q: &CycleQuadruple) -> Result<GeometricOutcome> {
    if let Some(reason) = degenerate_case(q) {
        return Ok(GeometricOutcome {
            value: 0,
            shortcut: Some(reason),
            gates: None,
        });
    }
    let (cprime, dprime) = construct_complements(q)?;
    let data = gate_data(q, &cprime, &dprime)?;
    let gamma = data.geodesic(&q.c)?;
    let window = data.window();
    let index = gamma.index(window.clone());
    let (gate_a, k_a) = gate_vertex_search(&index, &q.a)?;
    let (gate_b, k_b) = gate_vertex_search(&index, &q.b)?;
    let constructive_agrees = gate_vertex_constructive(&data, Which::A) == gate_a
        && gate_vertex_constructive(&data, Which::B) == gate_b;
    let distor = k_a - k_b;
    Ok(GeometricOutcome {
        value: q.p() as i64 * distor,
        shortcut: None,
        gates: Some(Gates {
            gate_a,
            gate_b,
            k_a,
            k_b,
            distor,
            alpha_val: data.alpha_val,
            beta_val: data.beta_val,
            window,
            cprime,
            dprime,
            constructive_agrees,
        }),
    })
}
