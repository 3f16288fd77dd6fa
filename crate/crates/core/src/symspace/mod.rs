//! The symmetric space `SL(n,ℂ)/SU(n)`, with points stored as positive-definite
//! Hermitian matrices `H = g g^†` of determinant 1 and the metric coming from the
//! Killing form `B(X, Y) = 4n Re Tr(XY)`.

pub mod linalg;

pub use linalg::{c, c64, real, CMatrix};

use linalg::{
    cholesky, column_span, complete_unitary, diag_real, hermitian_eigenvalues, hermitize, inverse,
    is_hermitian, kernel, max_abs, normalize_det, orthonormalize, rank, solve,
};

use crate::error::{Error, Result};

/// Linear subspace of ℂ^n spanned by independent columns.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexSubspace {
    basis: CMatrix,
}

impl ComplexSubspace {
    pub fn new(basis: CMatrix) -> Result<Self> {
        if rank(&basis) < basis.ncols() {
            return Err(Error::RankDeficient);
        }
        Ok(ComplexSubspace { basis })
    }

    pub fn span(generators: &CMatrix) -> Self {
        ComplexSubspace {
            basis: column_span(generators),
        }
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn orthonormal_basis(&self) -> CMatrix {
        orthonormalize(&self.basis)
    }

    pub fn sum(&self, other: &ComplexSubspace) -> ComplexSubspace {
        let mut m = CMatrix::zeros(self.ambient_dim(), self.dim() + other.dim());
        m.view_mut((0, 0), self.basis.shape())
            .copy_from(&self.orthonormal_basis());
        m.view_mut((0, self.dim()), other.basis.shape())
            .copy_from(&other.orthonormal_basis());
        ComplexSubspace::span(&m)
    }

    pub fn intersect(&self, other: &ComplexSubspace) -> ComplexSubspace {
        let (q1, q2) = (self.orthonormal_basis(), other.orthonormal_basis());
        let n = self.ambient_dim();
        let mut m = CMatrix::zeros(n, q1.ncols() + q2.ncols());
        m.view_mut((0, 0), q1.shape()).copy_from(&q1);
        m.view_mut((0, q1.ncols()), q2.shape()).copy_from(&(-&q2));
        let k = kernel(&m);
        if k.ncols() == 0 {
            return ComplexSubspace {
                basis: CMatrix::zeros(n, 0),
            };
        }
        let coeffs = k.rows(0, q1.ncols()).into_owned();
        ComplexSubspace::span(&(&q1 * coeffs))
    }

    pub fn contains(&self, other: &ComplexSubspace) -> bool {
        self.sum(other).dim() == self.dim()
    }

    pub fn same_as(&self, other: &ComplexSubspace) -> bool {
        self.dim() == other.dim() && self.contains(other)
    }

    pub fn transform(&self, g: &CMatrix) -> ComplexSubspace {
        ComplexSubspace {
            basis: g * &self.basis,
        }
    }
}

/// A Hermitian metric on a subspace, given by its Gram matrix on the subspace's
/// basis, up to a positive scalar.
#[derive(Clone, Debug)]
pub struct MetricClass {
    pub subspace: ComplexSubspace,
    pub gram: CMatrix,
}

impl MetricClass {
    pub fn new(subspace: ComplexSubspace, gram: CMatrix) -> Result<Self> {
        let d = subspace.dim();
        if gram.shape() != (d, d) {
            return Err(Error::Shape(format!(
                "Gram matrix is {}x{}, subspace has dimension {d}",
                gram.nrows(),
                gram.ncols()
            )));
        }
        if !is_hermitian(&gram, 1e-12) {
            return Err(Error::NotPositiveDefinite);
        }
        cholesky(&gram)?;
        Ok(MetricClass { subspace, gram })
    }

    /// Metric making the given basis orthonormal.
    pub fn standard(subspace: ComplexSubspace) -> Self {
        let d = subspace.dim();
        MetricClass {
            subspace,
            gram: CMatrix::identity(d, d),
        }
    }

    /// Restriction of an ambient Gram matrix to a subspace.
    pub fn restricted(ambient: &CMatrix, subspace: ComplexSubspace) -> Result<Self> {
        let b = subspace.basis();
        let gram = hermitize(&(b.adjoint() * ambient * b));
        MetricClass::new(subspace, gram)
    }

    pub fn scaled(&self, c: f64) -> MetricClass {
        MetricClass {
            subspace: self.subspace.clone(),
            gram: &self.gram * real(c),
        }
    }

    /// Columns forming an orthonormal basis for this metric.
    pub fn orthonormal_frame(&self) -> Result<CMatrix> {
        let l = cholesky(&self.gram)?;
        let l_inv_adj = inverse(&l.adjoint())?;
        Ok(self.subspace.basis() * l_inv_adj)
    }
}

/// A point of the symmetric space, `H = g g^†` with `det H = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpacePoint {
    h: CMatrix,
}

impl SpacePoint {
    pub fn new(h: CMatrix) -> Result<Self> {
        if !is_hermitian(&h, 1e-12) {
            return Err(Error::NotPositiveDefinite);
        }
        cholesky(&h)?;
        let det = h.determinant();
        if (det.re - 1.0).abs() > 1e-9 || det.im.abs() > 1e-9 {
            return Err(Error::Shape(format!("determinant {det} is not 1")));
        }
        Ok(SpacePoint { h })
    }

    /// Rescales a positive-definite Hermitian matrix to determinant 1.
    pub fn normalized(h: &CMatrix) -> Result<Self> {
        let h = hermitize(h);
        cholesky(&h)?;
        let n = h.nrows();
        let det = h.determinant().re;
        Ok(SpacePoint {
            h: hermitize(&(&h * real(det.powf(-1.0 / n as f64)))),
        })
    }

    pub fn identity(n: usize) -> Self {
        SpacePoint {
            h: CMatrix::identity(n, n),
        }
    }

    /// The coset `g·SU(n)`, i.e. `H = g g^†`.
    pub fn from_group(g: &CMatrix) -> Result<Self> {
        SpacePoint::normalized(&(g * g.adjoint()))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.h
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    /// `g · z`, i.e. `H ↦ g H g^†`.
    pub fn act(&self, g: &CMatrix) -> Result<Self> {
        SpacePoint::normalized(&(g * &self.h * g.adjoint()))
    }
}

/// `2√n · √(Σ a_i²)` with `a_i = ½ log λ_i`, where `λ_i` are the eigenvalues of
/// `H1^{-1} H2`.
pub fn distance(z1: &SpacePoint, z2: &SpacePoint) -> Result<f64> {
    let n = z1.dim();
    if z2.dim() != n {
        return Err(Error::DimensionMismatch(
            "points of different dimension".into(),
        ));
    }
    let l = cholesky(&z1.h)?;
    let x = solve(&l, &z2.h)?;
    let m = solve(&l, &x.adjoint())?;
    let mut sum = 0.0;
    for lambda in hermitian_eigenvalues(&m) {
        if lambda <= 0.0 {
            return Err(Error::NotPositiveDefinite);
        }
        let a = 0.5 * lambda.ln();
        sum += a * a;
    }
    Ok(2.0 * (n as f64).sqrt() * sum.sqrt())
}

/// `ρ = √((n−r)/(4rn²))`, `σ = −rρ/(n−r)`: the unit-speed exponents of a ray
/// toward an `r`-dimensional subspace.
pub fn ray_exponents(n: usize, r: usize) -> (f64, f64) {
    let (nf, rf) = (n as f64, r as f64);
    let rho = ((nf - rf) / (4.0 * rf * nf * nf)).sqrt();
    (rho, -rf * rho / (nf - rf))
}

/// `t ↦ g · exp(t·diag(ρ×r, σ×(n−r)))`, with `g ∈ SL(n, ℂ)`.
#[derive(Clone, Debug)]
pub struct RayParams {
    pub g: CMatrix,
    pub r: usize,
    pub rho: f64,
    pub sigma: f64,
}

impl RayParams {
    pub fn new(g: CMatrix, r: usize) -> Self {
        let n = g.nrows();
        let (rho, sigma) = ray_exponents(n, r);
        RayParams { g, r, rho, sigma }
    }

    pub fn n(&self) -> usize {
        self.g.nrows()
    }

    fn exponents(&self, t: f64) -> Vec<f64> {
        (0..self.n())
            .map(|i| {
                if i < self.r {
                    t * self.rho
                } else {
                    t * self.sigma
                }
            })
            .collect()
    }

    /// The trace-free direction `diag(ρ×r, σ×(n−r))`.
    pub fn direction(&self) -> CMatrix {
        diag_real(&self.exponents(1.0))
    }

    /// `g · exp(tX)`, a group element representing the point at time `t`.
    pub fn frame(&self, t: f64) -> CMatrix {
        let scale: Vec<f64> = self.exponents(t).iter().map(|x| x.exp()).collect();
        &self.g * diag_real(&scale)
    }

    /// `g · diag(e^{2tρ}…, e^{2tσ}…) · g^†`
    pub fn point(&self, t: f64) -> SpacePoint {
        let f = self.frame(t);
        SpacePoint::normalized(&(&f * f.adjoint())).expect("positive definite by construction")
    }
}

pub fn point_at(params: &RayParams, t: f64) -> SpacePoint {
    params.point(t)
}

/// The unit-speed ray from `x` toward the boundary point of `W`.
pub fn ray_to_boundary(x: &SpacePoint, w: &ComplexSubspace) -> Result<RayParams> {
    let n = x.dim();
    if w.ambient_dim() != n || w.dim() == 0 || w.dim() >= n {
        return Err(Error::Shape(
            "boundary subspace must be proper and nonzero".into(),
        ));
    }
    if rank(w.basis()) < w.dim() {
        return Err(Error::RankDeficient);
    }
    let f = cholesky(&x.h)?;
    let k = unitary_adapted_to(&solve(&f, w.basis())?);
    let mut g = f * k;
    linalg::fix_phase(&mut g, n - 1);
    Ok(RayParams::new(g, w.dim()))
}

/// A unitary matrix whose first columns span the columns of `w`.
fn unitary_adapted_to(w: &CMatrix) -> CMatrix {
    complete_unitary(&orthonormalize(w))
}

/// A geodesic line; increasing `t` runs toward the first subspace it was built
/// from and decreasing `t` toward the second.
#[derive(Clone, Debug)]
pub struct ArchGeodesic {
    pub params: RayParams,
}

impl ArchGeodesic {
    pub fn point(&self, t: f64) -> SpacePoint {
        self.params.point(t)
    }
}

/// The geodesic joining `W` and `W2` determined by the metric classes `h` on
/// `W` and `h2` on `W2`.
pub fn geodesic_from_metrics(h: &MetricClass, h2: &MetricClass) -> Result<ArchGeodesic> {
    let (w, w2) = (&h.subspace, &h2.subspace);
    let n = w.ambient_dim();
    if w2.ambient_dim() != n || w.dim() + w2.dim() != n || w.dim() == 0 || w2.dim() == 0 {
        return Err(Error::NotComplementary);
    }
    let f1 = h.orthonormal_frame()?;
    let f2 = h2.orthonormal_frame()?;
    let mut g = CMatrix::zeros(n, n);
    g.view_mut((0, 0), f1.shape()).copy_from(&f1);
    g.view_mut((0, w.dim()), f2.shape()).copy_from(&f2);
    if rank(&g) < n {
        return Err(Error::NotComplementary);
    }
    Ok(ArchGeodesic {
        params: RayParams::new(normalize_det(&g), w.dim()),
    })
}

fn check_tangent(x: &CMatrix) -> Result<()> {
    let scale = max_abs(x).max(1.0);
    if !x.is_square()
        || max_abs(&(x - x.adjoint())) > 1e-12 * scale
        || x.trace().norm() > 1e-12 * scale
    {
        return Err(Error::NotTangent);
    }
    Ok(())
}

/// `4n Re Tr(XY)` on Hermitian trace-free matrices.
pub fn killing_inner(x: &CMatrix, y: &CMatrix) -> Result<f64> {
    check_tangent(x)?;
    check_tangent(y)?;
    if x.shape() != y.shape() {
        return Err(Error::DimensionMismatch("tangent vectors".into()));
    }
    let n = x.nrows() as f64;
    Ok(4.0 * n * (x * y).trace().re)
}

/// Killing inner product, at `γ(t)`, of the direction of the ray toward `W` with
/// the direction of `γ`.
pub fn orthogonality(geo: &ArchGeodesic, w: &ComplexSubspace, t: f64) -> Result<f64> {
    let params = &geo.params;
    let n = params.n();
    // In the frame g·exp(tX) the point γ(t) is the identity and γ moves along X.
    let coords = solve(&params.g, w.basis())?;
    let shrink: Vec<f64> = (0..n)
        .map(|i| {
            (-t * if i < params.r {
                params.rho
            } else {
                params.sigma
            })
            .exp()
        })
        .collect();
    let local = diag_real(&shrink) * coords;
    let k = unitary_adapted_to(&local);
    let (rho, sigma) = ray_exponents(n, w.dim());
    let d: Vec<f64> = (0..n)
        .map(|i| if i < w.dim() { rho } else { sigma })
        .collect();
    let ray_dir = hermitize(&(&k * diag_real(&d) * k.adjoint()));
    killing_inner(&ray_dir, &params.direction())
}

/// Output of [`gate_point`].
#[derive(Clone, Debug)]
pub struct GatePoint {
    pub t: f64,
    pub point: SpacePoint,
    /// Killing inner product at `t`.
    pub residual: f64,
    /// Every root found on the scan interval, in increasing order.
    pub roots: Vec<f64>,
}

/// Half-width of the parameter interval scanned for sign changes.
pub const GATE_SCAN: f64 = 50.0;
const GATE_STEP: f64 = 0.25;

/// The point `t` of `γ` where the ray toward `W` is Killing-orthogonal to `γ`.
///
/// The interval `[-50, 50]` is scanned for sign changes, each bracket is refined
/// by bisection, and the root closest to `hint` (or the first root) is returned.
pub fn gate_point(geo: &ArchGeodesic, w: &ComplexSubspace, hint: Option<f64>) -> Result<GatePoint> {
    let f = |t: f64| orthogonality(geo, w, t);
    let steps = (2.0 * GATE_SCAN / GATE_STEP).round() as i64;
    let mut roots = Vec::new();
    let mut prev_t = -GATE_SCAN;
    let mut prev = f(prev_t)?;
    for i in 1..=steps {
        let t = -GATE_SCAN + i as f64 * GATE_STEP;
        let v = f(t)?;
        if prev == 0.0 {
            roots.push(prev_t);
        } else if prev.signum() != v.signum() && v != 0.0 {
            roots.push(bisect(&f, prev_t, t, prev)?);
        }
        prev_t = t;
        prev = v;
    }
    if prev == 0.0 {
        roots.push(prev_t);
    }
    let chosen = match hint {
        Some(h) => roots
            .iter()
            .copied()
            .min_by(|a, b| (a - h).abs().total_cmp(&(b - h).abs())),
        None => roots.first().copied(),
    };
    let t = chosen.ok_or(Error::NoRoot(-GATE_SCAN, GATE_SCAN))?;
    Ok(GatePoint {
        t,
        point: geo.point(t),
        residual: f(t)?,
        roots,
    })
}

fn bisect(f: &impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, mut f_lo: f64) -> Result<f64> {
    let mut best = (f64::INFINITY, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = f(mid)?;
        if v.abs() < best.0 {
            best = (v.abs(), mid);
        }
        if v == 0.0 || hi - lo <= 4.0 * f64::EPSILON * mid.abs().max(1.0) {
            break;
        }
        if v.signum() == f_lo.signum() {
            lo = mid;
            f_lo = v;
        } else {
            hi = mid;
        }
    }
    Ok(best.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_point(d: &[f64]) -> SpacePoint {
        SpacePoint::new(diag_real(d)).unwrap()
    }

    fn std_subspace(n: usize, cols: &[usize]) -> ComplexSubspace {
        ComplexSubspace::new(CMatrix::from_fn(n, cols.len(), |i, j| {
            real(if i == cols[j] { 1.0 } else { 0.0 })
        }))
        .unwrap()
    }

    #[test]
    fn distance_examples() {
        let e = std::f64::consts::E;
        let i = SpacePoint::identity(2);
        assert_eq!(distance(&i, &i).unwrap(), 0.0);
        let z = diag_point(&[e * e, 1.0 / (e * e)]);
        assert!((distance(&i, &z).unwrap() - 4.0).abs() < 1e-12);
        assert!((distance(&z, &i).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn exponents_have_unit_norm() {
        let (rho, sigma) = ray_exponents(2, 1);
        assert!((rho - 0.25).abs() < 1e-15 && (sigma + 0.25).abs() < 1e-15);
        for n in 2..=8 {
            for r in 1..n {
                let (rho, sigma) = ray_exponents(n, r);
                let nf = n as f64;
                let norm = 4.0 * nf * (r as f64 * rho * rho + (nf - r as f64) * sigma * sigma);
                assert!((norm - 1.0).abs() < 1e-14);
                let x = RayParams::new(CMatrix::identity(n, n), r).direction();
                assert!((killing_inner(&x, &x).unwrap() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn killing_examples() {
        let x = diag_real(&[1.0, -1.0]) * real(0.25);
        let y = CMatrix::from_row_slice(2, 2, &[real(0.0), real(1.0), real(1.0), real(0.0)])
            * real(0.25);
        assert!((killing_inner(&x, &x).unwrap() - 1.0).abs() < 1e-14);
        assert!(killing_inner(&x, &y).unwrap().abs() < 1e-15);
        let two_x = &x * real(2.0);
        assert!(
            (killing_inner(&two_x, &y).unwrap() - 2.0 * killing_inner(&x, &y).unwrap()).abs()
                < 1e-15
        );
        assert!(killing_inner(&CMatrix::identity(2, 2), &x).is_err());
    }

    #[test]
    fn standard_ray() {
        let w = std_subspace(3, &[0]);
        let ray = ray_to_boundary(&SpacePoint::identity(3), &w).unwrap();
        let (rho, sigma) = ray_exponents(3, 1);
        let p = ray.point(1.5);
        let expect = diag_real(&[(3.0 * rho).exp(), (3.0 * sigma).exp(), (3.0 * sigma).exp()]);
        assert!(max_abs(&(p.matrix() - expect)) < 1e-12);
        for t in [0.5, 1.0, 2.0] {
            let d = distance(&ray.point(0.0), &ray.point(t)).unwrap();
            assert!((d - t).abs() < 1e-9);
        }
    }

    #[test]
    fn diagonal_geodesic() {
        let h = MetricClass::standard(std_subspace(2, &[0]));
        let h2 = MetricClass::standard(std_subspace(2, &[1]));
        let geo = geodesic_from_metrics(&h, &h2).unwrap();
        for t in [-1.0f64, 0.0, 2.0] {
            let expect = diag_real(&[(t / 2.0).exp(), (-t / 2.0).exp()]);
            assert!(max_abs(&(geo.point(t).matrix() - expect)) < 1e-12);
        }
        let e = std::f64::consts::E;
        assert!(max_abs(&(geo.point(2.0).matrix() - diag_real(&[e, 1.0 / e]))) < 1e-12);
    }

    #[test]
    fn ray_along_itself_has_no_gate() {
        let h = MetricClass::standard(std_subspace(2, &[0]));
        let h2 = MetricClass::standard(std_subspace(2, &[1]));
        let geo = geodesic_from_metrics(&h, &h2).unwrap();
        let v = orthogonality(&geo, &h.subspace, 0.3).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert!(matches!(
            gate_point(&geo, &h.subspace, None),
            Err(Error::NoRoot(..))
        ));
    }
}
