//! Seeded random instances that satisfy the gate-theorem hypotheses by
//! construction.
//!
//! Both generators work in the frame `D′ = e_1..e_p`, `C′ = e_{p+1}..e_{2p}`,
//! `C∩D = e_{2p+1}..e_n`, put `a_i = e_i + e_{p+i}` and
//! `b_i = β w_i + α w_{p+i}` for a recombined frame `w`, then move everything
//! by a random invertible matrix.

use num_traits::{One, Zero};
use rand::Rng;

use crate::arch::{ArchQuadruple, MetricClass};
use crate::arith::{
    rational_from_frac, rational_from_i64, RationalMatrix, RationalScalar, ValuationContext,
};
use crate::building::{Lattice, Subspace};
use crate::nonarch::CycleQuadruple;
use crate::symspace::linalg::{hermitize, orthonormalize};
use crate::symspace::{c, real, CMatrix, ComplexSubspace};

/// A generated finite-place instance with its known answer.
#[derive(Clone, Debug)]
pub struct NonArchCase {
    pub quad: CycleQuadruple,
    pub alpha_val: i64,
    pub beta_val: i64,
}

impl NonArchCase {
    /// `p · (v(α) − v(β))`
    pub fn expected(&self) -> i64 {
        self.quad.p() as i64 * (self.alpha_val - self.beta_val)
    }
}

fn coprime_to(rng: &mut impl Rng, prime: u64, max: i64) -> i64 {
    loop {
        let x = rng.gen_range(1..=max);
        if x as u64 % prime != 0 {
            return x;
        }
    }
}

/// A random unit of ℤ_(p) with small numerator and denominator.
fn random_unit(rng: &mut impl Rng, ctx: &ValuationContext) -> RationalScalar {
    let num = coprime_to(rng, ctx.prime(), 12);
    let den = coprime_to(rng, ctx.prime(), 12);
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    rational_from_frac(sign * num, den)
}

/// `p^k · unit` with `k` uniform in `[-3, 3]`.
fn random_scalar(rng: &mut impl Rng, ctx: &ValuationContext) -> (RationalScalar, i64) {
    let k = rng.gen_range(-3..=3);
    (ctx.pow(k) * random_unit(rng, ctx), k)
}

fn small_int_matrix(rng: &mut impl Rng, n: usize, m: usize, bound: i64) -> RationalMatrix {
    let rows = (0..n)
        .map(|_| {
            (0..m)
                .map(|_| rational_from_i64(rng.gen_range(-bound..=bound)))
                .collect()
        })
        .collect();
    RationalMatrix::from_rows(rows).expect("rectangular")
}

/// A random matrix in `GL_d(ℤ_(p))`.
pub fn random_unimodular(rng: &mut impl Rng, d: usize, ctx: &ValuationContext) -> RationalMatrix {
    loop {
        let mut m = small_int_matrix(rng, d, d, 3);
        for i in 0..d {
            m[(i, i)] += random_unit(rng, ctx);
        }
        let det = m.determinant().expect("square");
        if !det.is_zero() && ctx.val(&det) == 0 {
            return m;
        }
    }
}

/// A random invertible rational matrix.
pub fn random_invertible(rng: &mut impl Rng, d: usize) -> RationalMatrix {
    loop {
        let m = small_int_matrix(rng, d, d, 3);
        if !m.determinant().expect("square").is_zero() {
            return m;
        }
    }
}

fn unit_vector(n: usize, i: usize) -> Vec<RationalScalar> {
    let mut v = vec![RationalScalar::zero(); n];
    v[i] = RationalScalar::one();
    v
}

/// A random instance with `dim A = p` in dimension `n`.
pub fn nonarch_case(rng: &mut impl Rng, n: usize, p: usize, ctx: &ValuationContext) -> NonArchCase {
    assert!(p >= 1 && 2 * p <= n);
    loop {
        let (alpha, alpha_val) = random_scalar(rng, ctx);
        let (beta, beta_val) = random_scalar(rng, ctx);
        let u1 = random_unimodular(rng, p, ctx);
        let u2 = random_unimodular(rng, p, ctx);

        let mut a_cols = Vec::new();
        let mut b_cols = Vec::new();
        for i in 0..p {
            let mut a = unit_vector(n, i);
            a[p + i] = RationalScalar::one();
            a_cols.push(a);
            let mut b = vec![RationalScalar::zero(); n];
            for j in 0..p {
                b[j] = &beta * &u1[(j, i)];
                b[p + j] = &alpha * &u2[(j, i)];
            }
            b_cols.push(b);
        }
        let la = RationalMatrix::from_columns(n, &a_cols);
        let lb = RationalMatrix::from_columns(n, &b_cols);
        if la.hcat(&lb).rank() < 2 * p {
            continue;
        }
        let c_cols: Vec<_> = (p..n).map(|i| unit_vector(n, i)).collect();
        let mut d_cols: Vec<_> = (0..p).map(|i| unit_vector(n, i)).collect();
        d_cols.extend((2 * p..n).map(|i| unit_vector(n, i)));
        let c = RationalMatrix::from_columns(n, &c_cols);
        let d = RationalMatrix::from_columns(n, &d_cols);

        let g = random_invertible(rng, n);
        let la = &(&g * &la) * &random_unimodular(rng, p, ctx);
        let lb = &(&g * &lb) * &random_unimodular(rng, p, ctx);
        let a = &la * &random_invertible(rng, p);
        let b = &lb * &random_invertible(rng, p);
        let c = &(&g * &c) * &random_invertible(rng, n - p);
        let d = &(&g * &d) * &random_invertible(rng, n - p);

        let sub = |m: RationalMatrix| Subspace::new(m).expect("independent");
        let quad = CycleQuadruple::with_lattices(
            sub(a),
            sub(b),
            sub(c),
            sub(d),
            Lattice::new(la, ctx).expect("independent"),
            Lattice::new(lb, ctx).expect("independent"),
            ctx,
        )
        .expect("hypotheses hold by construction");
        return NonArchCase {
            quad,
            alpha_val,
            beta_val,
        };
    }
}

/// A generated infinite-place instance with its known answer.
#[derive(Clone, Debug)]
pub struct ArchCase {
    pub quad: ArchQuadruple,
    pub alpha: f64,
    pub beta: f64,
}

impl ArchCase {
    /// `2p · log(β/α)`
    pub fn expected(&self) -> f64 {
        2.0 * self.quad.p() as f64 * (self.beta / self.alpha).ln()
    }
}

fn random_complex(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

pub fn random_unitary(rng: &mut impl Rng, d: usize) -> CMatrix {
    orthonormalize(&(random_complex(rng, d, d) + CMatrix::identity(d, d) * real(0.1)))
}

/// A random complex matrix kept away from singularity by a diagonal shift.
pub fn random_complex_invertible(rng: &mut impl Rng, d: usize) -> CMatrix {
    random_complex(rng, d, d) + CMatrix::identity(d, d) * real(2.0)
}

/// A random positive-definite Hermitian matrix.
pub fn random_metric(rng: &mut impl Rng, d: usize) -> CMatrix {
    let m = random_complex(rng, d, d);
    hermitize(&(&m * m.adjoint() + CMatrix::identity(d, d) * real(0.5)))
}

fn unit_columns(n: usize, idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(n, idx.len(), |i, j| {
        real(if i == idx[j] { 1.0 } else { 0.0 })
    })
}

/// A random instance with `dim A = p` in `ℂ^n`, with `α`, `β` drawn from
/// `exp([-2, 2])` and random metrics in every class.
pub fn arch_case(rng: &mut impl Rng, n: usize, p: usize) -> ArchCase {
    assert!(p >= 1 && 2 * p <= n);
    loop {
        let alpha = rng.gen_range(-2.0f64..2.0).exp();
        let beta = rng.gen_range(-2.0f64..2.0).exp();
        let u1 = random_unitary(rng, p);
        let u2 = random_unitary(rng, p);
        let mut a = CMatrix::zeros(n, p);
        let mut b = CMatrix::zeros(n, p);
        for i in 0..p {
            a[(i, i)] = real(1.0);
            a[(p + i, i)] = real(1.0);
            for j in 0..p {
                b[(j, i)] = u1[(j, i)] * beta;
                b[(p + j, i)] = u2[(j, i)] * alpha;
            }
        }
        let mut ab = CMatrix::zeros(n, 2 * p);
        ab.view_mut((0, 0), (n, p)).copy_from(&a);
        ab.view_mut((0, p), (n, p)).copy_from(&b);
        if crate::symspace::linalg::rank(&ab) < 2 * p {
            continue;
        }
        let c_idx: Vec<usize> = (p..n).collect();
        let d_idx: Vec<usize> = (0..p).chain(2 * p..n).collect();

        let g = random_complex_invertible(rng, n);
        let ra = random_complex_invertible(rng, p);
        let rb = random_complex_invertible(rng, p);
        let a = &g * a * &ra;
        let b = &g * b * &rb;
        let c_basis = &g * unit_columns(n, &c_idx) * random_complex_invertible(rng, n - p);
        let d_basis = &g * unit_columns(n, &d_idx) * random_complex_invertible(rng, n - p);
        let gram_a = hermitize(&(ra.adjoint() * &ra)) * real(rng.gen_range(0.2..5.0));
        let gram_b = hermitize(&(rb.adjoint() * &rb)) * real(rng.gen_range(0.2..5.0));

        let sub = |m: CMatrix| ComplexSubspace::new(m).expect("independent");
        let (a, b) = (sub(a), sub(b));
        let h_a = MetricClass::new(a.clone(), gram_a).expect("positive definite");
        let h_b = MetricClass::new(b.clone(), gram_b).expect("positive definite");
        let Ok(quad) = ArchQuadruple::with_metrics(
            a,
            b,
            sub(c_basis),
            sub(d_basis),
            h_a,
            h_b,
            random_metric(rng, n),
        ) else {
            continue;
        };
        return ArchCase { quad, alpha, beta };
    }
}
