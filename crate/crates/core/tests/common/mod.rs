//! Oracles shared by the integration tests and the acceptance binary. Nothing
//! here calls into the library's lattice code: the ball of lattice classes is
//! enumerated with a small integer Hermite normal form and explored by BFS.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use linheight::arch::{ArchQuadruple, MetricClass};
use linheight::arith::{rational_from_i64, RationalMatrix, ValuationContext};
use linheight::building::{
    combinatorial_distance, half_geodesic_vertex, reduction_segment_equal, Lattice, LatticeClass,
    Subspace,
};
use linheight::generate::{random_complex_invertible, random_invertible};
use linheight::nonarch::CycleQuadruple;
use linheight::symspace::linalg::hermitize;
use linheight::symspace::{real, ComplexSubspace};
use rand::Rng;

/// Column Hermite normal form of the lattice generated by `gens` and
/// `modulus · ℤ^n`, returned row-major: lower triangular, positive diagonal,
/// entries left of the diagonal reduced into `[0, H[i][i])`.
pub fn int_hnf(gens: &[Vec<i64>], n: usize, modulus: i64) -> Vec<i64> {
    let mut cols: Vec<Vec<i128>> = gens
        .iter()
        .map(|g| g.iter().map(|&x| x as i128).collect())
        .collect();
    for i in 0..n {
        let mut e = vec![0i128; n];
        e[i] = modulus as i128;
        cols.push(e);
    }
    for i in 0..n {
        loop {
            let pivot = (i..cols.len())
                .filter(|&j| cols[j][i] != 0)
                .min_by_key(|&j| cols[j][i].abs());
            let Some(pj) = pivot else {
                panic!("modulus columns keep full rank")
            };
            cols.swap(i, pj);
            let mut done = true;
            for j in i + 1..cols.len() {
                if cols[j][i] != 0 {
                    let q = cols[j][i].div_euclid(cols[i][i]);
                    for r in 0..n {
                        let v = cols[i][r];
                        cols[j][r] -= q * v;
                    }
                    if cols[j][i] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if cols[i][i] < 0 {
            for r in 0..n {
                cols[i][r] = -cols[i][r];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            let q = cols[j][i].div_euclid(cols[i][i]);
            for r in 0..n {
                let v = cols[i][r];
                cols[j][r] -= q * v;
            }
        }
    }
    let mut out = vec![0i64; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = i64::try_from(cols[j][i]).expect("small entries");
        }
    }
    out
}

fn hnf_columns(h: &[i64], n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|j| (0..n).map(|i| h[i * n + j]).collect())
        .collect()
}

/// Lattice classes `{N}` with `p³ℤ^n ⊂ N ⊂ ℤ^n`, `N ⊄ pℤ^n` (one representative
/// per class) and the adjacency relation built from subspaces of `N/pN`.
pub struct Ball {
    pub prime: i64,
    pub n: usize,
    pub vertices: Vec<Vec<i64>>,
    pub index: HashMap<Vec<i64>, usize>,
    pub neighbors: Vec<Vec<usize>>,
}

fn all_vectors(n: usize, p: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|&x| x != 0));
    out
}

impl Ball {
    pub fn new(n: usize, prime: i64) -> Ball {
        let p3 = prime.pow(3);
        let mut vertices = Vec::new();
        let mut index = HashMap::new();
        let diag_choices: Vec<Vec<u32>> = (0..4u32.pow(n as u32))
            .map(|code| (0..n).map(|i| (code / 4u32.pow(i as u32)) % 4).collect())
            .collect();
        for diag in diag_choices {
            let slots: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
            let ranges: Vec<i64> = slots.iter().map(|&(i, _)| prime.pow(diag[i])).collect();
            let total: i64 = ranges.iter().product();
            for code in 0..total {
                let mut h = vec![0i64; n * n];
                for i in 0..n {
                    h[i * n + i] = prime.pow(diag[i]);
                }
                let mut c = code;
                for (s, &(i, j)) in slots.iter().enumerate() {
                    h[i * n + j] = c % ranges[s];
                    c /= ranges[s];
                }
                let canon = int_hnf(&hnf_columns(&h, n), n, p3);
                if canon.iter().all(|x| x % prime == 0) || index.contains_key(&canon) {
                    continue;
                }
                index.insert(canon.clone(), vertices.len());
                vertices.push(canon);
            }
        }
        let mut ball = Ball {
            prime,
            n,
            vertices,
            index,
            neighbors: Vec::new(),
        };
        ball.neighbors = (0..ball.vertices.len())
            .map(|v| ball.compute_neighbors(v))
            .collect();
        ball
    }

    fn compute_neighbors(&self, v: usize) -> Vec<usize> {
        let (n, p) = (self.n, self.prime);
        let cols = hnf_columns(&self.vertices[v], n);
        let scaled: Vec<Vec<i64>> = cols
            .iter()
            .map(|c| c.iter().map(|x| p * x).collect())
            .collect();
        let image = |coef: &[i64]| -> Vec<i64> {
            (0..n)
                .map(|r| (0..n).map(|j| cols[j][r] * coef[j]).sum())
                .collect()
        };
        let vectors = all_vectors(n, p);
        let mut spans: Vec<Vec<Vec<i64>>> = vectors.iter().map(|v| vec![image(v)]).collect();
        if n == 3 {
            for (a, va) in vectors.iter().enumerate() {
                for vb in &vectors[a + 1..] {
                    spans.push(vec![image(va), image(vb)]);
                }
            }
        }
        let mut out = Vec::new();
        for extra in spans {
            let mut gens = scaled.clone();
            gens.extend(extra);
            let k = int_hnf(&gens, n, p.pow(4));
            let rep = if k.iter().all(|x| x % p == 0) {
                let down: Vec<i64> = k.iter().map(|x| x / p).collect();
                int_hnf(&hnf_columns(&down, n), n, p.pow(3))
            } else {
                let with_cube = int_hnf(&hnf_columns(&k, n), n, p.pow(3));
                if with_cube != k {
                    continue;
                }
                k
            };
            if let Some(&w) = self.index.get(&rep) {
                if w != v && !out.contains(&w) {
                    out.push(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Shortest path length inside the ball.
    pub fn bfs(&self, from: usize, to: usize) -> Option<u64> {
        let mut dist = vec![u64::MAX; self.vertices.len()];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                return Some(dist[v]);
            }
            for &w in &self.neighbors[v] {
                if dist[w] == u64::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    pub fn matrix(&self, v: usize) -> RationalMatrix {
        let n = self.n;
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| rational_from_i64(self.vertices[v][i * n + j]))
                    .collect()
            })
            .collect();
        RationalMatrix::from_rows(rows).unwrap()
    }
}

/// Compares the library distance of `g·N1`, `g·N2` with BFS distance for
/// `pairs` random pairs of the ball. Returns the number of mismatches and a
/// description of the first one.
pub fn bfs_agreement(ball: &Ball, rng: &mut impl Rng, pairs: usize) -> (usize, Option<String>) {
    let ctx = ValuationContext::new(ball.prime as u64).unwrap();
    let mut bad = 0;
    let mut first = None;
    for _ in 0..pairs {
        let i = rng.gen_range(0..ball.vertices.len());
        let j = rng.gen_range(0..ball.vertices.len());
        let g = random_invertible(rng, ball.n);
        let x = LatticeClass::of_module(&(&g * &ball.matrix(i)), &ctx);
        let y = LatticeClass::of_module(&(&g * &ball.matrix(j)), &ctx);
        let lib = combinatorial_distance(&x, &y).unwrap();
        let oracle = ball.bfs(i, j);
        if oracle != Some(lib) {
            bad += 1;
            first.get_or_insert_with(|| {
                format!(
                    "{:?} vs {:?}: library {lib}, bfs {oracle:?}",
                    ball.vertices[i], ball.vertices[j]
                )
            });
        }
    }
    (bad, first)
}

pub fn small_int_matrix(
    rng: &mut impl Rng,
    rows: usize,
    cols: usize,
    bound: i64,
) -> RationalMatrix {
    let data = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| rational_from_i64(rng.gen_range(-bound..=bound)))
                .collect()
        })
        .collect();
    RationalMatrix::from_rows(data).unwrap()
}

/// A random `(x, W1, W2, m)` where `W2` is often a `p^j`-perturbation of `W1`
/// relative to `x`, so both outcomes of the comparison occur.
pub struct ReductionCase {
    pub x: LatticeClass,
    pub w1: Subspace,
    pub w2: Subspace,
    pub m: u64,
}

pub fn reduction_case(rng: &mut impl Rng) -> ReductionCase {
    let primes = [2u64, 3, 5];
    let ctx = ValuationContext::new(primes[rng.gen_range(0..primes.len())]).unwrap();
    let n = rng.gen_range(2..=4);
    let d = rng.gen_range(1..n);
    let xb = random_invertible(rng, n);
    let x = LatticeClass::new(&Lattice::new(xb.clone(), &ctx).unwrap()).unwrap();
    loop {
        let r = small_int_matrix(rng, n, d, 4);
        if r.rank() < d {
            continue;
        }
        let j = rng.gen_range(0..=5);
        let s = small_int_matrix(rng, n, d, 4).scale(&ctx.pow(j));
        let r2 = if rng.gen_bool(0.15) {
            small_int_matrix(rng, n, d, 4)
        } else {
            r.clone()
        };
        let perturbed = RationalMatrix::from_rows(
            r2.to_rows()
                .into_iter()
                .zip(s.to_rows())
                .map(|(a, b)| a.into_iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        )
        .unwrap();
        if perturbed.rank() < d {
            continue;
        }
        return ReductionCase {
            x,
            w1: Subspace::new(&xb * &r).unwrap(),
            w2: Subspace::new(&xb * &perturbed).unwrap(),
            m: rng.gen_range(0..=4),
        };
    }
}

/// `(reduction_segment_equal, all first m+1 half-geodesic vertices equal)`.
pub fn reduction_sides(case: &ReductionCase) -> (bool, bool) {
    let lhs = reduction_segment_equal(&case.x, &case.w1, &case.w2, case.m).unwrap();
    let rhs = (0..=case.m).all(|k| {
        half_geodesic_vertex(&case.x, &case.w1, k).unwrap()
            == half_geodesic_vertex(&case.x, &case.w2, k).unwrap()
    });
    (lhs, rhs)
}

/// Same subspaces and lattices, different bases of `A`, `B`, `C`, `D`.
pub fn rebased_finite(q: &CycleQuadruple, rng: &mut impl Rng) -> CycleQuadruple {
    let mut re =
        |s: &Subspace| Subspace::new(s.basis() * &random_invertible(rng, s.dim())).unwrap();
    let (a, b, c, d) = (re(&q.a), re(&q.b), re(&q.c), re(&q.d));
    CycleQuadruple::with_lattices(a, b, c, d, q.l_a.clone(), q.l_b.clone(), &q.ctx).unwrap()
}

/// Same metric classes on new bases, rescaled metrics and a rescaled ambient metric.
pub fn rebased_arch(q: &ArchQuadruple, rng: &mut impl Rng) -> ArchQuadruple {
    let mut move_metric = |h: &MetricClass, scale: f64| {
        let r = random_complex_invertible(rng, h.subspace.dim());
        let sub = ComplexSubspace::new(h.subspace.basis() * &r).unwrap();
        MetricClass::new(sub, hermitize(&(r.adjoint() * &h.gram * &r)) * real(scale)).unwrap()
    };
    let h_a = move_metric(&q.h_a, 3.0);
    let h_b = move_metric(&q.h_b, 0.25);
    let mut re = |s: &ComplexSubspace| {
        ComplexSubspace::new(s.basis() * random_complex_invertible(rng, s.dim())).unwrap()
    };
    let (c, d) = (re(&q.c), re(&q.d));
    ArchQuadruple::with_metrics(
        h_a.subspace.clone(),
        h_b.subspace.clone(),
        c,
        d,
        h_a,
        h_b,
        &q.h0 * real(7.0),
    )
    .unwrap()
}
