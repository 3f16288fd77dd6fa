//! Randomized verification of both places on generated instances.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arch;
use crate::arith::ValuationContext;
use crate::generate::{arch_case, nonarch_case};
use crate::nonarch;
use crate::run::ARCH_TOLERANCE;

const PRIMES: [u64; 4] = [2, 3, 5, 13];
const MAX_REPORTED: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestSummary {
    pub seed: u64,
    pub count: usize,
    pub sizes: Vec<usize>,
    pub suites: Vec<SuiteSummary>,
}

impl SelftestSummary {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.failed == 0)
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let width = self
            .suites
            .iter()
            .map(|s| s.name.chars().count())
            .max()
            .unwrap_or(5)
            .max(5);
        let _ = writeln!(out, "{:<width$}  {:>6}  {:>6}", "suite", "passed", "failed");
        for s in &self.suites {
            let pad = width - s.name.chars().count();
            let _ = writeln!(
                out,
                "{}{}  {:>6}  {:>6}",
                s.name,
                " ".repeat(pad),
                s.passed,
                s.failed
            );
            for f in &s.failures {
                let _ = writeln!(out, "    {f}");
            }
        }
        let verdict = if self.all_passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{verdict}");
        out
    }
}

#[derive(Default)]
struct Tally {
    names: Vec<&'static str>,
    rows: Vec<(usize, usize, Vec<String>)>,
}

impl Tally {
    fn row(&mut self, name: &'static str) -> &mut (usize, usize, Vec<String>) {
        let idx = match self.names.iter().position(|&n| n == name) {
            Some(i) => i,
            None => {
                self.names.push(name);
                self.rows.push((0, 0, Vec::new()));
                self.names.len() - 1
            }
        };
        &mut self.rows[idx]
    }

    fn record(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        let row = self.row(name);
        if ok {
            row.0 += 1;
        } else {
            row.1 += 1;
            if row.2.len() < MAX_REPORTED {
                row.2.push(detail());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        for (name, (passed, failed, failures)) in other.names.into_iter().zip(other.rows) {
            let row = self.row(name);
            row.0 += passed;
            row.1 += failed;
            let room = MAX_REPORTED.saturating_sub(row.2.len());
            row.2.extend(failures.into_iter().take(room));
        }
    }
}

fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn check_instance(seed: u64, index: usize, n: usize, tally: &mut Tally) {
    let mut rng = instance_rng(seed, index);
    let p = 1 + index % (n / 2);
    let prime = PRIMES[index % PRIMES.len()];
    let ctx = ValuationContext::new(prime).expect("prime");
    let tag = format!("#{index} n={n} p={p}");

    let case = nonarch_case(&mut rng, n, p, &ctx);
    let alg = nonarch::intersection_algebraic(&case.quad);
    let geo = nonarch::intersection_geometric(&case.quad);
    let agree = matches!((&alg, &geo), (Ok(a), Ok(g)) if *a == g.value && *a == case.expected());
    tally.record("finite: geometric = algebraic", agree, || {
        format!(
            "{tag} prime={prime}: algebraic {alg:?}, geometric {:?}",
            geo.as_ref().map(|g| g.value)
        )
    });
    let gates_ok =
        matches!(&geo, Ok(g) if g.gates.as_ref().map_or(true, |x| x.constructive_agrees));
    tally.record(
        "finite: searched gates = constructed gates",
        gates_ok,
        || format!("{tag} prime={prime}"),
    );
    let swapped = [case.quad.swap_ab(), case.quad.swap_cd()].iter().all(|q| {
        matches!((nonarch::intersection_geometric(q), &alg), (Ok(g), Ok(a)) if g.value == -a)
            && matches!((nonarch::intersection_algebraic(q), &alg), (Ok(x), Ok(a)) if x == -a)
    });
    tally.record("finite: swaps negate", swapped, || {
        format!("{tag} prime={prime}")
    });

    let case = arch_case(&mut rng, n, p);
    let expected = case.expected();
    let closed = arch::intersection_closed_form(&case.quad);
    let geo = arch::intersection_geometric(&case.quad);
    let close = |r: &crate::Result<f64>, target: f64| matches!(r, Ok(v) if (v - target).abs() <= ARCH_TOLERANCE);
    let geo_value = geo.as_ref().map(|g| g.value).map_err(Clone::clone);
    tally.record(
        "archimedean: geometric = closed form",
        close(&closed, expected) && close(&geo_value, expected),
        || format!("{tag}: expected {expected}, closed form {closed:?}, geometric {geo_value:?}"),
    );
    if p == 1 {
        let lev = arch::levine_pairing_p1(&case.quad, &case.quad.h0);
        tally.record(
            "archimedean: Green function = closed form",
            close(&lev, expected),
            || format!("{tag}: expected {expected}, Green function {lev:?}"),
        );
    }
    let swapped = [case.quad.swap_ab(), case.quad.swap_cd()].iter().all(|q| {
        close(&arch::intersection_closed_form(q), -expected)
            && close(&arch::intersection_geometric(q).map(|g| g.value), -expected)
    });
    tally.record("archimedean: swaps negate", swapped, || tag.clone());
}

/// Runs `count` generated instances per place, cycling through `sizes`.
/// Instances are spread across threads and merged in index order, so the summary
/// depends only on the arguments.
pub fn selftest(seed: u64, count: usize, sizes: &[usize]) -> SelftestSummary {
    let sizes: Vec<usize> = sizes.iter().copied().filter(|&n| n >= 2).collect();
    let mut tally = Tally::default();
    if count > 0 && !sizes.is_empty() {
        let workers = std::thread::available_parallelism()
            .map_or(1, |n| n.get())
            .min(count);
        let parts: Vec<Tally> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let sizes = &sizes;
                    scope.spawn(move || {
                        let mut t = Tally::default();
                        let lo = w * count / workers;
                        let hi = (w + 1) * count / workers;
                        for i in lo..hi {
                            check_instance(seed, i, sizes[i % sizes.len()], &mut t);
                        }
                        t
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        });
        for part in parts {
            tally.merge(part);
        }
    }
    let mut suites: Vec<SuiteSummary> = tally
        .names
        .iter()
        .zip(tally.rows)
        .map(|(name, (passed, failed, failures))| SuiteSummary {
            name: name.to_string(),
            passed,
            failed,
            failures,
        })
        .collect();
    suites.sort_by(|a, b| a.name.cmp(&b.name));
    SelftestSummary {
        seed,
        count,
        sizes,
        suites,
    }
}
