//! Seeded randomized verification suites.
//!
//! - `oracle`: Faà di Bruno derivatives against direct series composition.
//! - `genfun`: the Bell generating function against `exp(u · (g − g₀))`.
//! - `props`: structural properties of solution sets and Bell polynomials.
//!
//! Every suite is deterministic for a given seed.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bell::{self, SparsePoly};
use crate::error::{Error, Result};
use crate::fdb::FaaDiBruno;
use crate::multiindex::{self, MultiIndex};
use crate::partition;
use crate::rational::{self, Rational};
use crate::series::TaylorSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Oracle,
    Genfun,
    Props,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Suite::Oracle),
            "genfun" => Ok(Suite::Genfun),
            "props" => Ok(Suite::Props),
            other => Err(Error::InvalidArgument(format!("unknown suite {other:?}"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Oracle => "oracle",
            Suite::Genfun => "genfun",
            Suite::Props => "props",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub checks: usize,
    pub failures: usize,
    pub failed: Vec<Failure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failed: Vec<Failure>,
}

impl Tally {
    fn check(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed.push(Failure {
                check: name.to_string(),
                detail: detail(),
            });
        }
    }

    fn error(&mut self, name: &str, e: Error) {
        self.check(name, false, || e.to_string());
    }
}

pub fn run_suite(suite: Suite, seed: u64, trials: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::default();
    match suite {
        Suite::Oracle => oracle_suite(&mut rng, trials, &mut tally),
        Suite::Genfun => genfun_suite(&mut rng, trials, &mut tally),
        Suite::Props => props_suite(&mut rng, trials, &mut tally),
    }
    SuiteReport {
        suite: suite.to_string(),
        seed,
        trials,
        checks: tally.checks,
        failures: tally.failed.len(),
        failed: tally.failed,
    }
}

/// A small nonzero-denominator rational `p/q` with `|p| ≤ 6`, `1 ≤ q ≤ 5`.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    rational::ratio(rng.gen_range(-6..=6), rng.gen_range(1..=5))
}

pub fn random_vector<R: Rng>(rng: &mut R, d: usize) -> Vec<Rational> {
    (0..d).map(|_| random_rational(rng)).collect()
}

/// A series with every coefficient drawn independently (about one in five
/// left at zero).
pub fn random_series<R: Rng>(
    rng: &mut R,
    d_out: usize,
    order: u32,
    center: Vec<Rational>,
) -> TaylorSeries {
    let d_in = center.len();
    let mut s = TaylorSeries::zero(d_out, order, center);
    for n in multiindex::enumerate_up_to(d_in, order) {
        if rng.gen_ratio(1, 5) {
            continue;
        }
        let v = random_vector(rng, d_out);
        s.set(n, v).expect("index within order");
    }
    s
}

/// `(f, g)` with `g: F^{d1} → F^{d2}` and `f: F^{d2} → F^{d3}` expanded at `g(center)`.
pub fn random_pair<R: Rng>(
    rng: &mut R,
    d1: usize,
    d2: usize,
    d3: usize,
    order: u32,
) -> (TaylorSeries, TaylorSeries) {
    let center = random_vector(rng, d1);
    let g = random_series(rng, d2, order, center);
    let f = random_series(rng, d3, order, g.value());
    (f, g)
}

fn oracle_suite<R: Rng>(rng: &mut R, trials: usize, tally: &mut Tally) {
    let engine = FaaDiBruno::new();
    for trial in 0..trials {
        let (d1, d2, d3) = (
            rng.gen_range(1..=3),
            rng.gen_range(1..=3),
            rng.gen_range(1..=2),
        );
        let order = rng.gen_range(1..=4);
        let (f, g) = random_pair(rng, d1, d2, d3, order);
        let name = format!("oracle[{trial}] d=({d1},{d2},{d3}) order={order}");
        let (tensor, composed) = match (engine.all(&f, &g, order), f.compose_oracle(&g)) {
            (Ok(t), Ok(c)) => (t, c),
            (Err(e), _) | (_, Err(e)) => {
                tally.error(&name, e);
                continue;
            }
        };
        for (n, v) in &tensor.values {
            let expected = composed.derivative_at(n).expect("index within order");
            tally.check(&name, *v == expected, || {
                format!(
                    "n=[{n}]: fdb {} vs oracle {}",
                    fmt_vec(v),
                    fmt_vec(&expected)
                )
            });
        }
    }
}

fn genfun_suite<R: Rng>(rng: &mut R, trials: usize, tally: &mut Tally) {
    let engine = FaaDiBruno::new();
    for trial in 0..trials {
        let (d1, d2) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let center = random_vector(rng, d1);
        let g = random_series(rng, d2, 4, center);
        let u = random_vector(rng, d2);
        let name = format!("genfun[{trial}] d=({d1},{d2})");
        match engine.check_generating_identity(&g, &u, 4) {
            Ok(report) => tally.check(&name, report.passed(), || {
                serde_json::to_string(&report).expect("report serialises")
            }),
            Err(e) => tally.error(&name, e),
        }
    }
}

fn props_suite<R: Rng>(rng: &mut R, trials: usize, tally: &mut Tally) {
    for d1 in 1..=2 {
        for d2 in 1..=2 {
            for n in multiindex::enumerate_up_to(d1, 4) {
                solution_set_props(&n, d2, tally);
            }
            for n in multiindex::enumerate_up_to(d1, 3) {
                decomposition_prop(&n, d2, tally);
            }
        }
    }
    for d1 in 1..=3 {
        for d2 in 1..=3 {
            zero_index_prop(d1, d2, tally);
        }
    }
    for _ in 0..trials.max(1) {
        scaling_prop(rng, tally);
    }
    for d1 in 1..=2 {
        for d2 in 1..=2 {
            for n in 0..=4 {
                for k in 0..=n {
                    for alpha in 1..=d1 {
                        for beta in 1..=d2 {
                            let name =
                                format!("single-axis n={n} k={k} a={alpha} b={beta} d=({d1},{d2})");
                            match bell::reduce_single_axis(n, k, alpha, beta, d1, d2) {
                                Ok((mv, one_d)) => {
                                    tally.check(&name, mv == one_d, || format!("{mv} vs {one_d}"))
                                }
                                Err(e) => tally.error(&name, e),
                            }
                        }
                    }
                }
            }
        }
    }
}

fn solution_set_props(n: &MultiIndex, d2: usize, tally: &mut Tally) {
    let n_abs = n.abs();
    for k in multiindex::enumerate_up_to(d2, n_abs + 2) {
        let sols = partition::solve_partial(n, &k);
        let name = format!("K[n={n}, k={k}]");
        if k.abs() > n_abs {
            tally.check(&format!("empty {name}"), sols.is_empty(), || {
                format!("{} assignments", sols.len())
            });
            continue;
        }
        let bound = n_abs - k.abs() + 1;
        for a in &sols {
            tally.check(
                &format!("conditions {name}"),
                a.weight() == *n && a.part_count() == k,
                || format!("{a:?}"),
            );
            tally.check(
                &format!("support bound {name}"),
                a.support().keys().all(|j| j.abs() <= bound),
                || format!("{a:?} exceeds |j| <= {bound}"),
            );
        }
        match bell::bell_partial_mv(n, &k, d2) {
            Ok(p) => tally.check(&format!("integral {name}"), p.is_integral(), || {
                p.to_string()
            }),
            Err(e) => tally.error(&name, e),
        }
    }
    for a in partition::solve_complete(n, d2) {
        tally.check(
            &format!("complete bound K[n={n}]"),
            a.weight() == *n && a.support().keys().all(|j| j.abs() <= n_abs),
            || format!("{a:?}"),
        );
    }
}

fn decomposition_prop(n: &MultiIndex, d2: usize, tally: &mut Tally) {
    let name = format!("complete = sum of partials n={n} d2={d2}");
    let run = || -> Result<(SparsePoly, SparsePoly)> {
        let complete = bell::bell_complete_mv(n, d2)?;
        let mut sum = SparsePoly::zero(n.dim(), d2);
        for k in multiindex::enumerate_up_to(d2, n.abs()) {
            sum.add_assign(&bell::bell_partial_mv(n, &k, d2)?);
        }
        Ok((complete, sum))
    };
    match run() {
        Ok((c, s)) => tally.check(&name, c == s, || format!("{c} vs {s}")),
        Err(e) => tally.error(&name, e),
    }
}

fn zero_index_prop(d1: usize, d2: usize, tally: &mut Tally) {
    let one = SparsePoly::one(d1, d2);
    let n = MultiIndex::zeros(d1);
    let k = MultiIndex::zeros(d2);
    let name = format!("B_0 = B_00 = 1 d=({d1},{d2})");
    match (
        bell::bell_complete_mv(&n, d2),
        bell::bell_partial_mv(&n, &k, d2),
    ) {
        (Ok(c), Ok(p)) => tally.check(&name, c == one && p == one, || format!("{c}, {p}")),
        (Err(e), _) | (_, Err(e)) => tally.error(&name, e),
    }
}

/// One random instance of `B_{n,k}(aʲ b x_j) = aⁿ b^{|k|} B_{n,k}(x_j)`.
fn scaling_prop<R: Rng>(rng: &mut R, tally: &mut Tally) {
    let (d1, d2) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
    let n_abs = rng.gen_range(0..=4);
    let n = pick(rng, &multiindex::with_modulus(d1, n_abs));
    let k_abs = rng.gen_range(0..=n_abs);
    let k = pick(rng, &multiindex::with_modulus(d2, k_abs));
    let a = random_vector(rng, d1);
    let b = random_rational(rng);
    let name = format!("scaling n={n} k={k}");
    let run = || -> Result<(SparsePoly, SparsePoly)> {
        let lhs = bell::scale_vars(&n, &k, d2, &a, &b)?;
        let factor = multiindex::pow(&a, &n)? * num_traits::pow(b.clone(), k.abs() as usize);
        let rhs = bell::bell_partial_mv(&n, &k, d2)?.scale(&factor);
        Ok((lhs, rhs))
    };
    match run() {
        Ok((l, r)) => tally.check(&name, l == r, || format!("{l} vs {r}")),
        Err(e) => tally.error(&name, e),
    }
}

fn pick<R: Rng>(rng: &mut R, options: &[MultiIndex]) -> MultiIndex {
    options[rng.gen_range(0..options.len())].clone()
}

fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(rational::format).collect();
    format!("[{}]", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_and_are_deterministic() {
        for suite in [Suite::Oracle, Suite::Genfun, Suite::Props] {
            let a = run_suite(suite, 7, 3);
            assert!(a.passed(), "{suite}: {:?}", a.failed);
            assert!(a.checks > 0);
            let b = run_suite(suite, 7, 3);
            assert_eq!(
                serde_json::to_string(&a).unwrap(),
                serde_json::to_string(&b).unwrap()
            );
        }
    }

    #[test]
    fn suite_names_parse() {
        assert_eq!("props".parse::<Suite>().unwrap(), Suite::Props);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn random_pair_is_composable() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (f, g) = random_pair(&mut rng, 2, 3, 1, 3);
        assert_eq!(f.center(), g.value().as_slice());
        assert!(f.compose_oracle(&g).is_ok());
    }
}
