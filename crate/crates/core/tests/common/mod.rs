#![allow(dead_code)]

use std::collections::BTreeMap;

use mvbell::{MultiIndex, Rational, SolutionAssignment, TaylorSeries};
use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn mi(v: &[u32]) -> MultiIndex {
    MultiIndex::new(v.to_vec())
}

pub fn q(p: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(d))
}

pub fn fact(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * i)
}

/// Every vector in `0..=bounds[i]` componentwise, odometer order.
pub fn boxed(bounds: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=b).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Exhaustive search over assignments `j ↦ k_j` with keys `0 < j ≤ n` and
/// values `|k_j| ≤ |n|`, keeping those of weight `n` (and part count `k`).
pub fn brute_assignments(n: &[u32], k: Option<&[u32]>, d2: usize) -> Vec<SolutionAssignment> {
    let total: u32 = n.iter().sum();
    let keys: Vec<Vec<u32>> = boxed(n)
        .into_iter()
        .filter(|j| j.iter().any(|&x| x > 0))
        .collect();
    let values: Vec<Vec<u32>> = boxed(&vec![total; d2])
        .into_iter()
        .filter(|v| v.iter().sum::<u32>() <= total)
        .collect();
    let mut found = Vec::new();
    let mut chosen: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
    walk(n, k, d2, &keys, &values, 0, &mut chosen, &mut found);
    found.sort();
    found
}

#[allow(clippy::too_many_arguments)]
fn walk(
    n: &[u32],
    k: Option<&[u32]>,
    d2: usize,
    keys: &[Vec<u32>],
    values: &[Vec<u32>],
    at: usize,
    chosen: &mut Vec<(Vec<u32>, Vec<u32>)>,
    found: &mut Vec<SolutionAssignment>,
) {
    let mut weight = vec![0u32; n.len()];
    let mut parts = vec![0u32; d2];
    for (j, v) in chosen.iter() {
        let s: u32 = v.iter().sum();
        for (w, x) in weight.iter_mut().zip(j) {
            *w += x * s;
        }
        for (p, x) in parts.iter_mut().zip(v) {
            *p += x;
        }
    }
    if weight.iter().zip(n).any(|(w, x)| w > x) {
        return;
    }
    if at == keys.len() {
        if weight == n && k.is_none_or(|k| parts == k) {
            found.push(SolutionAssignment::from_pairs(
                n.len(),
                d2,
                chosen
                    .iter()
                    .map(|(j, v)| (MultiIndex::new(j.clone()), MultiIndex::new(v.clone()))),
            ));
        }
        return;
    }
    for v in values {
        chosen.push((keys[at].clone(), v.clone()));
        walk(n, k, d2, keys, values, at + 1, chosen, found);
        chosen.pop();
    }
}

/// Set partitions of `{0..n}` as restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(s: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if s.len() == n {
            out.push(s.clone());
            return;
        }
        let next = s.iter().max().map_or(0, |m| m + 1);
        for b in 0..=next {
            s.push(b);
            grow(s, n, out);
            s.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), n, &mut out);
    out
}

pub fn block_count(rgs: &[usize]) -> usize {
    rgs.iter().max().map_or(0, |m| m + 1)
}

/// All `(k_1, …, k_n)` with `Σ j·k_j = n`.
pub fn weighted_tuples(n: u32) -> Vec<Vec<u32>> {
    fn go(j: u32, rest: u32, n: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if j > n {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for kj in 0..=rest / j {
            cur.push(kj);
            go(j + 1, rest - kj * j, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, n, &mut Vec::new(), &mut out);
    out
}

/// `dⁿ f(g(x))` from the classical tuple sum
/// `Σ n!/(Π k_j! (j!)^{k_j}) · f^{(Σk)} · Π g_j^{k_j}` with `f[i]`, `g[i]`
/// the i-th derivatives.
pub fn tuple_fdb(f: &[Rational], g: &[Rational], n: u32) -> Rational {
    let mut acc = Rational::zero();
    for t in weighted_tuples(n) {
        let mut denom = BigInt::one();
        let mut prod = Rational::one();
        for (i, &kj) in t.iter().enumerate() {
            let j = i as u32 + 1;
            denom *= fact(kj) * num_traits::pow(fact(j), kj as usize);
            for _ in 0..kj {
                prod *= &g[j as usize];
            }
        }
        let kk: u32 = t.iter().sum();
        acc += Rational::new(fact(n), denom) * &f[kk as usize] * prod;
    }
    acc
}

type Plain = BTreeMap<Vec<u32>, Rational>;

fn plain_mul(a: &Plain, b: &Plain, order: u32) -> Plain {
    let mut out = Plain::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if e.iter().sum::<u32>() <= order {
                *out.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn mi_fact(e: &[u32]) -> BigInt {
    e.iter().fold(BigInt::one(), |a, &x| a * fact(x))
}

/// Composition by plain power series in `(x − c)`, with monomial
/// coefficients `f_n / n!`. Returns derivatives of `f∘g` for `|n| ≤ order`.
pub fn plain_compose(f: &TaylorSeries, g: &TaylorSeries) -> BTreeMap<Vec<u32>, Vec<Rational>> {
    let order = f.order().min(g.order());
    let d1 = g.d_in();
    // h_i = g_i − g_i(c) as plain series
    let h: Vec<Plain> = (0..g.d_out())
        .map(|i| {
            g.coeffs()
                .iter()
                .filter(|(n, _)| !n.is_zero() && n.abs() <= order)
                .map(|(n, v)| {
                    let c = &v[i] / Rational::from(mi_fact(n.entries()));
                    (n.entries().to_vec(), c)
                })
                .filter(|(_, c)| !c.is_zero())
                .collect()
        })
        .collect();
    let one: Plain = [(vec![0; d1], Rational::one())].into_iter().collect();
    let mut out: BTreeMap<Vec<u32>, Vec<Rational>> = BTreeMap::new();
    for (k, fk) in f.coeffs() {
        let mut term = one.clone();
        for (i, &e) in k.entries().iter().enumerate() {
            for _ in 0..e {
                term = plain_mul(&term, &h[i], order);
            }
        }
        let inv = Rational::new(BigInt::one(), mi_fact(k.entries()));
        for (e, c) in term {
            let scale = &c * &inv * Rational::from(mi_fact(&e));
            let slot = out
                .entry(e)
                .or_insert_with(|| vec![Rational::zero(); f.d_out()]);
            for (s, a) in slot.iter_mut().zip(fk) {
                *s += a * &scale;
            }
        }
    }
    out
}

/// Derivative at `n` from a [`plain_compose`] result, zero when absent.
pub fn plain_at(
    table: &BTreeMap<Vec<u32>, Vec<Rational>>,
    n: &MultiIndex,
    d: usize,
) -> Vec<Rational> {
    table
        .get(n.entries())
        .cloned()
        .unwrap_or_else(|| vec![Rational::zero(); d])
}
