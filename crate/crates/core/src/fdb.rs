//! The multivariate Faà di Bruno formula
//!
//! ```text
//! ∂ⁿ f(g(x)) = Σ_{|k| ≤ |n|} f⁽ᵏ⁾(g(x)) · B_{n,k}(g⁽ʲ⁾(x) ; j)
//! ```
//!
//! evaluated at the center of `g`, where `k` ranges over every multi-index
//! in `N^{d₂}` with `|k| ≤ |n|`. The outer series `f` must already be
//! expanded at `g(center)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::bell::{self, SparsePoly, VarId};
use crate::error::{Error, Result};
use crate::multiindex::{self, MultiIndex};
use crate::rational::{self, Rational};
use crate::series::TaylorSeries;

/// All derivatives `∂ⁿ f(g)` with `|n| ≤ order`, zeros included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivTensor {
    pub d_in: usize,
    pub d_out: usize,
    pub order: u32,
    #[serde(serialize_with = "serialize_values")]
    pub values: BTreeMap<MultiIndex, Vec<Rational>>,
}

fn serialize_values<S: serde::Serializer>(
    values: &BTreeMap<MultiIndex, Vec<Rational>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry<'a> {
        n: &'a MultiIndex,
        v: Vec<String>,
    }
    s.collect_seq(values.iter().map(|(n, v)| Entry {
        n,
        v: v.iter().map(rational::format).collect(),
    }))
}

impl DerivTensor {
    pub fn get(&self, n: &MultiIndex) -> Option<&Vec<Rational>> {
        self.values.get(n)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// One [`format_entry`] line per multi-index, in graded order.
    pub fn to_text(&self) -> String {
        self.values
            .iter()
            .map(|(n, v)| format_entry(n, v) + "\n")
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tensor serialises")
    }
}

/// `[2,1]: [3/2, -1]`
pub fn format_entry(n: &MultiIndex, v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(rational::format).collect();
    format!("[{n}]: [{}]", parts.join(", "))
}

/// `{"n":[2,1],"v":["3/2","-1"]}`
pub fn entry_json(n: &MultiIndex, v: &[Rational]) -> String {
    serde_json::json!({
        "n": n,
        "v": v.iter().map(rational::format).collect::<Vec<_>>(),
    })
    .to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub n: MultiIndex,
    #[serde(with = "rational::serde_one")]
    pub lhs: Rational,
    #[serde(with = "rational::serde_one")]
    pub rhs: Rational,
}

/// Per-coefficient comparison of the two sides of the generating function
/// identity. An empty `mismatches` list means every coefficient agreed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratingReport {
    pub max_abs_n: u32,
    pub mismatches: Vec<Mismatch>,
}

impl GeneratingReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

type BellKey = (MultiIndex, MultiIndex);

/// Faà di Bruno evaluator with an optional cache of partial Bell
/// polynomials keyed by `(n, k)`. Results do not depend on the cache.
pub struct FaaDiBruno {
    cache: Option<Mutex<HashMap<BellKey, Arc<SparsePoly>>>>,
}

impl Default for FaaDiBruno {
    fn default() -> Self {
        FaaDiBruno::new()
    }
}

impl FaaDiBruno {
    pub fn new() -> Self {
        FaaDiBruno {
            cache: Some(Mutex::new(HashMap::new())),
        }
    }

    pub fn uncached() -> Self {
        FaaDiBruno { cache: None }
    }

    pub fn cached_polynomials(&self) -> usize {
        self.cache
            .as_ref()
            .map_or(0, |c| c.lock().expect("bell cache poisoned").len())
    }

    /// `B_{n,k}` with `d₂ = k.dim()`, from the cache when possible.
    pub fn partial(&self, n: &MultiIndex, k: &MultiIndex) -> Result<Arc<SparsePoly>> {
        let Some(cache) = &self.cache else {
            return Ok(Arc::new(bell::bell_partial_mv(n, k, k.dim())?));
        };
        let key = (n.clone(), k.clone());
        if let Some(p) = cache.lock().expect("bell cache poisoned").get(&key) {
            return Ok(Arc::clone(p));
        }
        // built outside the lock; a racing duplicate is identical
        let p = Arc::new(bell::bell_partial_mv(n, k, k.dim())?);
        Ok(Arc::clone(
            cache
                .lock()
                .expect("bell cache poisoned")
                .entry(key)
                .or_insert(p),
        ))
    }

    /// `∂ⁿ f(g)` at the center of `g`, a vector in `F^{d₃}`.
    pub fn derivative(
        &self,
        f: &TaylorSeries,
        g: &TaylorSeries,
        n: &MultiIndex,
    ) -> Result<Vec<Rational>> {
        check_pair(f, g)?;
        check_index(f, g, n)?;
        self.derivative_unchecked(f, g, n)
    }

    fn derivative_unchecked(
        &self,
        f: &TaylorSeries,
        g: &TaylorSeries,
        n: &MultiIndex,
    ) -> Result<Vec<Rational>> {
        let mut acc = vec![Rational::zero(); f.d_out()];
        for k in multiindex::enumerate_up_to(g.d_out(), n.abs()) {
            let Some(fk) = f.coeffs().get(&k) else {
                continue;
            };
            let b = self.partial(n, &k)?;
            if b.is_zero() {
                continue;
            }
            let value = b.eval_with(|v| Some(inner_coefficient(g, v)))?;
            for (a, c) in acc.iter_mut().zip(fk) {
                *a += c * &value;
            }
        }
        Ok(acc)
    }

    /// Every derivative with `|n| ≤ order`. Distinct `n` run in parallel.
    pub fn all(&self, f: &TaylorSeries, g: &TaylorSeries, order: u32) -> Result<DerivTensor> {
        check_pair(f, g)?;
        check_order(f, g, order)?;
        let indices = multiindex::enumerate_up_to(g.d_in(), order);
        let values = indices
            .par_iter()
            .map(|n| Ok((n.clone(), self.derivative_unchecked(f, g, n)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(DerivTensor {
            d_in: g.d_in(),
            d_out: f.d_out(),
            order,
            values,
        })
    }

    /// Compares `Σ_n Σ_k B_{n,k}(g_j ; j) uᵏ xⁿ/n!` against
    /// `exp(u · (g(x) − g₀))` coefficient by coefficient up to `|n| ≤ order`.
    pub fn check_generating_identity(
        &self,
        g: &TaylorSeries,
        u: &[Rational],
        order: u32,
    ) -> Result<GeneratingReport> {
        if u.len() != g.d_out() {
            return Err(Error::DimensionMismatch {
                expected: g.d_out(),
                found: u.len(),
            });
        }
        if order > g.order() {
            return Err(Error::Truncation {
                requested: order,
                order: g.order(),
            });
        }
        let g = g.truncate(order);
        let g0 = TaylorSeries::constant(g.value(), order, g.center().to_vec());
        let rhs = g.sub(&g0)?.dot(u)?.exp_series()?;

        let mut mismatches = Vec::new();
        for n in multiindex::enumerate_up_to(g.d_in(), order) {
            let mut lhs = Rational::zero();
            for k in multiindex::enumerate_up_to(g.d_out(), n.abs()) {
                let b = self.partial(&n, &k)?;
                if b.is_zero() {
                    continue;
                }
                let value = b.eval_with(|v| Some(inner_coefficient(&g, v)))?;
                lhs += value * multiindex::pow(u, &k)?;
            }
            let rhs_n = rhs.derivative_at(&n)?.swap_remove(0);
            if lhs != rhs_n {
                mismatches.push(Mismatch { n, lhs, rhs: rhs_n });
            }
        }
        Ok(GeneratingReport {
            max_abs_n: order,
            mismatches,
        })
    }
}

/// `x_{j,c} ↦` component `c` of `g⁽ʲ⁾(center)`.
fn inner_coefficient(g: &TaylorSeries, v: &VarId) -> Rational {
    g.coeffs()
        .get(&v.j)
        .map_or_else(Rational::zero, |c| c[v.comp - 1].clone())
}

fn check_pair(f: &TaylorSeries, g: &TaylorSeries) -> Result<()> {
    if f.d_in() != g.d_out() {
        return Err(Error::Contract(format!(
            "f.d_in ({}) must equal g.d_out ({})",
            f.d_in(),
            g.d_out()
        )));
    }
    if f.center() != g.value().as_slice() {
        return Err(Error::Contract(
            "f must be expanded at g(center), i.e. f.center = g.coeffs[0]".into(),
        ));
    }
    Ok(())
}

fn check_order(f: &TaylorSeries, g: &TaylorSeries, requested: u32) -> Result<()> {
    let order = f.order().min(g.order());
    if requested > order {
        return Err(Error::Truncation { requested, order });
    }
    Ok(())
}

fn check_index(f: &TaylorSeries, g: &TaylorSeries, n: &MultiIndex) -> Result<()> {
    if n.dim() != g.d_in() {
        return Err(Error::Contract(format!(
            "n has dimension {} but g.d_in = {}",
            n.dim(),
            g.d_in()
        )));
    }
    check_order(f, g, n.abs())
}

pub fn fdb_derivative(f: &TaylorSeries, g: &TaylorSeries, n: &MultiIndex) -> Result<Vec<Rational>> {
    FaaDiBruno::new().derivative(f, g, n)
}

pub fn fdb_all(f: &TaylorSeries, g: &TaylorSeries, order: u32) -> Result<DerivTensor> {
    FaaDiBruno::new().all(f, g, order)
}

pub fn check_generating_identity(
    g: &TaylorSeries,
    u: &[Rational],
    order: u32,
) -> Result<GeneratingReport> {
    FaaDiBruno::new().check_generating_identity(g, u, order)
}

/// Scalar path `dⁿ/dxⁿ f(g(x)) = Σ_k f⁽ᵏ⁾ B_{n,k}(g', g'', …)` using the
/// classical 1-D Bell polynomials.
pub fn fdb_1d(f: &TaylorSeries, g: &TaylorSeries, n: u32) -> Result<Rational> {
    if [f.d_in(), f.d_out(), g.d_in(), g.d_out()] != [1; 4] {
        return Err(Error::Contract(
            "fdb_1d needs scalar f and g of one variable".into(),
        ));
    }
    check_pair(f, g)?;
    check_order(f, g, n)?;
    let mut acc = Rational::zero();
    for k in 0..=n {
        let fk = f.derivative_at(&MultiIndex::new(vec![k]))?.swap_remove(0);
        if fk.is_zero() {
            continue;
        }
        let b = bell::bell_partial_1d(n, k);
        acc += fk * b.eval_with(|v| Some(inner_coefficient(g, v)))?;
    }
    Ok(acc)
}
