//! Bell polynomials as canonical sparse polynomials.
//!
//! Variables are component-resolved: `x_{j,c}` is component `c` (1-based,
//! `1 ≤ c ≤ d₂`) of the vector variable `x_j`, with `j` a nonzero
//! multi-index of dimension `d₁`. Coefficients are exact rationals and
//! zero coefficients are never stored, so two equal polynomials have the
//! same representation.
//!
//! The multivariate polynomials are built term by term from the solution
//! sets in [`crate::partition`]. The 1-D polynomials are built from the
//! classical recurrences instead, which gives an independent route for
//! cross-checking the two.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiindex::{self, MultiIndex};
use crate::partition::{self, SolutionAssignment};
use crate::rational::{self, Rational};

/// The variable `x_{j,comp}`; `comp` is 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId {
    pub j: MultiIndex,
    pub comp: usize,
}

impl VarId {
    pub fn new(j: MultiIndex, comp: usize) -> Self {
        VarId { j, comp }
    }

    /// The 1-D variable `x_j`.
    pub fn scalar(j: u32) -> Self {
        VarId {
            j: MultiIndex::new(vec![j]),
            comp: 1,
        }
    }

    fn fmt_with(&self, d2: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{}]", self.j)?;
        if d2 > 1 {
            write!(f, "_{}", self.comp)?;
        }
        Ok(())
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{}]_{}", self.j, self.comp)
    }
}

/// Product of variables with positive exponents.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Monomial(BTreeMap<VarId, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(v: VarId, exp: u32) -> Self {
        let mut m = Monomial::one();
        m.mul_var(v, exp);
        m
    }

    pub fn mul_var(&mut self, v: VarId, exp: u32) {
        if exp > 0 {
            *self.0.entry(v).or_insert(0) += exp;
        }
    }

    pub fn exponents(&self) -> &BTreeMap<VarId, u32> {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn exponent(&self, v: &VarId) -> u32 {
        self.0.get(v).copied().unwrap_or(0)
    }
}

/// Total degree first, then the sorted factor lists lexicographically.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().cmp(other.0.iter()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    d1: usize,
    d2: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl SparsePoly {
    pub fn zero(d1: usize, d2: usize) -> Self {
        SparsePoly {
            d1,
            d2,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(d1: usize, d2: usize, c: Rational) -> Self {
        let mut p = SparsePoly::zero(d1, d2);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one(d1: usize, d2: usize) -> Self {
        SparsePoly::constant(d1, d2, Rational::one())
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms
            .keys()
            .flat_map(|m| m.0.keys().cloned())
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    fn check_var(&self, v: &VarId) {
        assert!(
            v.j.dim() == self.d1 && !v.j.is_zero() && (1..=self.d2).contains(&v.comp),
            "variable {v:?} outside d1={}, d2={}",
            self.d1,
            self.d2
        );
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        for v in m.0.keys() {
            self.check_var(v);
        }
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &SparsePoly) {
        assert_eq!((self.d1, self.d2), (other.d1, other.d2));
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &Rational) -> SparsePoly {
        let mut out = SparsePoly::zero(self.d1, self.d2);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        out
    }

    /// Multiplies every term by `c·x_v^exp`.
    pub fn mul_monomial(&self, v: &VarId, exp: u32, c: &Rational) -> SparsePoly {
        self.check_var(v);
        let mut out = SparsePoly::zero(self.d1, self.d2);
        for (m, a) in &self.terms {
            let mut m = m.clone();
            m.mul_var(v.clone(), exp);
            out.add_term(m, a * c);
        }
        out
    }

    /// Substitutes `x_v ↦ factor(v)·x_v` for every variable.
    pub fn scale_variables(&self, factor: impl Fn(&VarId) -> Rational) -> SparsePoly {
        let mut out = SparsePoly::zero(self.d1, self.d2);
        for (m, c) in &self.terms {
            let s = m.0.iter().fold(c.clone(), |acc, (v, &e)| {
                acc * num_traits::pow(factor(v), e as usize)
            });
            out.add_term(m.clone(), s);
        }
        out
    }

    /// Renames variables into a polynomial over dimensions `(d1, d2)`.
    pub fn rename(&self, d1: usize, d2: usize, f: impl Fn(&VarId) -> VarId) -> SparsePoly {
        let mut out = SparsePoly::zero(d1, d2);
        for (m, c) in &self.terms {
            let mut renamed = Monomial::one();
            for (v, &e) in &m.0 {
                renamed.mul_var(f(v), e);
            }
            out.add_term(renamed, c.clone());
        }
        out
    }

    pub fn eval(&self, assign: &BTreeMap<VarId, Rational>) -> Result<Rational> {
        self.eval_with(|v| assign.get(v).cloned())
    }

    pub fn eval_with(&self, value: impl Fn(&VarId) -> Option<Rational>) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in &m.0 {
                let x = value(v).ok_or_else(|| Error::MissingVariable(format!("{v:?}")))?;
                t *= num_traits::pow(x, e as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Renders a 1-D polynomial the way classical tables print it:
    /// `4x1x3 + 3x2^2`, factors in increasing index order.
    pub fn to_table_notation(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            push_sign(&mut out, c, i == 0);
            let mag = c.abs();
            let mut body = String::new();
            for (v, &e) in &m.0 {
                body.push_str(&format!("x{}", v.j));
                if e > 1 {
                    body.push_str(&format!("^{e}"));
                }
            }
            if body.is_empty() {
                out.push_str(&rational::format(&mag));
            } else {
                if !mag.is_one() {
                    out.push_str(&rational::format(&mag));
                }
                out.push_str(&body);
            }
        }
        out
    }

    pub fn from_json(s: &str, d1: usize, d2: usize) -> Result<SparsePoly> {
        let raw: Vec<TermDto> = serde_json::from_str(s)?;
        let mut p = SparsePoly::zero(d1, d2);
        for t in raw {
            let mut m = Monomial::one();
            for (j, comp, exp) in t.monomial {
                let v = VarId::new(j, comp);
                if v.j.dim() != d1 || v.j.is_zero() || !(1..=d2).contains(&comp) {
                    return Err(Error::Parse(format!(
                        "variable {v:?} outside d1={d1}, d2={d2}"
                    )));
                }
                m.mul_var(v, exp);
            }
            p.add_term(m, t.coeff);
        }
        Ok(p)
    }
}

fn push_sign(out: &mut String, c: &Rational, first: bool) {
    match (first, c.is_negative()) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
}

/// `4*x[3]*x[1] + 3*x[2]^2`: terms by increasing degree, factors with the
/// lexicographically largest index first. Components are suffixed
/// (`x[1,0]_2`) when `d₂ > 1`.
impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut sign = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            sign.clear();
            push_sign(&mut sign, c, i == 0);
            f.write_str(&sign)?;
            let mag = c.abs();
            if m.0.is_empty() {
                write!(f, "{}", rational::format(&mag))?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{}*", rational::format(&mag))?;
            }
            let mut factors: Vec<(&VarId, u32)> = m.0.iter().map(|(v, &e)| (v, e)).collect();
            factors.sort_by(|(a, _), (b, _)| {
                b.j.entries()
                    .cmp(a.j.entries())
                    .then_with(|| a.comp.cmp(&b.comp))
            });
            for (k, (v, e)) in factors.into_iter().enumerate() {
                if k > 0 {
                    f.write_str("*")?;
                }
                v.fmt_with(self.d2, f)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly[d1={}, d2={}]({self})", self.d1, self.d2)
    }
}

#[derive(Serialize, Deserialize)]
struct TermDto {
    #[serde(with = "rational::serde_one")]
    coeff: Rational,
    monomial: Vec<(MultiIndex, usize, u32)>,
}

/// A list of `{"coeff": "p/q", "monomial": [[[j...], comp, exp], ...]}`.
impl Serialize for SparsePoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(m, c)| TermDto {
            coeff: c.clone(),
            monomial: m.0.iter().map(|(v, &e)| (v.j.clone(), v.comp, e)).collect(),
        }))
    }
}

/// Coefficient `n! / Π_j (k_j! · (j!)^{|k_j|})` of the term indexed by `a`.
pub fn term_coefficient(n: &MultiIndex, a: &SolutionAssignment) -> Rational {
    let mut denom = BigInt::one();
    for (j, kj) in a.support() {
        let jf = BigInt::from(j.factorial());
        denom *= BigInt::from(kj.factorial()) * num_traits::pow(jf, kj.abs() as usize);
    }
    Rational::new(BigInt::from(n.factorial()), denom)
}

/// `Π_j x_j^{k_j}`, componentwise.
pub fn term_monomial(a: &SolutionAssignment) -> Monomial {
    let mut m = Monomial::one();
    for (j, kj) in a.support() {
        for (i, &e) in kj.entries().iter().enumerate() {
            m.mul_var(VarId::new(j.clone(), i + 1), e);
        }
    }
    m
}

fn from_assignments(
    n: &MultiIndex,
    d2: usize,
    assignments: &[SolutionAssignment],
) -> Result<SparsePoly> {
    let mut p = SparsePoly::zero(n.dim(), d2);
    for a in assignments {
        let c = term_coefficient(n, a);
        if !c.is_integer() {
            return Err(Error::NonIntegralCoefficient {
                n: n.clone(),
                k: a.part_count(),
                assignment: format!("{a:?}"),
                coeff: rational::format(&c),
            });
        }
        p.add_term(term_monomial(a), c);
    }
    Ok(p)
}

/// Partial multivariate Bell polynomial `B_{n,k}` with `k ∈ N^{d2}`.
pub fn bell_partial_mv(n: &MultiIndex, k: &MultiIndex, d2: usize) -> Result<SparsePoly> {
    if k.dim() != d2 {
        return Err(Error::DimensionMismatch {
            expected: d2,
            found: k.dim(),
        });
    }
    from_assignments(n, d2, &partition::solve_partial(n, k))
}

/// Complete multivariate Bell polynomial `B_n` over variables in `F^{d2}`.
pub fn bell_complete_mv(n: &MultiIndex, d2: usize) -> Result<SparsePoly> {
    from_assignments(n, d2, &partition::solve_complete(n, d2))
}

/// Every variable `x_{j,c}` with `0 < j ≤ n` and `1 ≤ c ≤ d2`.
pub fn variable_universe(n: &MultiIndex, d2: usize) -> Vec<VarId> {
    n.lower_set()
        .into_iter()
        .filter(|j| !j.is_zero())
        .flat_map(|j| (1..=d2).map(move |c| VarId::new(j.clone(), c)))
        .collect()
}

/// Classical partial Bell polynomial `B_{n,k}(x_1, …)` via
/// `B_{n,k} = Σ_i C(n−1, i−1) x_i B_{n−i,k−1}`.
pub fn bell_partial_1d(n: u32, k: u32) -> SparsePoly {
    partial_1d_table(n)
        .swap_remove(n as usize)
        .swap_remove(k.min(n + 1) as usize)
}

/// `table[m][q] = B_{m,q}` for `m ≤ n`, `q ≤ n + 1`.
fn partial_1d_table(n: u32) -> Vec<Vec<SparsePoly>> {
    let n = n as usize;
    let mut table = vec![vec![SparsePoly::zero(1, 1); n + 2]; n + 1];
    table[0][0] = SparsePoly::one(1, 1);
    for m in 1..=n {
        for q in 1..=m {
            let mut acc = SparsePoly::zero(1, 1);
            for i in 1..=(m - q + 1) {
                let c = rational::from_biguint(rational::binomial(m as u32 - 1, i as u32 - 1));
                acc.add_assign(&table[m - i][q - 1].mul_monomial(&VarId::scalar(i as u32), 1, &c));
            }
            table[m][q] = acc;
        }
    }
    table
}

/// Classical complete Bell polynomial via `B_{m+1} = Σ_i C(m, i) x_{i+1} B_{m−i}`.
pub fn bell_complete_1d(n: u32) -> SparsePoly {
    let mut seq = vec![SparsePoly::one(1, 1)];
    for m in 0..n {
        let mut next = SparsePoly::zero(1, 1);
        for i in 0..=m {
            let c = rational::from_biguint(rational::binomial(m, i));
            next.add_assign(&seq[(m - i) as usize].mul_monomial(&VarId::scalar(i + 1), 1, &c));
        }
        seq.push(next);
    }
    seq.swap_remove(n as usize)
}

/// `B_{n,k}(aʲ·b·x_j ; j)`, built by substituting `x_{j,i} ↦ aʲ·b·x_{j,i}`.
pub fn scale_vars(
    n: &MultiIndex,
    k: &MultiIndex,
    d2: usize,
    a: &[Rational],
    b: &Rational,
) -> Result<SparsePoly> {
    if a.len() != n.dim() {
        return Err(Error::DimensionMismatch {
            expected: n.dim(),
            found: a.len(),
        });
    }
    let base = bell_partial_mv(n, k, d2)?;
    Ok(base.scale_variables(|v| {
        multiindex::pow(a, &v.j).expect("variable dimension checked on insert") * b
    }))
}

/// The pair `(B_{n·e_α, k·e_β}, B_{n,k})` where the 1-D polynomial has each
/// `x_j` renamed to `x_{j·e_α, β}`. Axes are 1-based.
pub fn reduce_single_axis(
    n: u32,
    k: u32,
    alpha: usize,
    beta: usize,
    d1: usize,
    d2: usize,
) -> Result<(SparsePoly, SparsePoly)> {
    if !(1..=d1).contains(&alpha) || !(1..=d2).contains(&beta) {
        return Err(Error::InvalidArgument(format!(
            "axes alpha={alpha}, beta={beta} outside d1={d1}, d2={d2}"
        )));
    }
    let e_alpha = MultiIndex::unit(d1, alpha - 1);
    let e_beta = MultiIndex::unit(d2, beta - 1);
    let mv = bell_partial_mv(&e_alpha.scaled(n), &e_beta.scaled(k), d2)?;
    let one_d =
        bell_partial_1d(n, k).rename(d1, d2, |v| VarId::new(e_alpha.scaled(v.j.get(0)), beta));
    Ok((mv, one_d))
}

/// The 1-D Bell table: row `n` lists `B_{n,1}, …, B_{n,n}` separated by
/// ` + `, each column padded to a common width.
pub fn bell_table(max_n: u32) -> String {
    let rows: Vec<Vec<String>> = (1..=max_n)
        .map(|n| {
            (1..=n)
                .map(|k| bell_partial_1d(n, k).to_table_notation())
                .collect()
        })
        .collect();
    let mut widths = vec![0usize; max_n as usize];
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in &rows {
        let last = row.len() - 1;
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            out.push_str(cell);
            if i < last {
                let pad = widths[i] - cell.chars().count();
                out.extend(std::iter::repeat_n(' ', pad));
            }
        }
        out.push('\n');
    }
    out
}
