//! Truncated multivariate Taylor series with exact rational coefficients.
//!
//! A series `f: F^{d_in} → F^{d_out}` of order `N` expanded at `c` stores
//! the derivatives `f⁽ⁿ⁾(c)` for `|n| ≤ N`, i.e. `f(x) = Σ f_n (x−c)ⁿ/n!`.
//! Products therefore use the Leibniz convolution `Σ C(n,m) a_m b_{n−m}`
//! rather than plain coefficient convolution.
//!
//! [`TaylorSeries::compose_oracle`] computes `f∘g` by substituting the
//! series `g − g(c)` into `f` with nothing but ring operations. It does not
//! touch Bell polynomials and serves as the reference for [`crate::fdb`].

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaylorSeries {
    d_in: usize,
    d_out: usize,
    order: u32,
    center: Vec<Rational>,
    coeffs: BTreeMap<MultiIndex, Vec<Rational>>,
}

impl TaylorSeries {
    pub fn zero(d_out: usize, order: u32, center: Vec<Rational>) -> Self {
        TaylorSeries {
            d_in: center.len(),
            d_out,
            order,
            center,
            coeffs: BTreeMap::new(),
        }
    }

    /// The constant series with value `value`.
    pub fn constant(value: Vec<Rational>, order: u32, center: Vec<Rational>) -> Self {
        let mut s = TaylorSeries::zero(value.len(), order, center);
        let zero = MultiIndex::zeros(s.d_in);
        s.set(zero, value).expect("zero index fits any order");
        s
    }

    /// The identity map `x ↦ x` expanded at `center`.
    pub fn identity(order: u32, center: Vec<Rational>) -> Self {
        let d = center.len();
        let mut s = TaylorSeries::constant(center.clone(), order, center);
        if order >= 1 {
            for i in 0..d {
                let mut v = vec![Rational::zero(); d];
                v[i] = Rational::one();
                s.set(MultiIndex::unit(d, i), v).expect("order >= 1");
            }
        }
        s
    }

    /// The scalar coordinate function `x ↦ x_axis` (zero-based axis).
    pub fn coordinate(axis: usize, order: u32, center: Vec<Rational>) -> Result<Self> {
        let d = center.len();
        if axis >= d {
            return Err(Error::InvalidArgument(format!(
                "axis {axis} outside d_in={d}"
            )));
        }
        let mut s = TaylorSeries::constant(vec![center[axis].clone()], order, center);
        if order >= 1 {
            s.set(MultiIndex::unit(d, axis), vec![Rational::one()])?;
        }
        Ok(s)
    }

    pub fn from_coeffs(
        d_out: usize,
        order: u32,
        center: Vec<Rational>,
        coeffs: impl IntoIterator<Item = (MultiIndex, Vec<Rational>)>,
    ) -> Result<Self> {
        let mut s = TaylorSeries::zero(d_out, order, center);
        for (n, v) in coeffs {
            s.set(n, v)?;
        }
        Ok(s)
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn center(&self) -> &[Rational] {
        &self.center
    }

    /// Nonzero coefficients in graded order.
    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, Vec<Rational>> {
        &self.coeffs
    }

    /// Replaces the coefficient at `n`.
    pub fn set(&mut self, n: MultiIndex, v: Vec<Rational>) -> Result<()> {
        if n.dim() != self.d_in {
            return Err(Error::DimensionMismatch {
                expected: self.d_in,
                found: n.dim(),
            });
        }
        if v.len() != self.d_out {
            return Err(Error::DimensionMismatch {
                expected: self.d_out,
                found: v.len(),
            });
        }
        if n.abs() > self.order {
            return Err(Error::Truncation {
                requested: n.abs(),
                order: self.order,
            });
        }
        if v.iter().all(Zero::is_zero) {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, v);
        }
        Ok(())
    }

    fn accumulate(&mut self, n: &MultiIndex, v: impl Iterator<Item = Rational>) {
        let d_out = self.d_out;
        let slot = self
            .coeffs
            .entry(n.clone())
            .or_insert_with(|| vec![Rational::zero(); d_out]);
        for (a, b) in slot.iter_mut().zip(v) {
            *a += b;
        }
        if slot.iter().all(Zero::is_zero) {
            self.coeffs.remove(n);
        }
    }

    /// `∂ⁿ` at the center; the zero vector when not stored.
    pub fn derivative_at(&self, n: &MultiIndex) -> Result<Vec<Rational>> {
        if n.dim() != self.d_in {
            return Err(Error::DimensionMismatch {
                expected: self.d_in,
                found: n.dim(),
            });
        }
        if n.abs() > self.order {
            return Err(Error::Truncation {
                requested: n.abs(),
                order: self.order,
            });
        }
        Ok(self
            .coeffs
            .get(n)
            .cloned()
            .unwrap_or_else(|| vec![Rational::zero(); self.d_out]))
    }

    /// The value at the center, `f(c)`.
    pub fn value(&self) -> Vec<Rational> {
        self.derivative_at(&MultiIndex::zeros(self.d_in))
            .expect("zero index always in range")
    }

    /// Drops every coefficient above `order`.
    pub fn truncate(&self, order: u32) -> TaylorSeries {
        let order = order.min(self.order);
        TaylorSeries {
            order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(n, _)| n.abs() <= order)
                .map(|(n, v)| (n.clone(), v.clone()))
                .collect(),
            ..self.clone_empty()
        }
    }

    fn clone_empty(&self) -> TaylorSeries {
        TaylorSeries::zero(self.d_out, self.order, self.center.clone())
    }

    /// Component `i` (zero-based) as a scalar series.
    pub fn component(&self, i: usize) -> Result<TaylorSeries> {
        if i >= self.d_out {
            return Err(Error::InvalidArgument(format!(
                "component {i} outside d_out={}",
                self.d_out
            )));
        }
        let mut out = TaylorSeries::zero(1, self.order, self.center.clone());
        for (n, v) in &self.coeffs {
            out.accumulate(n, std::iter::once(v[i].clone()));
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &TaylorSeries) -> Result<()> {
        if self.d_in != other.d_in {
            return Err(Error::DimensionMismatch {
                expected: self.d_in,
                found: other.d_in,
            });
        }
        if self.center != other.center {
            return Err(Error::CenterMismatch(format!(
                "{} vs {}",
                fmt_vec(&self.center),
                fmt_vec(&other.center)
            )));
        }
        if self.order != other.order {
            return Err(Error::InvalidArgument(format!(
                "truncation orders differ: {} vs {}",
                self.order, other.order
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &TaylorSeries) -> Result<TaylorSeries> {
        self.check_compatible(other)?;
        if self.d_out != other.d_out {
            return Err(Error::DimensionMismatch {
                expected: self.d_out,
                found: other.d_out,
            });
        }
        let mut out = self.clone();
        for (n, v) in &other.coeffs {
            out.accumulate(n, v.iter().cloned());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TaylorSeries) -> Result<TaylorSeries> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> TaylorSeries {
        let mut out = self.clone_empty();
        if c.is_zero() {
            return out;
        }
        out.coeffs = self
            .coeffs
            .iter()
            .map(|(n, v)| (n.clone(), v.iter().map(|a| a * c).collect()))
            .collect();
        out
    }

    /// Truncated product. Equal output dimensions multiply componentwise; a
    /// scalar series (`d_out = 1`) broadcasts against the other factor.
    pub fn mul(&self, other: &TaylorSeries) -> Result<TaylorSeries> {
        self.check_compatible(other)?;
        let d_out = match (self.d_out, other.d_out) {
            (a, b) if a == b => a,
            (1, b) => b,
            (a, 1) => a,
            (a, b) => {
                return Err(Error::DimensionMismatch {
                    expected: a,
                    found: b,
                })
            }
        };
        let mut out = TaylorSeries::zero(d_out, self.order, self.center.clone());
        let pick = |v: &[Rational], i: usize| -> Rational {
            if v.len() == 1 {
                v[0].clone()
            } else {
                v[i].clone()
            }
        };
        for (m, a) in &self.coeffs {
            for (p, b) in &other.coeffs {
                if m.abs() + p.abs() > self.order {
                    continue;
                }
                let n = m.add(p)?;
                let c = rational::from_biguint(n.binomial(m)?);
                out.accumulate(&n, (0..d_out).map(|i| &c * pick(a, i) * pick(b, i)));
            }
        }
        Ok(out)
    }

    /// Componentwise product `u * s` of a constant vector with every coefficient.
    pub fn cw_mul(&self, u: &[Rational]) -> Result<TaylorSeries> {
        self.check_out_dim(u)?;
        let mut out = self.clone_empty();
        for (n, v) in &self.coeffs {
            out.accumulate(n, v.iter().zip(u).map(|(a, b)| a * b));
        }
        Ok(out)
    }

    /// Scalar series `u · s`.
    pub fn dot(&self, u: &[Rational]) -> Result<TaylorSeries> {
        self.check_out_dim(u)?;
        let mut out = TaylorSeries::zero(1, self.order, self.center.clone());
        for (n, v) in &self.coeffs {
            let s: Rational = v.iter().zip(u).map(|(a, b)| a * b).sum();
            out.accumulate(n, std::iter::once(s));
        }
        Ok(out)
    }

    fn check_out_dim(&self, u: &[Rational]) -> Result<()> {
        if u.len() != self.d_out {
            return Err(Error::DimensionMismatch {
                expected: self.d_out,
                found: u.len(),
            });
        }
        Ok(())
    }

    /// `Σ_{m ≤ order} sᵐ/m!` for a scalar series with zero constant term.
    pub fn exp_series(&self) -> Result<TaylorSeries> {
        if self.d_out != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: self.d_out,
            });
        }
        if !self.value()[0].is_zero() {
            return Err(Error::InvalidArgument(
                "exp_series needs a zero constant term".into(),
            ));
        }
        let one = TaylorSeries::constant(vec![Rational::one()], self.order, self.center.clone());
        let mut acc = one.clone();
        let mut power = one;
        for m in 1..=self.order {
            power = power.mul(self)?;
            if power.coeffs.is_empty() {
                break;
            }
            let inv = Rational::new(1.into(), rational::factorial(m).into());
            acc = acc.add(&power.scale(&inv))?;
        }
        Ok(acc)
    }

    /// `f∘g` by direct substitution of `g − g(c)` into `f`.
    ///
    /// `self` is `f` and must be expanded at `g(c)`. The result is centered
    /// at `g`'s center and truncated at `min(f.order, g.order)`.
    pub fn compose_oracle(&self, g: &TaylorSeries) -> Result<TaylorSeries> {
        let f = self;
        if f.d_in != g.d_out {
            return Err(Error::DimensionMismatch {
                expected: g.d_out,
                found: f.d_in,
            });
        }
        let g0 = g.value();
        if f.center != g0 {
            return Err(Error::CenterMismatch(format!(
                "f is expanded at {} but g(center) = {}",
                fmt_vec(&f.center),
                fmt_vec(&g0)
            )));
        }
        let order = f.order.min(g.order);
        let g = g.truncate(order);
        let shifted = g.sub(&TaylorSeries::constant(g0, order, g.center.clone()))?;

        // powers[i][e] = (g_i − g_i(c))^e
        let one = TaylorSeries::constant(vec![Rational::one()], order, g.center.clone());
        let mut powers = Vec::with_capacity(f.d_in);
        for i in 0..f.d_in {
            let h = shifted.component(i)?;
            let mut row = vec![one.clone()];
            for e in 1..=order as usize {
                let next = row[e - 1].mul(&h)?;
                row.push(next);
            }
            powers.push(row);
        }

        let mut out = TaylorSeries::zero(f.d_out, order, g.center.clone());
        for (k, fk) in &f.coeffs {
            if k.abs() > order {
                continue;
            }
            let mut term = one.clone();
            for (i, &e) in k.entries().iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[i][e as usize])?;
                }
            }
            let inv = Rational::new(1.into(), k.factorial().into());
            for (n, v) in &term.coeffs {
                let s = &v[0] * &inv;
                out.accumulate(n, fk.iter().map(|a| a * &s));
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SeriesDto::from(self)).expect("series serialises")
    }

    pub fn from_json(s: &str) -> Result<TaylorSeries> {
        let dto: SeriesDto = serde_json::from_str(s)?;
        dto.try_into()
    }
}

fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(rational::format).collect();
    format!("[{}]", parts.join(", "))
}

#[derive(Serialize, Deserialize)]
struct CoeffDto {
    n: MultiIndex,
    #[serde(with = "rational::serde_vec")]
    v: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct SeriesDto {
    d_in: usize,
    d_out: usize,
    order: u32,
    #[serde(with = "rational::serde_vec")]
    center: Vec<Rational>,
    coeffs: Vec<CoeffDto>,
}

impl From<&TaylorSeries> for SeriesDto {
    fn from(s: &TaylorSeries) -> Self {
        SeriesDto {
            d_in: s.d_in,
            d_out: s.d_out,
            order: s.order,
            center: s.center.clone(),
            coeffs: s
                .coeffs
                .iter()
                .map(|(n, v)| CoeffDto {
                    n: n.clone(),
                    v: v.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<SeriesDto> for TaylorSeries {
    type Error = Error;

    fn try_from(dto: SeriesDto) -> Result<Self> {
        if dto.center.len() != dto.d_in {
            return Err(Error::Parse(format!(
                "center has {} entries but d_in = {}",
                dto.center.len(),
                dto.d_in
            )));
        }
        let mut s = TaylorSeries::zero(dto.d_out, dto.order, dto.center);
        for c in dto.coeffs {
            if s.coeffs.contains_key(&c.n) {
                return Err(Error::Parse(format!(
                    "duplicate coefficient for n = [{}]",
                    c.n
                )));
            }
            s.set(c.n, c.v)?;
        }
        Ok(s)
    }
}
