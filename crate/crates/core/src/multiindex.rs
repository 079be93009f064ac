//! Multi-indices: fixed-length vectors of nonnegative integers.
//!
//! A [`MultiIndex`] carries its dimension; every binary operation checks
//! that both operands agree and reports [`Error::DimensionMismatch`]
//! otherwise.
//!
//! Multi-indices are totally ordered by the *graded* order used everywhere
//! in this crate: first by dimension, then by modulus `|m|`, then within a
//! grade lexicographically with larger leading entries first, so that in
//! two dimensions the order starts `(1,0) < (0,1) < (2,0) < (1,1) < (0,2)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    pub fn ones(d: usize) -> Self {
        MultiIndex(vec![1; d])
    }

    /// Unit vector `e_axis` (zero-based axis).
    pub fn unit(d: usize, axis: usize) -> Self {
        let mut v = vec![0; d];
        v[axis] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `|n| = Σ nᵢ`.
    pub fn abs(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `n! = Π nᵢ!`.
    pub fn factorial(&self) -> BigUint {
        self.0
            .iter()
            .fold(BigUint::one(), |acc, &e| acc * rational::factorial(e))
    }

    /// Multi-index binomial `C(n, m) = Π C(nᵢ, mᵢ)`; zero unless `m ≤ n`.
    pub fn binomial(&self, m: &MultiIndex) -> Result<BigUint> {
        self.check_dim(m)?;
        Ok(self
            .0
            .iter()
            .zip(&m.0)
            .fold(BigUint::one(), |acc, (&n, &k)| {
                acc * rational::binomial(n, k)
            }))
    }

    pub fn check_dim(&self, other: &MultiIndex) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        self.check_dim(other)?;
        Ok(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    /// Componentwise difference; fails if any component would go negative.
    pub fn sub_checked(&self, other: &MultiIndex) -> Result<MultiIndex> {
        self.check_dim(other)?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
            .ok_or_else(|| Error::NegativeComponent {
                a: self.clone(),
                b: other.clone(),
            })
    }

    /// Componentwise `≤`.
    pub fn leq(&self, other: &MultiIndex) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a <= b))
    }

    /// Scalar multiple `c·m`.
    pub fn scaled(&self, c: u32) -> MultiIndex {
        MultiIndex(self.0.iter().map(|e| e * c).collect())
    }

    /// All `m ≤ self` componentwise, including zero and `self`, in graded order.
    pub fn lower_set(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zeros(self.dim())];
        for axis in 0..self.dim() {
            out = out
                .into_iter()
                .flat_map(|m| {
                    (0..=self.0[axis]).map(move |e| {
                        let mut v = m.0.clone();
                        v[axis] = e;
                        MultiIndex(v)
                    })
                })
                .collect();
        }
        out.sort();
        out
    }
}

/// `Π xᵢ^{nᵢ}`; the empty product is one.
pub fn pow(x: &[Rational], n: &MultiIndex) -> Result<Rational> {
    if x.len() != n.dim() {
        return Err(Error::DimensionMismatch {
            expected: n.dim(),
            found: x.len(),
        });
    }
    Ok(x.iter()
        .zip(n.entries())
        .fold(Rational::one(), |acc, (xi, &e)| {
            acc * num_traits::pow(xi.clone(), e as usize)
        }))
}

/// All multi-indices of dimension `d` with modulus exactly `m`, in graded order.
pub fn with_modulus(d: usize, m: u32) -> Vec<MultiIndex> {
    fn go(d: usize, m: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == d {
            prefix.push(m);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for first in (0..=m).rev() {
            prefix.push(first);
            go(d, m - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if d == 0 {
        if m == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return out;
    }
    go(d, m, &mut Vec::with_capacity(d), &mut out);
    out
}

/// All `m` with `1 ≤ |m| ≤ max_abs`, in graded order.
pub fn enumerate_graded(d: usize, max_abs: u32) -> Vec<MultiIndex> {
    (1..=max_abs).flat_map(|m| with_modulus(d, m)).collect()
}

/// All `m` with `|m| ≤ max_abs`, zero first.
pub fn enumerate_up_to(d: usize, max_abs: u32) -> Vec<MultiIndex> {
    (0..=max_abs).flat_map(|m| with_modulus(d, m)).collect()
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim()
            .cmp(&other.dim())
            .then_with(|| self.abs().cmp(&other.abs()))
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        MultiIndex(v.to_vec())
    }
}

impl std::str::FromStr for MultiIndex {
    type Err = Error;

    /// Parses comma-separated nonnegative integers, e.g. `"2,1,0"`.
    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("invalid multi-index {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(MultiIndex)
    }
}

/// Comma-joined entries, e.g. `2,1,0`.
impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}
