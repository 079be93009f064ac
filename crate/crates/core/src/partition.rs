//! Solution sets `K_n` and `K_{n,k}`.
//!
//! An element of either set is a finite-support function `j ↦ k_j` from
//! nonzero multi-indices of dimension `d₁` to multi-indices of dimension
//! `d₂`. `K_n` collects every such function with weight `Σ j·|k_j| = n`;
//! `K_{n,k}` additionally requires the part count `Σ k_j = k`.
//!
//! Enumeration is a depth-first search over candidate keys `j` in graded
//! order. A key can only carry a nonzero value if `j ≤ n` componentwise and
//! `|j| ≤ |n| − |k| + 1` (or `|j| ≤ |n|` without a part constraint), which
//! keeps the search finite.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::multiindex::{self, MultiIndex};

/// A finite-support assignment `j ↦ k_j`. Only nonzero values are stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SolutionAssignment {
    d1: usize,
    d2: usize,
    support: BTreeMap<MultiIndex, MultiIndex>,
}

impl SolutionAssignment {
    pub fn empty(d1: usize, d2: usize) -> Self {
        SolutionAssignment {
            d1,
            d2,
            support: BTreeMap::new(),
        }
    }

    /// Builds an assignment from `(j, k_j)` pairs, dropping zero values.
    ///
    /// Panics if a key is zero or a dimension is inconsistent.
    pub fn from_pairs(
        d1: usize,
        d2: usize,
        pairs: impl IntoIterator<Item = (MultiIndex, MultiIndex)>,
    ) -> Self {
        let mut a = SolutionAssignment::empty(d1, d2);
        for (j, kj) in pairs {
            a.insert(j, kj);
        }
        a
    }

    fn insert(&mut self, j: MultiIndex, kj: MultiIndex) {
        assert_eq!(j.dim(), self.d1, "key dimension");
        assert_eq!(kj.dim(), self.d2, "value dimension");
        assert!(!j.is_zero(), "zero key");
        if !kj.is_zero() {
            self.support.insert(j, kj);
        }
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn support(&self) -> &BTreeMap<MultiIndex, MultiIndex> {
        &self.support
    }

    /// `k_j`, zero outside the support.
    pub fn value(&self, j: &MultiIndex) -> MultiIndex {
        self.support
            .get(j)
            .cloned()
            .unwrap_or_else(|| MultiIndex::zeros(self.d2))
    }

    /// `Σ j·|k_j|`.
    pub fn weight(&self) -> MultiIndex {
        let mut acc = vec![0u32; self.d1];
        for (j, kj) in &self.support {
            let m = kj.abs();
            for (a, e) in acc.iter_mut().zip(j.entries()) {
                *a += e * m;
            }
        }
        MultiIndex::new(acc)
    }

    /// `Σ k_j`.
    pub fn part_count(&self) -> MultiIndex {
        let mut acc = vec![0u32; self.d2];
        for kj in self.support.values() {
            for (a, e) in acc.iter_mut().zip(kj.entries()) {
                *a += e;
            }
        }
        MultiIndex::new(acc)
    }
}

/// Shorter supports first, then pairwise in graded order.
impl Ord for SolutionAssignment {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.d1, self.d2)
            .cmp(&(other.d1, other.d2))
            .then_with(|| self.support.len().cmp(&other.support.len()))
            .then_with(|| self.support.iter().cmp(other.support.iter()))
    }
}

impl PartialOrd for SolutionAssignment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Serialises as `[[j...],[k_j...]]` pairs sorted by `j`.
impl Serialize for SolutionAssignment {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.support.len()))?;
        for pair in &self.support {
            seq.serialize_element(&pair)?;
        }
        seq.end()
    }
}

impl fmt::Debug for SolutionAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (j, kj)) in self.support.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{j:?}->{kj:?}")?;
        }
        f.write_str("}")
    }
}

/// Parameters of a solution set: `K_{n,k}` when `k` is present, else `K_n`
/// with value dimension `d2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSetSpec {
    pub n: MultiIndex,
    pub k: Option<MultiIndex>,
    pub d2: usize,
}

impl SolutionSetSpec {
    pub fn partial(n: MultiIndex, k: MultiIndex) -> Self {
        let d2 = k.dim();
        SolutionSetSpec { n, k: Some(k), d2 }
    }

    pub fn complete(n: MultiIndex, d2: usize) -> Self {
        SolutionSetSpec { n, k: None, d2 }
    }

    pub fn solve(&self) -> Vec<SolutionAssignment> {
        match &self.k {
            Some(k) => solve_partial(&self.n, k),
            None => solve_complete(&self.n, self.d2),
        }
    }
}

/// `K_{n,k}` in canonical order.
pub fn solve_partial(n: &MultiIndex, k: &MultiIndex) -> Vec<SolutionAssignment> {
    let (n_abs, k_abs) = (n.abs(), k.abs());
    if k_abs > n_abs {
        return Vec::new();
    }
    search(n, Some(k), k.dim(), n_abs - k_abs + 1)
}

/// `K_n` with values in dimension `d2`, in canonical order.
pub fn solve_complete(n: &MultiIndex, d2: usize) -> Vec<SolutionAssignment> {
    search(n, None, d2, n.abs())
}

fn search(
    n: &MultiIndex,
    k: Option<&MultiIndex>,
    d2: usize,
    max_key_abs: u32,
) -> Vec<SolutionAssignment> {
    let keys: Vec<MultiIndex> = multiindex::enumerate_graded(n.dim(), max_key_abs.min(n.abs()))
        .into_iter()
        .filter(|j| j.entries().iter().zip(n.entries()).all(|(a, b)| a <= b))
        .collect();
    let mut state = Search {
        keys: &keys,
        d1: n.dim(),
        d2,
        chosen: Vec::new(),
        out: Vec::new(),
    };
    state.descend(0, n.entries().to_vec(), k.map(|k| k.entries().to_vec()));
    let mut out = state.out;
    out.sort();
    out
}

struct Search<'a> {
    keys: &'a [MultiIndex],
    d1: usize,
    d2: usize,
    chosen: Vec<(MultiIndex, MultiIndex)>,
    out: Vec<SolutionAssignment>,
}

impl Search<'_> {
    fn descend(&mut self, idx: usize, rem_n: Vec<u32>, rem_k: Option<Vec<u32>>) {
        let n_left: u32 = rem_n.iter().sum();
        if n_left == 0 {
            if rem_k.as_ref().is_none_or(|k| k.iter().all(|&e| e == 0)) {
                self.out.push(SolutionAssignment::from_pairs(
                    self.d1,
                    self.d2,
                    self.chosen.iter().cloned(),
                ));
            }
            return;
        }
        if let Some(k) = &rem_k {
            let k_left: u32 = k.iter().sum();
            // every remaining part consumes at least one unit of weight
            if k_left > n_left || k_left == 0 {
                return;
            }
        }
        let Some(j) = self.keys.get(idx) else {
            return;
        };

        // k_j = 0
        self.descend(idx + 1, rem_n.clone(), rem_k.clone());

        let max_mult = j
            .entries()
            .iter()
            .zip(&rem_n)
            .filter(|(e, _)| **e > 0)
            .map(|(e, r)| r / e)
            .min()
            .unwrap_or(0);
        for m in 1..=max_mult {
            let next_n: Vec<u32> = rem_n
                .iter()
                .zip(j.entries())
                .map(|(r, e)| r - e * m)
                .collect();
            for kj in multiindex::with_modulus(self.d2, m) {
                let next_k = match &rem_k {
                    Some(k) => {
                        if kj.entries().iter().zip(k).any(|(a, b)| a > b) {
                            continue;
                        }
                        Some(k.iter().zip(kj.entries()).map(|(b, a)| b - a).collect())
                    }
                    None => None,
                };
                self.chosen.push((j.clone(), kj));
                self.descend(idx + 1, next_n.clone(), next_k);
                self.chosen.pop();
            }
        }
    }
}
