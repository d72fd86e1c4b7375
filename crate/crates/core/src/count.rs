//! Exact counts of labeled cyclically reduced graphs by combinatorial type,
//! of silhouette graphs, of rooted graphs and of subgroups by isomorphism type.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use parking_lot::RwLock;
use thiserror::Error;

use crate::graph::{CombType, IsoType};

pub type Count = BigUint;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("inexact division by {den} while evaluating {context}")]
    Inexact { den: u64, context: String },
    #[error("{0} is not a positive multiple of 6")]
    NotMultipleOfSix(u32),
}

/// Whether to count all subgroups or only the cyclically reduced ones.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IsoMode {
    #[default]
    All,
    CyclicallyReduced,
}

/// How a rooted graph of a given isomorphism type arises from a
/// cyclically reduced graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Root anywhere in a cyclically reduced graph.
    Rooted,
    /// Root where a b-loop was deleted.
    MissingB,
    /// Root where an a-loop was deleted.
    MissingA,
}

/// One family contributing to a count by isomorphism type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyTerm {
    pub family: Family,
    /// Type of the cyclically reduced graph the rooted graphs come from.
    pub source: CombType,
    /// Number of labeled rooted graphs in this family.
    pub labeled: Count,
}

fn exact_div(num: Count, den: u64, context: impl FnOnce() -> String) -> Result<Count, CountError> {
    let (q, r) = num.div_rem(&Count::from(den));
    if r.is_zero() {
        Ok(q)
    } else {
        Err(CountError::Inexact { den, context: context() })
    }
}

pub fn factorial(n: u32) -> Count {
    (1..=n as u64).fold(Count::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> Count {
    if k > n {
        return Count::zero();
    }
    let k = k.min(n - k);
    let mut acc = Count::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Fixpoint-free involutions of [n]: (n−1)!!, or `None` for odd n.
pub fn t2(n: u32) -> Option<Count> {
    n.is_multiple_of(2).then(|| (1..n as u64).step_by(2).fold(Count::one(), |acc, k| acc * k))
}

/// Fixpoint-free permutations of order 3 of [n], or `None` unless 3 | n.
pub fn t3(n: u32) -> Option<Count> {
    n.is_multiple_of(3).then(|| {
        let n = n as u64;
        (0..n / 3).fold(Count::one(), |acc, j| acc * (n - 3 * j - 1) * (n - 3 * j - 2))
    })
}

/// Pairs (σ₂, σ₃) of fixpoint-free permutations of orders 2 and 3.
pub fn gtilde(n: u32) -> Result<Count, CountError> {
    if n == 0 || !n.is_multiple_of(6) {
        return Err(CountError::NotMultipleOfSix(n));
    }
    Ok(t2(n).unwrap() * t3(n).unwrap())
}

/// Memo tables. Entries are written once and never changed.
#[derive(Debug, Default)]
pub struct CountCache {
    s: RwLock<HashMap<CombType, Count>>,
    silhouettes: RwLock<HashMap<u32, Count>>,
}

static GLOBAL: OnceLock<CountCache> = OnceLock::new();

impl CountCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn global() -> &'static CountCache {
        GLOBAL.get_or_init(CountCache::new)
    }

    pub fn len(&self) -> usize {
        self.s.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// s for a signed tuple; out-of-range tuples count zero.
    pub fn s_signed(&self, t: [i64; 5]) -> Result<Count, CountError> {
        match CombType::from_signed(t) {
            Some(t) => self.s(&t),
            None => Ok(Count::zero()),
        }
    }

    /// Number of labeled cyclically reduced graphs of type `t`.
    pub fn s(&self, t: &CombType) -> Result<Count, CountError> {
        if !t.is_balanced() {
            return Ok(Count::zero());
        }
        if t.n <= 2 {
            return Ok(Count::from(base_value(t)));
        }
        if let Some(v) = self.s.read().get(t) {
            return Ok(v.clone());
        }
        let v = self.s_uncached(t, false)?;
        self.s.write().entry(*t).or_insert(v.clone());
        Ok(v)
    }

    /// Same value, taking the ℓ₂ branch first when both loop kinds are present.
    pub fn s_via_l2_branch(&self, t: &CombType) -> Result<Count, CountError> {
        if !t.is_balanced() || t.n <= 2 {
            return self.s(t);
        }
        self.s_uncached(t, true)
    }

    fn s_uncached(&self, t: &CombType, prefer_l2: bool) -> Result<Count, CountError> {
        let [n, k2, k3, l2, l3] = t.as_array();
        let ctx = || t.to_string();
        if l3 > 0 && !(prefer_l2 && l2 > 0) {
            let sub = self.s_signed([n - 1, k2 - 1, k3, l2 + 1, l3 - 1])?;
            return exact_div(sub * (n * (l2 + 1)) as u64, l3 as u64, ctx);
        }
        if l2 > 0 {
            let (w21, w22) = self.lambda2_weights(t)?;
            return Ok(exact_div(w21, l2 as u64, ctx)? + exact_div(w22, l2 as u64, ctx)?);
        }
        if k3 > 0 {
            let sub = self.s_signed([n - 2, k2 - 1, k3 - 1, l2, l3])?;
            return exact_div(sub * (2 * n * (n - 1) * (k2 - 1 + l2)) as u64, k3 as u64, ctx);
        }
        if 2 * k2 == n && n % 6 == 0 {
            return self.silhouette_count(n as u32);
        }
        Ok(Count::zero())
    }

    /// Weights of the λ₂,₁ and λ₂,₂ branches at a type with ℓ₂ > 0, each
    /// multiplied by ℓ₂ so that both are integers:
    /// (n(k₃+1)·s(τ+λ₂,₁), 2n(n−1)ℓ₂·s(τ+λ₂,₂)).
    pub fn lambda2_weights(&self, t: &CombType) -> Result<(Count, Count), CountError> {
        let [n, k2, k3, l2, l3] = t.as_array();
        let s21 = self.s_signed([n - 1, k2, k3 + 1, l2 - 1, l3])?;
        let s22 = self.s_signed([n - 2, k2 - 1, k3 - 1, l2, l3])?;
        Ok((s21 * (n * (k3 + 1)) as u64, s22 * (2 * n * (n - 1) * l2) as u64))
    }

    /// Labeled silhouette graphs of size n: connected fixpoint-free pairs,
    /// obtained from g̃ by removing pairs whose component through vertex 1
    /// has size 6k < n.
    pub fn silhouette_count(&self, n: u32) -> Result<Count, CountError> {
        if n == 0 || !n.is_multiple_of(6) {
            return Ok(Count::zero());
        }
        if let Some(v) = self.silhouettes.read().get(&n) {
            return Ok(v.clone());
        }
        let mut total = gtilde(n)?;
        for m in (6..n).step_by(6) {
            let part = binomial(n as u64 - 1, m as u64 - 1) * self.silhouette_count(m)? * gtilde(n - m)?;
            total -= part;
        }
        self.silhouettes.write().entry(n).or_insert(total.clone());
        Ok(total)
    }

    /// Rooted labeled graphs of type `t`.
    pub fn l_count(&self, t: &CombType) -> Result<Count, CountError> {
        if t.n == 0 {
            return Ok(Count::zero());
        }
        let [n, k2, k3, l2, l3] = t.as_array();
        Ok(self.s(t)? * n as u64
            + self.s_signed([n, k2, k3, l2 + 1, l3])? * (l2 + 1) as u64
            + self.s_signed([n, k2, k3, l2, l3 + 1])? * (l3 + 1) as u64)
    }

    /// Subgroups of type `t`: L(t)/n!.
    pub fn h_count(&self, t: &CombType) -> Result<Count, CountError> {
        let l = self.l_count(t)?;
        let f = factorial(t.n);
        let (q, r) = l.div_rem(&f);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(CountError::Inexact { den: t.n as u64, context: format!("L{t}/{}!", t.n) })
        }
    }

    /// Families of labeled rooted graphs of size n and isomorphism type σ.
    pub fn iso_families(&self, n: u32, sigma: &IsoType, mode: IsoMode) -> Result<Vec<FamilyTerm>, CountError> {
        let (n, l2, l3, r) = (n as i64, sigma.l2 as i64, sigma.l3 as i64, sigma.r as i64);
        let half = |x: i64| (x >= 0 && x % 2 == 0).then_some(x / 2);
        let mut out = Vec::new();
        let base = n - 3 * l2 - 4 * l3 - 6 * r;
        let mut push = |family, k2: Option<i64>, k3: Option<i64>, l2s: i64, l3s: i64, mult: i64| -> Result<(), CountError> {
            let (Some(k2), Some(k3)) = (k2, k3) else { return Ok(()) };
            let Some(source) = CombType::from_signed([n, k2, k3, l2s, l3s]) else { return Ok(()) };
            let labeled = self.s(&source)? * mult as u64;
            if !labeled.is_zero() {
                out.push(FamilyTerm { family, source, labeled });
            }
            Ok(())
        };
        push(Family::Rooted, half(n - l2), half(base + 6), l2, l3, n)?;
        if mode == IsoMode::All {
            push(Family::MissingB, half(n - l2), half(base + 2), l2, l3 + 1, l3 + 1)?;
            push(Family::MissingA, half(n - 1 - l2), half(base + 3), l2 + 1, l3, l2 + 1)?;
        }
        Ok(out)
    }

    /// Labeled rooted graphs of size n and isomorphism type σ.
    pub fn count_by_iso_labeled(&self, n: u32, sigma: &IsoType, mode: IsoMode) -> Result<Count, CountError> {
        Ok(self.iso_families(n, sigma, mode)?.into_iter().map(|f| f.labeled).sum())
    }

    /// Subgroups of size n and isomorphism type σ.
    pub fn count_by_iso(&self, n: u32, sigma: &IsoType, mode: IsoMode) -> Result<Count, CountError> {
        let l = self.count_by_iso_labeled(n, sigma, mode)?;
        let (q, r) = l.div_rem(&factorial(n));
        if r.is_zero() {
            Ok(q)
        } else {
            Err(CountError::Inexact { den: n as u64, context: format!("iso count {sigma} at size {n}") })
        }
    }
}

fn base_value(t: &CombType) -> u32 {
    match (t.n, t.k2, t.k3, t.l2, t.l3) {
        (1, 0, 0, 1, 1) => 1,
        (2, 1, 1, 0, 0) => 2,
        (2, 0, 1, 2, 0) => 2,
        (2, 1, 0, 0, 2) => 1,
        _ => 0,
    }
}

/// The connectivity recurrence with the binomial factor left out,
/// s(6ν) = g̃(6ν) − Σ_{m<ν} g̃(6m)·s(6(ν−m)). Kept for comparison only.
pub fn silhouette_count_unweighted(n: u32) -> Count {
    fn go(n: u32, memo: &mut HashMap<u32, Count>) -> Count {
        if let Some(v) = memo.get(&n) {
            return v.clone();
        }
        let mut total = gtilde(n).expect("multiple of 6");
        for m in (6..n).step_by(6) {
            total -= gtilde(m).unwrap() * go(n - m, memo);
        }
        memo.insert(n, total.clone());
        total
    }
    if n == 0 || !n.is_multiple_of(6) {
        return Count::zero();
    }
    go(n, &mut HashMap::new())
}

/// Every balanced type of size n.
pub fn balanced_types(n: u32) -> Vec<CombType> {
    let mut out = Vec::new();
    for l2 in (n % 2..=n).step_by(2) {
        let k2 = (n - l2) / 2;
        for k3 in 0..=n / 2 {
            for l3 in 0..=n - 2 * k3 {
                let t = CombType::new(n, k2, k3, l2, l3);
                if t.is_balanced() {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// Every type of size n a rooted graph can have.
pub fn rooted_types(n: u32) -> Vec<CombType> {
    let mut out = Vec::new();
    for k2 in 0..=n / 2 {
        for l2 in 0..=n - 2 * k2 {
            for k3 in 0..=n / 2 {
                for l3 in 0..=n - 2 * k3 {
                    out.push(CombType::new(n, k2, k3, l2, l3));
                }
            }
        }
    }
    out
}

pub fn s_count(t: &CombType) -> Result<Count, CountError> {
    CountCache::global().s(t)
}

pub fn silhouette_count(n: u32) -> Result<Count, CountError> {
    CountCache::global().silhouette_count(n)
}

pub fn l_count(t: &CombType) -> Result<Count, CountError> {
    CountCache::global().l_count(t)
}

pub fn h_count(t: &CombType) -> Result<Count, CountError> {
    CountCache::global().h_count(t)
}

pub fn count_by_iso(n: u32, sigma: &IsoType, mode: IsoMode) -> Result<Count, CountError> {
    CountCache::global().count_by_iso(n, sigma, mode)
}
