//! Index sets, cone specifications, cone membership and tail chunking.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gram::complement;
use crate::scalar::{norm1, norm2, Scalar};

/// Sorted set of distinct 0-based coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Build from arbitrary order; rejects duplicates and indices `≥ p`.
    pub fn new(mut idx: Vec<usize>, p: usize) -> Result<Self> {
        idx.sort_unstable();
        for w in idx.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateIndex(w[0]));
            }
        }
        if let Some(&last) = idx.last() {
            if last >= p {
                return Err(Error::IndexOutOfRange { index: last, p });
            }
        }
        Ok(Self(idx))
    }

    /// `{0, …, k-1}`.
    pub fn first(k: usize) -> Self {
        Self((0..k).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    pub fn complement(&self, p: usize) -> Vec<usize> {
        complement(p, &self.0)
    }

    pub fn is_subset_of(&self, other: &[usize]) -> bool {
        self.0.iter().all(|j| other.binary_search(j).is_ok())
    }
}

/// Which cone the tail is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeVariant {
    /// `‖β_{Sᶜ}‖₁ ≤ L‖β_S‖₁`.
    Standard,
    /// `‖β_{Sᶜ}‖₁ ≤ √s L‖β_S‖₂`.
    Adaptive,
}

/// Active set `S`, cone constant `L` and superset size bound `N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeSpec<T> {
    pub support: IndexSet,
    pub l: T,
    pub n: usize,
}

impl<T: Scalar> ConeSpec<T> {
    pub fn new(support: IndexSet, l: T, n: usize, p: usize) -> Result<Self> {
        let cone = Self { support, l, n };
        cone.validate(p)?;
        Ok(cone)
    }

    pub fn validate(&self, p: usize) -> Result<()> {
        if self.support.is_empty() {
            return Err(Error::EmptySupport);
        }
        if let Some(&last) = self.support.as_slice().last() {
            if last >= p {
                return Err(Error::IndexOutOfRange { index: last, p });
            }
        }
        if !(self.l >= T::zero()) || !self.l.is_finite() {
            return Err(Error::InvalidCone(format!("L = {} must be finite and nonnegative", self.l)));
        }
        if self.n < self.support.len() || self.n > p {
            return Err(Error::InvalidCone(format!(
                "need s <= N <= p, got s = {}, N = {}, p = {p}",
                self.s(),
                self.n
            )));
        }
        Ok(())
    }

    pub fn s(&self) -> usize {
        self.support.len()
    }

    pub fn with_l(&self, l: T) -> Self {
        Self {
            l,
            ..self.clone()
        }
    }

    pub fn with_n(&self, n: usize) -> Self {
        Self {
            n,
            ..self.clone()
        }
    }

    /// Tail radius for a given head: `L‖β_S‖₁` or `√s L‖β_S‖₂`.
    pub fn tail_radius(&self, head: &[T], variant: ConeVariant) -> T {
        match variant {
            ConeVariant::Standard => self.l * norm1(head),
            ConeVariant::Adaptive => T::of_usize(self.s()).sqrt() * self.l * norm2(head),
        }
    }
}

/// Vector of signs in `{-1, +1}` (zero allowed for unset coordinates).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignVector<T>(pub Vec<T>);

impl<T: Scalar> SignVector<T> {
    /// Sign pattern number `code` on `len` coordinates: bit `i` set means `-1`.
    pub fn from_code(code: u64, len: usize) -> Self {
        Self(
            (0..len)
                .map(|i| if code >> i & 1 == 1 { -T::one() } else { T::one() })
                .collect(),
        )
    }
}

/// Split `β` into `(β_S, β_{Sᶜ})`.
pub fn split<T: Scalar>(beta: &[T], support: &IndexSet) -> (Vec<T>, Vec<T>) {
    let mut head = Vec::with_capacity(support.len());
    let mut tail = Vec::with_capacity(beta.len() - support.len());
    for (j, &b) in beta.iter().enumerate() {
        if support.contains(j) {
            head.push(b);
        } else {
            tail.push(b);
        }
    }
    (head, tail)
}

/// Membership in `ℛ(L,S)` (or its adaptive version), and in `ℛ(L,S,𝒩)` when
/// `nset` is given and differs from `S`.
///
/// A vector with `β_S = 0` is never a member.
pub fn cone_membership<T: Scalar>(
    beta: &[T],
    cone: &ConeSpec<T>,
    nset: Option<&[usize]>,
    variant: ConeVariant,
) -> Result<bool> {
    let p = beta.len();
    cone.validate(p)?;
    let (head, tail) = split(beta, &cone.support);
    if head.iter().all(|&x| x == T::zero()) {
        return Ok(false);
    }
    let radius = cone.tail_radius(&head, variant);
    let slack = T::of(1e-12) * (radius + norm1(&tail));
    if norm1(&tail) > radius + slack {
        return Ok(false);
    }
    let Some(nset) = nset else {
        return Ok(true);
    };
    if nset.iter().any(|&j| j >= p) {
        return Err(Error::IndexOutOfRange {
            index: *nset.iter().max().unwrap(),
            p,
        });
    }
    if !cone.support.is_subset_of(nset) {
        return Err(Error::InvalidCone("N-set must contain S".into()));
    }
    if nset.len() == cone.s() {
        return Ok(true);
    }
    let floor = nset
        .iter()
        .filter(|&&j| !cone.support.contains(j))
        .map(|&j| beta[j].abs())
        .fold(T::infinity(), T::min);
    let outside = complement(p, nset)
        .into_iter()
        .map(|j| beta[j].abs())
        .fold(T::zero(), T::max);
    Ok(outside <= floor)
}

/// Coordinates of `Sᶜ` ordered by decreasing `|β_j|`, ties by ascending index.
pub fn ranked_tail<T: Scalar>(beta: &[T], support: &IndexSet) -> Vec<usize> {
    let mut tail = support.complement(beta.len());
    tail.sort_by(|&a, &b| {
        beta[b]
            .abs()
            .partial_cmp(&beta[a].abs())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    tail
}

/// `𝒩(β) = S ∪ {N − s largest |β_j|, j ∈ Sᶜ}`, sorted.
pub fn top_set<T: Scalar>(beta: &[T], support: &IndexSet, n: usize) -> Vec<usize> {
    let extra = n.saturating_sub(support.len());
    let mut set: Vec<usize> = support.as_slice().to_vec();
    set.extend(ranked_tail(beta, support).into_iter().take(extra));
    set.sort_unstable();
    set
}

/// Partition of `Sᶜ` into consecutive chunks of size `s` (the last may be shorter),
/// following [`ranked_tail`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChunkPartition {
    pub chunks: Vec<Vec<usize>>,
}

impl ChunkPartition {
    /// `𝒩 = S ∪ 𝒩₀`, sorted.
    pub fn leading_set(&self, support: &IndexSet) -> Vec<usize> {
        let mut set = support.as_slice().to_vec();
        if let Some(first) = self.chunks.first() {
            set.extend(first);
        }
        set.sort_unstable();
        set
    }
}

pub fn chunk_tail<T: Scalar>(beta: &[T], cone: &ConeSpec<T>) -> Result<ChunkPartition> {
    cone.validate(beta.len())?;
    let ranked = ranked_tail(beta, &cone.support);
    Ok(ChunkPartition {
        chunks: ranked.chunks(cone.s()).map(|c| c.to_vec()).collect(),
    })
}

/// `C(n, k)`, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

fn check_cap(needed: u128, cap: u128) -> Result<()> {
    if needed > cap {
        Err(Error::CapExceeded { needed, cap })
    } else {
        Ok(())
    }
}

/// All `k`-subsets of `{0, …, p-1}` in lexicographic order.
pub fn k_subsets(p: usize, k: usize, cap: u128) -> Result<impl Iterator<Item = Vec<usize>>> {
    check_cap(binomial(p, k), cap)?;
    Ok((0..p).combinations(k))
}

/// All sorted supersets of `support` with exactly `size` elements.
pub fn supersets(
    support: &IndexSet,
    p: usize,
    size: usize,
    cap: u128,
) -> Result<impl Iterator<Item = Vec<usize>> + '_> {
    let s = support.len();
    if size < s || size > p {
        return Err(Error::InvalidCone(format!(
            "superset size {size} outside [{s}, {p}]"
        )));
    }
    check_cap(binomial(p - s, size - s), cap)?;
    let comp = support.complement(p);
    Ok(comp.into_iter().combinations(size - s).map(move |extra| {
        let mut set = support.as_slice().to_vec();
        set.extend(extra);
        set.sort_unstable();
        set
    }))
}

/// Number of supersets of sizes `s..=n`.
pub fn superset_count(s: usize, p: usize, n: usize) -> u128 {
    (s..=n.min(p)).fold(0u128, |acc, k| acc.saturating_add(binomial(p - s, k - s)))
}

/// All sorted supersets of `support` with `s ≤ |𝒩| ≤ n`.
pub fn supersets_up_to(
    support: &IndexSet,
    p: usize,
    n: usize,
    cap: u128,
) -> Result<Vec<Vec<usize>>> {
    check_cap(superset_count(support.len(), p, n), cap)?;
    let mut out = Vec::new();
    for size in support.len()..=n.min(p) {
        out.extend(supersets(support, p, size, u128::MAX)?);
    }
    Ok(out)
}
