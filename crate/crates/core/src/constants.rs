//! Condition constants that can be computed exactly by enumeration:
//! uniform eigenvalues, restricted isometry and orthogonality, the
//! irrepresentable family, coherence and `‖Σ₁₂(𝒩)‖₂,q` norms.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::Serialize;

use crate::bounded::BoundedValue;
use crate::cone::{binomial, k_subsets, superset_count, supersets, supersets_up_to, ConeSpec, IndexSet};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::gram::{complement, Block, GramMatrix};
use crate::linalg::{sigma_max, spd_inverse, symmetric_eigen, Matrix};
use crate::scalar::Scalar;

/// Relative eigenvalue threshold below which `Σ₁₁(𝒩)` counts as singular.
pub const SINGULAR_REL_TOL: f64 = 1e-10;

/// `Λ²(S,N)` together with the minimizing superset.
pub fn uniform_eigenvalue_witness<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    caps: &Caps,
) -> Result<(T, Vec<usize>)> {
    let p = gram.dim();
    cone.validate(p)?;
    let mut best = (T::infinity(), Vec::new());
    for nset in supersets(&cone.support, p, cone.n, caps.subsets)? {
        let v = gram.min_eigen_11(&nset);
        if v < best.0 {
            best = (v, nset);
        }
    }
    Ok(best)
}

/// `Λ²(S,N) = min{λ_min(Σ₁₁(𝒩)) : 𝒩 ⊇ S, |𝒩| = N}`.
///
/// By interlacing, smaller supersets cannot give a smaller value.
pub fn uniform_eigenvalue<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    caps: &Caps,
) -> Result<BoundedValue<T>> {
    Ok(BoundedValue::exact(uniform_eigenvalue_witness(gram, cone, caps)?.0))
}

/// `δ_N`, maximized over all `|𝒩| = N` (not only supersets of `S`).
pub fn restricted_isometry<T: Scalar>(
    gram: &GramMatrix<T>,
    n: usize,
    caps: &Caps,
) -> Result<BoundedValue<T>> {
    let p = gram.dim();
    if n == 0 || n > p {
        return Err(Error::InvalidParameter(format!("N = {n} outside [1, {p}]")));
    }
    let mut delta = T::neg_infinity();
    for set in k_subsets(p, n, caps.subsets)? {
        let e = symmetric_eigen(&gram.principal(&set));
        delta = delta.max(e.max() - T::one()).max(T::one() - e.min());
    }
    Ok(BoundedValue::exact(delta))
}

/// Sizes of `𝒩` that must be visited for `θ` with `|𝒩| ≤ n`, `|ℳ| ≤ s`.
///
/// When `p − n ≥ s` every pair with a smaller `𝒩` embeds into one with
/// `|𝒩| = n`, `|ℳ| = s`, so only `n` is needed. Otherwise shrinking `𝒩`
/// frees room for a larger `ℳ`, and all sizes in `s..=n` are visited.
fn theta_sizes(p: usize, s: usize, n: usize) -> Vec<usize> {
    if p - n >= s {
        vec![n]
    } else {
        (s..=n).collect()
    }
}

fn max_cross_sigma<T: Scalar>(
    gram: &GramMatrix<T>,
    nset: &[usize],
    s: usize,
    caps: &Caps,
) -> Result<T> {
    let p = gram.dim();
    let comp = complement(p, nset);
    let m = s.min(comp.len());
    if m == 0 {
        return Ok(T::zero());
    }
    let count = binomial(comp.len(), m);
    if count > caps.subsets {
        return Err(Error::CapExceeded {
            needed: count,
            cap: caps.subsets,
        });
    }
    let mut best = T::zero();
    for mset in comp.into_iter().combinations(m) {
        best = best.max(sigma_max(&gram.matrix().select(nset, &mset)));
    }
    Ok(best)
}

/// `θ(S,N)`: largest singular value of `Σ[𝒩, ℳ]` over `𝒩 ⊇ S`, `|𝒩| ≤ N`,
/// `ℳ ⊆ 𝒩ᶜ`, `|ℳ| ≤ s`.
pub fn restricted_orthogonality<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    caps: &Caps,
) -> Result<BoundedValue<T>> {
    let p = gram.dim();
    cone.validate(p)?;
    let s = cone.s();
    let sizes = theta_sizes(p, s, cone.n);
    let needed: u128 = sizes
        .iter()
        .map(|&k| binomial(p - s, k - s).saturating_mul(binomial(p - k, s.min(p - k))))
        .fold(0, u128::saturating_add);
    if needed > caps.subsets {
        return Err(Error::CapExceeded {
            needed,
            cap: caps.subsets,
        });
    }
    let mut best = T::zero();
    for k in sizes {
        for nset in supersets(&cone.support, p, k, u128::MAX)? {
            best = best.max(max_cross_sigma(gram, &nset, s, caps)?);
        }
    }
    Ok(BoundedValue::exact(best))
}

/// `θ_{s,N} = max{θ(S,N) : |S| = s}`.
///
/// Every `𝒩` with `s ≤ |𝒩|` contains some active set of size `s`, so the
/// maximum runs over all `𝒩` directly.
pub fn theta_uniform<T: Scalar>(
    gram: &GramMatrix<T>,
    s: usize,
    n: usize,
    caps: &Caps,
) -> Result<BoundedValue<T>> {
    let p = gram.dim();
    if s == 0 || n < s || n > p {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= s <= N <= p, got s = {s}, N = {n}, p = {p}"
        )));
    }
    let sizes = theta_sizes(p, s, n);
    let needed: u128 = sizes
        .iter()
        .map(|&k| binomial(p, k).saturating_mul(binomial(p - k, s.min(p - k))))
        .fold(0, u128::saturating_add);
    if needed > caps.subsets {
        return Err(Error::CapExceeded {
            needed,
            cap: caps.subsets,
        });
    }
    let mut best = T::zero();
    for k in sizes {
        for nset in (0..p).combinations(k) {
            best = best.max(max_cross_sigma(gram, &nset, s, caps)?);
        }
    }
    Ok(BoundedValue::exact(best))
}

/// `ϑ_RIP = θ_{s,2s} / (1 − δ_s − θ_{s,s})`.
pub fn rip_constant<T: Scalar>(
    gram: &GramMatrix<T>,
    s: usize,
    caps: &Caps,
) -> Result<BoundedValue<T>> {
    let p = gram.dim();
    let delta = restricted_isometry(gram, s, caps)?.estimate;
    let theta_ss = theta_uniform(gram, s, s, caps)?.estimate;
    let theta_s2s = theta_uniform(gram, s, (2 * s).min(p), caps)?.estimate;
    let denom = T::one() - delta - theta_ss;
    if !(denom > T::zero()) {
        return Err(Error::DenominatorNonPositive(denom.as_f64()));
    }
    Ok(BoundedValue::exact(theta_s2s / denom))
}

/// `ϑ_weak-RIP(S,N) = θ(S,N) / Λ²(S,N)`.
pub fn weak_rip_constant<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    caps: &Caps,
) -> Result<BoundedValue<T>> {
    let lambda2 = uniform_eigenvalue(gram, cone, caps)?.estimate;
    if !(lambda2 > T::of(SINGULAR_REL_TOL) * gram.scale()) {
        return Err(Error::SingularUniformEigenvalue);
    }
    let theta = restricted_orthogonality(gram, cone, caps)?.estimate;
    Ok(BoundedValue::exact(theta / lambda2))
}

/// `Σ₂₁(𝒩) Σ₁₁⁻¹(𝒩)`, or `None` when `Σ₁₁(𝒩)` is singular.
pub fn irrepresentable_matrix<T: Scalar>(gram: &GramMatrix<T>, nset: &[usize]) -> Option<Matrix<T>> {
    let inv = spd_inverse(&gram.principal(nset), T::of(SINGULAR_REL_TOL))?;
    Some(gram.block(Block::B21, nset).matmul(&inv))
}

/// `max_{‖τ‖∞ ≤ 1} ‖Wτ‖∞`, the largest row ℓ1-norm.
pub fn max_row_l1<T: Scalar>(w: &Matrix<T>) -> T {
    (0..w.nrows())
        .map(|i| w.row(i).iter().map(|x| x.abs()).sum::<T>())
        .fold(T::zero(), T::max)
}

/// Minimizing superset and value of the irrepresentable constant.
#[derive(Debug, Clone, Serialize)]
pub struct IrrepresentableWitness<T> {
    pub value: T,
    pub nset: Vec<usize>,
}

/// `ϑ_irr(S,N)`: minimum over `𝒩 ⊇ S`, `|𝒩| ≤ N` of the largest row ℓ1-norm
/// of `Σ₂₁(𝒩)Σ₁₁⁻¹(𝒩)`. Singular `Σ₁₁(𝒩)` are skipped.
pub fn irrepresentable_uniform_witness<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    caps: &Caps,
) -> Result<IrrepresentableWitness<T>> {
    let p = gram.dim();
    cone.validate(p)?;
    let mut best: Option<IrrepresentableWitness<T>> = None;
    for nset in supersets_up_to(&cone.support, p, cone.n, caps.subsets)? {
        let Some(w) = irrepresentable_matrix(gram, &nset) else {
            continue;
        };
        let v = max_row_l1(&w);
        if best.as_ref().is_none_or(|b| v < b.value) {
            best = Some(IrrepresentableWitness { value: v, nset });
        }
    }
    best.ok_or(Error::AllSubmatricesSingular)
}

pub fn irrepresentable_uniform<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    caps: &Caps,
) -> Result<BoundedValue<T>> {
    Ok(BoundedValue::exact(
        irrepresentable_uniform_witness(gram, cone, caps)?.value,
    ))
}

/// Which signed irrepresentable condition to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SignedPart {
    /// There is one `𝒩` that works for every sign vector, with margin `1/L`.
    Part2,
    /// Every sign pattern on `S` has its own `𝒩` and sign extension.
    Part3,
}

/// One entry of the Part 3 witness map.
#[derive(Debug, Clone, Serialize)]
pub struct SignWitness<T> {
    pub tau_s: Vec<T>,
    pub nset: Vec<usize>,
    /// Full sign vector on `𝒩` (in the order of `nset`).
    pub tau_n: Vec<T>,
    pub value: T,
}

/// Outcome of a signed irrepresentable test.
#[derive(Debug, Clone, Serialize)]
pub struct SignedIrrepresentable<T> {
    pub part: SignedPart,
    pub holds: bool,
    /// Part 2: `min_𝒩 max_τ ‖Σ₂₁Σ₁₁⁻¹τ‖∞` (compare with `1/L`).
    /// Part 3: `max_{τ_S} min_{𝒩, extension} ‖Σ₂₁Σ₁₁⁻¹τ_𝒩‖∞` (compare with 1).
    pub value: T,
    pub threshold: T,
    /// Part 2 witness `𝒩`.
    pub nset: Option<Vec<usize>>,
    /// Part 3 witnesses, one per sign pattern on `S` (patterns related by a
    /// global sign flip share a witness up to that flip and are listed once).
    pub witnesses: Vec<SignWitness<T>>,
}

/// Tolerance used for the non-strict Part 3 comparison `≤ 1`.
pub const PART3_TOL: f64 = 1e-10;

pub fn irrepresentable_signed<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    part: SignedPart,
    caps: &Caps,
) -> Result<SignedIrrepresentable<T>> {
    match part {
        SignedPart::Part2 => {
            // Each row's maximum over sign vertices is its ℓ1-norm.
            let w = irrepresentable_uniform_witness(gram, cone, caps)?;
            let threshold = T::one() / cone.l;
            Ok(SignedIrrepresentable {
                part,
                holds: w.value < threshold,
                value: w.value,
                threshold,
                nset: Some(w.nset),
                witnesses: Vec::new(),
            })
        }
        SignedPart::Part3 => part3(gram, cone, caps),
    }
}

fn part3<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    caps: &Caps,
) -> Result<SignedIrrepresentable<T>> {
    let p = gram.dim();
    cone.validate(p)?;
    let s = cone.s();
    let n_eff = cone.n.min(62);
    let signs_needed = 1u128 << n_eff;
    if signs_needed > caps.signs || cone.n > 62 {
        return Err(Error::CapExceeded {
            needed: signs_needed,
            cap: caps.signs,
        });
    }
    let count = superset_count(s, p, cone.n);
    if count > caps.subsets {
        return Err(Error::CapExceeded {
            needed: count,
            cap: caps.subsets,
        });
    }
    let half = 1usize << (s - 1);
    // best[code] over sign patterns on S with the last coordinate fixed to +1.
    let mut best: Vec<Option<SignWitness<T>>> = vec![None; half];
    let mut any = false;
    for nset in supersets_up_to(&cone.support, p, cone.n, caps.subsets)? {
        let Some(w) = irrepresentable_matrix(gram, &nset) else {
            continue;
        };
        any = true;
        let pos_s: Vec<usize> = cone
            .support
            .as_slice()
            .iter()
            .map(|j| nset.binary_search(j).unwrap())
            .collect();
        let k = nset.len();
        let mut tau = vec![T::one(); k];
        for code in 0u64..(1u64 << k) {
            for (i, t) in tau.iter_mut().enumerate() {
                *t = if code >> i & 1 == 1 { -T::one() } else { T::one() };
            }
            // Only patterns whose last S coordinate is +1; the flip is symmetric.
            if tau[pos_s[s - 1]] < T::zero() {
                continue;
            }
            let v = (0..w.nrows())
                .map(|r| crate::scalar::dot(w.row(r), &tau).abs())
                .fold(T::zero(), T::max);
            let mut scode = 0usize;
            for (i, &ps) in pos_s.iter().enumerate().take(s - 1) {
                if tau[ps] < T::zero() {
                    scode |= 1 << i;
                }
            }
            let slot = &mut best[scode];
            if slot.as_ref().is_none_or(|b| v < b.value) {
                *slot = Some(SignWitness {
                    tau_s: pos_s.iter().map(|&ps| tau[ps]).collect(),
                    nset: nset.clone(),
                    tau_n: tau.clone(),
                    value: v,
                });
            }
        }
    }
    if !any {
        return Err(Error::AllSubmatricesSingular);
    }
    let witnesses: Vec<SignWitness<T>> = best.into_iter().map(|b| b.unwrap()).collect();
    let value = witnesses.iter().map(|w| w.value).fold(T::zero(), T::max);
    Ok(SignedIrrepresentable {
        part: SignedPart::Part3,
        holds: value <= T::one() + T::of(PART3_TOL),
        value,
        threshold: T::one(),
        nset: None,
        witnesses,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoherenceKind {
    Mutual,
    Cumulative,
}

/// Mutual or cumulative coherence constant, normalized by `Λ²(S,s)`.
pub fn coherence<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    kind: CoherenceKind,
    caps: &Caps,
) -> Result<BoundedValue<T>> {
    let s = cone.s();
    let lambda2 = uniform_eigenvalue(gram, &cone.with_n(s), caps)?.estimate;
    if !(lambda2 > T::of(SINGULAR_REL_TOL) * gram.scale()) {
        return Err(Error::SingularUniformEigenvalue);
    }
    let b21 = gram.block(Block::B21, cone.support.as_slice());
    let st = T::of_usize(s);
    let v = match kind {
        CoherenceKind::Mutual => st * b21.max_abs(),
        CoherenceKind::Cumulative => {
            let colsums: Vec<T> = (0..s)
                .map(|k| (0..b21.nrows()).map(|j| b21.get(j, k).abs()).sum())
                .collect();
            st.sqrt() * colsums.iter().map(|&c| c * c).sum::<T>().sqrt()
        }
    };
    Ok(BoundedValue::exact(v / lambda2))
}

/// The exponent `q` of `‖Σ₁₂(𝒩)‖₂,q` (dual exponent `r`, `1/q + 1/r = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NormQ {
    One,
    Two,
    Inf,
}

impl NormQ {
    /// `s^{1/q}`.
    pub fn s_pow<T: Scalar>(self, s: usize) -> T {
        let st = T::of_usize(s);
        match self {
            NormQ::One => st,
            NormQ::Two => st.sqrt(),
            NormQ::Inf => T::one(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NormMode {
    Exact,
    PaperBound,
}

fn column_norms<T: Scalar>(b12: &Matrix<T>) -> Vec<T> {
    (0..b12.ncols())
        .map(|j| (0..b12.nrows()).map(|k| b12.get(k, j).powi(2)).sum::<T>().sqrt())
        .collect()
}

/// `‖Σ₁₂(𝒩)‖₂,q = sup{‖Σ₁₂(𝒩)b‖₂ : ‖b‖_r ≤ 1}`.
///
/// `q = ∞` and `q = 2` are always exact. `q = 1` is exact by sign enumeration
/// in `Exact` mode; in `PaperBound` mode every `q` returns the column-norm
/// bound `(Σ_j ‖col_j‖₂^q)^{1/q}`.
pub fn block_norm_2q<T: Scalar>(
    gram: &GramMatrix<T>,
    nset: &[usize],
    q: NormQ,
    mode: NormMode,
    caps: &Caps,
) -> Result<BoundedValue<T>> {
    let b12 = gram.block(Block::B12, nset);
    let cols = column_norms(&b12);
    let max_col = cols.iter().copied().fold(T::zero(), T::max);
    if mode == NormMode::PaperBound {
        let v = match q {
            NormQ::Inf => max_col,
            NormQ::Two => cols.iter().map(|&c| c * c).sum::<T>().sqrt(),
            NormQ::One => cols.iter().copied().sum(),
        };
        let bv = if q == NormQ::Inf {
            BoundedValue::exact(v)
        } else {
            BoundedValue::certified_upper(v, v)
        };
        return Ok(bv);
    }
    let v = match q {
        NormQ::Inf => max_col,
        NormQ::Two => sigma_max(&b12),
        NormQ::One => {
            let m = b12.ncols();
            if m == 0 {
                T::zero()
            } else {
                let needed = 1u128 << m.min(127);
                if m > 62 || needed > caps.signs {
                    return Err(Error::CapExceeded {
                        needed,
                        cap: caps.signs,
                    });
                }
                let mut best = T::zero();
                let mut b = vec![T::one(); m];
                for code in 0u64..(1u64 << (m - 1)) {
                    for (i, x) in b.iter_mut().enumerate().take(m - 1) {
                        *x = if code >> i & 1 == 1 { -T::one() } else { T::one() };
                    }
                    let y = b12.matvec(&b);
                    best = best.max(crate::scalar::norm2(&y));
                }
                best
            }
        }
    };
    Ok(BoundedValue::exact(v))
}

/// `max_{𝒩 ⊇ S, |𝒩| = min(2s, p)} √s ‖Σ₁₂(𝒩)‖₂,q / (s^{1/q} Λ²(S,2s))`, the
/// upper bound on `ϑ_adaptive(S,2s)` through `‖Σ₁₂‖₂,q`.
///
/// For `q = 1` the exact norm is used when the sign cap allows and the
/// column-norm bound otherwise.
pub fn block_norm_regression_bound<T: Scalar>(
    gram: &GramMatrix<T>,
    support: &IndexSet,
    q: NormQ,
    caps: &Caps,
) -> Result<BoundedValue<T>> {
    let p = gram.dim();
    let s = support.len();
    let n2 = (2 * s).min(p);
    let cone = ConeSpec::new(support.clone(), T::one(), n2, p)?;
    let lambda2 = uniform_eigenvalue(gram, &cone, caps)?.estimate;
    if !(lambda2 > T::of(SINGULAR_REL_TOL) * gram.scale()) {
        return Err(Error::SingularUniformEigenvalue);
    }
    let mut worst = T::zero();
    let mut exact = true;
    for nset in supersets(support, p, n2, caps.subsets)? {
        let norm = match block_norm_2q(gram, &nset, q, NormMode::Exact, caps) {
            Ok(v) => v.estimate,
            Err(Error::CapExceeded { .. }) => {
                exact = false;
                block_norm_2q(gram, &nset, q, NormMode::PaperBound, caps)?.upper
            }
            Err(e) => return Err(e),
        };
        worst = worst.max(norm);
    }
    let v = T::of_usize(s).sqrt() * worst / (q.s_pow::<T>(s) * lambda2);
    Ok(if exact {
        BoundedValue::exact(v)
    } else {
        BoundedValue::certified_upper(v, v)
    })
}

/// `max_{𝒩} √(Σ_{k∈𝒩}(Σ_{j∉𝒩}|σ_jk|)²) / (√s Λ²(S,2s))` over `𝒩 ⊇ S`,
/// `|𝒩| = min(2s, p)`: the cumulative coherence bound at `2s`.
pub fn cumulative_bound_2s<T: Scalar>(
    gram: &GramMatrix<T>,
    support: &IndexSet,
    caps: &Caps,
) -> Result<BoundedValue<T>> {
    let p = gram.dim();
    let s = support.len();
    let n2 = (2 * s).min(p);
    let cone = ConeSpec::new(support.clone(), T::one(), n2, p)?;
    let lambda2 = uniform_eigenvalue(gram, &cone, caps)?.estimate;
    if !(lambda2 > T::of(SINGULAR_REL_TOL) * gram.scale()) {
        return Err(Error::SingularUniformEigenvalue);
    }
    let mut worst = T::zero();
    for nset in supersets(support, p, n2, caps.subsets)? {
        let b12 = gram.block(Block::B12, &nset);
        let v = (0..b12.nrows())
            .map(|k| {
                let r: T = b12.row(k).iter().map(|x| x.abs()).sum();
                r * r
            })
            .sum::<T>()
            .sqrt();
        worst = worst.max(v);
    }
    Ok(BoundedValue::exact(worst / (T::of_usize(s).sqrt() * lambda2)))
}

/// The three exact ingredients of `α(S)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AlphaParts<T> {
    pub theta_ss: T,
    pub delta_s: T,
    pub lambda2_ss: T,
}

impl<T: Scalar> AlphaParts<T> {
    pub fn compute(gram: &GramMatrix<T>, support: &IndexSet, caps: &Caps) -> Result<Self> {
        let p = gram.dim();
        let s = support.len();
        let cone = ConeSpec::new(support.clone(), T::one(), s, p)?;
        Ok(Self {
            theta_ss: restricted_orthogonality(gram, &cone, caps)?.estimate,
            delta_s: restricted_isometry(gram, s, caps)?.estimate,
            lambda2_ss: uniform_eigenvalue(gram, &cone, caps)?.estimate,
        })
    }

    /// `√2·θ(S,s) + √((1+δ_s)·θ(S,s))`.
    pub fn numerator(&self) -> T {
        T::two().sqrt() * self.theta_ss + ((T::one() + self.delta_s) * self.theta_ss).max(T::zero()).sqrt()
    }

    /// `numerator / (φ · Λ(S,s))` for a value `φ` of `φ(S,2s)` (not squared).
    pub fn evaluate(&self, phi: T) -> Result<T> {
        let denom = phi * self.lambda2_ss.max(T::zero()).sqrt();
        if !(denom > T::zero()) {
            return Err(Error::DenominatorNonPositive(denom.as_f64()));
        }
        Ok(self.numerator() / denom)
    }
}

/// `α(S)` with a certified lower bound on `φ(S,2s)` (not squared) in the
/// denominator, hence a certified upper bound.
pub fn alpha_constant<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    phi_s2s_lower: T,
    caps: &Caps,
) -> Result<BoundedValue<T>> {
    let parts = AlphaParts::compute(gram, &cone.support, caps)?;
    let v = parts.evaluate(phi_s2s_lower)?;
    Ok(BoundedValue::certified_upper(v, v))
}

/// The bound `√2(θ_{s,s} + √θ_{s,s}) / (1 − δ_s − θ_{s,s} − θ_{s,2s})`,
/// valid when `δ_s ≤ 1` and the denominator is positive.
pub fn alpha_rip_bound<T: Scalar>(delta_s: T, theta_ss: T, theta_s2s: T) -> Result<T> {
    let denom = T::one() - delta_s - theta_ss - theta_s2s;
    if !(denom > T::zero()) || delta_s > T::one() {
        return Err(Error::DenominatorNonPositive(denom.as_f64()));
    }
    Ok(T::two().sqrt() * (theta_ss + theta_ss.sqrt()) / denom)
}

/// All closed-form constants for one cone, keyed by name. Constants whose
/// premises fail are reported in the second map with the reason.
pub fn closed_form_constants<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    caps: &Caps,
) -> (BTreeMap<String, BoundedValue<T>>, BTreeMap<String, String>) {
    let mut ok = BTreeMap::new();
    let mut skipped = BTreeMap::new();
    let s = cone.s();
    let mut put = |key: &str, r: Result<BoundedValue<T>>| match r {
        Ok(v) => {
            ok.insert(key.to_string(), v);
        }
        Err(e) => {
            skipped.insert(key.to_string(), e.to_string());
        }
    };
    put("lambda2", uniform_eigenvalue(gram, cone, caps));
    put("delta_N", restricted_isometry(gram, cone.n, caps));
    put("theta", restricted_orthogonality(gram, cone, caps));
    put("theta_uniform", theta_uniform(gram, s, cone.n, caps));
    put("rip", rip_constant(gram, s, caps));
    put("weak_rip", weak_rip_constant(gram, cone, caps));
    put("irr_uniform", irrepresentable_uniform(gram, cone, caps));
    put(
        "irr_part2",
        irrepresentable_signed(gram, cone, SignedPart::Part2, caps).map(|r| {
            BoundedValue::exact(r.value).with_provenance(format!(
                "holds = {} (value < 1/L = {})",
                r.holds, r.threshold
            ))
        }),
    );
    put(
        "irr_part3",
        irrepresentable_signed(gram, cone, SignedPart::Part3, caps).map(|r| {
            BoundedValue::exact(r.value)
                .with_provenance(format!("holds = {} (value <= 1)", r.holds))
        }),
    );
    put("mutual", coherence(gram, cone, CoherenceKind::Mutual, caps));
    put("cumulative", coherence(gram, cone, CoherenceKind::Cumulative, caps));
    (ok, skipped)
}
