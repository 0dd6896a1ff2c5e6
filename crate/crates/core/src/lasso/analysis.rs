use serde::Serialize;

use crate::bounded::BoundedValue;
use crate::cone::{cone_membership, ConeSpec, ConeVariant, IndexSet};
use crate::config::Caps;
use crate::constants::{irrepresentable_matrix, irrepresentable_uniform, uniform_eigenvalue};
use crate::error::{Error, Result};
use crate::gram::{complement, Block, GramMatrix};
use crate::linalg::spd_inverse;
use crate::constants::SINGULAR_REL_TOL;
use crate::scalar::{dot, norm1, norm2, norm_inf, Scalar};

use super::solution::LassoSolution;

/// Both sides of the anti-projection identity for a solved instance.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AntiprojectionCheck<T> {
    /// `2‖(f_{β*_{𝒩ᶜ}})^{A_𝒩}‖²`.
    pub lhs: T,
    /// `λ β*_{𝒩ᶜ}ᵀ Σ₂₁Σ₁₁⁻¹ τ*_𝒩 − λ‖β*_{𝒩ᶜ}‖₁`.
    pub rhs: T,
    pub gap: T,
}

/// Evaluate the anti-projection identity on `𝒩 ⊇ S`.
///
/// The identity is exact at a KKT point when `β⁰` vanishes off `𝒩`; for an
/// approximate solution the gap is of the order of the KKT residual.
pub fn antiprojection_identity_check<T: Scalar>(
    gram: &GramMatrix<T>,
    solution: &LassoSolution<T>,
    nset: &[usize],
) -> Result<AntiprojectionCheck<T>> {
    let p = gram.dim();
    let a = spd_inverse(&gram.principal(nset), T::of(SINGULAR_REL_TOL))
        .ok_or_else(|| Error::SingularBlock(nset.to_vec()))?;
    let tail = complement(p, nset);
    let b: Vec<T> = tail.iter().map(|&j| solution.beta_star[j]).collect();
    if b.iter().all(|&x| x == T::zero()) {
        return Ok(AntiprojectionCheck {
            lhs: T::zero(),
            rhs: T::zero(),
            gap: T::zero(),
        });
    }
    let b12 = gram.block(Block::B12, nset);
    let b22 = gram.block(Block::B22, nset);
    let s12b = b12.matvec(&b);
    let lhs = T::two() * (b22.quad(&b) - a.quad(&s12b));
    let tau_n: Vec<T> = nset.iter().map(|&j| solution.tau_star.0[j]).collect();
    let rhs = solution.lambda * (dot(&s12b, &a.matvec(&tau_n)) - norm1(&b));
    Ok(AntiprojectionCheck {
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
    })
}

/// Converse check on `S* ⊇ S`, `|S*| ≤ N`.
#[derive(Debug, Clone, Serialize)]
pub struct Part3Check<T> {
    /// `‖Σ₂₁(S*)Σ₁₁⁻¹(S*)τ*_{S*}‖∞`, at most 1 at an exact solution.
    pub value: T,
    pub holds: bool,
    /// `Λ²(S,N)`.
    pub lambda2: T,
    /// `λ√N/(2Λ²(S,N))`, the threshold the argument supports.
    pub sign_threshold: T,
    /// `λ√s/(2Λ(S,N))`, the threshold as usually stated.
    pub sign_threshold_stated: T,
    /// Whether `|β⁰|_min` exceeds `sign_threshold`.
    pub sign_premise: bool,
    /// Whether `τ*_S = sign(β⁰_S)`.
    pub signs_match: bool,
}

/// Variable selection verdicts for a solved noiseless instance.
#[derive(Debug, Clone, Serialize)]
pub struct SelectionReport<T> {
    /// `|S* \ S|`.
    pub false_positives: usize,
    pub n_minus_s: usize,
    pub contains_support: bool,
    pub exact_support: bool,
    /// `ϑ_irr(S,N)` when some `Σ₁₁(𝒩)` is nonsingular.
    pub irrepresentable: Option<T>,
    /// Uniform irrepresentable premise `ϑ_irr(S,N) < 1`, and if it holds,
    /// whether `|S* \ S| ≤ N − s`.
    pub part1_premise: bool,
    pub part1_holds: Option<bool>,
    pub beta0_min: T,
    /// `λs/φ²_compatible` with the certified lower bound on `φ²`.
    pub part2_threshold: T,
    pub part2_premise: bool,
    /// When both premises hold: `S ⊆ S*` and `|S*| ≤ N`.
    pub part2_holds: Option<bool>,
    pub part3: Option<Part3Check<T>>,
    pub notes: Vec<String>,
}

/// Tolerance of the Part 3 comparison with 1.
pub const PART3_SLACK: f64 = 1e-9;

/// Selection checks for `solution` against the truth `β⁰` on `S`.
///
/// `phi_compat_lower` is a lower bound on `φ²_compatible(S)` (squared).
pub fn selection_report<T: Scalar>(
    gram: &GramMatrix<T>,
    solution: &LassoSolution<T>,
    cone: &ConeSpec<T>,
    beta0: &[T],
    phi_compat_lower: &BoundedValue<T>,
    caps: &Caps,
) -> Result<SelectionReport<T>> {
    let p = gram.dim();
    cone.validate(p)?;
    let s = cone.s();
    let lambda = solution.lambda;
    let star = &solution.active_set;
    let false_positives = star.iter().filter(|&&j| !cone.support.contains(j)).count();
    let contains_support = cone.support.is_subset_of(star);
    let exact_support = contains_support && star.len() == s;
    let mut notes = Vec::new();

    let irr = irrepresentable_uniform(gram, cone, caps).ok().map(|v| v.estimate);
    let part1_premise = irr.is_some_and(|v| v < T::one());
    let part1_holds = part1_premise.then_some(false_positives <= cone.n - s);

    let beta0_min = cone
        .support
        .as_slice()
        .iter()
        .map(|&j| beta0[j].abs())
        .fold(T::infinity(), T::min);
    let phi2 = phi_compat_lower.lower;
    let part2_threshold = if phi2 > T::zero() {
        lambda * T::of_usize(s) / phi2
    } else {
        T::infinity()
    };
    let part2_premise = part1_premise && beta0_min > part2_threshold;
    let part2_holds = part2_premise.then_some(contains_support && star.len() <= cone.n);

    let part3 = if contains_support && star.len() <= cone.n {
        let w = irrepresentable_matrix(gram, star).ok_or_else(|| Error::SingularBlock(star.clone()))?;
        let tau: Vec<T> = star.iter().map(|&j| solution.tau_star.0[j]).collect();
        let value = norm_inf(&w.matvec(&tau));
        let lambda2 = uniform_eigenvalue(gram, cone, caps)?.estimate;
        let sign_threshold = lambda * T::of_usize(cone.n).sqrt() / (T::two() * lambda2);
        let sign_threshold_stated = lambda * T::of_usize(s).sqrt() / (T::two() * lambda2.sqrt());
        notes.push(format!(
            "sign recovery threshold uses lambda sqrt(N)/(2 Lambda^2) = {sign_threshold}; \
             the stated form lambda sqrt(s)/(2 Lambda) = {sign_threshold_stated} differs"
        ));
        let signs_match = cone
            .support
            .as_slice()
            .iter()
            .all(|&j| crate::scalar::sign(beta0[j]) == solution.tau_star.0[j]);
        Some(Part3Check {
            value,
            holds: value <= T::one() + T::of(PART3_SLACK),
            lambda2,
            sign_threshold,
            sign_threshold_stated,
            sign_premise: beta0_min > sign_threshold,
            signs_match,
        })
    } else {
        None
    };
    Ok(SelectionReport {
        false_positives,
        n_minus_s: cone.n - s,
        contains_support,
        exact_support,
        irrepresentable: irr,
        part1_premise,
        part1_holds,
        beta0_min,
        part2_threshold,
        part2_premise,
        part2_holds,
        part3,
        notes,
    })
}

/// Oracle inequality verdicts for a solved noiseless instance.
#[derive(Debug, Clone, Serialize)]
pub struct OracleVerdict<T> {
    /// `‖f* − f⁰‖² + λ‖β*_{Sᶜ}‖₁`.
    pub lhs: T,
    /// `λ²s/φ²` with the certified lower bound on `φ²_compatible`.
    pub rhs: T,
    pub holds: bool,
    /// `‖β* − β⁰‖₁` against `2λs/φ²`.
    pub l1_lhs: T,
    pub l1_rhs: T,
    pub l1_holds: bool,
    /// `‖β* − β⁰‖₂²` against `2λ²s/φ⁴(S,2s)`, when a lower bound on
    /// `φ²(S,2s)` is supplied.
    pub l2_lhs: T,
    pub l2_rhs: Option<T>,
    pub l2_holds: Option<bool>,
    /// Whether `β* − β⁰ ∈ ℛ(1,S)`.
    pub in_cone: bool,
    /// Largest `φ₀` with `lhs ≤ λ²s/φ₀²`, i.e. `λ√(s/lhs)`.
    pub empirical_phi0: T,
    /// Allowance for the solver tolerance used in the comparisons.
    pub slack: T,
}

/// Check the oracle inequality and its `ℓ1` and `ℓ2` corollaries.
///
/// `phi_lower` bounds `φ²_compatible(S)` from below and `phi_2s_lower`
/// bounds `φ²(S,2s)` from below (both squared). A KKT residual `r` can move
/// the left-hand sides by about `r‖β* − β⁰‖₁`, which is the slack allowed.
pub fn oracle_verdict<T: Scalar>(
    gram: &GramMatrix<T>,
    solution: &LassoSolution<T>,
    beta0: &[T],
    support: &IndexSet,
    phi_lower: &BoundedValue<T>,
    phi_2s_lower: Option<&BoundedValue<T>>,
) -> Result<OracleVerdict<T>> {
    let p = gram.dim();
    let s = T::of_usize(support.len());
    let lambda = solution.lambda;
    let diff: Vec<T> = (0..p).map(|j| solution.beta_star[j] - beta0[j]).collect();
    let pred = gram.quad(&diff).max(T::zero());
    let tail: T = support
        .complement(p)
        .iter()
        .map(|&j| solution.beta_star[j].abs())
        .sum();
    let lhs = pred + lambda * tail;
    let l1 = norm1(&diff);
    let slack = solution.kkt_residual * l1 * T::of(4.0) + T::epsilon() * T::of(64.0) * (lhs + T::one());
    let phi2 = phi_lower.lower;
    let rhs = if phi2 > T::zero() {
        lambda * lambda * s / phi2
    } else {
        T::infinity()
    };
    let l1_rhs = if phi2 > T::zero() {
        T::two() * lambda * s / phi2
    } else {
        T::infinity()
    };
    let l2_lhs = norm2(&diff).powi(2);
    let l2_rhs = phi_2s_lower
        .map(|b| b.lower)
        .filter(|&v| v > T::zero())
        .map(|v| T::two() * lambda * lambda * s / (v * v));
    let unit = ConeSpec::new(support.clone(), T::one(), support.len(), p)?;
    let in_cone = diff.iter().all(|&x| x == T::zero())
        || cone_membership(&diff, &unit, None, ConeVariant::Standard)?
        || {
            // Rounding can push a boundary point just outside.
            let head: T = support.as_slice().iter().map(|&j| diff[j].abs()).sum();
            tail <= head + slack
        };
    let empirical_phi0 = if lhs > T::zero() {
        lambda * (s / lhs).sqrt()
    } else {
        T::infinity()
    };
    Ok(OracleVerdict {
        lhs,
        rhs,
        holds: lhs <= rhs + slack,
        l1_lhs: l1,
        l1_rhs,
        l1_holds: l1 <= l1_rhs + slack,
        l2_lhs,
        l2_rhs,
        l2_holds: l2_rhs.map(|r| l2_lhs <= r + slack),
        in_cone,
        empirical_phi0,
        slack,
    })
}
