use rayon::prelude::*;
use serde::Serialize;

use crate::bounded::BoundedValue;
use crate::config::SolverConfig;
use crate::cone::ConeSpec;
use crate::constants::{alpha_rip_bound, AlphaParts, PART3_TOL};
use crate::error::{Error, Result};
use crate::gram::GramMatrix;
use crate::lasso::solve_noiseless;
use crate::scalar::Scalar;

use super::inputs::EdgeInputs;

/// Relative tolerance of every edge comparison.
pub const EDGE_TOL: f64 = 1e-9;

/// Penalty used for the solved instance of edge E11.
pub const E11_LAMBDA: f64 = 0.1;

pub const EDGE_IDS: [&str; 11] = ["E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8", "E9", "E10", "E11"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Le,
    Ge,
}

/// One inequality `lhs (≤|≥) rhs` between two bounded quantities.
///
/// `holds` is false only if certified endpoints prove a violation: for `≤`,
/// `lhs.lower > rhs.upper`. `certified` means certified endpoints prove the
/// inequality: for `≤`, `lhs.upper ≤ rhs.lower`, i.e. the upper endpoint of
/// the smaller side against the lower endpoint of the larger side. Both
/// comparisons carry a relative tolerance of [`EDGE_TOL`].
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct Comparison<T> {
    pub name: String,
    pub relation: Relation,
    pub lhs: BoundedValue<T>,
    pub rhs: BoundedValue<T>,
    pub holds: bool,
    pub certified: bool,
    /// Signed margin at the estimates, positive when satisfied.
    pub slack: T,
    /// Signed margin between the endpoints used for `holds`.
    pub refutation_margin: T,
    /// Signed margin between the endpoints used for `certified`.
    pub certification_margin: T,
    pub bound_direction_note: String,
}

fn tolerance<T: Scalar>(values: &[T]) -> T {
    let m = values
        .iter()
        .filter(|v| v.is_finite())
        .fold(T::one(), |a, v| a.max(v.abs()));
    T::of(EDGE_TOL) * m
}

impl<T: Scalar> Comparison<T> {
    pub fn new(name: &str, lhs: BoundedValue<T>, relation: Relation, rhs: BoundedValue<T>) -> Self {
        // Normalize to `small ≤ big`.
        let (small, big) = match relation {
            Relation::Le => (&lhs, &rhs),
            Relation::Ge => (&rhs, &lhs),
        };
        let tol = tolerance(&[small.lower, small.upper, big.lower, big.upper]);
        let refutation_margin = big.upper - small.lower;
        let certification_margin = big.lower - small.upper;
        let holds = !(refutation_margin < -tol);
        let certified = certification_margin >= -tol;
        let slack = big.estimate - small.estimate;
        let (ls, rs) = match relation {
            Relation::Le => ("lhs", "rhs"),
            Relation::Ge => ("rhs", "lhs"),
        };
        let note = format!(
            "holds: lower({ls}) <= upper({rs}) (refuted only by certified endpoints); \
             certified: upper({ls}) <= lower({rs}) (upper endpoint on the <=-side, lower endpoint on the >=-side)"
        );
        Self {
            name: name.to_string(),
            relation,
            lhs,
            rhs,
            holds,
            certified,
            slack,
            refutation_margin,
            certification_margin,
            bound_direction_note: note,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeStatus {
    Holds,
    Failed,
    Skipped,
}

/// One edge of the implication graph evaluated on one instance.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ImplicationVerdict<T> {
    pub edge_id: String,
    pub statement: String,
    pub status: EdgeStatus,
    /// Estimates of the two sides of the tightest part.
    pub lhs_value: T,
    pub rhs_value: T,
    pub relation: Option<Relation>,
    /// No part is refuted (false when skipped).
    pub holds: bool,
    /// Every part is proved by certified endpoints.
    pub certified: bool,
    /// Smallest signed margin over the parts.
    pub slack: T,
    pub bound_direction_note: String,
    pub skip_reason: Option<String>,
    pub parts: Vec<Comparison<T>>,
}

impl<T: Scalar> ImplicationVerdict<T> {
    fn from_parts(edge: &str, statement: &str, parts: Vec<Comparison<T>>, skipped: Vec<String>) -> Self {
        if parts.is_empty() {
            let reason = if skipped.is_empty() {
                "no applicable part".to_string()
            } else {
                skipped.join("; ")
            };
            return Self::skipped(edge, statement, reason);
        }
        let worst = parts
            .iter()
            .min_by(|a, b| a.slack.partial_cmp(&b.slack).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap();
        let holds = parts.iter().all(|c| c.holds);
        let mut note = worst.bound_direction_note.clone();
        if !skipped.is_empty() {
            note.push_str(&format!("; parts skipped: {}", skipped.join("; ")));
        }
        Self {
            edge_id: edge.to_string(),
            statement: statement.to_string(),
            status: if holds { EdgeStatus::Holds } else { EdgeStatus::Failed },
            lhs_value: worst.lhs.estimate,
            rhs_value: worst.rhs.estimate,
            relation: Some(worst.relation),
            holds,
            certified: parts.iter().all(|c| c.certified),
            slack: worst.slack,
            bound_direction_note: note,
            skip_reason: None,
            parts,
        }
    }

    fn skipped(edge: &str, statement: &str, reason: String) -> Self {
        Self {
            edge_id: edge.to_string(),
            statement: statement.to_string(),
            status: EdgeStatus::Skipped,
            lhs_value: T::nan(),
            rhs_value: T::nan(),
            relation: None,
            holds: false,
            certified: false,
            slack: T::nan(),
            bound_direction_note: String::new(),
            skip_reason: Some(reason),
            parts: Vec::new(),
        }
    }
}

/// Input keys read by an edge.
pub fn required_keys(edge: &str) -> Result<&'static [&'static str]> {
    Ok(match edge {
        "E1" => &["theta_l_n", "lambda2_n", "phi2_n"],
        "E2" => &["theta_ad_2s", "block_inf_2s", "block_one_2s", "block_two_2s", "theta_ad_s", "row_bound_s"],
        "E3" => &["theta_ad_s", "row_bound_s", "mutual", "cumulative", "theta_2s", "cumulative_2s", "theta_ad_2s", "block_two_2s"],
        "E4" => &["irr_s", "theta_ad_s"],
        "E5" => &["theta_ad_2s", "weak_rip_2s"],
        "E6" => &["weak_rip_2s", "lambda2_2s", "phi2_2s"],
        "E7" => &["phi2_ad_n", "phi2_n", "phi2_compat"],
        "E8" => &["irr_s", "lambda2_s", "phi2_compat"],
        "E9" => &["weak_rip_2s", "rip", "delta_n", "lambda2_n"],
        "E10" => &["phi2_unit_2s", "delta_s", "theta_s_s", "lambda2_s", "theta_uniform_ss", "theta_uniform_s2s"],
        "E11" => &["phi2_unit_2s", "delta_s", "theta_s_s", "lambda2_s", "part3_2s"],
        _ => return Err(Error::UnknownEdge(edge.to_string())),
    })
}

pub fn statement(edge: &str) -> &'static str {
    match edge {
        "E1" => "phi^2(L,S,N) >= (1 - theta(L,S,N))^2 Lambda^2(S,N) when theta(L,S,N) < 1",
        "E2" => "theta_adaptive(S,2s) <= max_N sqrt(s) ||Sigma_12(N)||_{2,q} / (s^{1/q} Lambda^2(S,2s)), q in {inf,1,2}; \
                 theta_adaptive(S,s) <= sqrt(s) ||Sigma_12(S)||_{2,inf} / Lambda^2(S,s)",
        "E3" => "coherence: theta_adaptive(S,s) <= row bound <= theta_mutual(S); theta_adaptive(S,s) <= theta_cumulative(S); \
                 theta(S,2s) <= cumulative bound at 2s; theta_adaptive(S,2s) <= spectral bound",
        "E4" => "theta_irrepresentable(S,s) <= theta_adaptive(S,s)",
        "E5" => "theta_adaptive(S,2s) <= theta_weak-RIP(S,2s)",
        "E6" => "phi^2(L,S,2s) >= (1 - L theta_weak-RIP(S,2s))^2 Lambda^2(S,2s) when L theta_weak-RIP(S,2s) < 1",
        "E7" => "phi^2_adaptive(L,S,N) <= phi^2(L,S,N) <= phi^2_compatible(L,S)",
        "E8" => "phi^2_compatible(L,S) >= (1 - L theta_irrepresentable(S,s))^2 Lambda^2(S,s) when L theta_irrepresentable(S,s) < 1",
        "E9" => "theta_weak-RIP(S,2s) <= theta_RIP; 1 - delta_N <= Lambda^2(S,N)",
        "E10" => "alpha(S) <= sqrt(2)(theta_ss + sqrt(theta_ss)) / (1 - delta_s - theta_ss - theta_s2s)",
        "E11" => "alpha(S) < 1 implies the weak (S,2s)-irrepresentable condition and |S* \\ S| < s",
        _ => "",
    }
}

/// `(1 − θ)²Λ²` as an interval, for `θ ∈ [θ.lower, θ.upper] ⊂ [0, 1)` and an
/// exact `Λ²`.
fn one_minus_sq_times<T: Scalar>(theta: &BoundedValue<T>, scale: T, lambda2: &BoundedValue<T>) -> BoundedValue<T> {
    let f = |t: T| (T::one() - scale * t.max(T::zero())).max(T::zero()).powi(2);
    BoundedValue::interval(
        f(theta.upper) * lambda2.lower,
        f(theta.estimate) * lambda2.estimate,
        f(theta.lower) * lambda2.upper,
    )
}

/// `α(S)` as an interval from the interval on `φ²(1,S,2s)`. The upper
/// endpoint is infinite when the lower endpoint of `φ²` is not positive.
fn alpha_interval<T: Scalar>(parts: &AlphaParts<T>, phi2: &BoundedValue<T>) -> BoundedValue<T> {
    let eval = |v: T| {
        if v.is_infinite() {
            T::zero()
        } else if v > T::zero() {
            parts.evaluate(v.sqrt()).unwrap_or(T::infinity())
        } else {
            T::infinity()
        }
    };
    BoundedValue::interval(eval(phi2.upper), eval(phi2.estimate), eval(phi2.lower))
}

fn alpha_parts<T: Scalar>(inputs: &EdgeInputs<T>, edge: &str) -> Result<AlphaParts<T>> {
    Ok(AlphaParts {
        theta_ss: inputs.get(edge, "theta_s_s")?.estimate,
        delta_s: inputs.get(edge, "delta_s")?.estimate,
        lambda2_ss: inputs.get(edge, "lambda2_s")?.estimate,
    })
}

/// Evaluate one edge from precomputed inputs. Failed premises give a
/// skipped verdict; absent inputs give `MissingInput`.
pub fn check_edge<T: Scalar>(
    edge: &str,
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    inputs: &EdgeInputs<T>,
    config: &SolverConfig,
) -> Result<ImplicationVerdict<T>> {
    let keys = required_keys(edge)?;
    let stmt = statement(edge);
    let l = cone.l;
    let s = cone.s();
    let exact = BoundedValue::exact;
    let get = |k: &str| inputs.get(edge, k).cloned();
    let mut parts = Vec::new();
    let mut skipped = Vec::new();
    // Every key must at least be known to the caller; a key that failed to
    // compute is reported as a skipped part.
    for k in keys {
        if !inputs.values.contains_key(*k) && !inputs.missing.contains_key(*k) {
            return Err(Error::MissingInput {
                edge: edge.to_string(),
                key: k.to_string(),
            });
        }
    }
    let avail = |k: &str, skipped: &mut Vec<String>| -> Option<BoundedValue<T>> {
        match inputs.values.get(k) {
            Some(v) => Some(v.clone()),
            None => {
                let why = inputs.missing.get(k).cloned().unwrap_or_default();
                skipped.push(format!("{k} unavailable: {why}"));
                None
            }
        }
    };
    match edge {
        "E1" => {
            let theta = get("theta_l_n")?;
            if !(theta.upper < T::one()) {
                return Ok(ImplicationVerdict::skipped(
                    edge,
                    stmt,
                    format!("premise theta(L,S,N) < 1 not certified (upper = {})", theta.upper),
                ));
            }
            let bound = one_minus_sq_times(&theta, T::one(), &get("lambda2_n")?);
            parts.push(Comparison::new("phi2_vs_regression", get("phi2_n")?, Relation::Ge, bound));
        }
        "E2" => {
            if let Some(th) = avail("theta_ad_2s", &mut skipped) {
                for (k, name) in [("block_inf_2s", "q=inf"), ("block_one_2s", "q=1"), ("block_two_2s", "q=2")] {
                    if let Some(b) = avail(k, &mut skipped) {
                        parts.push(Comparison::new(&format!("adaptive_2s_{name}"), th.clone(), Relation::Le, b));
                    }
                }
            }
            if let (Some(th), Some(b)) = (avail("theta_ad_s", &mut skipped), avail("row_bound_s", &mut skipped)) {
                parts.push(Comparison::new("adaptive_s_q=inf", th, Relation::Le, b));
            }
        }
        "E3" => {
            if let Some(th) = avail("theta_ad_s", &mut skipped) {
                if let Some(row) = avail("row_bound_s", &mut skipped) {
                    parts.push(Comparison::new("adaptive_s_vs_row_bound", th.clone(), Relation::Le, row.clone()));
                    if let Some(m) = avail("mutual", &mut skipped) {
                        parts.push(Comparison::new("row_bound_vs_mutual", row, Relation::Le, m));
                    }
                }
                if let Some(c) = avail("cumulative", &mut skipped) {
                    parts.push(Comparison::new("adaptive_s_vs_cumulative", th, Relation::Le, c));
                }
            }
            if let (Some(th), Some(c)) = (avail("theta_2s", &mut skipped), avail("cumulative_2s", &mut skipped)) {
                parts.push(Comparison::new("theta_2s_vs_cumulative_2s", th, Relation::Le, c));
            }
            if let (Some(th), Some(b)) = (avail("theta_ad_2s", &mut skipped), avail("block_two_2s", &mut skipped)) {
                parts.push(Comparison::new("adaptive_2s_vs_spectral", th, Relation::Le, b));
            }
        }
        "E4" => {
            parts.push(Comparison::new("irrepresentable_vs_adaptive", get("irr_s")?, Relation::Le, get("theta_ad_s")?));
        }
        "E5" => {
            parts.push(Comparison::new("adaptive_vs_weak_rip", get("theta_ad_2s")?, Relation::Le, get("weak_rip_2s")?));
        }
        "E6" => {
            let w = get("weak_rip_2s")?;
            if !(l * w.upper < T::one()) {
                return Ok(ImplicationVerdict::skipped(
                    edge,
                    stmt,
                    format!("premise L theta_weak-RIP(S,2s) < 1 fails (value {})", l * w.upper),
                ));
            }
            let bound = one_minus_sq_times(&w, l, &get("lambda2_2s")?);
            parts.push(Comparison::new("phi2_2s_vs_weak_rip", get("phi2_2s")?, Relation::Ge, bound));
        }
        "E7" => {
            let phi = get("phi2_n")?;
            parts.push(Comparison::new("adaptive_vs_standard", get("phi2_ad_n")?, Relation::Le, phi.clone()));
            parts.push(Comparison::new("standard_vs_compatible", phi, Relation::Le, get("phi2_compat")?));
        }
        "E8" => {
            let irr = get("irr_s")?;
            if !(l * irr.upper < T::one()) {
                return Ok(ImplicationVerdict::skipped(
                    edge,
                    stmt,
                    format!("premise L theta_irrepresentable(S,s) < 1 fails (value {})", l * irr.upper),
                ));
            }
            let bound = one_minus_sq_times(&irr, l, &get("lambda2_s")?);
            parts.push(Comparison::new("compatible_vs_irrepresentable", get("phi2_compat")?, Relation::Ge, bound));
        }
        "E9" => {
            match (avail("weak_rip_2s", &mut skipped), avail("rip", &mut skipped)) {
                (Some(w), Some(r)) => parts.push(Comparison::new("weak_rip_vs_rip", w, Relation::Le, r)),
                _ => {}
            }
            if let (Some(d), Some(l2)) = (avail("delta_n", &mut skipped), avail("lambda2_n", &mut skipped)) {
                let lhs = BoundedValue::interval(T::one() - d.upper, T::one() - d.estimate, T::one() - d.lower);
                parts.push(Comparison::new("isometry_vs_uniform_eigenvalue", lhs, Relation::Le, l2));
            }
        }
        "E10" => {
            let ap = alpha_parts(inputs, edge)?;
            let bound = match alpha_rip_bound(
                get("delta_s")?.estimate,
                get("theta_uniform_ss")?.estimate,
                get("theta_uniform_s2s")?.estimate,
            ) {
                Ok(b) => b,
                Err(e) => {
                    return Ok(ImplicationVerdict::skipped(
                        edge,
                        stmt,
                        format!("premise 1 - delta_s - theta_ss - theta_s2s > 0, delta_s <= 1 fails: {e}"),
                    ))
                }
            };
            let alpha = alpha_interval(&ap, &get("phi2_unit_2s")?);
            parts.push(Comparison::new("alpha_vs_rip_bound", alpha, Relation::Le, exact(bound)));
        }
        "E11" => {
            let ap = alpha_parts(inputs, edge)?;
            let phi2 = get("phi2_unit_2s")?;
            let alpha = alpha_interval(&ap, &phi2);
            if !(alpha.upper < T::one()) {
                return Ok(ImplicationVerdict::skipped(
                    edge,
                    stmt,
                    format!("premise alpha(S) < 1 not certified (upper = {})", alpha.upper),
                ));
            }
            let part3 = get("part3_2s")?;
            parts.push(Comparison::new(
                "weak_irrepresentable_2s",
                part3,
                Relation::Le,
                exact(T::one() + T::of(PART3_TOL)),
            ));
            let (fp, contains) = e11_instance(gram, cone, phi2.lower, config)?;
            let mut c = Comparison::new(
                "false_positives",
                exact(T::of_usize(fp)),
                Relation::Le,
                exact(T::of_usize(s) - T::one()),
            );
            c.name = format!("false_positives (alpha upper {}, S* contains S: {contains})", alpha.upper);
            parts.push(c);
        }
        _ => return Err(Error::UnknownEdge(edge.to_string())),
    }
    Ok(ImplicationVerdict::from_parts(edge, stmt, parts, skipped))
}

/// Solve the noiseless Lasso at `λ = E11_LAMBDA` for `β⁰` supported on `S`
/// with alternating signs and `|β⁰|_min = 2λ√s/φ²_lower(S,2s)`. Returns
/// `|S* \ S|` and whether `S ⊆ S*`.
fn e11_instance<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    phi2_lower: T,
    config: &SolverConfig,
) -> Result<(usize, bool)> {
    let p = gram.dim();
    let s = cone.s();
    let lambda = T::of(E11_LAMBDA);
    let magnitude = T::two() * lambda * T::of_usize(s).sqrt() / phi2_lower;
    let mut beta0 = vec![T::zero(); p];
    for (i, &j) in cone.support.as_slice().iter().enumerate() {
        beta0[j] = if i % 2 == 0 { magnitude } else { -magnitude };
    }
    let sol = solve_noiseless(gram, &beta0, lambda, config)?;
    let fp = sol.active_set.iter().filter(|&&j| !cone.support.contains(j)).count();
    let contains = cone.support.is_subset_of(&sol.active_set);
    Ok((fp, contains))
}

/// Every edge on one instance, in order E1..E11. Inputs that fail to
/// compute turn into skips with the reason.
pub fn check_all<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    config: &SolverConfig,
) -> Result<Vec<ImplicationVerdict<T>>> {
    let inputs = EdgeInputs::compute_all(gram, cone, config)?;
    Ok(check_all_with(gram, cone, &inputs, config))
}

pub fn check_all_with<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    inputs: &EdgeInputs<T>,
    config: &SolverConfig,
) -> Vec<ImplicationVerdict<T>> {
    EDGE_IDS
        .par_iter()
        .map(|&e| {
            check_edge(e, gram, cone, inputs, config).unwrap_or_else(|err| {
                let reason = match &err {
                    Error::MissingInput { key, .. } => {
                        format!("{key} unavailable: {}", inputs.missing.get(key).cloned().unwrap_or_default())
                    }
                    other => other.to_string(),
                };
                ImplicationVerdict::skipped(e, statement(e), reason)
            })
        })
        .collect()
}
