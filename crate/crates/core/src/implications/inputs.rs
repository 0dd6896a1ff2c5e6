use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::bounded::BoundedValue;
use crate::config::SolverConfig;
use crate::cone::{ConeSpec, ConeVariant};
use crate::constants::{
    block_norm_2q, block_norm_regression_bound, coherence, cumulative_bound_2s, irrepresentable_signed,
    irrepresentable_uniform, restricted_isometry, restricted_orthogonality, rip_constant, theta_uniform,
    uniform_eigenvalue, weak_rip_constant, CoherenceKind, NormMode, NormQ, SignedPart, SINGULAR_REL_TOL,
};
use crate::error::{Error, Result};
use crate::estimators::{compatibility_constant, restricted_eigenvalue, restricted_regression};
use crate::gram::GramMatrix;
use crate::scalar::Scalar;

/// Every quantity an edge may read, by key.
///
/// `2s` stands for `min(2s, p)` throughout.
pub const ALL_KEYS: &[&str] = &[
    "lambda2_s",
    "lambda2_n",
    "lambda2_2s",
    "theta_l_n",
    "theta_ad_s",
    "theta_ad_2s",
    "theta_2s",
    "block_inf_2s",
    "block_one_2s",
    "block_two_2s",
    "row_bound_s",
    "mutual",
    "cumulative",
    "cumulative_2s",
    "irr_s",
    "weak_rip_n",
    "weak_rip_2s",
    "rip",
    "delta_s",
    "delta_n",
    "theta_s_s",
    "theta_uniform_ss",
    "theta_uniform_s2s",
    "phi2_n",
    "phi2_ad_n",
    "phi2_2s",
    "phi2_unit_2s",
    "phi2_compat",
    "part3_2s",
];

/// Precomputed constants for one `(Σ, S, L, N)`. Keys that could not be
/// computed are listed in `missing` with the reason.
#[derive(Debug, Clone)]
pub struct EdgeInputs<T> {
    pub values: BTreeMap<String, BoundedValue<T>>,
    pub missing: BTreeMap<String, String>,
}

impl<T: Scalar> EdgeInputs<T> {
    pub fn new() -> Self {
        Self {
            values: BTreeMap::new(),
            missing: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, key: &str, v: BoundedValue<T>) {
        self.values.insert(key.to_string(), v);
    }

    /// The value under `key`, or `MissingInput` naming the edge.
    pub fn get(&self, edge: &str, key: &str) -> Result<&BoundedValue<T>> {
        self.values.get(key).ok_or_else(|| Error::MissingInput {
            edge: edge.to_string(),
            key: key.to_string(),
        })
    }

    /// Compute the listed keys (in parallel). Unknown keys are an error;
    /// failures of individual constants are recorded in `missing`.
    pub fn compute(gram: &GramMatrix<T>, cone: &ConeSpec<T>, config: &SolverConfig, keys: &[&str]) -> Result<Self> {
        cone.validate(gram.dim())?;
        if let Some(k) = keys.iter().find(|k| !ALL_KEYS.contains(k)) {
            return Err(Error::InvalidParameter(format!("unknown input key `{k}`")));
        }
        let results: Vec<(String, Result<BoundedValue<T>>)> = keys
            .par_iter()
            .map(|&k| (k.to_string(), compute_key(gram, cone, config, k)))
            .collect();
        let mut out = Self::new();
        for (k, r) in results {
            match r {
                Ok(v) => {
                    out.values.insert(k, v);
                }
                Err(e) => {
                    out.missing.insert(k, e.to_string());
                }
            }
        }
        Ok(out)
    }

    pub fn compute_all(gram: &GramMatrix<T>, cone: &ConeSpec<T>, config: &SolverConfig) -> Result<Self> {
        Self::compute(gram, cone, config, ALL_KEYS)
    }
}

impl<T: Scalar> Default for EdgeInputs<T> {
    fn default() -> Self {
        Self::new()
    }
}

fn compute_key<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    config: &SolverConfig,
    key: &str,
) -> Result<BoundedValue<T>> {
    let p = gram.dim();
    let s = cone.s();
    let n2 = (2 * s).min(p);
    let caps = &config.caps;
    let unit = cone.with_l(T::one());
    let at_s = cone.with_n(s);
    match key {
        "lambda2_s" => uniform_eigenvalue(gram, &at_s, caps),
        "lambda2_n" => uniform_eigenvalue(gram, cone, caps),
        "lambda2_2s" => uniform_eigenvalue(gram, &cone.with_n(n2), caps),
        "theta_l_n" => restricted_regression(gram, cone, ConeVariant::Standard, config),
        "theta_ad_s" => restricted_regression(gram, &unit.with_n(s), ConeVariant::Adaptive, config),
        "theta_ad_2s" => restricted_regression(gram, &unit.with_n(n2), ConeVariant::Adaptive, config),
        "theta_2s" => restricted_regression(gram, &unit.with_n(n2), ConeVariant::Standard, config),
        "block_inf_2s" => block_norm_regression_bound(gram, &cone.support, NormQ::Inf, caps),
        "block_one_2s" => block_norm_regression_bound(gram, &cone.support, NormQ::One, caps),
        "block_two_2s" => block_norm_regression_bound(gram, &cone.support, NormQ::Two, caps),
        "row_bound_s" => {
            let l2 = uniform_eigenvalue(gram, &at_s, caps)?.estimate;
            if !(l2 > T::of(SINGULAR_REL_TOL) * gram.scale()) {
                return Err(Error::SingularUniformEigenvalue);
            }
            let norm = block_norm_2q(gram, cone.support.as_slice(), NormQ::Inf, NormMode::Exact, caps)?.estimate;
            Ok(BoundedValue::exact(T::of_usize(s).sqrt() * norm / l2))
        }
        "mutual" => coherence(gram, &at_s, CoherenceKind::Mutual, caps),
        "cumulative" => coherence(gram, &at_s, CoherenceKind::Cumulative, caps),
        "cumulative_2s" => cumulative_bound_2s(gram, &cone.support, caps),
        "irr_s" => irrepresentable_uniform(gram, &at_s, caps),
        "weak_rip_n" => weak_rip_constant(gram, cone, caps),
        "weak_rip_2s" => weak_rip_constant(gram, &cone.with_n(n2), caps),
        "rip" => rip_constant(gram, s, caps),
        "delta_s" => restricted_isometry(gram, s, caps),
        "delta_n" => restricted_isometry(gram, cone.n, caps),
        "theta_s_s" => restricted_orthogonality(gram, &at_s, caps),
        "theta_uniform_ss" => theta_uniform(gram, s, s, caps),
        "theta_uniform_s2s" => theta_uniform(gram, s, n2, caps),
        "phi2_n" => restricted_eigenvalue(gram, cone, ConeVariant::Standard, config),
        "phi2_ad_n" => restricted_eigenvalue(gram, cone, ConeVariant::Adaptive, config),
        "phi2_2s" => restricted_eigenvalue(gram, &cone.with_n(n2), ConeVariant::Standard, config),
        "phi2_unit_2s" => restricted_eigenvalue(gram, &unit.with_n(n2), ConeVariant::Standard, config),
        "phi2_compat" => compatibility_constant(gram, &at_s, config),
        "part3_2s" => irrepresentable_signed(gram, &unit.with_n(n2), SignedPart::Part3, caps)
            .map(|r| BoundedValue::exact(r.value)),
        _ => Err(Error::InvalidParameter(format!("unknown input key `{key}`"))),
    }
}
