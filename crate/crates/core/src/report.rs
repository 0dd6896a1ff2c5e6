//! The condition report: every constant for one `(Σ, S, L, N)` in one map.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bounded::BoundedValue;
use crate::config::SolverConfig;
use crate::cone::{ConeSpec, ConeVariant};
use crate::constants::{alpha_constant, closed_form_constants};
use crate::error::Result;
use crate::estimators::{
    certified_lower_compat, certified_lower_phi, compatibility_constant, restricted_eigenvalue,
    restricted_regression, LowerRoute,
};
use crate::gram::GramMatrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Serialize)]
pub struct Fingerprint {
    pub dim: usize,
    /// First 8 bytes of SHA-256 over the entries, hex encoded.
    pub hash: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ReportContext<T> {
    pub cone: ConeSpec<T>,
    pub matrix: Fingerprint,
}

/// Keys: `lambda2`, `delta_N`, `theta`, `theta_uniform`, `rip`, `weak_rip`,
/// `irr_uniform`, `irr_part2`, `irr_part3`, `mutual`, `cumulative`, `alpha`
/// (closed form) and `phi_compat`, `phi_re`, `phi_re_adaptive`, `theta_rr`,
/// `theta_rr_adaptive` (optimization based). The `phi_*` entries are
/// squared constants. Constants that could not be computed appear in
/// `skipped` with the reason.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ConditionReport<T> {
    pub context: ReportContext<T>,
    pub entries: BTreeMap<String, BoundedValue<T>>,
    pub skipped: BTreeMap<String, String>,
    /// Routes tried for the certified lower bound on `phi_re`.
    pub phi_lower_routes: Vec<LowerRoute<T>>,
    /// Routes tried for the certified lower bound on `phi_compat`.
    pub phi_compat_lower_routes: Vec<LowerRoute<T>>,
}

pub fn condition_report<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    config: &SolverConfig,
) -> Result<ConditionReport<T>> {
    let p = gram.dim();
    cone.validate(p)?;
    let caps = &config.caps;
    let (mut entries, mut skipped) = closed_form_constants(gram, cone, caps);
    let mut put = |key: &str, r: Result<BoundedValue<T>>| match r {
        Ok(v) => {
            entries.insert(key.to_string(), v);
        }
        Err(e) => {
            skipped.insert(key.to_string(), e.to_string());
        }
    };
    let s = cone.s();
    let unit_2s = cone.with_l(T::one()).with_n((2 * s).min(p));
    let phi_2s = certified_lower_phi(gram, &unit_2s, ConeVariant::Standard, caps, &[]);
    put(
        "alpha",
        alpha_constant(gram, cone, phi_2s.bound.lower.max(T::zero()).sqrt(), caps),
    );
    put("phi_compat", compatibility_constant(gram, cone, config));
    put("phi_re", restricted_eigenvalue(gram, cone, ConeVariant::Standard, config));
    put("phi_re_adaptive", restricted_eigenvalue(gram, cone, ConeVariant::Adaptive, config));
    put("theta_rr", restricted_regression(gram, cone, ConeVariant::Standard, config));
    put("theta_rr_adaptive", restricted_regression(gram, cone, ConeVariant::Adaptive, config));
    let routes = certified_lower_phi(gram, cone, ConeVariant::Standard, caps, &[]).routes;
    let compat_routes = certified_lower_compat(gram, cone, caps, &[]).routes;
    Ok(ConditionReport {
        context: ReportContext {
            cone: cone.clone(),
            matrix: Fingerprint {
                dim: p,
                hash: gram.fingerprint(),
            },
        },
        entries,
        skipped,
        phi_lower_routes: routes,
        phi_compat_lower_routes: compat_routes,
    })
}
