use serde::Serialize;

use crate::bounded::{rounding_margin, BoundedValue, Certificate};
use crate::config::{Caps, SolverConfig};
use crate::constants::{irrepresentable_uniform, uniform_eigenvalue, SINGULAR_REL_TOL};
use crate::cone::{superset_count, supersets, ConeSpec, ConeVariant};
use crate::error::Result;
use crate::gram::GramMatrix;
use crate::linalg::symmetric_eigen;
use crate::scalar::Scalar;

use super::regression::regression_upper;
use super::search::{ConeSearch, Goal};

/// One way of bounding `φ²` from below.
#[derive(Debug, Clone, Serialize)]
pub struct LowerRoute<T> {
    pub name: String,
    /// `None` when the route's premise fails.
    pub value: Option<T>,
    pub note: String,
}

/// The best certified lower bound on `φ²` and every route that was tried.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct PhiLower<T> {
    pub bound: BoundedValue<T>,
    pub routes: Vec<LowerRoute<T>>,
}

impl<T: Scalar> PhiLower<T> {
    fn from_routes(routes: Vec<LowerRoute<T>>) -> Self {
        let best = routes
            .iter()
            .filter_map(|r| r.value.map(|v| (v, r.name.clone())))
            .fold(None::<(T, String)>, |acc, (v, n)| match acc {
                Some((a, _)) if a >= v => acc,
                _ => Some((v, n)),
            });
        let bound = match best {
            Some((v, name)) if v > T::zero() => {
                BoundedValue::certified_lower(v, v).with_provenance(name)
            }
            _ => BoundedValue {
                estimate: T::zero(),
                lower: T::zero(),
                upper: T::infinity(),
                certificate: Certificate::Estimate,
                provenance: "no route applies".into(),
            },
        };
        Self { bound, routes }
    }
}

fn regression_route<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    variant: ConeVariant,
    caps: &Caps,
    name: &str,
) -> LowerRoute<T> {
    let p = gram.dim();
    let up = regression_upper(gram, cone, variant, caps);
    let value = if up.value < T::one() {
        uniform_eigenvalue(gram, cone, caps).ok().map(|l2| {
            let v = (T::one() - up.value).powi(2) * l2.estimate;
            (v - rounding_margin(gram.scale(), p)).max(T::zero())
        })
    } else {
        None
    };
    LowerRoute {
        name: name.into(),
        value,
        note: format!("(1 - theta_up)^2 Lambda^2 with theta_up = {} ({})", up.value, up.note),
    }
}

/// Certified lower bound on `φ²(L,S,N)` (standard cone) or
/// `φ²_adaptive(L,S,N)`.
///
/// Routes: `λ_min(Σ)`; `(1 − ϑ_up(L,S,N))² Λ²(S,N)` when `ϑ_up < 1`; the
/// same at `2s` when `N ≤ 2s ≤ p` (the constant is non-increasing in `N`,
/// and at `2s` the upper bound includes weak RIP); plus any externally
/// supplied bounds such as a perturbation transfer.
pub fn certified_lower_phi<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    variant: ConeVariant,
    caps: &Caps,
    extra: &[LowerRoute<T>],
) -> PhiLower<T> {
    let p = gram.dim();
    let s = cone.s();
    let mut routes = Vec::new();
    let eig = symmetric_eigen(gram.matrix());
    let lmin = eig.min();
    routes.push(LowerRoute {
        name: "lambda_min".into(),
        value: (lmin > T::of(SINGULAR_REL_TOL) * eig.max().max(T::zero()))
            .then(|| (lmin - rounding_margin(gram.scale(), p)).max(T::zero())),
        note: format!("smallest eigenvalue of Sigma = {lmin}"),
    });
    routes.push(regression_route(gram, cone, variant, caps, "restricted_regression_N"));
    if cone.n < 2 * s && 2 * s <= p {
        routes.push(regression_route(
            gram,
            &cone.with_n(2 * s),
            variant,
            caps,
            "restricted_regression_2s",
        ));
    }
    routes.extend(extra.iter().cloned());
    PhiLower::from_routes(routes)
}

/// Certified lower bound on `φ²_compatible(L,S)`.
///
/// Every lower bound on `φ²(L,S,s)` applies, as does
/// `(1 − Lϑ_irr(S,s))² Λ²(S,s)` when `Lϑ_irr(S,s) < 1`.
pub fn certified_lower_compat<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    caps: &Caps,
    extra: &[LowerRoute<T>],
) -> PhiLower<T> {
    let p = gram.dim();
    let at_s = cone.with_n(cone.s());
    let mut base = certified_lower_phi(gram, &at_s, ConeVariant::Standard, caps, extra);
    let irr = irrepresentable_uniform(gram, &at_s, caps).ok().map(|v| v.estimate);
    let value = irr.filter(|&v| cone.l * v < T::one()).and_then(|v| {
        uniform_eigenvalue(gram, &at_s, caps).ok().map(|l2| {
            let b = (T::one() - cone.l * v).powi(2) * l2.estimate;
            (b - rounding_margin(gram.scale(), p)).max(T::zero())
        })
    });
    base.routes.push(LowerRoute {
        name: "irrepresentable".into(),
        value,
        note: match irr {
            Some(v) => format!("(1 - L irr)^2 Lambda^2 with irr = {v}"),
            None => "irrepresentable constant unavailable".into(),
        },
    });
    PhiLower::from_routes(base.routes)
}

/// Upper bound on `φ²` by search: a feasible point with the smallest ratio.
pub fn phi_upper_search<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    variant: ConeVariant,
    config: &SolverConfig,
) -> (T, Vec<T>) {
    let p = gram.dim();
    let support = cone.support.as_slice();
    let mut candidates = Vec::new();
    // Smallest eigenvector of Σ₁₁(S) with zero tail: always feasible.
    let eig = symmetric_eigen(&gram.principal(support));
    let mut beta = vec![T::zero(); p];
    for (&j, &v) in support.iter().zip(&eig.vector(0)) {
        beta[j] = v;
    }
    candidates.push(beta);
    // Smallest eigenvectors of Σ₁₁(𝒩) for the supersets of size N.
    if cone.n > cone.s() && superset_count(cone.s(), p, cone.n) <= 2000 {
        if let Ok(sets) = supersets(&cone.support, p, cone.n, u128::MAX) {
            for nset in sets {
                let e = symmetric_eigen(&gram.principal(&nset));
                let mut b = vec![T::zero(); p];
                for (&j, &v) in nset.iter().zip(&e.vector(0)) {
                    b[j] = v;
                }
                candidates.push(b);
            }
        }
    }
    let search = ConeSearch::new(gram, cone, variant, Goal::RestrictedEigenvalue);
    match search.run(&candidates, config) {
        Some(r) => (r.value + rounding_margin(r.value.max(gram.scale()), p), r.beta),
        None => (T::infinity(), Vec::new()),
    }
}

/// `φ²(L,S,N)` or `φ²_adaptive(L,S,N)` as an interval: certified lower
/// routes below, best feasible point above.
pub fn restricted_eigenvalue<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    variant: ConeVariant,
    config: &SolverConfig,
) -> Result<BoundedValue<T>> {
    cone.validate(gram.dim())?;
    let lower = certified_lower_phi(gram, cone, variant, &config.caps, &[]);
    let (upper, _) = phi_upper_search(gram, cone, variant, config);
    Ok(BoundedValue::interval(lower.bound.lower, upper, upper).with_provenance(format!(
        "lower: {}; upper: best feasible point",
        lower.bound.provenance
    )))
}
