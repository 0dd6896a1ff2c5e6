use crate::bounded::{rounding_margin, BoundedValue};
use crate::config::{Caps, SolverConfig};
use crate::constants::{block_norm_regression_bound, weak_rip_constant, NormQ, SINGULAR_REL_TOL};
use crate::cone::{ConeSpec, ConeVariant};
use crate::error::{Error, Result};
use crate::gram::{Block, GramMatrix};
use crate::linalg::{symmetric_eigen, SymmetricEigen};
use crate::scalar::{dot, norm2, Scalar};

use super::search::{ConeSearch, Goal};

/// A closed-form upper bound on `ϑ(L,S,N)` with a note on its origin.
#[derive(Debug, Clone)]
pub struct RegressionBound<T> {
    pub value: T,
    pub note: String,
    /// Whether `value` is the exact constant rather than a bound.
    pub exact: bool,
}

fn head_eigen<T: Scalar>(gram: &GramMatrix<T>, cone: &ConeSpec<T>) -> Option<SymmetricEigen<T>> {
    let eig = symmetric_eigen(&gram.principal(cone.support.as_slice()));
    (eig.min() > T::of(SINGULAR_REL_TOL) * eig.max().max(T::zero())).then_some(eig)
}

/// Exact `ϑ(L,S,s)` for the standard cone.
///
/// With `𝒩 = S`, `A = Σ₁₁(S)⁻¹` and rows `r_j` of `Σ₂₁(S)`,
/// `ϑ(L,S,s) = L max_j max_{σ ∈ {±1}^s} (|r_jᵀAσ| + √(r_jᵀAr_j · σᵀAσ))/2`:
/// the tail maximizes at a single coordinate, `‖x‖₁ = max_σ σᵀx`, and the
/// remaining ratio of a rank-two form to `xᵀΣ₁₁x` is a generalized
/// eigenvalue.
pub fn regression_exact_s<T: Scalar>(gram: &GramMatrix<T>, cone: &ConeSpec<T>, caps: &Caps) -> Result<T> {
    let s = cone.s();
    let needed = if s > 100 { u128::MAX } else { 1u128 << (s - 1) };
    if needed > caps.signs {
        return Err(Error::CapExceeded {
            needed,
            cap: caps.signs,
        });
    }
    let Some(eig) = head_eigen(gram, cone) else {
        return Err(Error::SingularUniformEigenvalue);
    };
    let a = eig.reconstruct_with(|x| T::one() / x).symmetrize();
    let b21 = gram.block(Block::B21, cone.support.as_slice());
    let m = b21.nrows();
    if m == 0 {
        return Ok(T::zero());
    }
    let w = b21.matmul(&a);
    let rar: Vec<T> = (0..m).map(|j| dot(w.row(j), b21.row(j)).max(T::zero())).collect();
    let mut best = T::zero();
    let mut sigma = vec![T::one(); s];
    for code in 0u64..(1u64 << (s - 1)) {
        for (i, x) in sigma.iter_mut().enumerate().take(s - 1) {
            *x = if code >> i & 1 == 1 { -T::one() } else { T::one() };
        }
        let kappa = a.quad(&sigma);
        for j in 0..m {
            let v = (dot(w.row(j), &sigma).abs() + (rar[j] * kappa).sqrt()) * T::half();
            best = best.max(v);
        }
    }
    Ok(cone.l * best)
}

/// `‖x‖₂ |aᵀx| / xᵀMx` in the eigenbasis of `M`.
fn adaptive_objective<T: Scalar>(lambda: &[T], ahat: &[T], y: &[T]) -> T {
    let q: T = lambda.iter().zip(y).map(|(&l, &v)| l * v * v).sum();
    norm2(y) * dot(ahat, y).abs() / q
}

/// Lower bound on `max_x ‖x‖₂|aᵀx|/xᵀMx` and the maximizing direction.
///
/// Stationary points satisfy `x ∝ (M − tI)⁻¹a` for some `t = xᵀMx/(2‖x‖²)`,
/// or are eigenvectors of `M`. The curve is scanned on a grid in `t` and the
/// best grid point refined by golden-section search.
fn adaptive_row_max<T: Scalar>(eig: &SymmetricEigen<T>, a: &[T]) -> (T, Vec<T>) {
    let k = a.len();
    let lambda = &eig.values;
    let ahat = eig.vectors.t_matvec(a);
    let curve = |t: T| -> Vec<T> { (0..k).map(|i| ahat[i] / (lambda[i] - t)).collect() };
    let mut best = (T::zero(), vec![T::zero(); k]);
    let consider = |y: Vec<T>, best: &mut (T, Vec<T>)| {
        let v = adaptive_objective(lambda, &ahat, &y);
        if v.is_finite() && v > best.0 {
            *best = (v, y);
        }
    };
    for i in 0..k {
        let mut e = vec![T::zero(); k];
        e[i] = T::one();
        consider(e, &mut best);
    }
    let hi = eig.max();
    let grid = 4000;
    let mut best_t = None;
    let mut best_grid = T::zero();
    for g in 0..=grid {
        let t = hi * T::of_usize(g) / T::of_usize(grid);
        let y = curve(t);
        let v = adaptive_objective(lambda, &ahat, &y);
        if v.is_finite() && v > best_grid {
            best_grid = v;
            best_t = Some(t);
        }
        consider(y, &mut best);
    }
    if let Some(t0) = best_t {
        let step = hi / T::of_usize(grid);
        let (mut lo, mut up) = (t0 - step, t0 + step);
        let phi = T::of(0.618_033_988_749_895);
        let f = |t: T| {
            let v = adaptive_objective(lambda, &ahat, &curve(t));
            if v.is_finite() { v } else { T::zero() }
        };
        for _ in 0..80 {
            let m1 = up - phi * (up - lo);
            let m2 = lo + phi * (up - lo);
            if f(m1) < f(m2) {
                lo = m1;
            } else {
                up = m2;
            }
        }
        consider(curve((lo + up) * T::half()), &mut best);
    }
    let x = eig.vectors.matvec(&best.1);
    (best.0, x)
}

/// Closed-form upper bound on `ϑ(L,S,N)` (or the exact value where known).
///
/// * `N ≥ p`: `𝒩ᶜ` is empty and the constant is 0.
/// * `N = s`: exact for the standard cone within the sign cap; otherwise
///   `L√s min(‖Σ₁₂(S)‖₂,∞/Λ²(S,s), max_j ‖Σ₁₁⁻¹ᐟ²r_j‖/Λ(S,s))`.
/// * `N = 2s`: `L min(min_q max_𝒩 √s‖Σ₁₂(𝒩)‖₂,q/(s^{1/q}Λ²(S,2s)), ϑ_weak-RIP(S,2s))`.
///
/// The adaptive cone contains the standard one, so adaptive bounds apply to
/// both variants. Other `N` have no bound (`+∞`).
pub fn regression_upper<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    variant: ConeVariant,
    caps: &Caps,
) -> RegressionBound<T> {
    let p = gram.dim();
    let s = cone.s();
    let none = |note: &str| RegressionBound {
        value: T::infinity(),
        note: note.to_string(),
        exact: false,
    };
    if cone.n >= p {
        return RegressionBound {
            value: T::zero(),
            note: "N = p".into(),
            exact: true,
        };
    }
    if cone.l == T::zero() {
        return RegressionBound {
            value: T::zero(),
            note: "L = 0".into(),
            exact: true,
        };
    }
    if cone.n == s {
        if variant == ConeVariant::Standard {
            if let Ok(v) = regression_exact_s(gram, cone, caps) {
                return RegressionBound {
                    value: v + rounding_margin(v, p),
                    note: "exact at N = s".into(),
                    exact: true,
                };
            }
        }
        let Some(eig) = head_eigen(gram, cone) else {
            return none("singular Sigma_11(S)");
        };
        let b21 = gram.block(Block::B21, cone.support.as_slice());
        let lmin = eig.min();
        let inv_sqrt = eig.reconstruct_with(|x| T::one() / x.sqrt());
        let mut col = T::zero();
        let mut whitened = T::zero();
        for j in 0..b21.nrows() {
            let r = b21.row(j);
            col = col.max(norm2(r));
            whitened = whitened.max(norm2(&inv_sqrt.matvec(r)));
        }
        let st = T::of_usize(s).sqrt();
        let v = cone.l * st * (col / lmin).min(whitened / lmin.sqrt());
        return RegressionBound {
            value: v + rounding_margin(v, p),
            note: "column-norm bound at N = s".into(),
            exact: false,
        };
    }
    if cone.n == 2 * s {
        let mut best = T::infinity();
        let mut note = String::from("none");
        for (q, name) in [(NormQ::Inf, "q=inf"), (NormQ::One, "q=1"), (NormQ::Two, "q=2")] {
            if let Ok(b) = block_norm_regression_bound(gram, &cone.support, q, caps) {
                if b.upper < best {
                    best = b.upper;
                    note = format!("block norm bound {name} at N = 2s");
                }
            }
        }
        if let Ok(w) = weak_rip_constant(gram, cone, caps) {
            if w.estimate < best {
                best = w.estimate;
                note = "weak RIP at N = 2s".into();
            }
        }
        let v = cone.l * best;
        return RegressionBound {
            value: v + rounding_margin(v, p),
            note,
            exact: false,
        };
    }
    none("no closed-form bound for this N")
}

/// `ϑ(L,S,N)` or `ϑ_adaptive(L,S,N)` as an interval.
///
/// The upper endpoint is [`regression_upper`]. The lower endpoint is the
/// ratio at the best feasible point found: exact at `N = s` for the standard
/// cone, the stationary-curve scan for the adaptive cone at `N = s`, and
/// multi-start search otherwise.
pub fn restricted_regression<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    variant: ConeVariant,
    config: &SolverConfig,
) -> Result<BoundedValue<T>> {
    let p = gram.dim();
    cone.validate(p)?;
    let upper = regression_upper(gram, cone, variant, &config.caps);
    if upper.exact {
        let lo = (upper.value - T::two() * rounding_margin(upper.value, p)).max(T::zero());
        return Ok(BoundedValue::interval(lo, upper.value.max(lo), upper.value).with_provenance(upper.note));
    }
    let search = ConeSearch::new(gram, cone, variant, Goal::RestrictedRegression);
    let mut candidates = Vec::new();
    if cone.n == cone.s() && variant == ConeVariant::Adaptive {
        if let Some(beta) = adaptive_s_candidate(gram, cone) {
            candidates.push(beta);
        }
    }
    let found = if cone.n == cone.s() && variant == ConeVariant::Adaptive {
        // The stationary-curve candidate is already the maximizer.
        let mut cfg = config.clone();
        cfg.samples = cfg.samples.min(4096);
        search.run(&candidates, &cfg)
    } else {
        search.run(&candidates, config)
    };
    let lower = found
        .map(|r| (r.value - rounding_margin(r.value, p)).max(T::zero()))
        .unwrap_or(T::zero());
    let hi = upper.value.max(lower);
    Ok(BoundedValue::interval(lower, lower, hi).with_provenance(format!(
        "lower: best feasible point; upper: {}",
        upper.note
    )))
}

/// Maximizer of the adaptive ratio at `N = s` from the stationary curve.
fn adaptive_s_candidate<T: Scalar>(gram: &GramMatrix<T>, cone: &ConeSpec<T>) -> Option<Vec<T>> {
    let p = gram.dim();
    let eig = head_eigen(gram, cone)?;
    let support = cone.support.as_slice();
    let tail = cone.support.complement(p);
    let b21 = gram.block(Block::B21, support);
    let mut best: Option<(T, usize, Vec<T>)> = None;
    for j in 0..b21.nrows() {
        let (v, x) = adaptive_row_max(&eig, b21.row(j));
        if best.as_ref().is_none_or(|b| v > b.0) {
            best = Some((v, j, x));
        }
    }
    let (_, j, x) = best?;
    let nx = norm2(&x);
    if !(nx > T::zero()) {
        return None;
    }
    let mut beta = vec![T::zero(); p];
    for (&k, &v) in support.iter().zip(&x) {
        beta[k] = v / nx;
    }
    let sg = if dot(b21.row(j), &x) < T::zero() { -T::one() } else { T::one() };
    beta[tail[j]] = sg * T::of_usize(cone.s()).sqrt() * cone.l;
    Some(beta)
}
