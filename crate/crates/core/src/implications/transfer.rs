use serde::Serialize;

use crate::bounded::{BoundedValue, Certificate};
use crate::cone::ConeSpec;
use crate::gram::PerturbationPair;
use crate::scalar::Scalar;

/// Which restricted `ℓ1`-eigenvalue is transferred. The shift is the same
/// for all three.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferTarget {
    Compat,
    Re,
    ReAdaptive,
}

/// `(L+1)√(d∞ s)`.
pub fn transfer_shift<T: Scalar>(l: T, d_inf: T, s: usize) -> T {
    (l + T::one()) * (d_inf.max(T::zero()) * T::of_usize(s)).sqrt()
}

/// `(L+1)² λ̃ s / φ²₀`, the bound on `|‖f_β‖²_{Σ₁}/‖f_β‖²_{Σ₀} − 1|` over
/// the cone when `d∞(Σ₁, Σ₀) ≤ λ̃`. `phi0_sq` is a lower bound on the
/// squared constant for `Σ₀`.
pub fn ratio_bound<T: Scalar>(l: T, lambda_tilde: T, s: usize, phi0_sq: T) -> T {
    if phi0_sq > T::zero() {
        (l + T::one()).powi(2) * lambda_tilde * T::of_usize(s) / phi0_sq
    } else {
        T::infinity()
    }
}

/// Certified lower bound on the (unsquared) constant of `Σ₁` from a
/// certified lower bound `phi0` on that of `Σ₀`:
/// `max(0, φ₀ − (L+1)√(d∞(Σ₀,Σ₁) s))`.
pub fn perturbation_transfer<T: Scalar>(
    pair: &PerturbationPair<T>,
    cone: &ConeSpec<T>,
    phi0: &BoundedValue<T>,
    which: TransferTarget,
) -> BoundedValue<T> {
    let s = cone.s();
    let shift = transfer_shift(cone.l, pair.d_inf, s);
    let lower = (phi0.lower - shift).max(T::zero());
    let ratio = ratio_bound(cone.l, pair.d_inf, s, phi0.lower.max(T::zero()).powi(2));
    BoundedValue {
        estimate: lower,
        lower,
        upper: T::infinity(),
        certificate: Certificate::CertifiedLower,
        provenance: format!(
            "{which:?}: phi0 lower {} minus (L+1) sqrt(d_inf s) = {shift}; ratio bound {ratio}",
            phi0.lower
        ),
    }
}
