//! Values reported together with the interval that is known to contain them.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::scalar::Scalar;

/// How the endpoints of a [`BoundedValue`] were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Certificate {
    /// Computed exactly (up to floating point rounding).
    Exact,
    /// The lower endpoint is a proven bound; the upper endpoint is not.
    CertifiedLower,
    /// The upper endpoint is a proven bound; the lower endpoint is not.
    CertifiedUpper,
    /// Both endpoints are proven bounds.
    Interval,
    /// Heuristic value without a guarantee.
    Estimate,
}

/// An estimate with lower and upper endpoints.
///
/// Infinite endpoints mean "no bound" and serialize as `null`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedValue<T> {
    pub estimate: T,
    pub lower: T,
    pub upper: T,
    pub certificate: Certificate,
    /// Free-form note on where the endpoints came from.
    pub provenance: String,
}

impl<T: Scalar> BoundedValue<T> {
    pub fn exact(v: T) -> Self {
        Self {
            estimate: v,
            lower: v,
            upper: v,
            certificate: Certificate::Exact,
            provenance: String::new(),
        }
    }

    pub fn interval(lower: T, estimate: T, upper: T) -> Self {
        Self {
            estimate,
            lower,
            upper,
            certificate: Certificate::Interval,
            provenance: String::new(),
        }
    }

    pub fn certified_lower(lower: T, estimate: T) -> Self {
        Self {
            estimate,
            lower,
            upper: T::infinity(),
            certificate: Certificate::CertifiedLower,
            provenance: String::new(),
        }
    }

    pub fn certified_upper(upper: T, estimate: T) -> Self {
        Self {
            estimate,
            lower: T::neg_infinity(),
            upper,
            certificate: Certificate::CertifiedUpper,
            provenance: String::new(),
        }
    }

    pub fn estimate_only(v: T) -> Self {
        Self {
            estimate: v,
            lower: T::neg_infinity(),
            upper: T::infinity(),
            certificate: Certificate::Estimate,
            provenance: String::new(),
        }
    }

    pub fn with_provenance(mut self, note: impl Into<String>) -> Self {
        self.provenance = note.into();
        self
    }

    pub fn with_certificate(mut self, c: Certificate) -> Self {
        self.certificate = c;
        self
    }

    pub fn width(&self) -> T {
        self.upper - self.lower
    }

    pub fn contains(&self, x: T, tol: T) -> bool {
        self.lower - tol <= x && x <= self.upper + tol
    }

    /// Whether `lower ≤ estimate ≤ upper` up to `tol`.
    pub fn is_ordered(&self, tol: T) -> bool {
        self.lower <= self.estimate + tol && self.estimate <= self.upper + tol
    }

    /// Image under the increasing map `x ↦ √max(x, 0)`.
    pub fn sqrt(&self) -> Self {
        let f = |x: T| x.max(T::zero()).sqrt();
        Self {
            estimate: f(self.estimate),
            lower: f(self.lower),
            upper: f(self.upper),
            certificate: self.certificate,
            provenance: self.provenance.clone(),
        }
    }

    /// Image under `x ↦ x²` restricted to `x ≥ 0`.
    pub fn square(&self) -> Self {
        let f = |x: T| {
            let y = x.max(T::zero());
            y * y
        };
        Self {
            estimate: f(self.estimate),
            lower: f(self.lower),
            upper: f(self.upper),
            certificate: self.certificate,
            provenance: self.provenance.clone(),
        }
    }

    /// Multiply by `c ≥ 0`.
    pub fn scaled(&self, c: T) -> Self {
        Self {
            estimate: self.estimate * c,
            lower: self.lower * c,
            upper: self.upper * c,
            certificate: self.certificate,
            provenance: self.provenance.clone(),
        }
    }
}

fn finite_or_none<T: Scalar>(x: T) -> Option<f64> {
    x.is_finite().then(|| x.as_f64())
}

impl<T: Scalar> Serialize for BoundedValue<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let n = if self.provenance.is_empty() { 4 } else { 5 };
        let mut st = serializer.serialize_struct("BoundedValue", n)?;
        st.serialize_field("estimate", &finite_or_none(self.estimate))?;
        st.serialize_field("lower", &finite_or_none(self.lower))?;
        st.serialize_field("upper", &finite_or_none(self.upper))?;
        st.serialize_field("certificate", &self.certificate)?;
        if !self.provenance.is_empty() {
            st.serialize_field("provenance", &self.provenance)?;
        }
        st.end()
    }
}

/// Safety margin added to endpoints obtained from floating point evaluation
/// of a quadratic form of the given magnitude.
pub fn rounding_margin<T: Scalar>(magnitude: T, dim: usize) -> T {
    T::epsilon() * T::of(64.0) * T::of_usize(dim.max(1)) * magnitude.abs().max(T::one())
}
