//! Condition constants defined by optimization problems: compatibility,
//! (adaptive) restricted eigenvalues and (adaptive) restricted regression.
//!
//! Every result is a [`BoundedValue`](crate::BoundedValue) whose endpoints
//! are one-sided certificates: feasible points on one side, closed-form or
//! duality bounds on the other.

mod compat;
mod eigen;
mod regression;
mod search;

pub use compat::{compat_ratio, compatibility_constant, compatibility_detailed, CompatOutcome};
pub use eigen::{
    certified_lower_compat, certified_lower_phi, phi_upper_search, restricted_eigenvalue, LowerRoute,
    PhiLower,
};
pub use regression::{regression_exact_s, regression_upper, restricted_regression, RegressionBound};
pub use search::{ConeSearch, Goal, SearchResult};
