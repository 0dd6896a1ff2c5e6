//! Auditing conditions under which the Lasso satisfies oracle inequalities
//! and recovers the support of a sparse coefficient vector.
//!
//! The crate computes the condition constants attached to a Gram matrix and
//! an active set (restricted eigenvalues, compatibility, irrepresentable,
//! coherence and restricted isometry constants), solves the Lasso and basis
//! pursuit, checks the known implications between the conditions on concrete
//! instances, and runs the Monte Carlo experiments that go with the noisy
//! case.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

pub mod bounded;
pub mod cone;
pub mod config;
pub mod constants;
pub mod error;
pub mod estimators;
pub mod experiments;
pub mod gram;
pub mod implications;
pub mod io;
pub mod lasso;
pub mod linalg;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod solvers;

pub use bounded::{BoundedValue, Certificate};
pub use cone::{ConeSpec, ConeVariant, IndexSet, SignVector};
pub use config::{Caps, SolverConfig, StepRule};
pub use error::{Error, Result};
pub use gram::{GramMatrix, PerturbationPair};
pub use linalg::Matrix;
pub use scalar::Scalar;

pub type Matrix64 = Matrix<f64>;
pub type GramMatrix64 = GramMatrix<f64>;
pub type ConeSpec64 = ConeSpec<f64>;
pub type BoundedValue64 = BoundedValue<f64>;
