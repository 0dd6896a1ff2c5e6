//! The Lasso in the noiseless and noisy settings, its KKT certificate, and
//! the checks built on it: oracle inequalities, the anti-projection
//! identity, variable selection and exact recovery by basis pursuit.

mod analysis;
mod noisy;
mod recovery;
mod solution;

pub use analysis::{
    antiprojection_identity_check, oracle_verdict, selection_report, AntiprojectionCheck, OracleVerdict,
    Part3Check, SelectionReport, PART3_SLACK,
};
pub use noisy::{
    approximation_verdict, lambda0_bound, lambda0_of_data, lambda_tilde, solve_noisy, ApproximationVerdict,
    NoisyProblem, NoisyVerdict,
};
pub use recovery::{basis_pursuit_recover, BasisPursuit, RANK_REL_TOL, RECOVERY_TOL};
pub use solution::{correlation_of, kkt_residual, solve_noiseless, solve_with_correlation, LassoSolution};
