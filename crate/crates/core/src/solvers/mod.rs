//! Optimization engines: ℓ1-ball projection, accelerated projected gradient
//! for convex quadratics, cyclic coordinate descent for the Lasso, and a
//! dense two-phase simplex method.

mod cd;
mod l1ball;
mod qp;
mod simplex;

pub use cd::{coordinate_descent_lasso, kkt_residual_gradient, CdOutcome};
pub use l1ball::project_l1_ball;
pub use qp::{projected_gradient_qp, QpSolution};
pub use simplex::{simplex_lp, LpProblem, LpSolution, LpStatus};
