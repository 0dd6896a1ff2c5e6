use serde::{Deserialize, Serialize};

/// Limits on exhaustive enumeration. Exceeding one is an error, never a
/// silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Maximum number of index sets visited by one enumeration.
    pub subsets: u128,
    /// Maximum number of sign vectors visited by one enumeration.
    pub signs: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            subsets: 1_000_000,
            signs: 1 << 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// Step `1/Lip` with `Lip = 2λ_max` from power iteration.
    FixedInverseLipschitz,
    /// Armijo backtracking starting from `1/Lip`.
    Backtracking,
}

/// Settings shared by the iterative solvers and the randomized searches.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_iters: usize,
    pub tol: f64,
    /// Local-search restarts for the nonconvex estimators.
    pub restarts: usize,
    /// Random cone samples drawn by the nonconvex estimators.
    pub samples: usize,
    pub seed: u64,
    pub step_rule: StepRule,
    pub caps: Caps,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iters: 100_000,
            tol: 1e-9,
            restarts: 16,
            samples: 100_000,
            seed: 0,
            step_rule: StepRule::FixedInverseLipschitz,
            caps: Caps::default(),
        }
    }
}

impl SolverConfig {
    /// Fewer restarts and samples, for large active sets or quick runs.
    pub fn reduced() -> Self {
        Self {
            restarts: 4,
            samples: 5_000,
            ..Self::default()
        }
    }
}
