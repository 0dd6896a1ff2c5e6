//! Matrix generators for the worked examples, Gaussian design sampling, and
//! Monte Carlo checks of the concentration and noise-level inequalities.

mod generators;
mod montecarlo;

pub use generators::{
    block_diag, equicorrelation, example_compat, example_irr, gaussian_rows, generate, normalize_columns,
    random_psd, sample_gaussian_design, symmetric_sqrt, toeplitz_geometric, GeneratorSpec, Generated,
};
pub use montecarlo::{concentration_experiment, noise_bound_experiment, MonteCarloResult};
