//! The implication graph between the conditions, evaluated edge by edge on
//! concrete instances.
//!
//! Edge catalogue (`2s` means `min(2s, p)`):
//!
//! | id  | inequality |
//! |-----|------------|
//! | E1  | `φ²(L,S,N) ≥ (1 − ϑ(L,S,N))² Λ²(S,N)` when `ϑ(L,S,N) < 1` |
//! | E2  | block-norm bounds on `ϑ_adaptive(S,2s)` (`q = ∞, 1, 2`) and `ϑ_adaptive(S,s)` |
//! | E3  | mutual, cumulative and spectral coherence bounds |
//! | E4  | `ϑ_irrepresentable(S,s) ≤ ϑ_adaptive(S,s)` |
//! | E5  | `ϑ_adaptive(S,2s) ≤ ϑ_weak-RIP(S,2s)` |
//! | E6  | `φ²(L,S,2s) ≥ (1 − Lϑ_weak-RIP(S,2s))² Λ²(S,2s)` |
//! | E7  | `φ²_adaptive(L,S,N) ≤ φ²(L,S,N) ≤ φ²_compatible(L,S)` |
//! | E8  | `φ²_compatible(L,S) ≥ (1 − Lϑ_irrepresentable(S,s))² Λ²(S,s)` |
//! | E9  | `ϑ_weak-RIP(S,2s) ≤ ϑ_RIP` and `1 − δ_N ≤ Λ²(S,N)` |
//! | E10 | `α(S) ≤ √2(θ_ss + √θ_ss)/(1 − δ_s − θ_ss − θ_s2s)` |
//! | E11 | `α(S) < 1` ⇒ weak `(S,2s)`-irrepresentable and `|S* \ S| < s` |

mod edges;
mod inputs;
mod transfer;

pub use edges::{
    check_all, check_all_with, check_edge, required_keys, statement, Comparison, EdgeStatus, ImplicationVerdict,
    Relation, E11_LAMBDA, EDGE_IDS, EDGE_TOL,
};
pub use inputs::{EdgeInputs, ALL_KEYS};
pub use transfer::{perturbation_transfer, ratio_bound, transfer_shift, TransferTarget};
