use crate::scalar::{norm1, Scalar};

/// Euclidean projection onto `{x : ‖x‖₁ ≤ radius}` by sorting.
///
/// Sort `|v|` decreasingly, find the largest `k` with
/// `u_k > (Σ_{i≤k} u_i − radius)/k`, and soft-threshold at that level.
pub fn project_l1_ball<T: Scalar>(v: &[T], radius: T) -> Vec<T> {
    assert!(radius >= T::zero(), "radius must be nonnegative");
    if norm1(v) <= radius {
        return v.to_vec();
    }
    if radius == T::zero() {
        return vec![T::zero(); v.len()];
    }
    let mut u: Vec<T> = v.iter().map(|x| x.abs()).collect();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cum = T::zero();
    let mut theta = T::zero();
    for (k, &uk) in u.iter().enumerate() {
        cum += uk;
        let t = (cum - radius) / T::of_usize(k + 1);
        if uk > t {
            theta = t;
        } else {
            break;
        }
    }
    let theta = theta.max(T::zero());
    v.iter()
        .map(|&x| crate::scalar::soft_threshold(x, theta))
        .collect()
}
