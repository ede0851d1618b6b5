//! Order-fixed floating point reductions.
//!
//! Every reduction in the crate goes through these helpers so that results
//! do not depend on how the inputs were produced or chunked.

const BLOCK: usize = 32;

/// Pairwise (cascade) summation. The split points depend only on the length
/// of the slice, so the result is bitwise reproducible.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= BLOCK {
        let mut acc = 0.0;
        for v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Pairwise dot product of weights and values.
pub fn weighted_sum(weights: &[f64], values: &[f64]) -> f64 {
    debug_assert_eq!(weights.len(), values.len());
    let products: Vec<f64> = weights.iter().zip(values).map(|(w, v)| w * v).collect();
    pairwise_sum(&products)
}
