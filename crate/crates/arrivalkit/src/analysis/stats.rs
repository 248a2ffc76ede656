//! Scalar statistics shared by the analysis operations.

/// Arithmetic mean. Returns 0.0 for an empty slice.
pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation with the n−1 denominator.
/// Returns 0.0 when fewer than two values are given.
pub fn sample_sdev(values: &[f64], mean: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let sum_sq: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (sum_sq / (values.len() - 1) as f64).sqrt()
}

/// 1-based nearest-rank index: the smallest integer ≥ q·n.
///
/// The product is nudged down by 1e-9 before taking the ceiling so that a
/// mathematically integral q·n computed with float round-up (e.g. 0.9 × 10)
/// does not spill over into the next rank.
pub fn nearest_rank_index(q: f64, n: usize) -> usize {
    let raw = q * n as f64;
    let rank = (raw - 1e-9).ceil() as i64;
    rank.clamp(1, n as i64) as usize
}

/// Nearest-rank quantile over an ascending-sorted slice: always one of the
/// observed values, never an interpolation.
pub fn nearest_rank(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    sorted[nearest_rank_index(q, sorted.len()) - 1]
}
