use crate::model::SpinConfig;

/// Counts of each canonical index among `samples`.
pub fn histogram(samples: &[SpinConfig], n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; 1 << n];
    for s in samples {
        counts[s.index() as usize] += 1;
    }
    counts
}

/// `½ Σ_x |p̂(x) - q(x)|` for counts against an exact table.
pub fn tv_from_counts(counts: &[u64], exact: &[f64]) -> f64 {
    assert_eq!(counts.len(), exact.len(), "histogram and table sizes differ");
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.5 * exact.iter().map(|q| q.abs()).sum::<f64>();
    }
    let total = total as f64;
    0.5 * counts
        .iter()
        .zip(exact)
        .map(|(&c, &q)| (c as f64 / total - q).abs())
        .sum::<f64>()
}

/// Total variation distance between the empirical distribution of `samples` and `exact`,
/// a probability table in canonical index order.
pub fn empirical_tv(samples: &[SpinConfig], exact: &[f64]) -> f64 {
    let n = exact.len().trailing_zeros() as usize;
    tv_from_counts(&histogram(samples, n), exact)
}
