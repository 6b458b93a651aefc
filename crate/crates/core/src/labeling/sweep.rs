use ndarray::ArrayView2;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::{assign, kmeans_fit, prune_outliers_with, ClusterModel, KMeansConfig, PruneMode};

#[derive(Debug, Clone)]
pub struct SweepEntry<T> {
    pub k: usize,
    pub model: ClusterModel<T>,
    /// Rows kept after outlier pruning.
    pub retained: usize,
}

/// Fit and prune once per cluster count. Each k keeps the lowest-inertia fit
/// over `restarts` seeds (`seed`, `seed + 1`, ...).
pub fn cluster_count_sweep<T: Real>(
    x: ArrayView2<T>,
    ks: &[usize],
    seed: u64,
    restarts: usize,
    mode: PruneMode,
) -> Result<Vec<SweepEntry<T>>> {
    if let Some(&bad) = ks.iter().find(|&&k| k < 2 || k > x.nrows()) {
        return Err(Error::invalid_input(format!(
            "cluster count {bad} outside [2, {}]",
            x.nrows()
        )));
    }
    ks.iter()
        .map(|&k| {
            let mut best: Option<ClusterModel<T>> = None;
            for r in 0..restarts.max(1) as u64 {
                let m = kmeans_fit(x, &KMeansConfig::new(k, seed.wrapping_add(r)))?;
                if best.as_ref().is_none_or(|b| m.inertia < b.inertia) {
                    best = Some(m);
                }
            }
            let model = best.expect("at least one restart");
            let (labels, dist) = assign(&model, x)?;
            let retained = prune_outliers_with(&labels, &dist, mode)
                .iter()
                .filter(|p| !**p)
                .count();
            Ok(SweepEntry { k, model, retained })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    #[test]
    fn rejects_k_above_n() {
        let x = Array2::<f64>::zeros((4, 2));
        assert!(cluster_count_sweep(x.view(), &[2, 5], 0, 1, PruneMode::PerCluster).is_err());
        assert!(cluster_count_sweep(x.view(), &[1], 0, 1, PruneMode::PerCluster).is_err());
    }
}
