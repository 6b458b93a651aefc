use serde::{Deserialize, Serialize};

use crate::scalar::{median, Real};

/// Scope of the median used to flag outliers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PruneMode {
    /// Compare against the median distance within the example's own cluster.
    #[default]
    PerCluster,
    /// Compare against the median distance over the whole dataset.
    Global,
    Off,
}

/// Flag examples whose centroid distance is strictly above the median of
/// their own cluster.
pub fn prune_outliers<T: Real>(labels: &[usize], distances: &[T]) -> Vec<bool> {
    prune_outliers_with(labels, distances, PruneMode::PerCluster)
}

pub fn prune_outliers_with<T: Real>(labels: &[usize], distances: &[T], mode: PruneMode) -> Vec<bool> {
    assert_eq!(labels.len(), distances.len(), "labels and distances must align");
    match mode {
        PruneMode::Off => vec![false; labels.len()],
        PruneMode::Global => match median(distances) {
            Some(m) => distances.iter().map(|&d| d > m).collect(),
            None => Vec::new(),
        },
        PruneMode::PerCluster => {
            let k = labels.iter().copied().max().map_or(0, |m| m + 1);
            let mut members: Vec<Vec<T>> = vec![Vec::new(); k];
            for (&l, &d) in labels.iter().zip(distances) {
                members[l].push(d);
            }
            let medians: Vec<Option<T>> = members.iter().map(|m| median(m)).collect();
            labels
                .iter()
                .zip(distances)
                .map(|(&l, &d)| medians[l].is_some_and(|m| d > m))
                .collect()
        }
    }
}
