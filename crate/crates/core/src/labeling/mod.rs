//! Self-supervised label spaces over sound textures: k-means cluster ids
//! with outlier pruning, PCA threshold codes, and short-window spectra.

mod binary;
mod eigen;
mod kmeans;
mod pca;
mod prune;
mod spectrum;
mod sweep;

pub use binary::{binary_encode, BinaryCode};
pub use eigen::symmetric_eigen;
pub use kmeans::{assign, kmeans_fit, ClusterModel, KMeansConfig};
pub use pca::{pca_fit, PcaModel};
pub use prune::{prune_outliers, prune_outliers_with, PruneMode};
pub use spectrum::{spectrum_feature, SPECTRUM_WINDOW_S};
pub use sweep::{cluster_count_sweep, SweepEntry};

use serde::{Deserialize, Serialize};

/// Which label space a [`Label`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelKind {
    Cluster,
    Binary,
    Spectrum,
}

/// Payload of a label; exactly one variant per kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelPayload {
    Cluster(usize),
    Binary(BinaryCode),
    Spectrum(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Label {
    pub payload: LabelPayload,
    pub pruned: bool,
}

impl Label {
    pub fn kind(&self) -> LabelKind {
        match self.payload {
            LabelPayload::Cluster(_) => LabelKind::Cluster,
            LabelPayload::Binary(_) => LabelKind::Binary,
            LabelPayload::Spectrum(_) => LabelKind::Spectrum,
        }
    }

    pub fn cluster_id(&self) -> Option<usize> {
        match self.payload {
            LabelPayload::Cluster(id) => Some(id),
            _ => None,
        }
    }

    pub fn code(&self) -> Option<BinaryCode> {
        match self.payload {
            LabelPayload::Binary(c) => Some(c),
            _ => None,
        }
    }

    pub fn spectrum(&self) -> Option<&[f64]> {
        match &self.payload {
            LabelPayload::Spectrum(s) => Some(s),
            _ => None,
        }
    }
}
