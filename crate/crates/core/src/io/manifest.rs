//! Line-delimited JSON corpus index, one clip per line:
//!
//! ```text
//! {"clip_id":"beach-01","path":"audio/beach-01.wav","duration_s":12.5,"window_centers_s":[2.0,6.1]}
//! ```
//!
//! `window_centers_s` may be omitted or empty, in which case centres are
//! sampled at extraction time.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Analysis window length, seconds.
pub const WINDOW_S: f64 = 3.75;

const EDGE_TOL_S: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub clip_id: String,
    pub path: String,
    pub duration_s: f64,
    #[serde(default)]
    pub window_centers_s: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Manifest {
    pub records: Vec<ManifestRecord>,
}

/// True if a full window centred at `center` fits in `duration_s`.
pub fn window_fits(center: f64, duration_s: f64) -> bool {
    let half = WINDOW_S / 2.0;
    center.is_finite() && center - half >= -EDGE_TOL_S && center + half <= duration_s + EDGE_TOL_S
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self> {
        let mut records = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let rec: ManifestRecord = serde_json::from_str(line)
                .map_err(|e| Error::Manifest(format!("line {}: {e}", i + 1)))?;
            records.push(rec);
        }
        let m = Self { records };
        m.validate()?;
        Ok(m)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Reject duplicate clip ids and window centres that do not admit a full
    /// window.
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for r in &self.records {
            if r.clip_id.is_empty() || r.clip_id.contains(['\t', '\n', '\r']) {
                return Err(Error::Manifest(format!(
                    "clip_id {:?} must be non-empty and free of tabs and line breaks",
                    r.clip_id
                )));
            }
            if !seen.insert(r.clip_id.as_str()) {
                return Err(Error::Manifest(format!("duplicate clip_id {:?}", r.clip_id)));
            }
            if !(r.duration_s.is_finite() && r.duration_s >= 0.0) {
                return Err(Error::Manifest(format!(
                    "clip {:?} has invalid duration {}",
                    r.clip_id, r.duration_s
                )));
            }
            if let Some(c) = r
                .window_centers_s
                .iter()
                .find(|&&c| !window_fits(c, r.duration_s))
            {
                return Err(Error::Manifest(format!(
                    "window center {c} s of clip {:?} does not admit a full {WINDOW_S} s window \
                     in {} s",
                    r.clip_id, r.duration_s
                )));
            }
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        self.records
            .iter()
            .map(|r| serde_json::to_string(r).expect("record serialises") + "\n")
            .collect()
    }

    /// Resolve a record path relative to the manifest's directory.
    pub fn resolve(record: &ManifestRecord, manifest_dir: &Path) -> PathBuf {
        let p = Path::new(&record.path);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            manifest_dir.join(p)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowSampling {
    pub centers: Vec<f64>,
    pub warning: Option<String>,
}

/// `n` sorted window centres drawn uniformly from the admissible interval
/// `[1.875, duration - 1.875]`. Clips shorter than one window yield no
/// centres and a warning.
pub fn sample_windows(duration_s: f64, n: usize, seed: u64) -> WindowSampling {
    let half = WINDOW_S / 2.0;
    if duration_s.is_nan() || duration_s + EDGE_TOL_S < WINDOW_S {
        return WindowSampling {
            centers: Vec::new(),
            warning: Some(format!(
                "clip of {duration_s} s is shorter than the {WINDOW_S} s window; skipped"
            )),
        };
    }
    let lo = half;
    let hi = (duration_s - half).max(lo);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers: Vec<f64> = (0..n)
        .map(|_| {
            if hi > lo {
                rng.random_range(lo..=hi)
            } else {
                lo
            }
        })
        .collect();
    centers.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    WindowSampling {
        centers,
        warning: None,
    }
}

/// Stable per-clip seed (FNV-1a of the clip id mixed with the run seed).
pub fn clip_seed(seed: u64, clip_id: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for b in clip_id.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}
