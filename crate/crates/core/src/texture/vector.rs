use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::CORRELATION_OFFSETS;

/// Per-group rescaling applied when a texture is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rescale {
    /// Multiply each group by `1 / dim`.
    #[default]
    Dim,
    /// Multiply each group by `1 / sqrt(dim)`.
    SqrtDim,
}

impl Rescale {
    pub fn factor(self, dim: usize) -> f64 {
        match self {
            Rescale::Dim => 1.0 / dim as f64,
            Rescale::SqrtDim => 1.0 / (dim as f64).sqrt(),
        }
    }
}

/// Group sizes of a texture vector `[mu, sigma~, rho, b~, l]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextureLayout {
    pub n_channels: usize,
    pub correlation_offsets: Vec<usize>,
    pub n_modulation: usize,
}

impl Default for TextureLayout {
    fn default() -> Self {
        Self {
            n_channels: 32,
            correlation_offsets: CORRELATION_OFFSETS.to_vec(),
            n_modulation: 10,
        }
    }
}

impl TextureLayout {
    pub fn n_correlations(&self) -> usize {
        self.correlation_offsets
            .iter()
            .map(|&d| self.n_channels.saturating_sub(d))
            .sum()
    }

    /// Sizes of the five groups in vector order.
    pub fn group_dims(&self) -> [usize; 5] {
        [
            self.n_channels,
            self.n_channels,
            self.n_correlations(),
            self.n_channels * self.n_modulation,
            1,
        ]
    }

    pub fn dim(&self) -> usize {
        self.group_dims().iter().sum()
    }

    /// Start offset of each group in the flat vector.
    pub fn group_offsets(&self) -> [usize; 5] {
        let d = self.group_dims();
        let mut off = [0; 5];
        for i in 1..5 {
            off[i] = off[i - 1] + d[i - 1];
        }
        off
    }

    /// Rescale factor for each group. Loudness is a single entry, so its
    /// factor is 1 under either scheme.
    pub fn group_factors(&self, rescale: Rescale) -> [f64; 5] {
        self.group_dims().map(|d| rescale.factor(d))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoundTexture<T> {
    pub mu: Vec<T>,
    pub sigma_tilde: Vec<T>,
    pub rho: Vec<T>,
    /// Channel-major `n_channels x n_modulation`.
    pub b_tilde: Vec<T>,
    pub loudness: T,
    pub group_scaled: bool,
    pub rescale: Rescale,
}

/// Combine the statistic groups into a texture, normalising the standard
/// deviations by the means and rescaling each group by its dimension.
pub fn assemble_texture<T: Real>(
    mu: &[T],
    sigma: &[T],
    rho: &[T],
    b_tilde: &[T],
    loudness: T,
    layout: &TextureLayout,
    rescale: Rescale,
) -> Result<SoundTexture<T>> {
    let dims = layout.group_dims();
    for (expected, found) in [
        (dims[0], mu.len()),
        (dims[1], sigma.len()),
        (dims[2], rho.len()),
        (dims[3], b_tilde.len()),
    ] {
        if expected != found {
            return Err(Error::invalid_input(format!(
                "texture group has {found} entries, layout expects {expected}"
            )));
        }
    }
    let sigma_tilde = mu
        .iter()
        .zip(sigma)
        .map(|(&m, &s)| {
            if m == T::zero() {
                T::zero()
            } else {
                (s * s / (m * m)).sqrt()
            }
        })
        .collect();
    let raw = SoundTexture {
        mu: mu.to_vec(),
        sigma_tilde,
        rho: rho.to_vec(),
        b_tilde: b_tilde.to_vec(),
        loudness,
        group_scaled: false,
        rescale,
    };
    Ok(raw.scaled(layout))
}

impl<T: Real> SoundTexture<T> {
    pub fn dim(&self) -> usize {
        self.mu.len() + self.sigma_tilde.len() + self.rho.len() + self.b_tilde.len() + 1
    }

    fn map_groups(&self, layout: &TextureLayout, invert: bool) -> Self {
        let f = layout.group_factors(self.rescale).map(|x| {
            if invert {
                T::lit(1.0 / x)
            } else {
                T::lit(x)
            }
        });
        Self {
            mu: self.mu.iter().map(|&v| v * f[0]).collect(),
            sigma_tilde: self.sigma_tilde.iter().map(|&v| v * f[1]).collect(),
            rho: self.rho.iter().map(|&v| v * f[2]).collect(),
            b_tilde: self.b_tilde.iter().map(|&v| v * f[3]).collect(),
            loudness: self.loudness * f[4],
            group_scaled: !invert,
            rescale: self.rescale,
        }
    }

    /// Apply the per-group rescaling (no-op if already applied).
    pub fn scaled(&self, layout: &TextureLayout) -> Self {
        if self.group_scaled {
            self.clone()
        } else {
            self.map_groups(layout, false)
        }
    }

    /// Undo the per-group rescaling (no-op if not applied).
    pub fn unscaled(&self, layout: &TextureLayout) -> Self {
        if self.group_scaled {
            self.map_groups(layout, true)
        } else {
            self.clone()
        }
    }

    /// Flat `[mu, sigma~, rho, b~, l]`.
    pub fn to_vec(&self) -> Vec<T> {
        let mut v = Vec::with_capacity(self.dim());
        v.extend_from_slice(&self.mu);
        v.extend_from_slice(&self.sigma_tilde);
        v.extend_from_slice(&self.rho);
        v.extend_from_slice(&self.b_tilde);
        v.push(self.loudness);
        v
    }

    /// Split a flat vector back into groups.
    pub fn from_slice(
        v: &[T],
        layout: &TextureLayout,
        rescale: Rescale,
        group_scaled: bool,
    ) -> Result<Self> {
        if v.len() != layout.dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.dim(),
                found: v.len(),
            });
        }
        let o = layout.group_offsets();
        Ok(Self {
            mu: v[o[0]..o[1]].to_vec(),
            sigma_tilde: v[o[1]..o[2]].to_vec(),
            rho: v[o[2]..o[3]].to_vec(),
            b_tilde: v[o[3]..o[4]].to_vec(),
            loudness: v[o[4]],
            group_scaled,
            rescale,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_layout_is_502() {
        let l = TextureLayout::default();
        assert_eq!(l.group_dims(), [32, 32, 117, 320, 1]);
        assert_eq!(l.dim(), 502);
    }

    #[test]
    fn zero_components() {
        let l = TextureLayout::default();
        let t = assemble_texture(
            &[0.0f64; 32],
            &[0.0; 32],
            &[0.0; 117],
            &[0.0; 320],
            0.0,
            &l,
            Rescale::Dim,
        )
        .unwrap();
        assert!(t.group_scaled);
        assert_eq!(t.to_vec(), vec![0.0; 502]);
    }

    #[test]
    fn rho_entry_scaled() {
        let l = TextureLayout::default();
        let mut rho = [0.0f64; 117];
        rho[5] = 1.0;
        let t = assemble_texture(&[1.0; 32], &[0.5; 32], &rho, &[0.0; 320], 2.0, &l, Rescale::Dim)
            .unwrap();
        assert!((t.rho[5] - 1.0 / 117.0).abs() < 1e-15);
        assert!((t.rho[5] - 0.008547).abs() < 1e-6);
        assert!((t.sigma_tilde[0] - 0.5 / 32.0).abs() < 1e-15);
        assert_eq!(t.loudness, 2.0);

        let s = assemble_texture(&[1.0; 32], &[0.5; 32], &rho, &[0.0; 320], 2.0, &l, Rescale::SqrtDim)
            .unwrap();
        assert!((s.rho[5] - 1.0 / 117f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let l = TextureLayout::default();
        let r = assemble_texture(&[0.0f64; 31], &[0.0; 32], &[0.0; 117], &[0.0; 320], 0.0, &l, Rescale::Dim);
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn zero_mean_sigma_tilde() {
        let l = TextureLayout {
            n_channels: 2,
            correlation_offsets: vec![1],
            n_modulation: 1,
        };
        let t = assemble_texture(&[0.0f64, 2.0], &[1.0, 1.0], &[0.0], &[0.0, 0.0], 1.0, &l, Rescale::Dim)
            .unwrap();
        assert_eq!(t.sigma_tilde, vec![0.0, 0.25]);
    }

    #[test]
    fn flat_roundtrip_and_unscale() {
        let l = TextureLayout::default();
        let v: Vec<f64> = (0..502).map(|i| i as f64 * 0.01).collect();
        let t = SoundTexture::from_slice(&v, &l, Rescale::Dim, true).unwrap();
        assert_eq!(t.to_vec(), v);
        let u = t.unscaled(&l);
        assert!((u.mu[1] - 0.01 * 32.0).abs() < 1e-12);
        assert!((u.rho[0] - v[64] * 117.0).abs() < 1e-12);
        assert_eq!(u.loudness, v[501]);
    }
}
