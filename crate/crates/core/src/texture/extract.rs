use serde::{Deserialize, Serialize};

use crate::dsp::{
    cochleagram, make_cochlear_filterbank, resample, Cochleagram, CochlearFilterBank,
    Waveform, ENVELOPE_RATE, WORKING_RATE,
};
use crate::error::{Error, Result};
use crate::scalar::Real;

use super::{
    assemble_texture, channel_correlations, loudness_and_normalize, marginal_stats,
    modulation_power, ModulationFilterBank, Rescale, SoundTexture, TextureLayout,
    CORRELATION_OFFSETS, DEFAULT_Q,
};

/// Every knob of the texture pipeline. The defaults give the 502-dim vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextureConfig {
    pub sample_rate: u32,
    pub n_channels: usize,
    pub low_hz: f64,
    pub high_hz: f64,
    pub fft_len: usize,
    pub correlation_offsets: Vec<usize>,
    pub n_modulation: usize,
    pub modulation_low_hz: f64,
    pub modulation_high_hz: f64,
    pub modulation_q: f64,
    pub window_s: f64,
    pub rescale: Rescale,
}

impl Default for TextureConfig {
    fn default() -> Self {
        Self {
            sample_rate: WORKING_RATE,
            n_channels: 32,
            low_hz: 20.0,
            high_hz: 10_000.0,
            fft_len: 4096,
            correlation_offsets: CORRELATION_OFFSETS.to_vec(),
            n_modulation: 10,
            modulation_low_hz: 0.5,
            modulation_high_hz: 200.0,
            modulation_q: DEFAULT_Q,
            window_s: 3.75,
            rescale: Rescale::Dim,
        }
    }
}

impl TextureConfig {
    pub fn layout(&self) -> TextureLayout {
        TextureLayout {
            n_channels: self.n_channels,
            correlation_offsets: self.correlation_offsets.clone(),
            n_modulation: self.n_modulation,
        }
    }

    /// Samples per analysis window at the working rate.
    pub fn window_samples(&self) -> usize {
        (self.window_s * self.sample_rate as f64).round() as usize
    }

    /// Envelope frames per analysis window.
    pub fn window_frames(&self) -> usize {
        let n = self.window_samples() as u64 * ENVELOPE_RATE as u64;
        ((n + self.sample_rate as u64 / 2) / self.sample_rate as u64) as usize
    }

    pub fn cochlear_bank<T: Real>(&self) -> Result<CochlearFilterBank<T>> {
        make_cochlear_filterbank(
            self.n_channels,
            self.low_hz,
            self.high_hz,
            self.fft_len,
            self.sample_rate,
        )
    }

    pub fn modulation_bank<T: Real>(&self) -> Result<ModulationFilterBank<T>> {
        ModulationFilterBank::with_q(
            self.n_modulation,
            self.modulation_low_hz,
            self.modulation_high_hz,
            self.window_frames(),
            self.modulation_q,
        )
    }
}

/// Statistics of one cochleagram window, assembled into a texture.
pub fn texture_from_cochleagram<T: Real>(
    c: &Cochleagram<T>,
    mb: &ModulationFilterBank<T>,
    config: &TextureConfig,
) -> Result<SoundTexture<T>> {
    let (c_norm, loudness) = loudness_and_normalize(c);
    let (mu, sigma) = marginal_stats(&c_norm);
    let rho = channel_correlations(&c_norm, &config.correlation_offsets)?;
    let b_tilde = modulation_power(&c_norm, mb, &sigma)?;
    let layout = TextureLayout {
        n_channels: c.n_channels(),
        ..config.layout()
    };
    assemble_texture(&mu, &sigma, &rho, &b_tilde, loudness, &layout, config.rescale)
}

/// Texture of the window of `config.window_s` seconds centred at `t_center`.
/// `w` must already be at the filterbank's sample rate, and the window must
/// lie inside the clip.
pub fn texture_for_window<T: Real>(
    w: &Waveform<T>,
    bank: &CochlearFilterBank<T>,
    mb: &ModulationFilterBank<T>,
    t_center: f64,
    config: &TextureConfig,
) -> Result<SoundTexture<T>> {
    let sr = w.sample_rate() as f64;
    let len = (config.window_s * sr).round() as usize;
    let start = ((t_center - config.window_s / 2.0) * sr).round();
    if !t_center.is_finite() || start < 0.0 || start as usize + len > w.len() {
        return Err(Error::OutOfRange(format!(
            "window of {} s at {t_center} s does not fit in a {:.4} s clip",
            config.window_s,
            w.duration_s()
        )));
    }
    let segment = w.segment(start as usize, len)?;
    let c = cochleagram(&segment, bank)?;
    texture_from_cochleagram(&c, mb, config)
}

/// Owns the filterbanks for a fixed configuration and accepts audio at any
/// sample rate.
#[derive(Debug, Clone)]
pub struct TextureExtractor<T> {
    config: TextureConfig,
    bank: CochlearFilterBank<T>,
    modulation: ModulationFilterBank<T>,
}

impl<T: Real> TextureExtractor<T> {
    pub fn new(config: TextureConfig) -> Result<Self> {
        let bank = config.cochlear_bank()?;
        let modulation = config.modulation_bank()?;
        Ok(Self {
            config,
            bank,
            modulation,
        })
    }

    pub fn config(&self) -> &TextureConfig {
        &self.config
    }

    pub fn cochlear_bank(&self) -> &CochlearFilterBank<T> {
        &self.bank
    }

    pub fn modulation_bank(&self) -> &ModulationFilterBank<T> {
        &self.modulation
    }

    /// Resample to the working rate if needed.
    pub fn prepare(&self, w: &Waveform<T>) -> Result<Waveform<T>> {
        if w.sample_rate() == self.config.sample_rate {
            Ok(w.clone())
        } else {
            resample(w, self.config.sample_rate)
        }
    }

    /// Textures for each window centre of an already prepared waveform.
    pub fn textures(&self, prepared: &Waveform<T>, centers: &[f64]) -> Result<Vec<SoundTexture<T>>> {
        centers
            .iter()
            .map(|&t| texture_for_window(prepared, &self.bank, &self.modulation, t, &self.config))
            .collect()
    }

    pub fn texture_at(&self, w: &Waveform<T>, t_center: f64) -> Result<SoundTexture<T>> {
        let prepared = self.prepare(w)?;
        texture_for_window(&prepared, &self.bank, &self.modulation, t_center, &self.config)
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_window_geometry() {
        let c = TextureConfig::default();
        assert_eq!(c.window_samples(), 75_000);
        assert_eq!(c.window_frames(), 1500);
        assert_eq!(c.layout().dim(), 502);
    }

    #[test]
    fn window_underrun_is_out_of_range() {
        let x = TextureExtractor::<f64>::new(TextureConfig::default()).unwrap();
        let w = Waveform::new(vec![0.0f64; 200_000], 20_000).unwrap();
        assert!(matches!(x.texture_at(&w, 0.1), Err(Error::OutOfRange(_))));
        assert!(matches!(x.texture_at(&w, 9.0), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn silent_window_is_zero_texture() {
        let x = TextureExtractor::<f64>::new(TextureConfig::default()).unwrap();
        let w = Waveform::new(vec![0.0f64; 75_000], 20_000).unwrap();
        let t = x.texture_at(&w, 1.875).unwrap();
        assert_eq!(t.to_vec(), vec![0.0; 502]);
    }
}
