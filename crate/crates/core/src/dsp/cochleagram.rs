use std::sync::Arc;

use ndarray::Array2;
use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::{CochlearFilterBank, Resampler, Waveform};

/// Envelope sample rate after downsampling, Hz.
pub const ENVELOPE_RATE: u32 = 400;

/// Amplitude compression applied to every envelope sample.
pub const COMPRESSION_EXPONENT: f64 = 0.3;

/// Shortest clip accepted by [`cochleagram`], seconds.
pub const MIN_DURATION_S: f64 = 0.05;

/// Compressed subband envelopes at [`ENVELOPE_RATE`], one row per channel in
/// ascending centre frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochleagram<T> {
    pub envelopes: Array2<T>,
    pub env_rate: u32,
    pub source_rate: u32,
    pub channel_center_freqs: Vec<f64>,
}

impl<T: Real> Cochleagram<T> {
    /// Wrap an existing envelope matrix (channels x time).
    pub fn from_envelopes(envelopes: Array2<T>, center_freqs: Vec<f64>) -> Self {
        Self {
            envelopes,
            env_rate: ENVELOPE_RATE,
            source_rate: ENVELOPE_RATE,
            channel_center_freqs: center_freqs,
        }
    }

    pub fn n_channels(&self) -> usize {
        self.envelopes.nrows()
    }

    pub fn n_frames(&self) -> usize {
        self.envelopes.ncols()
    }
}

/// One forward transform of the waveform, reused by every channel.
struct AnalyticSpectrum<T: Real> {
    spectrum: Vec<Complex<T>>,
    inverse: Arc<dyn Fft<T>>,
    sample_rate: f64,
}

impl<T: Real> AnalyticSpectrum<T> {
    fn new(samples: &[T], sample_rate: u32) -> Self {
        let n = samples.len();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let mut spectrum: Vec<Complex<T>> =
            samples.iter().map(|&s| Complex::new(s, T::zero())).collect();
        forward.process(&mut spectrum);
        Self {
            spectrum,
            inverse,
            sample_rate: sample_rate as f64,
        }
    }

    /// |analytic signal| of the waveform filtered by `channel`.
    fn envelope(&self, bank: &CochlearFilterBank<T>, channel: usize) -> Vec<T> {
        let n = self.spectrum.len();
        let scale = T::one() / T::from_usize_lossy(n);
        let two = T::lit(2.0);
        let mut buf = vec![Complex::new(T::zero(), T::zero()); n];
        // negative-frequency bins stay zero; positive ones are doubled
        for (k, slot) in buf.iter_mut().enumerate().take(n / 2 + 1).skip(1) {
            let g = bank.gain(channel, k as f64 * self.sample_rate / n as f64);
            if g == 0.0 {
                continue;
            }
            let factor = if n.is_multiple_of(2) && k == n / 2 {
                T::lit(g)
            } else {
                two * T::lit(g)
            };
            *slot = self.spectrum[k] * factor;
        }
        self.inverse.process(&mut buf);
        buf.iter().map(|c| c.norm() * scale).collect()
    }
}

fn check_rate<T: Real>(w: &Waveform<T>, bank: &CochlearFilterBank<T>) -> Result<()> {
    if w.sample_rate() != bank.sample_rate() {
        return Err(Error::invalid_input(format!(
            "waveform rate {} Hz does not match filterbank rate {} Hz",
            w.sample_rate(),
            bank.sample_rate()
        )));
    }
    Ok(())
}

/// Hilbert envelope of one cochlear channel at the waveform's own rate.
pub fn subband_envelope<T: Real>(
    w: &Waveform<T>,
    bank: &CochlearFilterBank<T>,
    channel: usize,
) -> Result<Vec<T>> {
    if channel >= bank.n_channels() {
        return Err(Error::IndexOutOfRange {
            index: channel,
            len: bank.n_channels(),
        });
    }
    check_rate(w, bank)?;
    Ok(AnalyticSpectrum::new(w.samples(), w.sample_rate()).envelope(bank, channel))
}

fn compress_and_downsample_with<T: Real>(envelope: &[T], resampler: &Resampler<T>) -> Result<Vec<T>> {
    let exponent = T::lit(COMPRESSION_EXPONENT);
    let mut compressed = Vec::with_capacity(envelope.len());
    for (i, &x) in envelope.iter().enumerate() {
        if x.is_nan() || x < T::zero() {
            return Err(Error::invalid_input(format!(
                "envelope entry {i} is negative or NaN ({x})"
            )));
        }
        compressed.push(x.powf(exponent));
    }
    let mut out = resampler.process(&compressed)?;
    for v in out.iter_mut() {
        if *v < T::zero() {
            *v = T::zero();
        }
    }
    Ok(out)
}

/// Raise every envelope sample to the 0.3 power and resample to 400 Hz.
/// Ringing below zero introduced by the resampler is clamped.
pub fn compress_and_downsample<T: Real>(envelope: &[T], source_rate: u32) -> Result<Vec<T>> {
    let resampler = Resampler::new(source_rate, ENVELOPE_RATE)?;
    compress_and_downsample_with(envelope, &resampler)
}

/// Full waveform to cochleagram transform. Channels are processed in parallel.
pub fn cochleagram<T: Real>(w: &Waveform<T>, bank: &CochlearFilterBank<T>) -> Result<Cochleagram<T>> {
    check_rate(w, bank)?;
    if w.duration_s() < MIN_DURATION_S {
        return Err(Error::invalid_input(format!(
            "clip of {:.4} s is shorter than the {MIN_DURATION_S} s minimum",
            w.duration_s()
        )));
    }
    let analytic = AnalyticSpectrum::new(w.samples(), w.sample_rate());
    let resampler = Resampler::new(w.sample_rate(), ENVELOPE_RATE)?;
    let rows: Vec<Vec<T>> = (0..bank.n_channels())
        .into_par_iter()
        .map(|ch| compress_and_downsample_with(&analytic.envelope(bank, ch), &resampler))
        .collect::<Result<_>>()?;
    let frames = resampler.output_len(w.len());
    let flat: Vec<T> = rows.into_iter().flatten().collect();
    let envelopes = Array2::from_shape_vec((bank.n_channels(), frames), flat)
        .expect("every channel has the same frame count");
    Ok(Cochleagram {
        envelopes,
        env_rate: ENVELOPE_RATE,
        source_rate: w.sample_rate(),
        channel_center_freqs: bank.center_freqs().to_vec(),
    })
}
