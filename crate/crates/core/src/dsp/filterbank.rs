//! Half-cosine cochlear filterbank on the ERB-number scale.
//!
//! `n` channels are equally spaced in ERB number between the passband edges.
//! Channel `k` is a half-cosine bump spanning the centres of its two
//! neighbours, so adjacent squared gains sum to one (cos² + sin²). The two
//! outermost channels stay flat from their centre out to the passband edge
//! and then roll off over one ERB step, which extends the unit squared-gain
//! sum over the whole passband.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// ERB number of a frequency in Hz.
pub fn erb_number(hz: f64) -> f64 {
    9.265 * (1.0 + hz / 228.8).ln()
}

/// Inverse of [`erb_number`].
pub fn erb_to_hz(erb: f64) -> f64 {
    228.8 * ((erb / 9.265).exp() - 1.0)
}

#[derive(Debug, Clone)]
pub struct CochlearFilterBank<T> {
    n_channels: usize,
    low_hz: f64,
    high_hz: f64,
    fft_len: usize,
    sample_rate: u32,
    /// ERB-number cutoffs `e_0 = erb(low) .. e_{n+1} = erb(high)`.
    cutoffs: Vec<f64>,
    step: f64,
    center_freqs: Vec<f64>,
    /// Per-channel gain on the one-sided `fft_len` grid (`fft_len / 2 + 1` bins).
    frequency_responses: Vec<Vec<T>>,
}

/// Build the cochlear filterbank.
pub fn make_cochlear_filterbank<T: Real>(
    n_channels: usize,
    low_hz: f64,
    high_hz: f64,
    fft_len: usize,
    sample_rate: u32,
) -> Result<CochlearFilterBank<T>> {
    let nyquist = sample_rate as f64 / 2.0;
    if sample_rate == 0 {
        return Err(Error::invalid_config("sample rate must be positive"));
    }
    if n_channels < 2 {
        return Err(Error::invalid_config("need at least 2 channels"));
    }
    if !(low_hz > 0.0 && low_hz < high_hz) {
        return Err(Error::invalid_config(format!(
            "passband must satisfy 0 < low < high, got [{low_hz}, {high_hz}]"
        )));
    }
    if high_hz > nyquist {
        return Err(Error::invalid_config(format!(
            "high edge {high_hz} Hz exceeds Nyquist {nyquist} Hz"
        )));
    }
    let min_fft = 2.0 * sample_rate as f64 * 0.1;
    if !fft_len.is_power_of_two() || (fft_len as f64) < min_fft {
        return Err(Error::invalid_config(format!(
            "fft_len must be a power of two >= {min_fft}, got {fft_len}"
        )));
    }

    let lo_erb = erb_number(low_hz);
    let hi_erb = erb_number(high_hz);
    let step = (hi_erb - lo_erb) / (n_channels + 1) as f64;
    let mut cutoffs: Vec<f64> = (0..n_channels + 2)
        .map(|i| lo_erb + step * i as f64)
        .collect();
    cutoffs[n_channels + 1] = hi_erb;
    let center_freqs = cutoffs[1..=n_channels].iter().map(|&e| erb_to_hz(e)).collect();

    let mut bank = CochlearFilterBank {
        n_channels,
        low_hz,
        high_hz,
        fft_len,
        sample_rate,
        cutoffs,
        step,
        center_freqs,
        frequency_responses: Vec::new(),
    };
    let bins = fft_len / 2 + 1;
    bank.frequency_responses = (0..n_channels)
        .map(|ch| {
            (0..bins)
                .map(|k| T::lit(bank.gain(ch, k as f64 * sample_rate as f64 / fft_len as f64)))
                .collect()
        })
        .collect();
    Ok(bank)
}

impl<T: Real> CochlearFilterBank<T> {
    pub fn n_channels(&self) -> usize {
        self.n_channels
    }

    pub fn low_hz(&self) -> f64 {
        self.low_hz
    }

    pub fn high_hz(&self) -> f64 {
        self.high_hz
    }

    pub fn fft_len(&self) -> usize {
        self.fft_len
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn center_freqs(&self) -> &[f64] {
        &self.center_freqs
    }

    pub fn frequency_responses(&self) -> &[Vec<T>] {
        &self.frequency_responses
    }

    /// Frequency of bin `k` on the bank's own FFT grid.
    pub fn bin_hz(&self, k: usize) -> f64 {
        k as f64 * self.sample_rate as f64 / self.fft_len as f64
    }

    /// Magnitude response of `channel` at `hz`. Zero at DC.
    ///
    /// Panics if `channel >= n_channels`.
    pub fn gain(&self, channel: usize, hz: f64) -> f64 {
        assert!(channel < self.n_channels, "channel {channel} out of range");
        if hz <= 0.0 {
            return 0.0;
        }
        let e = erb_number(hz);
        let center = self.cutoffs[channel + 1];
        let first = self.cutoffs[0];
        let last = self.cutoffs[self.n_channels + 1];

        if channel == 0 && e <= center {
            return if e >= first {
                1.0
            } else {
                rolloff(first - e, self.step)
            };
        }
        if channel == self.n_channels - 1 && e >= center {
            return if e <= last {
                1.0
            } else {
                rolloff(e - last, self.step)
            };
        }
        rolloff((e - center).abs(), self.step)
    }

    /// Sum over channels of squared gain at `hz`.
    pub fn squared_gain_sum(&self, hz: f64) -> f64 {
        (0..self.n_channels).map(|c| self.gain(c, hz).powi(2)).sum()
    }
}

/// Half-cosine falling from 1 at distance 0 to 0 at distance `step`.
fn rolloff(distance: f64, step: f64) -> f64 {
    if distance >= step {
        0.0
    } else {
        (FRAC_PI_2 * distance / step).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erb_roundtrip() {
        for hz in [20.0, 100.0, 1000.0, 9999.0] {
            assert!((erb_to_hz(erb_number(hz)) - hz).abs() < 1e-9);
        }
    }

    #[test]
    fn completeness_on_grid() {
        let bank = make_cochlear_filterbank::<f64>(32, 20.0, 10_000.0, 4096, 20_000).unwrap();
        assert_eq!(bank.center_freqs().len(), 32);
        for k in 0..=bank.fft_len() / 2 {
            let f = bank.bin_hz(k);
            if (20.0..=10_000.0).contains(&f) {
                let s: f64 = bank
                    .frequency_responses()
                    .iter()
                    .map(|r| r[k] * r[k])
                    .sum();
                assert!((s - 1.0).abs() < 1e-6, "bin {k} ({f} Hz): {s}");
            }
        }
    }

    #[test]
    fn two_channel_ordering() {
        let bank = make_cochlear_filterbank::<f32>(2, 100.0, 400.0, 4096, 20_000).unwrap();
        let c = bank.center_freqs();
        assert!(c[0] < c[1]);
        assert!(c[0] > 100.0 && c[1] < 400.0);
    }

    #[test]
    fn config_errors() {
        let bad = [
            make_cochlear_filterbank::<f64>(32, 20.0, 10_001.0, 4096, 20_000),
            make_cochlear_filterbank::<f64>(1, 20.0, 10_000.0, 4096, 20_000),
            make_cochlear_filterbank::<f64>(32, 0.0, 10_000.0, 4096, 20_000),
            make_cochlear_filterbank::<f64>(32, 500.0, 400.0, 4096, 20_000),
            make_cochlear_filterbank::<f64>(32, 20.0, 10_000.0, 3000, 20_000),
            make_cochlear_filterbank::<f64>(32, 20.0, 10_000.0, 2048, 20_000),
        ];
        for r in bad {
            assert!(matches!(r, Err(Error::InvalidConfig(_))));
        }
    }

    #[test]
    fn centre_gain_is_unity() {
        let bank = make_cochlear_filterbank::<f64>(32, 20.0, 10_000.0, 4096, 20_000).unwrap();
        for (c, &f) in bank.center_freqs().iter().enumerate() {
            assert!((bank.gain(c, f) - 1.0).abs() < 1e-12);
        }
    }
}
