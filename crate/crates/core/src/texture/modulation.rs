use std::f64::consts::FRAC_PI_2;

use crate::dsp::ENVELOPE_RATE;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Quality factor (centre / bandwidth) of every modulation filter.
pub const DEFAULT_Q: f64 = 2.0;

/// Constant-Q bank of modulation filters defined on the FFT grid of an
/// envelope of fixed length at [`ENVELOPE_RATE`].
#[derive(Debug, Clone)]
pub struct ModulationFilterBank<T> {
    center_freqs: Vec<f64>,
    q: f64,
    env_len: usize,
    /// One-sided responses, `env_len / 2 + 1` bins per filter.
    frequency_responses: Vec<Vec<T>>,
}

pub fn make_modulation_filterbank<T: Real>(
    n: usize,
    low_hz: f64,
    high_hz: f64,
    env_len: usize,
) -> Result<ModulationFilterBank<T>> {
    ModulationFilterBank::with_q(n, low_hz, high_hz, env_len, DEFAULT_Q)
}

impl<T: Real> ModulationFilterBank<T> {
    pub fn with_q(n: usize, low_hz: f64, high_hz: f64, env_len: usize, q: f64) -> Result<Self> {
        let nyquist = ENVELOPE_RATE as f64 / 2.0;
        if n == 0 {
            return Err(Error::invalid_config("need at least one modulation filter"));
        }
        if !(low_hz > 0.0 && low_hz < high_hz) {
            return Err(Error::invalid_config(format!(
                "modulation band must satisfy 0 < low < high, got [{low_hz}, {high_hz}]"
            )));
        }
        if high_hz > nyquist {
            return Err(Error::invalid_config(format!(
                "modulation high edge {high_hz} Hz exceeds envelope Nyquist {nyquist} Hz"
            )));
        }
        if q <= 0.5 {
            return Err(Error::invalid_config("Q must exceed 0.5"));
        }
        if env_len == 0 {
            return Err(Error::invalid_config("envelope length must be positive"));
        }
        let center_freqs: Vec<f64> = if n == 1 {
            vec![low_hz]
        } else {
            let ratio = high_hz / low_hz;
            (0..n)
                .map(|k| low_hz * ratio.powf(k as f64 / (n - 1) as f64))
                .collect()
        };
        let mut bank = Self {
            center_freqs,
            q,
            env_len,
            frequency_responses: Vec::new(),
        };
        bank.frequency_responses = (0..n)
            .map(|j| {
                (0..=env_len / 2)
                    .map(|k| T::lit(bank.gain(j, bank.bin_hz(k))))
                    .collect()
            })
            .collect();
        Ok(bank)
    }

    pub fn n_filters(&self) -> usize {
        self.center_freqs.len()
    }

    pub fn center_freqs(&self) -> &[f64] {
        &self.center_freqs
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn env_len(&self) -> usize {
        self.env_len
    }

    pub fn frequency_responses(&self) -> &[Vec<T>] {
        &self.frequency_responses
    }

    pub fn bin_hz(&self, k: usize) -> f64 {
        k as f64 * ENVELOPE_RATE as f64 / self.env_len as f64
    }

    /// Half width of each bump in octaves: the band `fc (1 ± 1/2Q)` measured
    /// on a log2 axis, halved.
    pub fn half_width_octaves(&self) -> f64 {
        let h = 1.0 / (2.0 * self.q);
        ((1.0 + h) / (1.0 - h)).log2() / 2.0
    }

    /// Magnitude response of filter `j` at `hz` (symmetric in sign of `hz`).
    pub fn gain(&self, j: usize, hz: f64) -> f64 {
        let hz = hz.abs();
        if hz == 0.0 {
            return 0.0;
        }
        let u = (hz / self.center_freqs[j]).log2() / self.half_width_octaves();
        if u.abs() >= 1.0 {
            0.0
        } else {
            (FRAC_PI_2 * u).cos()
        }
    }
}
