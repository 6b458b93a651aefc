use crate::error::{Error, Result};
use crate::scalar::Real;

/// Mono audio with its sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform<T> {
    samples: Vec<T>,
    sample_rate: u32,
}

impl<T: Real> Waveform<T> {
    pub fn new(samples: Vec<T>, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::invalid_input("sample rate must be positive"));
        }
        if samples.is_empty() {
            return Err(Error::invalid_input("waveform has no samples"));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::invalid_input(format!("non-finite sample at index {i}")));
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    /// Multiply every sample by `gain`.
    pub fn scaled(&self, gain: T) -> Self {
        Self {
            samples: self.samples.iter().map(|&s| s * gain).collect(),
            sample_rate: self.sample_rate,
        }
    }

    /// Copy out `len` samples starting at `start`.
    pub fn segment(&self, start: usize, len: usize) -> Result<Self> {
        let end = start
            .checked_add(len)
            .filter(|&e| e <= self.samples.len() && len > 0)
            .ok_or_else(|| {
                Error::OutOfRange(format!(
                    "segment [{start}, {start}+{len}) outside waveform of {} samples",
                    self.samples.len()
                ))
            })?;
        Ok(Self {
            samples: self.samples[start..end].to_vec(),
            sample_rate: self.sample_rate,
        })
    }

    /// Convert the sample type, e.g. `f64` to `f32`.
    pub fn cast<U: Real>(&self) -> Waveform<U> {
        Waveform {
            samples: self
                .samples
                .iter()
                .map(|s| U::lit(s.to_f64_lossy()))
                .collect(),
            sample_rate: self.sample_rate,
        }
    }
}
