//! Rational-ratio polyphase resampling with a Kaiser-windowed sinc kernel.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::Waveform;

/// Kaiser window shape parameter.
pub const KAISER_BETA: f64 = 8.0;

/// Taps per polyphase branch when no anti-aliasing stretch is needed.
/// On decimation the kernel is widened by the decimation factor so the
/// number of zero crossings spanned stays constant.
pub const TAPS_PER_PHASE: usize = 64;

/// Precomputed polyphase filter for a fixed `source_rate -> target_rate`.
#[derive(Debug, Clone)]
pub struct Resampler<T> {
    up: u64,
    down: u64,
    half_width: usize,
    /// `up` branches of `2 * half_width` taps each.
    phases: Vec<Vec<T>>,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Zeroth-order modified Bessel function of the first kind (power series).
fn bessel_i0(x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= (half / k as f64) * (half / k as f64);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

fn kaiser(u: f64, beta: f64) -> f64 {
    if u.abs() >= 1.0 {
        return 0.0;
    }
    bessel_i0(beta * (1.0 - u * u).sqrt()) / bessel_i0(beta)
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

impl<T: Real> Resampler<T> {
    pub fn new(source_rate: u32, target_rate: u32) -> Result<Self> {
        if source_rate == 0 || target_rate == 0 {
            return Err(Error::invalid_config("sample rates must be positive"));
        }
        let g = gcd(source_rate as u64, target_rate as u64);
        let up = target_rate as u64 / g;
        let down = source_rate as u64 / g;
        // cutoff relative to the input Nyquist
        let cutoff = (up as f64 / down as f64).min(1.0);
        let half_width = ((TAPS_PER_PHASE / 2) as f64 / cutoff).ceil() as usize;

        let phases = (0..up)
            .map(|p| {
                let frac = p as f64 / up as f64;
                let mut taps: Vec<f64> = (0..2 * half_width)
                    .map(|i| {
                        let j = i as f64 - (half_width as f64 - 1.0);
                        let x = frac - j;
                        cutoff * sinc(cutoff * x) * kaiser(x / half_width as f64, KAISER_BETA)
                    })
                    .collect();
                let sum: f64 = taps.iter().sum();
                taps.iter_mut().for_each(|t| *t /= sum);
                taps.into_iter().map(T::lit).collect()
            })
            .collect();

        Ok(Self {
            up,
            down,
            half_width,
            phases,
        })
    }

    pub fn ratio(&self) -> (u64, u64) {
        (self.up, self.down)
    }

    pub fn is_identity(&self) -> bool {
        self.up == 1 && self.down == 1
    }

    /// Number of output samples produced for `input_len` input samples.
    pub fn output_len(&self, input_len: usize) -> usize {
        let n = input_len as u128 * self.up as u128;
        ((n + self.down as u128 / 2) / self.down as u128) as usize
    }

    /// Resample a raw sample slice. Requires at least two samples unless the
    /// ratio is the identity.
    pub fn process(&self, input: &[T]) -> Result<Vec<T>> {
        if input.is_empty() {
            return Err(Error::invalid_input("cannot resample an empty signal"));
        }
        if self.is_identity() {
            return Ok(input.to_vec());
        }
        if input.len() < 2 {
            return Err(Error::invalid_input(
                "signal too short for the interpolation kernel",
            ));
        }
        let n_in = input.len() as i64;
        let h = self.half_width as i64;
        let out_len = self.output_len(input.len());
        let mut out = Vec::with_capacity(out_len);
        for n in 0..out_len as u64 {
            let pos = n * self.down;
            let base = (pos / self.up) as i64;
            let taps = &self.phases[(pos % self.up) as usize];
            let first = base - (h - 1);
            let lo = first.max(0);
            let hi = (first + 2 * h).min(n_in);
            let tap_lo = (lo - first) as usize;
            let tap_hi = (hi - first) as usize;
            let window = &taps[tap_lo..tap_hi];
            let xs = &input[lo as usize..hi as usize];
            let acc: T = window.iter().zip(xs).map(|(&w, &x)| w * x).sum();
            if tap_lo == 0 && tap_hi == taps.len() {
                out.push(acc);
            } else {
                // kernel hangs over an edge: renormalise by the in-range mass
                let mass: T = window.iter().copied().sum();
                out.push(if mass.abs() > T::epsilon() {
                    acc / mass
                } else {
                    acc
                });
            }
        }
        Ok(out)
    }
}

/// Resample a slice from `source_rate` to `target_rate`.
pub fn resample_slice<T: Real>(input: &[T], source_rate: u32, target_rate: u32) -> Result<Vec<T>> {
    Resampler::new(source_rate, target_rate)?.process(input)
}

/// Band-limited conversion of a waveform to `target_rate`.
pub fn resample<T: Real>(w: &Waveform<T>, target_rate: u32) -> Result<Waveform<T>> {
    let out = resample_slice(w.samples(), w.sample_rate(), target_rate)?;
    Waveform::new(out, target_rate)
}
