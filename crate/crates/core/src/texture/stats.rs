//! Time-averaged statistics of a cochleagram.

use ndarray::{ArrayView1, Axis};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::dsp::Cochleagram;
use crate::error::{Error, Result};
use crate::scalar::{median, Real};

use super::ModulationFilterBank;

/// Divide the cochleagram by its loudness: the median over frames of the
/// Euclidean norm of the channel vector. Silence (loudness 0) is returned
/// unchanged with loudness 0.
pub fn loudness_and_normalize<T: Real>(c: &Cochleagram<T>) -> (Cochleagram<T>, T) {
    let norms: Vec<T> = c
        .envelopes
        .axis_iter(Axis(1))
        .map(|col| col.iter().map(|&v| v * v).sum::<T>().sqrt())
        .collect();
    let loudness = median(&norms).unwrap_or_else(T::zero);
    let mut out = c.clone();
    if loudness > T::zero() {
        out.envelopes.mapv_inplace(|v| v / loudness);
    }
    (out, loudness)
}

fn mean_std<T: Real>(row: ArrayView1<T>) -> (T, T) {
    let n = T::from_usize_lossy(row.len());
    let mean = row.iter().copied().sum::<T>() / n;
    let var = row.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>() / n;
    (mean, var.sqrt())
}

/// Per-channel mean and population standard deviation.
pub fn marginal_stats<T: Real>(c_norm: &Cochleagram<T>) -> (Vec<T>, Vec<T>) {
    c_norm
        .envelopes
        .axis_iter(Axis(0))
        .map(|row| mean_std(row))
        .unzip()
}

/// Pearson correlations for channel pairs `(j, j + d)`, ordered by offset then `j`.
/// A pair involving a zero-variance channel contributes 0.
pub fn channel_correlations<T: Real>(c_norm: &Cochleagram<T>, offsets: &[usize]) -> Result<Vec<T>> {
    let env = &c_norm.envelopes;
    let (n_ch, n_t) = env.dim();
    if n_t < 2 {
        return Err(Error::invalid_input(format!(
            "correlations need at least 2 frames, got {n_t}"
        )));
    }
    let nt = T::from_usize_lossy(n_t);
    let deviations: Vec<Vec<T>> = env
        .axis_iter(Axis(0))
        .map(|row| {
            let m = row.iter().copied().sum::<T>() / nt;
            row.iter().map(|&v| v - m).collect()
        })
        .collect();
    let sum_sq: Vec<T> = deviations
        .iter()
        .map(|d| d.iter().map(|&v| v * v).sum::<T>())
        .collect();

    let mut rho = Vec::new();
    for &d in offsets {
        for j in 0..n_ch.saturating_sub(d) {
            let k = j + d;
            // sqrt of the product keeps identical series at exactly 1
            let denom = (sum_sq[j] * sum_sq[k]).sqrt();
            if denom == T::zero() {
                rho.push(T::zero());
                continue;
            }
            let cov: T = deviations[j]
                .iter()
                .zip(&deviations[k])
                .map(|(&a, &b)| a * b)
                .sum();
            rho.push((cov / denom).max(-T::one()).min(T::one()));
        }
    }
    Ok(rho)
}

/// Normalised modulation power `sqrt(b_ij / sigma_i^2)` for every channel `i`
/// and modulation filter `j`, channel-major.
///
/// `b_ij` is the mean squared response of the mean-subtracted channel envelope
/// to filter `j`. The filtering is evaluated in the frequency domain and the
/// mean square is taken through Parseval's identity.
pub fn modulation_power<T: Real>(
    c_norm: &Cochleagram<T>,
    mb: &ModulationFilterBank<T>,
    sigma: &[T],
) -> Result<Vec<T>> {
    let (n_ch, n_t) = c_norm.envelopes.dim();
    if n_t < 16 {
        return Err(Error::invalid_input(format!(
            "modulation power needs at least 16 frames, got {n_t}"
        )));
    }
    if mb.env_len() != n_t {
        return Err(Error::invalid_config(format!(
            "modulation bank built for {} frames, cochleagram has {n_t}",
            mb.env_len()
        )));
    }
    if sigma.len() != n_ch {
        return Err(Error::DimensionMismatch {
            expected: n_ch,
            found: sigma.len(),
        });
    }
    let fft = FftPlanner::new().plan_fft_forward(n_t);
    let nt = T::from_usize_lossy(n_t);
    let norm = T::one() / (nt * nt);
    let responses = mb.frequency_responses();
    let mut out = Vec::with_capacity(n_ch * mb.n_filters());
    let mut buf = vec![Complex::new(T::zero(), T::zero()); n_t];

    for (row, &s) in c_norm.envelopes.axis_iter(Axis(0)).zip(sigma) {
        if s == T::zero() {
            out.extend(std::iter::repeat_n(T::zero(), mb.n_filters()));
            continue;
        }
        let mean = row.iter().copied().sum::<T>() / nt;
        for (slot, &v) in buf.iter_mut().zip(row.iter()) {
            *slot = Complex::new(v - mean, T::zero());
        }
        fft.process(&mut buf);
        let power: Vec<T> = buf.iter().map(|c| c.norm_sqr()).collect();
        let var = s * s;
        for gains in responses {
            // bins k and n - k share the one-sided gain at |f|
            let energy: T = power
                .iter()
                .enumerate()
                .map(|(k, &p)| {
                    let g = gains[k.min(n_t - k)];
                    p * g * g
                })
                .sum();
            let b = energy * norm;
            out.push((b / var).sqrt());
        }
    }
    Ok(out)
}
