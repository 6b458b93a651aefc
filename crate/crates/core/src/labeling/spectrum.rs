use ndarray::Axis;

use crate::dsp::{cochleagram, CochlearFilterBank, Waveform, ENVELOPE_RATE};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Averaging window of the spectrum label, one frame of 30 Hz video.
pub const SPECTRUM_WINDOW_S: f64 = 1.0 / 30.0;

/// Audio on each side of the window fed to the filterbank.
const CONTEXT_S: f64 = 0.5;

/// Mean of each compressed cochlear envelope over the 33.3 ms window centred
/// at `t_center`.
pub fn spectrum_feature<T: Real>(
    w: &Waveform<T>,
    bank: &CochlearFilterBank<T>,
    t_center: f64,
) -> Result<Vec<T>> {
    let half = SPECTRUM_WINDOW_S / 2.0;
    let dur = w.duration_s();
    if !t_center.is_finite() || t_center - half < -1e-9 || t_center + half > dur + 1e-9 {
        return Err(Error::OutOfRange(format!(
            "spectrum window at {t_center} s does not fit in a {dur:.4} s clip"
        )));
    }
    let sr = w.sample_rate() as f64;
    let seg_start = ((t_center - CONTEXT_S) * sr).round().max(0.0) as usize;
    let seg_end = (((t_center + CONTEXT_S) * sr).round() as usize).min(w.len());
    let segment = w.segment(seg_start, seg_end - seg_start)?;
    let c = cochleagram(&segment, bank)?;

    let env_rate = ENVELOPE_RATE as f64;
    let frames = c.n_frames();
    let n = ((SPECTRUM_WINDOW_S * env_rate).round() as usize).clamp(1, frames);
    let rel = t_center - seg_start as f64 / sr;
    let start = (rel * env_rate - n as f64 / 2.0).round().max(0.0) as usize;
    let start = start.min(frames - n);
    let window = c.envelopes.slice(ndarray::s![.., start..start + n]);
    Ok(window
        .mean_axis(Axis(1))
        .expect("window is nonempty")
        .to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::make_cochlear_filterbank;

    fn bank() -> CochlearFilterBank<f64> {
        make_cochlear_filterbank(32, 20.0, 10_000.0, 4096, 20_000).unwrap()
    }

    #[test]
    fn silence_is_zero() {
        let w = Waveform::new(vec![0.0f64; 20_000], 20_000).unwrap();
        let s = spectrum_feature(&w, &bank(), 0.5).unwrap();
        assert_eq!(s, vec![0.0; 32]);
    }

    #[test]
    fn out_of_range() {
        let w = Waveform::new(vec![0.0f64; 20_000], 20_000).unwrap();
        assert!(spectrum_feature(&w, &bank(), 0.01).is_err());
        assert!(spectrum_feature(&w, &bank(), 0.99).is_err());
        assert!(spectrum_feature(&w, &bank(), 0.02).is_ok());
    }
}
