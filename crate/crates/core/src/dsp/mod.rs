//! Waveform to cochleagram: cochlear filterbank, analytic-signal envelopes,
//! amplitude compression and envelope-rate resampling.

mod cochleagram;
mod filterbank;
mod resample;
mod waveform;

pub use cochleagram::{
    cochleagram, compress_and_downsample, subband_envelope, Cochleagram, COMPRESSION_EXPONENT,
    ENVELOPE_RATE, MIN_DURATION_S,
};
pub use filterbank::{erb_number, erb_to_hz, make_cochlear_filterbank, CochlearFilterBank};
pub use resample::{resample, resample_slice, Resampler, KAISER_BETA, TAPS_PER_PHASE};
pub use waveform::Waveform;

/// Working sample rate all input audio is converted to before filtering.
pub const WORKING_RATE: u32 = 20_000;
