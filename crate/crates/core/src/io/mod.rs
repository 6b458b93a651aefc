//! File formats: WAV input, the `ASTX` feature store, the JSONL manifest and
//! tab-separated label files.

pub mod labels;
pub mod manifest;
pub mod store;
pub mod wav;

pub use manifest::{clip_seed, sample_windows, window_fits, Manifest, ManifestRecord, WindowSampling, WINDOW_S};
pub use store::{read_header, read_store, write_store, FeatureStore, RowId, StoreError, StoreHeader};
pub use wav::{decode_wav, decode_wav_bytes, encode_wav, write_wav_pcm16, SampleFormat, WavError, WavSpec};
