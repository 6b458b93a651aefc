//! Sound-texture statistics and self-supervised label spaces for ambient audio.
//!
//! The pipeline turns a waveform into a cochleagram (ERB-spaced half-cosine
//! filterbank, Hilbert envelopes, 0.3 power compression, 400 Hz envelopes),
//! summarises 3.75 s windows into a 502-dimensional texture vector, and
//! derives labels from a corpus of textures: k-means cluster ids with
//! outlier pruning, PCA threshold codes, and short-window channel spectra.
//! A linear probe measures how learnable those labels are.
//!
//! All numeric code is generic over [`Real`] (`f32` or `f64`); the `*64`
//! and `*32` aliases below name the common instantiations.
//!
//! ```no_run
//! use soundtex::{TextureConfig, TextureExtractor64, io};
//!
//! let wav: soundtex::Waveform64 = io::decode_wav("clip.wav")?;
//! let extractor = TextureExtractor64::new(TextureConfig::default())?;
//! let texture = extractor.texture_at(&wav, 5.0)?;
//! assert_eq!(texture.to_vec().len(), 502);
//! # Ok::<(), soundtex::Error>(())
//! ```

pub mod cli;
pub mod dsp;
mod error;
pub mod io;
pub mod labeling;
pub mod probe;
mod scalar;
pub mod texture;
pub mod viz;

pub use error::{Error, Result};
pub use scalar::{median, Real};

pub use dsp::{Cochleagram, CochlearFilterBank, Waveform};
pub use labeling::{BinaryCode, ClusterModel, PcaModel, PruneMode};
pub use probe::LinearModel;
pub use texture::{
    ModulationFilterBank, Rescale, SoundTexture, TextureConfig, TextureExtractor, TextureLayout,
};

pub type Waveform64 = Waveform<f64>;
pub type Waveform32 = Waveform<f32>;
pub type Cochleagram64 = Cochleagram<f64>;
pub type Cochleagram32 = Cochleagram<f32>;
pub type CochlearFilterBank64 = CochlearFilterBank<f64>;
pub type CochlearFilterBank32 = CochlearFilterBank<f32>;
pub type ModulationFilterBank64 = ModulationFilterBank<f64>;
pub type ModulationFilterBank32 = ModulationFilterBank<f32>;
pub type SoundTexture64 = SoundTexture<f64>;
pub type SoundTexture32 = SoundTexture<f32>;
pub type TextureExtractor64 = TextureExtractor<f64>;
pub type TextureExtractor32 = TextureExtractor<f32>;
pub type ClusterModel64 = ClusterModel<f64>;
pub type ClusterModel32 = ClusterModel<f32>;
pub type PcaModel64 = PcaModel<f64>;
pub type PcaModel32 = PcaModel<f32>;
pub type LinearModel64 = LinearModel<f64>;
pub type LinearModel32 = LinearModel<f32>;
