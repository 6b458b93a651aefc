//! Cochleagram window to sound-texture vector.

mod extract;
mod modulation;
mod stats;
mod vector;

pub use extract::{texture_for_window, texture_from_cochleagram, TextureConfig, TextureExtractor};
pub use modulation::{make_modulation_filterbank, ModulationFilterBank, DEFAULT_Q};
pub use stats::{channel_correlations, loudness_and_normalize, marginal_stats, modulation_power};
pub use vector::{assemble_texture, Rescale, SoundTexture, TextureLayout};

/// Channel offsets whose pairwise correlations enter the texture.
pub const CORRELATION_OFFSETS: [usize; 4] = [1, 2, 3, 5];

/// Length of the default texture vector.
pub const TEXTURE_DIM: usize = 502;
