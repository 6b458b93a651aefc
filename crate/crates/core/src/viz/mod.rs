//! Static figures: cochleagram rasters (binary PGM) and per-cluster
//! statistic bar charts (SVG).

mod pgm;
mod svg;

pub use pgm::{render_cochleagram, ColorMap, Normalization, RenderSpec};
pub use svg::{centroid_display_stats, render_centroid_stats, CENTROID_CANVAS};
