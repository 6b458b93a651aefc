use crate::dsp::Cochleagram;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColorMap {
    /// Minimum black, maximum white.
    #[default]
    Grayscale,
    /// Range symmetric about zero, zero maps to mid-gray.
    Diverging,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Normalization {
    /// Min-max of the image itself.
    #[default]
    PerImage,
    Fixed { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RenderSpec {
    /// Output size; `None` keeps one pixel per frame / channel.
    pub width: Option<usize>,
    pub height: Option<usize>,
    pub color_map: ColorMap,
    pub normalization: Normalization,
}

/// Render channels as rows (lowest frequency at the bottom) and frames as
/// columns into a binary graymap.
pub fn render_cochleagram<T: Real>(c: &Cochleagram<T>, spec: &RenderSpec) -> Result<Vec<u8>> {
    let (n_ch, n_t) = c.envelopes.dim();
    if n_ch == 0 || n_t == 0 {
        return Err(Error::invalid_input("cannot render an empty cochleagram"));
    }
    let width = spec.width.unwrap_or(n_t);
    let height = spec.height.unwrap_or(n_ch);
    if width == 0 || height == 0 {
        return Err(Error::invalid_input("image dimensions must be positive"));
    }

    let values = c.envelopes.mapv(|v| v.to_f64_lossy());
    let (mut lo, mut hi) = match spec.normalization {
        Normalization::PerImage => values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v))),
        Normalization::Fixed { lo, hi } => (lo, hi),
    };
    if spec.color_map == ColorMap::Diverging {
        let m = lo.abs().max(hi.abs());
        lo = -m;
        hi = m;
    }
    let span = hi - lo;
    let level = |v: f64| -> u8 {
        if span.is_nan() || span <= 0.0 {
            return if spec.color_map == ColorMap::Diverging { 128 } else { 0 };
        }
        (((v - lo) / span).clamp(0.0, 1.0) * 255.0).round() as u8
    };

    let mut out = format!("P5 {width} {height} 255\n").into_bytes();
    out.reserve(width * height);
    for r in 0..height {
        // top image row shows the highest channel
        let ch = n_ch - 1 - (r * n_ch / height);
        for x in 0..width {
            let t = x * n_t / width;
            out.push(level(values[[ch, t]]));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array2};

    fn header_len(b: &[u8]) -> usize {
        b.iter().position(|&c| c == b'\n').unwrap() + 1
    }

    #[test]
    fn zeros_render_black() {
        let c = Cochleagram::from_envelopes(Array2::<f64>::zeros((4, 6)), vec![0.0; 4]);
        let b = render_cochleagram(&c, &RenderSpec::default()).unwrap();
        let h = header_len(&b);
        assert_eq!(&b[..h], b"P5 6 4 255\n");
        assert!(b[h..].iter().all(|&p| p == 0));
        assert_eq!(b.len() - h, 24);
    }

    #[test]
    fn two_by_two_bottom_up() {
        let c = Cochleagram::from_envelopes(array![[0.0f64, 1.0], [1.0, 0.0]], vec![1.0, 2.0]);
        let b = render_cochleagram(&c, &RenderSpec::default()).unwrap();
        let px = &b[header_len(&b)..];
        // file order is top-down; channel 0 is the bottom row
        assert_eq!(px, &[255, 0, 0, 255]);
        let bottom_up: Vec<u8> = px[2..4].iter().chain(&px[0..2]).copied().collect();
        assert_eq!(bottom_up, vec![0, 255, 255, 0]);
    }

    #[test]
    fn resized_and_fixed_range() {
        let c = Cochleagram::from_envelopes(array![[0.0f64, 2.0], [1.0, 4.0]], vec![1.0, 2.0]);
        let spec = RenderSpec {
            width: Some(4),
            height: Some(2),
            normalization: Normalization::Fixed { lo: 0.0, hi: 2.0 },
            ..Default::default()
        };
        let b = render_cochleagram(&c, &spec).unwrap();
        let px = &b[header_len(&b)..];
        assert_eq!(px, &[128, 128, 255, 255, 0, 0, 255, 255]);
    }

    #[test]
    fn empty_rejected() {
        let c = Cochleagram::from_envelopes(Array2::<f64>::zeros((0, 3)), vec![]);
        assert!(render_cochleagram(&c, &RenderSpec::default()).is_err());
    }
}
