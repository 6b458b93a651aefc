use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::labeling::ClusterModel;
use crate::scalar::Real;
use crate::texture::{Rescale, TextureLayout};

/// Width and height of the centroid chart.
pub const CENTROID_CANVAS: (u32, u32) = (640, 240);

/// Per-channel mean and standard deviation of a centroid with the group
/// rescaling undone. The deviation is recovered as `sigma~ * mu`.
pub fn centroid_display_stats<T: Real>(
    centroid: &[T],
    layout: &TextureLayout,
    rescale: Rescale,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if centroid.len() != layout.dim() {
        return Err(Error::DimensionMismatch {
            expected: layout.dim(),
            found: centroid.len(),
        });
    }
    let n = layout.n_channels;
    let f = layout.group_factors(rescale);
    let mu: Vec<f64> = centroid[..n].iter().map(|v| v.to_f64_lossy() / f[0]).collect();
    let sigma = centroid[n..2 * n]
        .iter()
        .zip(&mu)
        .map(|(s, m)| s.to_f64_lossy() / f[1] * m)
        .collect();
    Ok((mu, sigma))
}

/// Bar chart of one centroid's channel means with one-sigma whiskers.
pub fn render_centroid_stats<T: Real>(
    model: &ClusterModel<T>,
    cluster: usize,
    layout: &TextureLayout,
    rescale: Rescale,
) -> Result<String> {
    if cluster >= model.k {
        return Err(Error::IndexOutOfRange {
            index: cluster,
            len: model.k,
        });
    }
    let row: Vec<T> = model.centroids.row(cluster).to_vec();
    let (mu, sigma) = centroid_display_stats(&row, layout, rescale)?;

    let (w, h) = CENTROID_CANVAS;
    let (w, h) = (w as f64, h as f64);
    let (left, right, top, bottom) = (40.0, 10.0, 20.0, 30.0);
    let plot_w = w - left - right;
    let plot_h = h - top - bottom;
    let y_max = mu
        .iter()
        .zip(&sigma)
        .map(|(m, s)| m + s.abs())
        .fold(0.0f64, f64::max);
    let y_max = if y_max > 0.0 { y_max } else { 1.0 };
    let n = mu.len().max(1) as f64;
    let slot = plot_w / n;
    let bar_w = slot * 0.7;
    let y_of = |v: f64| top + plot_h * (1.0 - v / y_max);

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{left}" y="14" font-family="sans-serif" font-size="12">cluster {cluster}: channel mean and std</text>"#
    )
    .unwrap();
    let axis_y = top + plot_h;
    writeln!(
        s,
        r#"<line x1="{left}" y1="{axis_y}" x2="{:.3}" y2="{axis_y}" stroke="black"/>"#,
        w - right
    )
    .unwrap();
    writeln!(
        s,
        r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{axis_y}" stroke="black"/>"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="4" y="{:.3}" font-family="sans-serif" font-size="10">{y_max:.3}</text>"#,
        top + 4.0
    )
    .unwrap();
    for (i, (&m, &sd)) in mu.iter().zip(&sigma).enumerate() {
        let x = left + slot * i as f64 + (slot - bar_w) / 2.0;
        let bar_h = (plot_h * m / y_max).max(0.0);
        writeln!(
            s,
            r#"<rect class="bar" data-channel="{i}" data-value="{m:.6}" x="{x:.3}" y="{:.3}" width="{bar_w:.3}" height="{bar_h:.3}" fill="steelblue"/>"#,
            axis_y - bar_h
        )
        .unwrap();
        let cx = x + bar_w / 2.0;
        writeln!(
            s,
            r#"<line class="whisker" x1="{cx:.3}" y1="{:.3}" x2="{cx:.3}" y2="{:.3}" stroke="black"/>"#,
            y_of((m - sd.abs()).max(0.0)),
            y_of(m + sd.abs())
        )
        .unwrap();
        if i % 4 == 0 {
            writeln!(
                s,
                r#"<text x="{cx:.3}" y="{:.3}" font-family="sans-serif" font-size="9" text-anchor="middle">{i}</text>"#,
                axis_y + 12.0
            )
            .unwrap();
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}
