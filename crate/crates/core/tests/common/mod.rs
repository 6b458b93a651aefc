#![allow(dead_code)]

use std::path::Path;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use soundtex::io::{encode_wav, SampleFormat, WavSpec};
use soundtex::Waveform;

pub const SR: u32 = 20_000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn white_noise(n: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n).map(|_| StandardNormal.sample(&mut r)).collect()
}

/// Unit clicks at jittered positions around `rate_hz`, identical in every band.
pub fn click_train(n: usize, sr: u32, rate_hz: f64, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    let period = sr as f64 / rate_hz;
    let mut x = vec![0.0; n];
    let mut t = r.random_range(0.0..period);
    while (t as usize) < n {
        x[t as usize] = 1.0;
        t += period * r.random_range(0.5..1.5);
    }
    x
}

/// Gaussian noise with a fully modulated sinusoidal envelope at `fm_hz`.
pub fn am_noise(n: usize, sr: u32, fm_hz: f64, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    let phase = r.random_range(0.0..std::f64::consts::TAU);
    white_noise(n, seed ^ 0x5eed)
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let t = i as f64 / sr as f64;
            v * (1.0 + (std::f64::consts::TAU * fm_hz * t + phase).sin())
        })
        .collect()
}

pub fn wave(samples: Vec<f64>) -> Waveform<f64> {
    Waveform::new(samples, SR).unwrap()
}

/// Isotropic Gaussian blobs: `(points, true labels)`.
pub fn blobs(centers: &[[f64; 2]], per: usize, spread: f64, seed: u64) -> (Array2<f64>, Vec<usize>) {
    let mut r = rng(seed);
    let n = centers.len() * per;
    let mut x = Array2::zeros((n, 2));
    let mut y = Vec::with_capacity(n);
    for (c, center) in centers.iter().enumerate() {
        for i in 0..per {
            let row = c * per + i;
            for d in 0..2 {
                let z: f64 = StandardNormal.sample(&mut r);
                x[[row, d]] = center[d] + spread * z;
            }
            y.push(c);
        }
    }
    (x, y)
}

fn choose2(n: usize) -> f64 {
    (n * n.saturating_sub(1)) as f64 / 2.0
}

/// Adjusted Rand index from the contingency table.
pub fn ari(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    let ka = a.iter().max().map_or(0, |m| m + 1);
    let kb = b.iter().max().map_or(0, |m| m + 1);
    let mut table = vec![vec![0usize; kb]; ka];
    for (&i, &j) in a.iter().zip(b) {
        table[i][j] += 1;
    }
    let index: f64 = table.iter().flatten().map(|&n| choose2(n)).sum();
    let rows: f64 = table.iter().map(|r| choose2(r.iter().sum())).sum();
    let cols: f64 = (0..kb).map(|j| choose2(table.iter().map(|r| r[j]).sum())).sum();
    let total = choose2(a.len());
    let expected = rows * cols / total;
    let max = (rows + cols) / 2.0;
    if max == expected {
        return 1.0;
    }
    (index - expected) / (max - expected)
}

/// Twenty-ish short clips of three sound types written as 16-bit WAVs at
/// 16 kHz, plus a manifest. Returns the manifest path.
pub fn write_corpus(dir: &Path, n_clips: usize) -> std::path::PathBuf {
    let sr = 16_000;
    let dur = 4.5;
    let n = (dur * sr as f64) as usize;
    let mut lines = String::new();
    for i in 0..n_clips {
        let seed = 100 + i as u64;
        let raw = match i % 3 {
            0 => white_noise(n, seed),
            1 => am_noise(n, sr, 4.0, seed),
            _ => click_train(n, sr, 8.0, seed),
        };
        let peak = raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let samples: Vec<f64> = raw.iter().map(|v| 0.5 * v / peak).collect();
        let bytes = encode_wav(
            &samples,
            WavSpec {
                channels: 1,
                sample_rate: sr,
                format: SampleFormat::Pcm16,
            },
        );
        let name = format!("clip{i:02}.wav");
        std::fs::write(dir.join(&name), bytes).unwrap();
        lines.push_str(&format!(
            "{{\"clip_id\":\"clip{i:02}\",\"path\":\"{name}\",\"duration_s\":{dur}}}\n"
        ));
    }
    let manifest = dir.join("manifest.jsonl");
    std::fs::write(&manifest, lines).unwrap();
    manifest
}
