//! Minimal RIFF/WAVE reader (PCM 16/24-bit, IEEE float 32-bit) and writers
//! for the same formats.

use std::path::Path;

use thiserror::Error;

use crate::dsp::Waveform;
use crate::error::Result;
use crate::scalar::Real;

const FORMAT_PCM: u16 = 0x0001;
const FORMAT_IEEE_FLOAT: u16 = 0x0003;
const FORMAT_EXTENSIBLE: u16 = 0xFFFE;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WavError {
    #[error("bad container magic")]
    BadMagic,
    #[error("missing WAVE form type")]
    NotWave,
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("missing fmt chunk")]
    MissingFmt,
    #[error("missing data chunk")]
    MissingData,
    #[error("unsupported codec (format tag {0:#06x})")]
    UnsupportedCodec(u16),
    #[error("unsupported bit depth {bits} for format tag {format:#06x}")]
    UnsupportedBitDepth { format: u16, bits: u16 },
    #[error("unsupported channel count {0}")]
    UnsupportedChannels(u16),
    #[error("truncated data chunk: header declares {declared} bytes, {available} present")]
    TruncatedData { declared: usize, available: usize },
    #[error("data chunk holds no samples")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleFormat {
    Pcm16,
    Pcm24,
    Float32,
}

impl SampleFormat {
    fn bytes(self) -> usize {
        match self {
            SampleFormat::Pcm16 => 2,
            SampleFormat::Pcm24 => 3,
            SampleFormat::Float32 => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WavSpec {
    pub channels: u16,
    pub sample_rate: u32,
    pub format: SampleFormat,
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

fn parse_fmt(body: &[u8]) -> Result<WavSpec, WavError> {
    if body.len() < 16 {
        return Err(WavError::MalformedHeader(format!(
            "fmt chunk is {} bytes, need 16",
            body.len()
        )));
    }
    let mut tag = u16_at(body, 0);
    let channels = u16_at(body, 2);
    let sample_rate = u32_at(body, 4);
    let block_align = u16_at(body, 12);
    let bits = u16_at(body, 14);
    if tag == FORMAT_EXTENSIBLE {
        if body.len() < 40 {
            return Err(WavError::MalformedHeader(
                "extensible fmt chunk shorter than 40 bytes".into(),
            ));
        }
        // first two bytes of the sub-format GUID carry the real tag
        tag = u16_at(body, 24);
    }
    let format = match (tag, bits) {
        (FORMAT_PCM, 16) => SampleFormat::Pcm16,
        (FORMAT_PCM, 24) => SampleFormat::Pcm24,
        (FORMAT_IEEE_FLOAT, 32) => SampleFormat::Float32,
        (FORMAT_PCM, _) | (FORMAT_IEEE_FLOAT, _) => {
            return Err(WavError::UnsupportedBitDepth { format: tag, bits })
        }
        _ => return Err(WavError::UnsupportedCodec(tag)),
    };
    if !(1..=2).contains(&channels) {
        return Err(WavError::UnsupportedChannels(channels));
    }
    if sample_rate == 0 {
        return Err(WavError::MalformedHeader("sample rate is zero".into()));
    }
    if block_align as usize != channels as usize * format.bytes() {
        return Err(WavError::MalformedHeader(format!(
            "block align {block_align} inconsistent with {channels} x {bits}-bit"
        )));
    }
    Ok(WavSpec {
        channels,
        sample_rate,
        format,
    })
}

/// Parse a WAV byte buffer into interleaved-frame-averaged mono samples.
pub fn decode_wav_bytes<T: Real>(bytes: &[u8]) -> Result<Waveform<T>, WavError> {
    if bytes.len() < 12 {
        return Err(if bytes.len() >= 4 && &bytes[0..4] != b"RIFF" {
            WavError::BadMagic
        } else {
            WavError::MalformedHeader("file shorter than the RIFF header".into())
        });
    }
    if &bytes[0..4] != b"RIFF" {
        return Err(WavError::BadMagic);
    }
    if &bytes[8..12] != b"WAVE" {
        return Err(WavError::NotWave);
    }

    let mut spec = None;
    let mut data: Option<&[u8]> = None;
    let mut pos = 12;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32_at(bytes, pos + 4) as usize;
        let body_start = pos + 8;
        let available = bytes.len() - body_start;
        match id {
            b"fmt " => {
                if size > available {
                    return Err(WavError::MalformedHeader("fmt chunk runs past end of file".into()));
                }
                spec = Some(parse_fmt(&bytes[body_start..body_start + size])?);
            }
            b"data" => {
                if size > available {
                    return Err(WavError::TruncatedData {
                        declared: size,
                        available,
                    });
                }
                data = Some(&bytes[body_start..body_start + size]);
            }
            _ => {}
        }
        if data.is_some() && spec.is_some() {
            break;
        }
        // chunks are word aligned
        pos = body_start.saturating_add(size).saturating_add(size & 1);
    }
    let spec = spec.ok_or(WavError::MissingFmt)?;
    let data = data.ok_or(WavError::MissingData)?;

    let width = spec.format.bytes();
    let frame = width * spec.channels as usize;
    let frames = data.len() / frame;
    if frames == 0 {
        return Err(WavError::Empty);
    }
    let decode = |at: usize| -> f64 {
        let s = &data[at..at + width];
        match spec.format {
            SampleFormat::Pcm16 => i16::from_le_bytes([s[0], s[1]]) as f64 / 32_768.0,
            SampleFormat::Pcm24 => {
                let v = i32::from_le_bytes([0, s[0], s[1], s[2]]) >> 8;
                v as f64 / 8_388_608.0
            }
            SampleFormat::Float32 => f32::from_le_bytes([s[0], s[1], s[2], s[3]]) as f64,
        }
    };
    let samples: Vec<T> = (0..frames)
        .map(|f| {
            let base = f * frame;
            let sum: f64 = (0..spec.channels as usize).map(|c| decode(base + c * width)).sum();
            T::lit(sum / spec.channels as f64)
        })
        .collect();
    Waveform::new(samples, spec.sample_rate).map_err(|_| {
        WavError::MalformedHeader("decoded samples are not finite".into())
    })
}

/// Read and decode a WAV file.
pub fn decode_wav<T: Real>(path: impl AsRef<Path>) -> Result<Waveform<T>> {
    let bytes = std::fs::read(path)?;
    Ok(decode_wav_bytes(&bytes)?)
}

/// Encode interleaved samples (`channels` per frame) as a WAV byte buffer.
/// Integer formats clamp to the representable range.
pub fn encode_wav(interleaved: &[f64], spec: WavSpec) -> Vec<u8> {
    let (tag, bits) = match spec.format {
        SampleFormat::Pcm16 => (FORMAT_PCM, 16u16),
        SampleFormat::Pcm24 => (FORMAT_PCM, 24),
        SampleFormat::Float32 => (FORMAT_IEEE_FLOAT, 32),
    };
    let width = spec.format.bytes();
    let block_align = spec.channels as usize * width;
    let data_len = interleaved.len() * width;
    let mut out = Vec::with_capacity(44 + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&((36 + data_len) as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&tag.to_le_bytes());
    out.extend_from_slice(&spec.channels.to_le_bytes());
    out.extend_from_slice(&spec.sample_rate.to_le_bytes());
    out.extend_from_slice(&((spec.sample_rate as usize * block_align) as u32).to_le_bytes());
    out.extend_from_slice(&(block_align as u16).to_le_bytes());
    out.extend_from_slice(&bits.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for &x in interleaved {
        match spec.format {
            SampleFormat::Pcm16 => {
                let v = (x * 32_768.0).round().clamp(-32_768.0, 32_767.0) as i16;
                out.extend_from_slice(&v.to_le_bytes());
            }
            SampleFormat::Pcm24 => {
                let v = (x * 8_388_608.0).round().clamp(-8_388_608.0, 8_388_607.0) as i32;
                out.extend_from_slice(&v.to_le_bytes()[0..3]);
            }
            SampleFormat::Float32 => out.extend_from_slice(&(x as f32).to_le_bytes()),
        }
    }
    out
}

/// Write a mono waveform as 16-bit PCM.
pub fn write_wav_pcm16<T: Real>(path: impl AsRef<Path>, w: &Waveform<T>) -> Result<()> {
    let samples: Vec<f64> = w.samples().iter().map(|s| s.to_f64_lossy()).collect();
    let bytes = encode_wav(
        &samples,
        WavSpec {
            channels: 1,
            sample_rate: w.sample_rate(),
            format: SampleFormat::Pcm16,
        },
    );
    std::fs::write(path, bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(channels: u16, format: SampleFormat) -> WavSpec {
        WavSpec {
            channels,
            sample_rate: 8000,
            format,
        }
    }

    #[test]
    fn pcm16_scaling() {
        let bytes = encode_wav(&[0.0, 0.5, -1.0], spec(1, SampleFormat::Pcm16));
        let w: Waveform<f64> = decode_wav_bytes(&bytes).unwrap();
        assert_eq!(w.samples(), &[0.0, 0.5, -1.0]);
        assert_eq!(w.sample_rate(), 8000);
    }

    #[test]
    fn stereo_downmix() {
        let bytes = encode_wav(&[1.0, 0.0, 1.0, 0.0], spec(2, SampleFormat::Float32));
        let w: Waveform<f64> = decode_wav_bytes(&bytes).unwrap();
        assert_eq!(w.samples(), &[0.5, 0.5]);
    }

    #[test]
    fn rifx_rejected() {
        let mut bytes = encode_wav(&[0.0], spec(1, SampleFormat::Pcm16));
        bytes[3] = b'X';
        let err = decode_wav_bytes::<f64>(&bytes).unwrap_err();
        assert_eq!(err, WavError::BadMagic);
        assert_eq!(err.to_string(), "bad container magic");
    }

    #[test]
    fn compressed_codec_rejected() {
        let mut bytes = encode_wav(&[0.0, 0.1], spec(1, SampleFormat::Pcm16));
        bytes[20] = 0x55; // MPEG layer 3
        assert_eq!(
            decode_wav_bytes::<f64>(&bytes).unwrap_err(),
            WavError::UnsupportedCodec(0x55)
        );
    }

    #[test]
    fn truncated_data() {
        let bytes = encode_wav(&[0.0; 10], spec(1, SampleFormat::Pcm16));
        let cut = &bytes[..bytes.len() - 4];
        assert!(matches!(
            decode_wav_bytes::<f64>(cut),
            Err(WavError::TruncatedData { declared: 20, available: 16 })
        ));
    }

    #[test]
    fn missing_chunks() {
        let mut bytes = b"RIFF\x04\x00\x00\x00WAVE".to_vec();
        assert_eq!(decode_wav_bytes::<f64>(&bytes).unwrap_err(), WavError::MissingFmt);
        let full = encode_wav(&[0.0], spec(1, SampleFormat::Pcm16));
        bytes.extend_from_slice(&full[12..36]);
        assert_eq!(decode_wav_bytes::<f64>(&bytes).unwrap_err(), WavError::MissingData);
    }

    #[test]
    fn eight_bit_unsupported() {
        let mut bytes = encode_wav(&[0.0, 0.0], spec(1, SampleFormat::Pcm16));
        bytes[34] = 8;
        bytes[32] = 1;
        assert!(matches!(
            decode_wav_bytes::<f64>(&bytes),
            Err(WavError::UnsupportedBitDepth { bits: 8, .. })
        ));
    }
}
