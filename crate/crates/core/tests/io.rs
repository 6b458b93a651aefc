mod common;

use common::*;
use proptest::prelude::*;
use soundtex::io::labels::{format_cluster_labels, parse_cluster_labels, ClusterLabelRow};
use soundtex::io::{
    decode_wav, decode_wav_bytes, encode_wav, read_header, read_store, sample_windows, write_store,
    write_wav_pcm16, FeatureStore, Manifest, RowId, SampleFormat, StoreError, WavError, WavSpec,
};
use soundtex::Error;

fn store_strategy() -> impl Strategy<Value = FeatureStore> {
    (1usize..10, 0usize..8).prop_flat_map(|(dim, rows)| {
        (
            prop::collection::vec(any::<u32>().prop_map(f32::from_bits), dim * rows),
            prop::collection::vec(("[a-z0-9_ é-]{0,12}", any::<u32>()), rows),
        )
            .prop_map(move |(data, ids)| {
                let ids = ids.into_iter().map(|(clip_id, window)| RowId { clip_id, window }).collect();
                FeatureStore::new(dim, data, ids).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn store_round_trip_is_bit_exact(store in store_strategy()) {
        let bytes = store.to_bytes();
        let trailer: usize = store.ids().iter().map(|id| 8 + id.clip_id.len()).sum();
        prop_assert_eq!(bytes.len(), 28 + 4 * store.dim() * store.rows() + trailer);
        let back = FeatureStore::from_bytes(&bytes).unwrap();
        prop_assert_eq!(back.dim(), store.dim());
        prop_assert_eq!(back.ids(), store.ids());
        prop_assert!(back.data().iter().zip(store.data()).all(|(a, b)| a.to_bits() == b.to_bits()));
    }
}

#[test]
fn store_file_round_trip_and_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.astx");
    let mut store = FeatureStore::empty(3);
    store.push(RowId { clip_id: "a".into(), window: 0 }, &[1.0, 2.0, 3.0]).unwrap();
    store.push(RowId { clip_id: "b".into(), window: 4 }, &[-0.0, f32::NAN, 1e-40]).unwrap();
    write_store(&path, &store).unwrap();
    let h = read_header(&path).unwrap();
    assert_eq!((h.version, h.row_count, h.dim), (1, 2, 3));
    let back = read_store(&path).unwrap();
    assert_eq!(back.row(1)[0].to_bits(), (-0.0f32).to_bits());
    assert!(back.row(1)[1].is_nan());
    assert!(store.push(RowId { clip_id: "c".into(), window: 0 }, &[1.0]).is_err());
}

#[test]
fn store_rejects_corruption() {
    let mut store = FeatureStore::empty(2);
    store.push(RowId { clip_id: "clip".into(), window: 1 }, &[0.5, 0.25]).unwrap();
    let bytes = store.to_bytes();

    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(matches!(FeatureStore::from_bytes(&bad), Err(StoreError::BadMagic)));
    let mut bad = bytes.clone();
    bad[4] = 2;
    assert!(matches!(FeatureStore::from_bytes(&bad), Err(StoreError::VersionMismatch { .. })));
    assert!(matches!(FeatureStore::from_bytes(&bytes[..20]), Err(StoreError::TruncatedHeader)));
    assert!(matches!(FeatureStore::from_bytes(&bytes[..32]), Err(StoreError::TruncatedPayload)));
    assert!(matches!(
        FeatureStore::from_bytes(&bytes[..bytes.len() - 1]),
        Err(StoreError::TruncatedTrailer)
    ));
    let mut long = bytes.clone();
    long.push(0);
    assert!(matches!(FeatureStore::from_bytes(&long), Err(StoreError::TrailingBytes(_))));
}

#[test]
fn manifest_validation_messages() {
    let dup = "{\"clip_id\":\"a\",\"path\":\"a.wav\",\"duration_s\":5}\n{\"clip_id\":\"a\",\"path\":\"b.wav\",\"duration_s\":5}\n";
    let err = Manifest::parse(dup).unwrap_err().to_string();
    assert!(err.contains("duplicate clip_id \"a\""), "{err}");

    let outside = "{\"clip_id\":\"a\",\"path\":\"a.wav\",\"duration_s\":5,\"window_centers_s\":[1.0]}";
    let err = Manifest::parse(outside).unwrap_err().to_string();
    assert!(err.contains("does not admit a full 3.75 s window"), "{err}");

    let tab = "{\"clip_id\":\"a\\tb\",\"path\":\"a.wav\",\"duration_s\":5}";
    assert!(Manifest::parse(tab).is_err());
    assert!(Manifest::parse("{not json}").is_err());

    let ok = "{\"clip_id\":\"a\",\"path\":\"a.wav\",\"duration_s\":5,\"window_centers_s\":[1.875,3.125]}\n\n";
    let m = Manifest::parse(ok).unwrap();
    assert_eq!(m.records[0].window_centers_s, vec![1.875, 3.125]);
    assert_eq!(Manifest::parse(&m.to_jsonl()).unwrap(), m);
}

#[test]
fn window_sampling() {
    let a = sample_windows(12.0, 10, 42);
    assert_eq!(a, sample_windows(12.0, 10, 42));
    assert_eq!(a.centers.len(), 10);
    assert!(a.centers.iter().all(|&c| (1.875..=10.125).contains(&c)));
    assert!(a.centers.windows(2).all(|w| w[0] <= w[1]));
    assert_ne!(a.centers, sample_windows(12.0, 10, 43).centers);
    let short = sample_windows(3.0, 10, 0);
    assert!(short.centers.is_empty() && short.warning.is_some());
    assert_eq!(sample_windows(3.75, 2, 0).centers, vec![1.875, 1.875]);
}

#[test]
fn wav_encode_decode_and_errors() {
    let samples: Vec<f64> = (0..100).map(|i| ((i as f64) * 0.1).sin() * 0.9).collect();
    for format in [SampleFormat::Pcm16, SampleFormat::Pcm24, SampleFormat::Float32] {
        let spec = WavSpec { channels: 1, sample_rate: 16_000, format };
        let w = decode_wav_bytes::<f64>(&encode_wav(&samples, spec)).unwrap();
        assert_eq!(w.sample_rate(), 16_000);
        let tol = match format {
            SampleFormat::Pcm16 => 1.0 / 32768.0,
            SampleFormat::Pcm24 => 1.0 / 8_388_608.0,
            SampleFormat::Float32 => 1e-7,
        };
        for (a, b) in w.samples().iter().zip(&samples) {
            assert!((a - b).abs() <= tol);
        }
    }

    let good = encode_wav(&samples, WavSpec { channels: 1, sample_rate: 8000, format: SampleFormat::Pcm16 });
    let mut bad = good.clone();
    bad[0] = b'X';
    assert!(matches!(decode_wav_bytes::<f64>(&bad), Err(WavError::BadMagic)));
    let mut bad = good.clone();
    bad[20] = 2; // ADPCM
    assert!(matches!(decode_wav_bytes::<f64>(&bad), Err(WavError::UnsupportedCodec(2))));
    let mut bad = good.clone();
    bad[34] = 8;
    assert!(matches!(decode_wav_bytes::<f64>(&bad), Err(WavError::UnsupportedBitDepth { .. })));
    assert!(matches!(
        decode_wav_bytes::<f64>(&good[..good.len() - 10]),
        Err(WavError::TruncatedData { .. })
    ));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.wav");
    write_wav_pcm16(&path, &wave(vec![0.5, -0.5, 0.25])).unwrap();
    let back = decode_wav::<f32>(&path).unwrap();
    assert_eq!(back.samples(), &[0.5, -0.5, 0.25]);
    assert!(matches!(decode_wav::<f64>(dir.path().join("missing.wav")), Err(Error::Io(_))));
}

#[test]
fn cluster_label_file_round_trip() {
    let rows: Vec<ClusterLabelRow> = (0..5)
        .map(|i| ClusterLabelRow {
            id: RowId { clip_id: format!("c{i}"), window: i },
            cluster: (i % 3) as usize,
            distance: 0.1 * i as f64 + 1e-17,
            pruned: i % 2 == 0,
        })
        .collect();
    let text = format_cluster_labels(&rows);
    assert_eq!(parse_cluster_labels(&text).unwrap(), rows);
}

#[test]
fn documented_examples() {
    let data: Vec<u8> = [0i16, 16384, -32768].iter().flat_map(|s| s.to_le_bytes()).collect();
    let spec = WavSpec { channels: 1, sample_rate: 8000, format: SampleFormat::Pcm16 };
    let mut bytes = encode_wav(&[0.0, 0.0, 0.0], spec);
    let n = bytes.len();
    bytes[n - 6..].copy_from_slice(&data);
    assert_eq!(decode_wav_bytes::<f64>(&bytes).unwrap().samples(), &[0.0, 0.5, -1.0]);

    let stereo = WavSpec { channels: 2, sample_rate: 8000, format: SampleFormat::Float32 };
    let w = decode_wav_bytes::<f64>(&encode_wav(&[1.0, 0.0, 1.0, 0.0], stereo)).unwrap();
    assert_eq!(w.samples(), &[0.5, 0.5]);

    let mut rifx = encode_wav(&[0.0], spec);
    rifx[..4].copy_from_slice(b"RIFX");
    let err = decode_wav_bytes::<f64>(&rifx).unwrap_err();
    assert_eq!(err.to_string(), "bad container magic");

    let empty = FeatureStore::empty(502).to_bytes();
    assert_eq!(empty.len(), 28);
    assert_eq!(FeatureStore::from_bytes(&empty).unwrap().rows(), 0);

    let mut store = FeatureStore::empty(4);
    store.push(RowId { clip_id: "a".into(), window: 0 }, &[1.0; 4]).unwrap();
    let bytes = store.to_bytes();
    let err = FeatureStore::from_bytes(&bytes[..30]).unwrap_err();
    assert_eq!(err.to_string(), "truncated payload");
}
