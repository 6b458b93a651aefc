//! `ASTX` feature store: a fixed 28-byte little-endian header, a row-major
//! `f32` payload and a trailer naming the clip and window of every row.
//!
//! ```text
//! offset  size  field
//!      0     4  magic "ASTX"
//!      4     4  format_version (u32)
//!      8     8  row_count (u64)
//!     16     4  dim (u32)
//!     20     4  dtype tag (u32, 1 = f32)
//!     24     4  reserved, zero
//!     28     .  payload: row_count * dim * 4 bytes
//!      .     .  trailer, per row: id_len (u32), clip_id (UTF-8), window (u32)
//! ```

use std::path::Path;

use thiserror::Error;

use crate::error::Result;

pub const STORE_MAGIC: &[u8; 4] = b"ASTX";
pub const STORE_VERSION: u32 = 1;
pub const HEADER_LEN: usize = 28;
pub const DTYPE_F32: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StoreError {
    #[error("bad store magic")]
    BadMagic,
    #[error("store format version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("truncated header")]
    TruncatedHeader,
    #[error("truncated payload")]
    TruncatedPayload,
    #[error("truncated trailer")]
    TruncatedTrailer,
    #[error("dim overflow: {rows} rows x {dim} columns does not fit in memory")]
    DimOverflow { rows: u64, dim: u64 },
    #[error("unsupported dtype tag {0}")]
    UnsupportedDtype(u32),
    #[error("row id is not valid UTF-8")]
    InvalidUtf8,
    #[error("{0} unexpected bytes after trailer")]
    TrailingBytes(usize),
    #[error("store shape mismatch: {0}")]
    Shape(String),
}

/// Identifies the source of one row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RowId {
    pub clip_id: String,
    pub window: u32,
}

/// Row-major feature matrix with per-row ids.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureStore {
    dim: usize,
    data: Vec<f32>,
    ids: Vec<RowId>,
}

impl FeatureStore {
    pub fn new(dim: usize, data: Vec<f32>, ids: Vec<RowId>) -> Result<Self, StoreError> {
        if dim > u32::MAX as usize {
            return Err(StoreError::DimOverflow {
                rows: ids.len() as u64,
                dim: dim as u64,
            });
        }
        if data.len() != dim * ids.len() {
            return Err(StoreError::Shape(format!(
                "{} values for {} rows of dim {dim}",
                data.len(),
                ids.len()
            )));
        }
        Ok(Self { dim, data, ids })
    }

    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            data: Vec::new(),
            ids: Vec::new(),
        }
    }

    pub fn push(&mut self, id: RowId, row: &[f32]) -> Result<(), StoreError> {
        if row.len() != self.dim {
            return Err(StoreError::Shape(format!(
                "row of length {} pushed into store of dim {}",
                row.len(),
                self.dim
            )));
        }
        self.data.extend_from_slice(row);
        self.ids.push(id);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> usize {
        self.ids.len()
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn ids(&self) -> &[RowId] {
        &self.ids
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Copy into an `f64` matrix.
    pub fn to_array(&self) -> ndarray::Array2<f64> {
        ndarray::Array2::from_shape_fn((self.rows(), self.dim), |(i, j)| {
            self.data[i * self.dim + j] as f64
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let trailer: usize = self.ids.iter().map(|id| 8 + id.clip_id.len()).sum();
        let mut out = Vec::with_capacity(HEADER_LEN + self.data.len() * 4 + trailer);
        out.extend_from_slice(STORE_MAGIC);
        out.extend_from_slice(&STORE_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.rows() as u64).to_le_bytes());
        out.extend_from_slice(&(self.dim as u32).to_le_bytes());
        out.extend_from_slice(&DTYPE_F32.to_le_bytes());
        out.extend_from_slice(&0u32.to_le_bytes());
        for v in &self.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for id in &self.ids {
            out.extend_from_slice(&(id.clip_id.len() as u32).to_le_bytes());
            out.extend_from_slice(id.clip_id.as_bytes());
            out.extend_from_slice(&id.window.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, StoreError> {
        let header = StoreHeader::parse(bytes)?;
        let rows = header.row_count;
        let dim = header.dim as u64;
        let payload_len = rows
            .checked_mul(dim)
            .and_then(|n| n.checked_mul(4))
            .and_then(|n| usize::try_from(n).ok())
            .filter(|n| n.checked_add(HEADER_LEN).is_some())
            .ok_or(StoreError::DimOverflow { rows, dim })?;
        let payload_end = HEADER_LEN + payload_len;
        if bytes.len() < payload_end {
            return Err(StoreError::TruncatedPayload);
        }
        let data: Vec<f32> = bytes[HEADER_LEN..payload_end]
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();

        let mut pos = payload_end;
        let take = |pos: &mut usize, n: usize| -> Result<&[u8], StoreError> {
            let end = pos.checked_add(n).filter(|&e| e <= bytes.len());
            let end = end.ok_or(StoreError::TruncatedTrailer)?;
            let s = &bytes[*pos..end];
            *pos = end;
            Ok(s)
        };
        // every row needs at least 8 trailer bytes; bounds the allocation below
        if (bytes.len() - pos) as u64 / 8 < rows {
            return Err(StoreError::TruncatedTrailer);
        }
        let mut ids = Vec::with_capacity(rows as usize);
        for _ in 0..rows {
            let len = u32::from_le_bytes(take(&mut pos, 4)?.try_into().unwrap()) as usize;
            let clip_id = std::str::from_utf8(take(&mut pos, len)?)
                .map_err(|_| StoreError::InvalidUtf8)?
                .to_owned();
            let window = u32::from_le_bytes(take(&mut pos, 4)?.try_into().unwrap());
            ids.push(RowId { clip_id, window });
        }
        if pos != bytes.len() {
            return Err(StoreError::TrailingBytes(bytes.len() - pos));
        }
        Ok(Self {
            dim: header.dim as usize,
            data,
            ids,
        })
    }
}

/// Decoded fixed header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StoreHeader {
    pub version: u32,
    pub row_count: u64,
    pub dim: u32,
    pub dtype: u32,
}

impl StoreHeader {
    pub fn parse(bytes: &[u8]) -> Result<Self, StoreError> {
        if bytes.len() >= 4 && &bytes[0..4] != STORE_MAGIC {
            return Err(StoreError::BadMagic);
        }
        if bytes.len() < HEADER_LEN {
            return Err(StoreError::TruncatedHeader);
        }
        let u32_at = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
        let version = u32_at(4);
        if version != STORE_VERSION {
            return Err(StoreError::VersionMismatch {
                found: version,
                expected: STORE_VERSION,
            });
        }
        let row_count = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
        let dim = u32_at(16);
        let dtype = u32_at(20);
        if dtype != DTYPE_F32 {
            return Err(StoreError::UnsupportedDtype(dtype));
        }
        Ok(Self {
            version,
            row_count,
            dim,
            dtype,
        })
    }
}

pub fn write_store(path: impl AsRef<Path>, store: &FeatureStore) -> Result<()> {
    std::fs::write(path, store.to_bytes())?;
    Ok(())
}

pub fn read_store(path: impl AsRef<Path>) -> Result<FeatureStore> {
    let bytes = std::fs::read(path)?;
    Ok(FeatureStore::from_bytes(&bytes)?)
}

/// Read only the fixed header of a store file.
pub fn read_header(path: impl AsRef<Path>) -> Result<StoreHeader> {
    use std::io::Read;
    let mut buf = Vec::with_capacity(HEADER_LEN);
    std::fs::File::open(path)?
        .take(HEADER_LEN as u64)
        .read_to_end(&mut buf)?;
    Ok(StoreHeader::parse(&buf)?)
}
