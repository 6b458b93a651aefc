use std::fmt;

use ndarray::Axis;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::PcaModel;

/// Up to 64 bits; bit `i` comes from principal component `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinaryCode {
    pub bits: u64,
    pub len: u8,
}

impl BinaryCode {
    pub fn bit(&self, i: usize) -> bool {
        i < self.len as usize && (self.bits >> i) & 1 == 1
    }

    pub fn count_ones(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Parse the `Display` form.
    pub fn parse(s: &str) -> Result<Self> {
        if s.len() > 64 {
            return Err(Error::invalid_input("binary code longer than 64 bits"));
        }
        let mut bits = 0u64;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '1' => bits |= 1 << i,
                '0' => {}
                other => {
                    return Err(Error::invalid_input(format!("bad code character {other:?}")))
                }
            }
        }
        Ok(Self {
            bits,
            len: s.len() as u8,
        })
    }
}

/// Bit 0 first.
impl fmt::Display for BinaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len as usize {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Threshold each centred projection at zero: bit set iff strictly positive.
///
/// A projection whose magnitude is within the floating-point error bound of
/// its dot product (`2 d eps sum |w_j (x_j - m_j)|`) is treated as an exact
/// zero, so directions orthogonal in exact arithmetic encode as 0.
pub fn binary_encode<T: Real>(x: &[T], model: &PcaModel<T>) -> Result<BinaryCode> {
    if model.n_components() > 64 {
        return Err(Error::invalid_input(format!(
            "{} components do not fit a 64-bit code",
            model.n_components()
        )));
    }
    if x.len() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: x.len(),
        });
    }
    let dev: Vec<T> = x.iter().zip(model.mean.iter()).map(|(&v, &m)| v - m).collect();
    let slack = T::lit(2.0) * T::from_usize_lossy(x.len()) * T::epsilon();
    let mut bits = 0u64;
    for (i, c) in model.components.axis_iter(Axis(0)).enumerate() {
        let (p, mag) = c
            .iter()
            .zip(&dev)
            .fold((T::zero(), T::zero()), |(p, m), (&w, &d)| (p + w * d, m + (w * d).abs()));
        if p > slack * mag {
            bits |= 1 << i;
        }
    }
    Ok(BinaryCode {
        bits,
        len: model.n_components() as u8,
    })
}
