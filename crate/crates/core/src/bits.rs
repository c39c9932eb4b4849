//! Basis indices and the global bit convention.
//!
//! Bit `q` of an index is the measured state of qubit `q` (little-endian);
//! qubit 0 is the least significant bit. Text renderings put qubit `n-1`
//! leftmost, so index 1 on three qubits prints as `001`.

use crate::error::{Error, Result};
use crate::MAX_QUBITS;

/// An n-bit computational-basis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    value: u64,
    width: usize,
}

impl BasisIndex {
    pub fn new(value: u64, width: usize) -> Result<Self> {
        check_width(width)?;
        if value >> width != 0 {
            return Err(Error::Parse(format!(
                "index {value} does not fit in {width} bits"
            )));
        }
        Ok(BasisIndex { value, width })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// State of qubit `q` (0 or 1).
    pub fn bit(&self, q: usize) -> Result<u8> {
        if q >= self.width {
            return Err(Error::QubitIndex { index: q, n: self.width });
        }
        Ok(((self.value >> q) & 1) as u8)
    }

    /// Same label with qubit `q` flipped.
    pub fn with_bit_flipped(&self, q: usize) -> Result<Self> {
        if q >= self.width {
            return Err(Error::QubitIndex { index: q, n: self.width });
        }
        Ok(BasisIndex { value: self.value ^ (1 << q), width: self.width })
    }

    /// Subset parity mod(x·y, 2): parity of the bits selected by `mask`.
    pub fn subset_parity(&self, mask: u64) -> u8 {
        ((self.value & mask).count_ones() & 1) as u8
    }

    /// Renders with qubit `width-1` leftmost, e.g. index 1 on 3 qubits -> "001".
    pub fn to_bit_string(&self) -> String {
        (0..self.width)
            .rev()
            .map(|q| if (self.value >> q) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Parses the textual form produced by [`BasisIndex::to_bit_string`].
    pub fn from_bit_string(s: &str) -> Result<Self> {
        let width = s.len();
        check_width(width)?;
        let mut value = 0u64;
        for (i, ch) in s.chars().enumerate() {
            let q = width - 1 - i;
            match ch {
                '0' => {}
                '1' => value |= 1 << q,
                other => {
                    return Err(Error::Parse(format!(
                        "invalid character {other:?} in bitstring {s:?}"
                    )))
                }
            }
        }
        Ok(BasisIndex { value, width })
    }
}

pub(crate) fn check_width(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::QubitCount { n, max: MAX_QUBITS });
    }
    Ok(())
}
