//! The tape advice model.
//!
//! An oracle that has seen the whole input writes an [`AdviceTape`]; the
//! online algorithm then reads it strictly front to back. The number of bits
//! read is the advice complexity of the run. Reading past the written end is
//! an error, never an implicit zero.
//!
//! Integers of unknown size use a self-delimiting code of Elias-gamma shape:
//! `x` is written as `L - 1` zeros followed by the `L`-bit binary form of
//! `x + 1`, for `2L - 1` bits in total.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AdviceTape {
    bits: Vec<bool>,
    cursor: usize,
}

/// Number of bits `write_self_delimited(x)` emits.
pub fn self_delimited_len(x: u64) -> usize {
    let len = 128 - (x as u128 + 1).leading_zeros() as usize;
    2 * len - 1
}

/// Smallest width that can hold every value in `0..=max`.
pub fn bit_width(max: u64) -> u32 {
    64 - max.leading_zeros()
}

impl AdviceTape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits, cursor: 0 }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn bits_written(&self) -> usize {
        self.bits.len()
    }

    /// Advice consumed so far.
    pub fn bits_read(&self) -> usize {
        self.cursor
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.cursor
    }

    /// Moves the read cursor back to the start, e.g. to hand a copy of the
    /// tape to a fresh reader.
    pub fn rewind(&mut self) {
        self.cursor = 0;
    }

    pub fn write_bit(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        let bit = *self.bits.get(self.cursor).ok_or(Error::TapeUnderrun {
            needed: 1,
            position: self.cursor,
            len: self.bits.len(),
        })?;
        self.cursor += 1;
        Ok(bit)
    }

    /// Big-endian field of exactly `width` bits.
    pub fn write_fixed(&mut self, x: u64, width: u32) -> Result<()> {
        if width > 64 || (width < 64 && x >> width != 0) {
            return Err(Error::FieldOverflow { value: x, width });
        }
        for i in (0..width).rev() {
            self.bits.push((x >> i) & 1 == 1);
        }
        Ok(())
    }

    pub fn read_fixed(&mut self, width: u32) -> Result<u64> {
        let need = width as usize;
        if width > 64 || self.remaining() < need {
            return Err(Error::TapeUnderrun {
                needed: need,
                position: self.cursor,
                len: self.bits.len(),
            });
        }
        let mut x = 0u64;
        for _ in 0..width {
            x = (x << 1) | u64::from(self.bits[self.cursor]);
            self.cursor += 1;
        }
        Ok(x)
    }

    /// Returns the number of bits written.
    pub fn write_self_delimited(&mut self, x: u64) -> usize {
        let v = x as u128 + 1;
        let len = 128 - v.leading_zeros() as usize;
        self.bits.extend(std::iter::repeat_n(false, len - 1));
        for i in (0..len).rev() {
            self.bits.push((v >> i) & 1 == 1);
        }
        2 * len - 1
    }

    pub fn read_self_delimited(&mut self) -> Result<u64> {
        let start = self.cursor;
        let underrun = |needed: usize, len: usize| Error::TapeUnderrun { needed, position: start, len };
        let mut zeros = 0usize;
        loop {
            match self.bits.get(self.cursor + zeros) {
                None => return Err(underrun(zeros + 1, self.bits.len())),
                Some(false) => zeros += 1,
                Some(true) => break,
            }
        }
        if zeros > 64 {
            return Err(Error::FieldOverflow { value: u64::MAX, width: zeros as u32 + 1 });
        }
        let len = zeros + 1;
        if self.bits.len() < self.cursor + zeros + len {
            return Err(underrun(zeros + len, self.bits.len()));
        }
        let mut v = 0u128;
        for i in 0..len {
            v = (v << 1) | u128::from(self.bits[self.cursor + zeros + i]);
        }
        self.cursor += zeros + len;
        Ok((v - 1) as u64)
    }

    /// Appends another tape's written bits.
    pub fn append(&mut self, other: &AdviceTape) {
        self.bits.extend_from_slice(&other.bits);
    }
}

impl fmt::Display for AdviceTape {
    /// `bits=<count>;<hex>`, bits packed most-significant first, zero padded.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bytes: Vec<u8> = self
            .bits
            .chunks(8)
            .map(|chunk| chunk.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << (7 - i))))
            .collect();
        write!(f, "bits={};{}", self.bits.len(), hex::encode(bytes))
    }
}

impl FromStr for AdviceTape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let perr = |msg: String| Error::Parse { line: 1, msg };
        let rest = s.trim().strip_prefix("bits=").ok_or_else(|| perr("missing `bits=` header".into()))?;
        let (count, body) = rest.split_once(';').ok_or_else(|| perr("missing `;`".into()))?;
        let count: usize = count.parse().map_err(|e| perr(format!("bad bit count: {e}")))?;
        let bytes = hex::decode(body).map_err(|e| perr(format!("bad hex: {e}")))?;
        if bytes.len() != count.div_ceil(8) {
            return Err(perr(format!("{} hex bytes cannot hold exactly {count} bits", bytes.len())));
        }
        let bits = (0..count).map(|i| (bytes[i / 8] >> (7 - i % 8)) & 1 == 1).collect();
        Ok(Self::from_bits(bits))
    }
}
