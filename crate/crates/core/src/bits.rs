//! Random bit sources with exact consumption accounting.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A stream of random bits that counts how many have been drawn.
pub trait BitSource {
    fn next_bit(&mut self) -> Result<bool>;

    fn bits_consumed(&self) -> u64;

    /// `width` bits read as a big-endian integer.
    fn next_bits(&mut self, width: u32) -> Result<u64> {
        debug_assert!(width <= 64);
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | u64::from(self.next_bit()?);
        }
        Ok(v)
    }

    /// A uniform integer in `0..bound` by rejection sampling on
    /// `⌈log₂ bound⌉`-bit draws. `bound = 1` consumes nothing.
    fn uniform_below(&mut self, bound: u64) -> Result<u64> {
        assert!(bound >= 1);
        let width = 64 - (bound - 1).leading_zeros();
        loop {
            let v = self.next_bits(width)?;
            if v < bound {
                return Ok(v);
            }
        }
    }
}

/// Seeded pseudo-random bits. Identical seeds give identical streams.
#[derive(Debug, Clone)]
pub struct MeteredBitSource {
    seed: u64,
    rng: ChaCha8Rng,
    buffer: u64,
    buffered: u32,
    consumed: u64,
}

impl MeteredBitSource {
    pub fn new(seed: u64) -> Self {
        Self { seed, rng: ChaCha8Rng::seed_from_u64(seed), buffer: 0, buffered: 0, consumed: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl BitSource for MeteredBitSource {
    fn next_bit(&mut self) -> Result<bool> {
        if self.buffered == 0 {
            self.buffer = self.rng.next_u64();
            self.buffered = 64;
        }
        self.buffered -= 1;
        self.consumed += 1;
        Ok((self.buffer >> self.buffered) & 1 == 1)
    }

    fn bits_consumed(&self) -> u64 {
        self.consumed
    }
}

/// A fixed, finite bit string; drawing past its end is an error.
#[derive(Debug, Clone)]
pub struct FixedBits<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl<'a> FixedBits<'a> {
    pub fn new(bits: &'a [bool]) -> Self {
        Self { bits, pos: 0 }
    }
}

impl BitSource for FixedBits<'_> {
    fn next_bit(&mut self) -> Result<bool> {
        let bit = *self.bits.get(self.pos).ok_or(Error::BitsExhausted(self.pos as u64))?;
        self.pos += 1;
        Ok(bit)
    }

    fn bits_consumed(&self) -> u64 {
        self.pos as u64
    }
}

/// The `width`-bit big-endian expansion of `value`, as used to enumerate
/// random strings.
pub fn bits_of(value: u64, width: usize) -> Vec<bool> {
    (0..width).rev().map(|i| (value >> i) & 1 == 1).collect()
}
