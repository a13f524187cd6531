//! Polar code construction, encoding and information-set bookkeeping.

use std::path::Path;

use crate::crc::CrcConfig;
use crate::error::{Error, Result};

const NR_SEQUENCE: &str = include_str!("../data/nr_reliability_1024.txt");

/// Bit indices ordered from least to most reliable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReliabilitySequence {
    order: Vec<usize>,
}

impl ReliabilitySequence {
    /// Validates that `order` is a permutation of `0..order.len()`.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &i in &order {
            if i >= order.len() || seen[i] {
                return Err(Error::Input(format!(
                    "reliability sequence is not a permutation (index {i})"
                )));
            }
            seen[i] = true;
        }
        Ok(Self { order })
    }

    /// Parses one index per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let order = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.parse::<usize>()
                    .map_err(|e| Error::Format(format!("bad index {l:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(order)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// The 5G NR universal sequence for block lengths up to 1024.
    pub fn nr5g() -> Self {
        Self::parse(NR_SEQUENCE).expect("bundled sequence is valid")
    }

    pub fn max_len(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Nested sub-sequence for a shorter block: entries below `len`, in order.
    pub fn for_length(&self, len: usize) -> Result<Vec<usize>> {
        if len > self.order.len() {
            return Err(Error::Construction(format!(
                "sequence covers {} positions, block length is {len}",
                self.order.len()
            )));
        }
        Ok(self.order.iter().copied().filter(|&i| i < len).collect())
    }
}

/// A polar code of length `N = 2^n` carrying `K` payload bits and a CRC.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarCode {
    n: usize,
    k: usize,
    crc: CrcConfig,
    info_set: Vec<usize>,
    frozen: Vec<bool>,
}

impl PolarCode {
    /// Picks the `K + N_crc` most reliable positions of `seq` as the information set.
    pub fn construct(
        len: usize,
        k: usize,
        crc: CrcConfig,
        seq: &ReliabilitySequence,
    ) -> Result<Self> {
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Construction(format!(
                "block length {len} is not a power of two >= 2"
            )));
        }
        let info_len = k + crc.width;
        if info_len > len {
            return Err(Error::Construction(format!(
                "K + N_crc = {info_len} exceeds N = {len}"
            )));
        }
        let order = seq.for_length(len)?;
        let mut info_set: Vec<usize> = order[len - info_len..].to_vec();
        info_set.sort_unstable();
        Self::from_info_set(len, k, crc, info_set)
    }

    /// Builds a code from an explicit information set (payload + CRC positions).
    pub fn from_info_set(
        len: usize,
        k: usize,
        crc: CrcConfig,
        mut info_set: Vec<usize>,
    ) -> Result<Self> {
        if len < 1 || !len.is_power_of_two() {
            return Err(Error::Construction(format!(
                "block length {len} is not a power of two"
            )));
        }
        info_set.sort_unstable();
        info_set.dedup();
        if info_set.len() != k + crc.width {
            return Err(Error::Construction(format!(
                "information set has {} entries, expected K + N_crc = {}",
                info_set.len(),
                k + crc.width
            )));
        }
        if info_set.last().is_some_and(|&i| i >= len) {
            return Err(Error::Construction("information index out of range".into()));
        }
        let mut frozen = vec![true; len];
        for &i in &info_set {
            frozen[i] = false;
        }
        Ok(Self {
            n: len.trailing_zeros() as usize,
            k,
            crc,
            info_set,
            frozen,
        })
    }

    /// log2 of the block length.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Payload bits.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn crc(&self) -> &CrcConfig {
        &self.crc
    }

    pub fn crc_len(&self) -> usize {
        self.crc.width
    }

    /// Code rate `K / N` (CRC bits not counted).
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.len() as f64
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen
    }

    /// `x = F^{⊗n} u`, rejecting inputs with a nonzero frozen position.
    pub fn encode(&self, u: &[u8]) -> Result<Vec<u8>> {
        if u.len() != self.len() {
            return Err(Error::Input(format!(
                "expected {} input bits, got {}",
                self.len(),
                u.len()
            )));
        }
        if let Some(i) = (0..u.len()).find(|&i| self.frozen[i] && u[i] != 0) {
            return Err(Error::Input(format!("frozen position {i} is nonzero")));
        }
        let mut x = u.to_vec();
        polar_transform(&mut x);
        Ok(x)
    }

    /// Places payload followed by its CRC on the information set; zeros elsewhere.
    pub fn assemble_u(&self, payload: &[u8]) -> Result<Vec<u8>> {
        if payload.len() != self.k {
            return Err(Error::Input(format!(
                "expected {} payload bits, got {}",
                self.k,
                payload.len()
            )));
        }
        let mut u = vec![0u8; self.len()];
        let crc = self.crc.checksum_bits(payload);
        for (&pos, &bit) in self.info_set.iter().zip(payload.iter().chain(&crc)) {
            u[pos] = bit & 1;
        }
        Ok(u)
    }

    /// The `K + N_crc` bits of `u` on the information set, in ascending position order.
    pub fn extract_info(&self, u: &[u8]) -> Vec<u8> {
        self.info_set.iter().map(|&i| u[i]).collect()
    }

    pub fn extract_payload(&self, u: &[u8]) -> Vec<u8> {
        self.info_set[..self.k].iter().map(|&i| u[i]).collect()
    }

    /// True iff the trailing CRC bits match the payload.
    pub fn crc_check(&self, info_bits: &[u8]) -> bool {
        info_bits.len() == self.k + self.crc.width && self.crc.check(info_bits)
    }
}

/// In-place `F^{⊗n}` butterfly over GF(2); the transform is its own inverse.
pub fn polar_transform(bits: &mut [u8]) {
    let len = bits.len();
    debug_assert!(len.is_power_of_two());
    let mut half = 1;
    while half < len {
        for block in bits.chunks_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        half *= 2;
    }
}
