//! Bitwise CRC over bit vectors (MSB-first, non-reflected).

use serde::{Deserialize, Serialize};

/// Generator polynomial and register conventions of a CRC.
///
/// `poly` omits the implicit leading `x^width` term, as in the usual
/// hexadecimal notation (`0x1021` for CRC-16/CCITT).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrcConfig {
    pub width: usize,
    pub poly: u64,
    pub init: u64,
    pub xorout: u64,
}

impl CrcConfig {
    /// CRC-16/CCITT with zero init and no output xor.
    pub const CCITT16: CrcConfig = CrcConfig {
        width: 16,
        poly: 0x1021,
        init: 0,
        xorout: 0,
    };

    pub const NONE: CrcConfig = CrcConfig {
        width: 0,
        poly: 0,
        init: 0,
        xorout: 0,
    };

    /// Default CRC for a given width: CCITT for 16 bits, none for 0.
    pub fn for_width(width: usize) -> Option<CrcConfig> {
        match width {
            0 => Some(Self::NONE),
            16 => Some(Self::CCITT16),
            _ => None,
        }
    }

    fn mask(&self) -> u64 {
        if self.width >= 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        }
    }

    /// Checksum of `bits` (each 0 or 1), most significant bit first.
    pub fn checksum(&self, bits: &[u8]) -> u64 {
        if self.width == 0 {
            return 0;
        }
        let mask = self.mask();
        let top = 1u64 << (self.width - 1);
        let mut reg = self.init & mask;
        for &b in bits {
            let feedback = ((reg & top) != 0) ^ (b & 1 == 1);
            reg = (reg << 1) & mask;
            if feedback {
                reg ^= self.poly & mask;
            }
        }
        (reg ^ self.xorout) & mask
    }

    /// Checksum as `width` bits, most significant first.
    pub fn checksum_bits(&self, bits: &[u8]) -> Vec<u8> {
        let c = self.checksum(bits);
        (0..self.width)
            .rev()
            .map(|i| ((c >> i) & 1) as u8)
            .collect()
    }

    /// True iff the trailing `width` bits are the CRC of the leading ones.
    pub fn check(&self, block: &[u8]) -> bool {
        if self.width == 0 {
            return true;
        }
        if block.len() < self.width {
            return false;
        }
        let (data, tail) = block.split_at(block.len() - self.width);
        self.checksum_bits(data) == tail
    }
}
