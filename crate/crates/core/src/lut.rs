//! Finite-alphabet list decoding with lookup tables.
//!
//! Messages are `w`-bit indices. Every f/g update is a table lookup (or the
//! index min-sum rule on MSIB f-edges) and leaves translate indices to LLRs
//! only to update path metrics and run the constituent-node decoders.

use crate::code::PolarCode;
use crate::decode::{list_decode, DecodeOutput, ListConfig, MessageOps};
use crate::error::{Error, Result};
use crate::ib::{msib_f_index, LutSet};
use crate::tree::{DecoderTree, TableCounts};

pub use crate::ib::quantize_rx;

/// Table-driven message operations of one validated table set.
pub struct LutOps<'a> {
    size: usize,
    edge_tables: Vec<Option<&'a [u8]>>,
    translations: &'a [Vec<f64>],
}

impl<'a> LutOps<'a> {
    pub fn new(tree: &DecoderTree, set: &'a LutSet) -> Result<Self> {
        set.check_tree(tree)?;
        let mut edge_tables = vec![None; tree.edge_count()];
        for t in &set.tables {
            edge_tables[t.edge] = Some(t.map.as_slice());
        }
        Ok(Self {
            size: set.alphabet_size(),
            edge_tables,
            translations: &set.translations,
        })
    }
}

impl MessageOps for LutOps<'_> {
    type Msg = u8;

    #[inline]
    fn f(&self, edge: usize, a: u8, b: u8) -> u8 {
        match self.edge_tables[edge] {
            Some(map) => map[usize::from(a) * self.size + usize::from(b)],
            None => msib_f_index(a, b, self.size),
        }
    }

    #[inline]
    fn g(&self, edge: usize, a: u8, b: u8, bit: u8) -> u8 {
        let map = self.edge_tables[edge].expect("g-edge table checked at construction");
        map[(usize::from(a) * self.size + usize::from(b)) * 2 + usize::from(bit)]
    }

    #[inline]
    fn llr(&self, leaf: usize, m: u8) -> f64 {
        self.translations[leaf][usize::from(m)]
    }
}

/// Finite-alphabet decoder bound to a code, a tree and its tables.
pub struct LutDecoder<'a> {
    code: &'a PolarCode,
    tree: &'a DecoderTree,
    set: &'a LutSet,
    ops: LutOps<'a>,
}

impl<'a> LutDecoder<'a> {
    pub fn new(code: &'a PolarCode, tree: &'a DecoderTree, set: &'a LutSet) -> Result<Self> {
        if tree.n() != code.n() {
            return Err(Error::Config("decoder tree and code lengths differ".into()));
        }
        if set.header.n != code.len() || set.header.k != code.k() || set.header.crc_len != code.crc_len() {
            return Err(Error::Config("lookup tables were designed for another code".into()));
        }
        Ok(Self {
            code,
            tree,
            set,
            ops: LutOps::new(tree, set)?,
        })
    }

    pub fn code(&self) -> &PolarCode {
        self.code
    }

    pub fn tree(&self) -> &DecoderTree {
        self.tree
    }

    /// Quantizes received channel samples.
    pub fn quantize(&self, y: &[f64]) -> Vec<u8> {
        quantize_rx(&self.set.channel.thresholds, y)
    }

    /// Decodes quantized channel messages.
    pub fn decode(&self, y_t: &[u8], cfg: &ListConfig) -> Result<DecodeOutput> {
        if y_t.len() != self.code.len() {
            return Err(Error::Input(format!(
                "expected {} channel messages, got {}",
                self.code.len(),
                y_t.len()
            )));
        }
        let size = self.set.alphabet_size();
        if let Some(&bad) = y_t.iter().find(|&&t| usize::from(t) >= size) {
            return Err(Error::Input(format!("message {bad} outside a {size}-letter alphabet")));
        }
        list_decode(self.tree, &self.ops, y_t, cfg)
    }

    /// Tables a decoding run actually read: decoding tables of the touched
    /// edges (plus the channel quantizer for MSIB) and translation tables of
    /// the touched leaves.
    pub fn touched_tables(&self, out: &DecodeOutput) -> TableCounts {
        let stored = out
            .touched_edges
            .iter()
            .filter(|&&e| self.ops.edge_tables[e].is_some())
            .count();
        let quantizer = usize::from(self.set.header.variant == crate::ib::Variant::Msib);
        TableCounts {
            decoding: stored + quantizer,
            translation: out.touched_leaves.len(),
        }
    }
}

/// Finite-alphabet SCL on the unpruned tree.
pub fn lut_scl_decode(
    code: &PolarCode,
    tree: &DecoderTree,
    y_t: &[u8],
    set: &LutSet,
    cfg: &ListConfig,
) -> Result<DecodeOutput> {
    if !tree.kinds().is_empty() {
        return Err(Error::Config("SCL decoding needs a tree without special nodes".into()));
    }
    LutDecoder::new(code, tree, set)?.decode(y_t, cfg)
}

/// Finite-alphabet fast SCL on a pruned tree.
pub fn lut_fscl_decode(
    code: &PolarCode,
    tree: &DecoderTree,
    y_t: &[u8],
    set: &LutSet,
    cfg: &ListConfig,
) -> Result<DecodeOutput> {
    LutDecoder::new(code, tree, set)?.decode(y_t, cfg)
}
