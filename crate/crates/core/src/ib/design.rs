//! Lookup-table set for a whole decoder tree.
//!
//! The design walks the pruned tree top down. Both inputs of an update are
//! described by the density of the messages on the parent node, so each edge
//! gets its own table and every leaf gets the translation of the alphabet
//! that reaches it.

use serde::{Deserialize, Serialize};

use super::channel::ChannelQuantizer;
use super::tables::{design_f_table, design_g_table, f_observations, g_observations, msib_f_density, FKey};
use super::{DecodingTable, MessageDensity, Variant, DEFAULT_GRID};
use crate::code::PolarCode;
use crate::error::{Error, Result};
use crate::tree::{DecoderTree, EdgeKind};

/// Parameters a table set was designed for.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LutHeader {
    /// File format version, see [`LutHeader::FORMAT_VERSION`].
    pub version: u32,
    /// Block length.
    pub n: usize,
    /// Payload bits.
    pub k: usize,
    pub crc_len: usize,
    pub variant: Variant,
    pub w: usize,
    pub design_ebn0_db: f64,
    pub kinds: String,
    pub schedule_hash: String,
}

impl LutHeader {
    pub const FORMAT_VERSION: u32 = 1;
}

/// Channel quantizer, decoding tables and translation tables of one decoder tree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LutSet {
    pub header: LutHeader,
    pub channel: ChannelQuantizer,
    /// Stored tables sorted by edge id. MSIB stores no f-edge tables.
    pub tables: Vec<DecodingTable>,
    /// LLR of every message value, per pruned-tree leaf.
    pub translations: Vec<Vec<f64>>,
}

impl LutSet {
    pub fn alphabet_size(&self) -> usize {
        1 << self.header.w
    }

    /// Decoding tables including the channel quantizer for MSIB.
    pub fn decoding_table_count(&self) -> usize {
        self.tables.len() + usize::from(self.header.variant == Variant::Msib)
    }

    /// Checks that this set belongs to `tree` and is complete.
    pub fn check_tree(&self, tree: &DecoderTree) -> Result<()> {
        if self.header.schedule_hash != tree.schedule_hash() {
            return Err(Error::Config(format!(
                "lookup tables were designed for schedule {} but the decoder uses {}",
                self.header.schedule_hash,
                tree.schedule_hash()
            )));
        }
        let size = self.alphabet_size();
        if self.channel.llr.len() != size || self.channel.thresholds.len() + 1 != size {
            return Err(Error::Config("channel quantizer does not match w".into()));
        }
        let mut stored = vec![false; tree.edge_count()];
        for t in &self.tables {
            let spec = tree.edges().get(t.edge).ok_or_else(|| {
                Error::Config(format!("table for unknown edge {}", t.edge))
            })?;
            let expect = match spec.kind {
                EdgeKind::F => size * size,
                EdgeKind::G => 2 * size * size,
            };
            if spec.kind != t.kind || t.map.len() != expect || t.map.iter().any(|&m| usize::from(m) >= size) {
                return Err(Error::Config(format!("table of edge {} is malformed", t.edge)));
            }
            stored[t.edge] = true;
        }
        for e in tree.edges() {
            let needed = self.header.variant == Variant::Ib || e.kind == EdgeKind::G;
            if needed && !stored[e.id] {
                return Err(Error::Config(format!("missing decoding table for edge {}", e.id)));
            }
        }
        if self.translations.len() != tree.leaf_count()
            || self.translations.iter().any(|t| t.len() != size)
        {
            return Err(Error::Config("translation tables do not match the tree".into()));
        }
        Ok(())
    }
}

/// Information bookkeeping of one designed edge.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeReport {
    pub edge: usize,
    pub kind: EdgeKind,
    /// `I(X;T)` of the parent messages.
    pub parent_information: f64,
    /// `I(X;Y)` of the unquantized observation space of the update.
    pub observation_information: f64,
    /// `I(X;T)` of the designed output messages.
    pub output_information: f64,
}

/// Designs the lookup tables of `tree` at `design_ebn0_db` with `w`-bit messages.
pub fn design_lutset(
    code: &PolarCode,
    tree: &DecoderTree,
    variant: Variant,
    design_ebn0_db: f64,
    w: usize,
) -> Result<LutSet> {
    design_lutset_with_report(code, tree, variant, design_ebn0_db, w).map(|(set, _)| set)
}

/// As [`design_lutset`], also returning per-edge information bookkeeping.
pub fn design_lutset_with_report(
    code: &PolarCode,
    tree: &DecoderTree,
    variant: Variant,
    design_ebn0_db: f64,
    w: usize,
) -> Result<(LutSet, Vec<EdgeReport>)> {
    if tree.n() != code.n() {
        return Err(Error::Config("decoder tree and code lengths differ".into()));
    }
    if !design_ebn0_db.is_finite() {
        return Err(Error::Config("design Eb/N0 must be finite".into()));
    }
    let channel = ChannelQuantizer::design(design_ebn0_db, code.rate(), w, DEFAULT_GRID)?;
    let mut state = DesignState {
        tree,
        variant,
        size: 1 << w,
        tables: Vec::new(),
        translations: vec![Vec::new(); tree.leaf_count()],
        reports: Vec::new(),
    };
    state.visit(tree.root(), channel.density()?)?;
    let mut tables = state.tables;
    tables.sort_by_key(|t| t.edge);
    state.reports.sort_by_key(|r| r.edge);
    let set = LutSet {
        header: LutHeader {
            version: LutHeader::FORMAT_VERSION,
            n: code.len(),
            k: code.k(),
            crc_len: code.crc_len(),
            variant,
            w,
            design_ebn0_db,
            kinds: tree.kinds().to_string(),
            schedule_hash: tree.schedule_hash().to_string(),
        },
        channel,
        tables,
        translations: state.translations,
    };
    log::debug!(
        "designed {} decoding and {} translation tables",
        set.decoding_table_count(),
        set.translations.len()
    );
    Ok((set, state.reports))
}

struct DesignState<'a> {
    tree: &'a DecoderTree,
    variant: Variant,
    size: usize,
    tables: Vec<DecodingTable>,
    translations: Vec<Vec<f64>>,
    reports: Vec<EdgeReport>,
}

impl DesignState<'_> {
    fn visit(&mut self, idx: usize, density: MessageDensity) -> Result<()> {
        let node = self.tree.node(idx);
        let Some((left, right)) = node.children else {
            let leaf = node.leaf.expect("pruned-tree leaf");
            self.translations[leaf] = density.alphabet.llr().to_vec();
            return Ok(());
        };
        let parent_information = density.joint.mutual_information();

        let fe = self.tree.node(left).in_edge.expect("child edge");
        let f_out = match self.variant {
            Variant::Ib => {
                let (mut table, out) = design_f_table(&density, &density, FKey::Exact, self.size)?;
                table.edge = fe;
                self.tables.push(table);
                out
            }
            Variant::Msib => msib_f_density(&density, &density)?,
        };
        let key = match self.variant {
            Variant::Ib => FKey::Exact,
            Variant::Msib => FKey::MinSum,
        };
        self.reports.push(EdgeReport {
            edge: fe,
            kind: EdgeKind::F,
            parent_information,
            observation_information: f_observations(&density, &density, key).information(),
            output_information: f_out.joint.mutual_information(),
        });

        let ge = self.tree.node(right).in_edge.expect("child edge");
        let (mut table, g_out) = design_g_table(&density, &density, self.size)?;
        table.edge = ge;
        self.tables.push(table);
        self.reports.push(EdgeReport {
            edge: ge,
            kind: EdgeKind::G,
            parent_information,
            observation_information: g_observations(&density, &density).information(),
            output_information: g_out.joint.mutual_information(),
        });

        self.visit(left, f_out)?;
        self.visit(right, g_out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::ReliabilitySequence;
    use crate::crc::CrcConfig;
    use crate::tree::NodeKinds;

    fn small_code() -> PolarCode {
        PolarCode::construct(64, 24, CrcConfig::CCITT16, &ReliabilitySequence::nr5g()).unwrap()
    }

    #[test]
    fn table_counts_match_the_tree() {
        let code = small_code();
        for kinds in [NodeKinds::NONE, NodeKinds::ALL] {
            let tree = DecoderTree::build(&code, kinds);
            for variant in [Variant::Ib, Variant::Msib] {
                let set = design_lutset(&code, &tree, variant, 1.0, 3).unwrap();
                let counts = tree.table_counts(variant);
                assert_eq!(set.decoding_table_count(), counts.decoding);
                assert_eq!(set.translations.len(), counts.translation);
                set.check_tree(&tree).unwrap();
            }
        }
    }

    #[test]
    fn translations_are_symmetric() {
        let code = small_code();
        let tree = DecoderTree::build(&code, NodeKinds::ALL);
        let set = design_lutset(&code, &tree, Variant::Ib, 1.0, 4).unwrap();
        for t in &set.translations {
            for k in 0..8 {
                assert_eq!(t[k], -t[15 - k]);
            }
            assert!(t.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn information_obeys_data_processing() {
        let code = small_code();
        let tree = DecoderTree::build(&code, NodeKinds::NONE);
        let (_, reports) = design_lutset_with_report(&code, &tree, Variant::Ib, 1.0, 4).unwrap();
        assert_eq!(reports.len(), tree.edge_count());
        for r in &reports {
            assert!(r.output_information <= r.observation_information + 1e-12, "{r:?}");
            match r.kind {
                EdgeKind::F => assert!(r.output_information <= r.parent_information + 1e-12),
                EdgeKind::G => assert!(r.output_information >= r.parent_information - 1e-12),
            }
        }
    }

    #[test]
    fn foreign_schedule_is_refused() {
        let code = small_code();
        let fast = DecoderTree::build(&code, NodeKinds::ALL);
        let sc = DecoderTree::build(&code, NodeKinds::NONE);
        let set = design_lutset(&code, &fast, Variant::Msib, 1.0, 3).unwrap();
        assert!(matches!(set.check_tree(&sc), Err(Error::Config(_))));
        let mut broken = set.clone();
        broken.tables.pop();
        assert!(matches!(broken.check_tree(&fast), Err(Error::Config(_))));
    }
}
