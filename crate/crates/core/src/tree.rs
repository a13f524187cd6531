//! Decoder tree construction and pruning into special constituent nodes.
//!
//! The tree is pruned top-down: every node whose leaf span matches an enabled
//! special pattern becomes a leaf of the pruned tree, otherwise it is split
//! into its two halves. Edges and leaves get ids in activation order
//! (depth-first, left before right), which makes lookup-table files stable
//! for a given schedule.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::code::PolarCode;
use crate::error::{Error, Result};
use crate::ib::Variant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    Sc,
    R0,
    R1,
    Rep,
    Spc,
    LeafFrozen,
    LeafInfo,
}

impl NodeKind {
    pub fn is_special(self) -> bool {
        matches!(self, NodeKind::R0 | NodeKind::R1 | NodeKind::Rep | NodeKind::Spc)
    }

    pub fn label(self) -> &'static str {
        match self {
            NodeKind::Sc => "SC",
            NodeKind::R0 => "R0",
            NodeKind::R1 => "R1",
            NodeKind::Rep => "Rep",
            NodeKind::Spc => "SPC",
            NodeKind::LeafFrozen => "Frozen",
            NodeKind::LeafInfo => "Info",
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Set of special node types the pruning may emit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NodeKinds {
    pub r0: bool,
    pub r1: bool,
    pub rep: bool,
    pub spc: bool,
}

impl NodeKinds {
    pub const NONE: NodeKinds = NodeKinds {
        r0: false,
        r1: false,
        rep: false,
        spc: false,
    };
    pub const SSC: NodeKinds = NodeKinds {
        r0: true,
        r1: true,
        rep: false,
        spc: false,
    };
    pub const ALL: NodeKinds = NodeKinds {
        r0: true,
        r1: true,
        rep: true,
        spc: true,
    };

    pub fn is_empty(&self) -> bool {
        *self == Self::NONE
    }

    pub fn contains(&self, kind: NodeKind) -> bool {
        match kind {
            NodeKind::R0 => self.r0,
            NodeKind::R1 => self.r1,
            NodeKind::Rep => self.rep,
            NodeKind::Spc => self.spc,
            _ => false,
        }
    }
}

impl FromStr for NodeKinds {
    type Err = Error;

    /// Comma separated subset of `r0,r1,rep,spc`; `all` and the empty string are accepted.
    fn from_str(s: &str) -> Result<Self> {
        let mut kinds = NodeKinds::NONE;
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match tok.to_ascii_lowercase().as_str() {
                "r0" => kinds.r0 = true,
                "r1" => kinds.r1 = true,
                "rep" => kinds.rep = true,
                "spc" => kinds.spc = true,
                "all" => kinds = NodeKinds::ALL,
                "none" => {}
                other => return Err(Error::Config(format!("unknown node type {other:?}"))),
            }
        }
        Ok(kinds)
    }
}

impl fmt::Display for NodeKinds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = [
            (self.r0, "r0"),
            (self.r1, "r1"),
            (self.rep, "rep"),
            (self.spc, "spc"),
        ]
        .iter()
        .filter(|(on, _)| *on)
        .map(|(_, n)| *n)
        .collect();
        f.write_str(&names.join(","))
    }
}

/// Classifies a leaf span (`true` = frozen).
///
/// Checks run in the order R0, R1, Rep, SPC; kinds that are not enabled fall
/// through. A single-bit span that is not claimed by R0/R1 becomes a plain leaf.
pub fn classify(mask: &[bool], kinds: NodeKinds) -> NodeKind {
    assert!(!mask.is_empty(), "empty span");
    let frozen = mask.iter().filter(|&&f| f).count();
    let len = mask.len();
    if kinds.r0 && frozen == len {
        return NodeKind::R0;
    }
    if kinds.r1 && frozen == 0 {
        return NodeKind::R1;
    }
    if len == 1 {
        return if mask[0] {
            NodeKind::LeafFrozen
        } else {
            NodeKind::LeafInfo
        };
    }
    if kinds.rep && frozen == len - 1 && !mask[len - 1] {
        return NodeKind::Rep;
    }
    if kinds.spc && frozen == 1 && mask[0] {
        return NodeKind::Spc;
    }
    NodeKind::Sc
}

/// One leaf of the pruned tree, in activation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSpec {
    /// 1-based position in the schedule.
    pub id: usize,
    pub depth: usize,
    pub size: usize,
    pub span_start: usize,
    pub kind: NodeKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    /// Towards a left child (check-node update).
    F,
    /// Towards a right child (variable-node update with partial sums).
    G,
}

/// A pruned-tree edge, identified by the child it leads to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: usize,
    pub kind: EdgeKind,
    /// Depth of the child node.
    pub depth: usize,
    /// First leaf index spanned by the child node.
    pub span_start: usize,
}

/// Node of the pruned tree arena. Interior nodes have `children`; leaves have `leaf`.
#[derive(Clone, Debug)]
pub struct TreeNode {
    pub depth: usize,
    pub size: usize,
    pub span_start: usize,
    pub kind: NodeKind,
    /// Arena indices of the (left, right) children.
    pub children: Option<(usize, usize)>,
    /// Id of the edge leading into this node (None for the root).
    pub in_edge: Option<usize>,
    /// Leaf id when this node is a leaf of the pruned tree.
    pub leaf: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCounts {
    pub decoding: usize,
    pub translation: usize,
}

/// Pruned decoder tree with its activation schedule and edge/leaf indexing.
#[derive(Clone, Debug)]
pub struct DecoderTree {
    n: usize,
    kinds: NodeKinds,
    nodes: Vec<TreeNode>,
    schedule: Vec<NodeSpec>,
    edges: Vec<EdgeSpec>,
    leaf_nodes: Vec<usize>,
    hash: String,
}

impl DecoderTree {
    pub fn build(code: &PolarCode, kinds: NodeKinds) -> Self {
        Self::from_mask(code.frozen_mask(), kinds)
    }

    /// Builds the pruned tree of a frozen mask whose length is a power of two.
    pub fn from_mask(mask: &[bool], kinds: NodeKinds) -> Self {
        assert!(mask.len().is_power_of_two(), "mask length must be 2^n");
        let mut tree = DecoderTree {
            n: mask.len().trailing_zeros() as usize,
            kinds,
            nodes: Vec::new(),
            schedule: Vec::new(),
            edges: Vec::new(),
            leaf_nodes: Vec::new(),
            hash: String::new(),
        };
        tree.grow(mask, 0, 0, None);
        tree.hash = tree.compute_hash(mask);
        tree
    }

    fn grow(&mut self, mask: &[bool], depth: usize, start: usize, in_edge: Option<usize>) -> usize {
        let size = mask.len() >> depth;
        let kind = classify(&mask[start..start + size], self.kinds);
        let idx = self.nodes.len();
        self.nodes.push(TreeNode {
            depth,
            size,
            span_start: start,
            kind,
            children: None,
            in_edge,
            leaf: None,
        });
        if kind == NodeKind::Sc {
            let half = size / 2;
            let f = self.push_edge(EdgeKind::F, depth + 1, start);
            let left = self.grow(mask, depth + 1, start, Some(f));
            let g = self.push_edge(EdgeKind::G, depth + 1, start + half);
            let right = self.grow(mask, depth + 1, start + half, Some(g));
            self.nodes[idx].children = Some((left, right));
        } else {
            let leaf = self.schedule.len();
            self.nodes[idx].leaf = Some(leaf);
            self.leaf_nodes.push(idx);
            self.schedule.push(NodeSpec {
                id: leaf + 1,
                depth,
                size,
                span_start: start,
                kind,
            });
        }
        idx
    }

    fn push_edge(&mut self, kind: EdgeKind, depth: usize, span_start: usize) -> usize {
        let id = self.edges.len();
        self.edges.push(EdgeSpec {
            id,
            kind,
            depth,
            span_start,
        });
        id
    }

    fn compute_hash(&self, mask: &[bool]) -> String {
        let mut h = Sha256::new();
        h.update(format!("n={};kinds={};", self.n, self.kinds).as_bytes());
        h.update(mask.iter().map(|&f| if f { b'1' } else { b'0' }).collect::<Vec<u8>>());
        for s in &self.schedule {
            h.update(format!(";{},{},{}", s.depth, s.span_start, s.kind).as_bytes());
        }
        hex::encode(&h.finalize()[..16])
    }

    /// log2 of the block length.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kinds(&self) -> NodeKinds {
        self.kinds
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn node(&self, idx: usize) -> &TreeNode {
        &self.nodes[idx]
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    /// Pruned-tree leaves in activation order.
    pub fn schedule(&self) -> &[NodeSpec] {
        &self.schedule
    }

    pub fn edges(&self) -> &[EdgeSpec] {
        &self.edges
    }

    /// Arena index of leaf `leaf_id`.
    pub fn leaf_node(&self, leaf_id: usize) -> usize {
        self.leaf_nodes[leaf_id]
    }

    pub fn leaf_count(&self) -> usize {
        self.schedule.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn f_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.kind == EdgeKind::F).count()
    }

    pub fn g_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.kind == EdgeKind::G).count()
    }

    /// Digest of the code's frozen mask, enabled kinds and schedule.
    pub fn schedule_hash(&self) -> &str {
        &self.hash
    }

    /// Lookup tables a finite-alphabet list decoder needs on this tree.
    ///
    /// IB needs one decoding table per edge. MSIB replaces the f-edge tables by
    /// index arithmetic, leaving the g-edge tables plus the channel quantizer.
    /// Both need one translation table per leaf.
    pub fn table_counts(&self, variant: Variant) -> TableCounts {
        let decoding = match variant {
            Variant::Ib => self.edge_count(),
            Variant::Msib => self.g_edge_count() + 1,
        };
        TableCounts {
            decoding,
            translation: self.leaf_count(),
        }
    }

    /// `(i_v, d, kind)` for every scheduled node.
    pub fn dump_schedule(&self) -> Vec<(usize, usize, NodeKind)> {
        self.schedule
            .iter()
            .map(|s| (s.id, s.depth, s.kind))
            .collect()
    }

    /// Schedule as TSV lines: `i_v, d, kind, N_v, span_start`.
    pub fn schedule_tsv(&self) -> String {
        let mut out = String::new();
        for s in &self.schedule {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                s.id, s.depth, s.kind, s.size, s.span_start
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crc::CrcConfig;
    use crate::ReliabilitySequence;
    use proptest::prelude::*;

    fn mask(bits: &[u8]) -> Vec<bool> {
        bits.iter().map(|&b| b == 1).collect()
    }

    fn example_mask() -> Vec<bool> {
        // A = {3,5,6,7}
        mask(&[1, 1, 1, 0, 1, 0, 0, 0])
    }

    #[test]
    fn classify_patterns() {
        let all = NodeKinds::ALL;
        assert_eq!(classify(&mask(&[1, 1, 1, 0]), all), NodeKind::Rep);
        assert_eq!(classify(&mask(&[1, 0, 0, 0]), all), NodeKind::Spc);
        assert_eq!(classify(&mask(&[0]), all), NodeKind::R1);
        assert_eq!(classify(&mask(&[1]), all), NodeKind::R0);
        assert_eq!(classify(&mask(&[1, 1]), all), NodeKind::R0);
        assert_eq!(classify(&mask(&[0, 0]), all), NodeKind::R1);
        // [1,0] is both Rep and SPC; Rep wins.
        assert_eq!(classify(&mask(&[1, 0]), all), NodeKind::Rep);
        assert_eq!(
            classify(&mask(&[1, 0]), NodeKinds { spc: true, ..NodeKinds::NONE }),
            NodeKind::Spc
        );
        assert_eq!(classify(&mask(&[0, 1]), all), NodeKind::Sc);
        assert_eq!(classify(&mask(&[1, 0, 1, 0]), all), NodeKind::Sc);
        assert_eq!(classify(&mask(&[1, 1, 1, 0]), NodeKinds::SSC), NodeKind::Sc);
        assert_eq!(classify(&mask(&[0]), NodeKinds::NONE), NodeKind::LeafInfo);
        assert_eq!(classify(&mask(&[1]), NodeKinds::NONE), NodeKind::LeafFrozen);
    }

    #[test]
    fn eight_bit_example_fast_tree() {
        let t = DecoderTree::from_mask(&example_mask(), NodeKinds::ALL);
        assert_eq!(
            t.dump_schedule(),
            vec![(1, 1, NodeKind::Rep), (2, 1, NodeKind::Spc)]
        );
        assert_eq!(t.schedule()[0].size, 4);
        assert_eq!(t.edge_count(), 2);
        assert_eq!(t.leaf_count(), 2);
    }

    #[test]
    fn eight_bit_example_ssc_and_sc_trees() {
        let ssc = DecoderTree::from_mask(&example_mask(), NodeKinds::SSC);
        assert_eq!(ssc.edge_count(), 10);
        assert_eq!(ssc.leaf_count(), 6);
        let sc = DecoderTree::from_mask(&example_mask(), NodeKinds::NONE);
        assert_eq!(sc.edge_count(), 14);
        assert_eq!(sc.leaf_count(), 8);
        assert_eq!(
            sc.table_counts(Variant::Ib),
            TableCounts { decoding: 14, translation: 8 }
        );
    }

    #[test]
    fn edges_numbered_in_activation_order() {
        let t = DecoderTree::from_mask(&example_mask(), NodeKinds::SSC);
        let kinds: Vec<EdgeKind> = t.edges().iter().map(|e| e.kind).collect();
        use EdgeKind::{F, G};
        // root-f, (R0), g, f(2), g(3), root-g, f, f(4), g(5), g(R1)
        assert_eq!(kinds, vec![F, F, G, F, G, G, F, F, G, G]);
        assert!(t.edges().iter().enumerate().all(|(i, e)| e.id == i));
    }

    #[test]
    fn full_scale_schedule_length() {
        let seq = ReliabilitySequence::nr5g();
        let code = PolarCode::construct(1024, 512, CrcConfig::CCITT16, &seq).unwrap();
        let t = DecoderTree::build(&code, NodeKinds::ALL);
        assert_eq!(t.leaf_count(), 86);
        assert_eq!(t.dump_schedule()[0], (1, 3, NodeKind::Rep));
        assert_eq!(t.dump_schedule()[85], (86, 3, NodeKind::Spc));
        assert_eq!(t.schedule_tsv().lines().count(), 86);
    }

    #[test]
    fn parse_kinds() {
        assert_eq!("".parse::<NodeKinds>().unwrap(), NodeKinds::NONE);
        assert_eq!("r0,r1".parse::<NodeKinds>().unwrap(), NodeKinds::SSC);
        assert_eq!("R0, r1 ,rep,SPC".parse::<NodeKinds>().unwrap(), NodeKinds::ALL);
        assert!("r2".parse::<NodeKinds>().is_err());
        assert_eq!(NodeKinds::ALL.to_string(), "r0,r1,rep,spc");
    }

    #[test]
    fn hash_depends_on_schedule() {
        let a = DecoderTree::from_mask(&example_mask(), NodeKinds::ALL);
        let b = DecoderTree::from_mask(&example_mask(), NodeKinds::SSC);
        let c = DecoderTree::from_mask(&example_mask(), NodeKinds::ALL);
        assert_ne!(a.schedule_hash(), b.schedule_hash());
        assert_eq!(a.schedule_hash(), c.schedule_hash());
    }

    fn kinds_strategy() -> impl Strategy<Value = NodeKinds> {
        (any::<bool>(), any::<bool>(), any::<bool>(), any::<bool>())
            .prop_map(|(r0, r1, rep, spc)| NodeKinds { r0, r1, rep, spc })
    }

    proptest! {
        #[test]
        fn pruned_tree_structure(n in 1usize..9, bits in proptest::collection::vec(any::<bool>(), 256),
                                 kinds in kinds_strategy()) {
            let len = 1 << n;
            let m = &bits[..len];
            let t = DecoderTree::from_mask(m, kinds);
            // leaves tile [0, N)
            let mut next = 0;
            for s in t.schedule() {
                prop_assert_eq!(s.span_start, next);
                prop_assert_eq!(s.size, len >> s.depth);
                prop_assert_eq!(s.span_start % s.size, 0);
                prop_assert!(s.kind != NodeKind::Sc);
                prop_assert_eq!(classify(&m[s.span_start..s.span_start + s.size], kinds), s.kind);
                next += s.size;
            }
            prop_assert_eq!(next, len);
            let leaves = t.leaf_count();
            prop_assert_eq!(t.edge_count(), 2 * leaves - 2);
            prop_assert_eq!(t.f_edge_count(), leaves - 1);
            prop_assert_eq!(t.g_edge_count(), leaves - 1);
            prop_assert_eq!(t.table_counts(Variant::Msib).decoding, t.table_counts(Variant::Msib).translation);
        }

        #[test]
        fn no_kinds_gives_full_tree(n in 1usize..9, bits in proptest::collection::vec(any::<bool>(), 256)) {
            let len = 1 << n;
            let t = DecoderTree::from_mask(&bits[..len], NodeKinds::NONE);
            prop_assert_eq!(t.leaf_count(), len);
            prop_assert_eq!(t.edge_count(), 2 * len - 2);
            prop_assert_eq!(t.table_counts(Variant::Ib), TableCounts { decoding: 2 * len - 2, translation: len });
        }

        #[test]
        fn classification_is_exclusive(bits in proptest::collection::vec(any::<bool>(), 1..17)) {
            let k = classify(&bits, NodeKinds::ALL);
            let frozen = bits.iter().filter(|&&b| b).count();
            let l = bits.len();
            let matches = [
                frozen == l,
                frozen == 0,
                l > 1 && frozen == l - 1 && !bits[l - 1],
                l > 1 && frozen == 1 && bits[0],
            ];
            let first = matches.iter().position(|&m| m);
            let expect = match first {
                Some(0) => NodeKind::R0,
                Some(1) => NodeKind::R1,
                Some(2) => NodeKind::Rep,
                Some(3) => NodeKind::Spc,
                _ => NodeKind::Sc,
            };
            prop_assert_eq!(k, expect);
        }
    }
}
