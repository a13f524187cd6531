//! List decoding over a (possibly pruned) decoder tree.
//!
//! [`list_decode`] runs the successive-cancellation list schedule of a
//! [`DecoderTree`], parameterised by a [`MessageOps`] that supplies the
//! f/g updates and the leaf translation to LLRs. The float decoders use LLR
//! messages directly; the finite-alphabet decoders use integer messages and
//! lookup tables. Path metrics are always floating point.

pub mod arith;
pub mod llr;
pub mod nodes;

use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::code::{polar_transform, PolarCode};
use crate::error::{Error, Result};
use crate::tree::{DecoderTree, NodeKind};

pub use arith::{combine, f_exact, f_minsum, g_fun, hard, metric_update, MetricMode};
pub use llr::{fscl_decode, scl_decode, FloatOps};
pub use nodes::{node_r0, node_r1, node_rep, node_spc, select_best, Survivor};

/// Message arithmetic of a decoder family.
pub trait MessageOps {
    type Msg: Copy + Default;

    /// Left-child update on edge `edge`.
    fn f(&self, edge: usize, a: Self::Msg, b: Self::Msg) -> Self::Msg;
    /// Right-child update on edge `edge` given the left partial sum.
    fn g(&self, edge: usize, a: Self::Msg, b: Self::Msg, bit: u8) -> Self::Msg;
    /// LLR of a message arriving at pruned-tree leaf `leaf`.
    fn llr(&self, leaf: usize, m: Self::Msg) -> f64;
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ListConfig {
    pub list_size: usize,
    pub metric: MetricMode,
    /// Saturation of float LLRs in exact mode.
    pub llr_clip: f64,
}

impl ListConfig {
    pub fn new(list_size: usize, metric: MetricMode) -> Self {
        Self {
            list_size,
            metric,
            llr_clip: 30.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.list_size == 0 {
            return Err(Error::Config("list size must be at least 1".into()));
        }
        if self.llr_clip.is_nan() || self.llr_clip <= 0.0 {
            return Err(Error::Config("LLR clip must be positive".into()));
        }
        Ok(())
    }
}

/// One decoded candidate: encoder input estimate and its path metric.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub u: Vec<u8>,
    pub metric: f64,
}

#[derive(Clone, Debug)]
pub struct DecodeOutput {
    /// Final list, sorted by metric (stable in list order).
    pub candidates: Vec<Candidate>,
    /// Pruned-tree edges whose update was evaluated.
    pub touched_edges: Vec<usize>,
    /// Pruned-tree leaves that were activated.
    pub touched_leaves: Vec<usize>,
}

impl DecodeOutput {
    pub fn best(&self) -> &Candidate {
        &self.candidates[0]
    }

    /// CRC-aided selection: the best candidate passing the CRC, else the best overall.
    pub fn select(&self, code: &PolarCode) -> &Candidate {
        self.candidates
            .iter()
            .find(|c| code.crc_check(&code.extract_info(&c.u)))
            .unwrap_or(&self.candidates[0])
    }
}

#[derive(Clone)]
struct Path<M> {
    metric: f64,
    alpha: Vec<Rc<Vec<M>>>,
    beta: Vec<Rc<Vec<u8>>>,
}

struct Walker<'a, O: MessageOps> {
    tree: &'a DecoderTree,
    ops: &'a O,
    cfg: &'a ListConfig,
    edges_seen: Vec<bool>,
    leaves_seen: Vec<bool>,
}

/// Runs the list decoder of `tree` on root messages `channel`.
pub fn list_decode<O: MessageOps>(
    tree: &DecoderTree,
    ops: &O,
    channel: &[O::Msg],
    cfg: &ListConfig,
) -> Result<DecodeOutput> {
    cfg.validate()?;
    let n = tree.n();
    if channel.len() != 1 << n {
        return Err(Error::Input(format!(
            "expected {} channel messages, got {}",
            1usize << n,
            channel.len()
        )));
    }
    let mut alpha: Vec<Rc<Vec<O::Msg>>> = (0..=n)
        .map(|d| Rc::new(vec![O::Msg::default(); 1 << (n - d)]))
        .collect();
    alpha[0] = Rc::new(channel.to_vec());
    let beta = (0..=n).map(|d| Rc::new(vec![0u8; 1 << (n - d)])).collect();
    let mut paths = vec![Path {
        metric: 0.0,
        alpha,
        beta,
    }];

    let mut walker = Walker {
        tree,
        ops,
        cfg,
        edges_seen: vec![false; tree.edge_count()],
        leaves_seen: vec![false; tree.leaf_count()],
    };
    walker.visit(tree.root(), &mut paths);

    let mut candidates: Vec<Candidate> = paths
        .into_iter()
        .map(|p| {
            let mut u = p.beta[0].as_ref().clone();
            polar_transform(&mut u);
            Candidate {
                u,
                metric: p.metric,
            }
        })
        .collect();
    candidates.sort_by(|a, b| a.metric.total_cmp(&b.metric));
    let collect = |seen: &[bool]| -> Vec<usize> {
        seen.iter()
            .enumerate()
            .filter_map(|(i, &s)| s.then_some(i))
            .collect()
    };
    Ok(DecodeOutput {
        candidates,
        touched_edges: collect(&walker.edges_seen),
        touched_leaves: collect(&walker.leaves_seen),
    })
}

impl<O: MessageOps> Walker<'_, O> {
    fn visit(&mut self, idx: usize, paths: &mut Vec<Path<O::Msg>>) {
        let node = self.tree.node(idx);
        let Some((left, right)) = node.children else {
            self.leaf(idx, paths);
            return;
        };
        let d = node.depth;
        let half = node.size / 2;
        let ops = self.ops;

        let fe = self.tree.node(left).in_edge.expect("child has an edge");
        self.edges_seen[fe] = true;
        for p in paths.iter_mut() {
            let a = Rc::clone(&p.alpha[d]);
            let out = Rc::make_mut(&mut p.alpha[d + 1]);
            for i in 0..half {
                out[i] = ops.f(fe, a[i], a[i + half]);
            }
        }
        self.visit(left, paths);

        let ge = self.tree.node(right).in_edge.expect("child has an edge");
        self.edges_seen[ge] = true;
        for p in paths.iter_mut() {
            let a = Rc::clone(&p.alpha[d]);
            let bl = Rc::clone(&p.beta[d + 1]);
            let out = Rc::make_mut(&mut p.alpha[d + 1]);
            for i in 0..half {
                out[i] = ops.g(ge, a[i], a[i + half], bl[i]);
            }
            Rc::make_mut(&mut p.beta[d])[..half].copy_from_slice(&bl);
        }
        self.visit(right, paths);

        for p in paths.iter_mut() {
            let br = Rc::clone(&p.beta[d + 1]);
            let bv = Rc::make_mut(&mut p.beta[d]);
            for i in 0..half {
                bv[i] ^= br[i];
                bv[half + i] = br[i];
            }
        }
    }

    fn leaf(&mut self, idx: usize, paths: &mut Vec<Path<O::Msg>>) {
        let node = self.tree.node(idx);
        let leaf = node.leaf.expect("pruned-tree leaf");
        self.leaves_seen[leaf] = true;
        let d = node.depth;
        let list_size = self.cfg.list_size;

        if node.size == 1 {
            let frozen = matches!(node.kind, NodeKind::LeafFrozen | NodeKind::R0);
            let mode = self.cfg.metric;
            if frozen {
                for p in paths.iter_mut() {
                    let l = self.ops.llr(leaf, p.alpha[d][0]);
                    p.metric += metric_update(0, l, mode);
                    Rc::make_mut(&mut p.beta[d])[0] = 0;
                }
                return;
            }
            let mut metrics = Vec::with_capacity(2 * paths.len());
            for p in paths.iter() {
                let l = self.ops.llr(leaf, p.alpha[d][0]);
                metrics.push(p.metric + metric_update(0, l, mode));
                metrics.push(p.metric + metric_update(1, l, mode));
            }
            let kept = select_best(&metrics, list_size);
            let old = std::mem::take(paths);
            *paths = kept
                .into_iter()
                .map(|c| {
                    let mut p = old[c / 2].clone();
                    p.metric = metrics[c];
                    p.beta[d] = Rc::new(vec![(c % 2) as u8]);
                    p
                })
                .collect();
            return;
        }

        let metrics: Vec<f64> = paths.iter().map(|p| p.metric).collect();
        let llrs: Vec<Vec<f64>> = paths
            .iter()
            .map(|p| p.alpha[d].iter().map(|&m| self.ops.llr(leaf, m)).collect())
            .collect();
        let survivors = match node.kind {
            NodeKind::R0 => node_r0(&metrics, &llrs),
            NodeKind::Rep => node_rep(&metrics, &llrs, list_size),
            NodeKind::R1 => node_r1(&metrics, &llrs, list_size),
            NodeKind::Spc => node_spc(&metrics, &llrs, list_size),
            other => unreachable!("{other} node spanning {} bits", node.size),
        };
        let old = std::mem::take(paths);
        *paths = survivors
            .into_iter()
            .map(|s| {
                let mut p = old[s.parent].clone();
                p.metric = s.metric;
                p.beta[d] = Rc::new(s.bits);
                p
            })
            .collect();
    }
}
