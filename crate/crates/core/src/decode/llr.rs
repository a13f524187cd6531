//! Floating-point SCL and fast SCL decoders.

use super::arith::{f_exact, f_minsum, g_fun, MetricMode};
use super::{list_decode, DecodeOutput, ListConfig, MessageOps};
use crate::code::PolarCode;
use crate::error::{Error, Result};
use crate::tree::DecoderTree;

/// LLR messages. Exact mode uses the boxplus and saturates at `clip`; approx mode uses min-sum.
#[derive(Clone, Copy, Debug)]
pub struct FloatOps {
    pub mode: MetricMode,
    pub clip: f64,
}

impl FloatOps {
    pub fn new(cfg: &ListConfig) -> Self {
        Self {
            mode: cfg.metric,
            clip: cfg.llr_clip,
        }
    }

    fn sat(&self, x: f64) -> f64 {
        match self.mode {
            MetricMode::Exact => x.clamp(-self.clip, self.clip),
            MetricMode::Approx => x,
        }
    }
}

impl MessageOps for FloatOps {
    type Msg = f64;

    #[inline]
    fn f(&self, _edge: usize, a: f64, b: f64) -> f64 {
        match self.mode {
            MetricMode::Exact => self.sat(f_exact(a, b)),
            MetricMode::Approx => f_minsum(a, b),
        }
    }

    #[inline]
    fn g(&self, _edge: usize, a: f64, b: f64, bit: u8) -> f64 {
        self.sat(g_fun(a, b, bit))
    }

    #[inline]
    fn llr(&self, _leaf: usize, m: f64) -> f64 {
        m
    }
}

fn check_lengths(code: &PolarCode, tree: &DecoderTree, y_llr: &[f64]) -> Result<()> {
    if tree.n() != code.n() {
        return Err(Error::Input("decoder tree and code lengths differ".into()));
    }
    if y_llr.len() != code.len() {
        return Err(Error::Input(format!(
            "expected {} channel LLRs, got {}",
            code.len(),
            y_llr.len()
        )));
    }
    Ok(())
}

/// Conventional SCL on the unpruned tree.
pub fn scl_decode(
    code: &PolarCode,
    tree: &DecoderTree,
    y_llr: &[f64],
    cfg: &ListConfig,
) -> Result<DecodeOutput> {
    if !tree.kinds().is_empty() {
        return Err(Error::Config(
            "SCL decoding needs a tree without special nodes".into(),
        ));
    }
    fscl_decode(code, tree, y_llr, cfg)
}

/// SCL on a pruned tree, dispatching special leaves to the constituent decoders.
pub fn fscl_decode(
    code: &PolarCode,
    tree: &DecoderTree,
    y_llr: &[f64],
    cfg: &ListConfig,
) -> Result<DecodeOutput> {
    check_lengths(code, tree, y_llr)?;
    let ops = FloatOps::new(cfg);
    let channel: Vec<f64> = y_llr.iter().map(|&l| ops.sat(l)).collect();
    list_decode(tree, &ops, &channel, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{polar_transform, ReliabilitySequence};
    use crate::crc::CrcConfig;
    use crate::decode::arith::hard;
    use crate::tree::NodeKinds;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn example_code() -> PolarCode {
        PolarCode::from_info_set(8, 4, CrcConfig::NONE, vec![3, 5, 6, 7]).unwrap()
    }

    fn noisy_llrs(rng: &mut ChaCha8Rng, x: &[u8], sigma: f64) -> Vec<f64> {
        x.iter()
            .map(|&b| {
                let s = if b == 0 { 1.0 } else { -1.0 };
                let noise: f64 = rng.sample(rand_distr::StandardNormal);
                2.0 * (s + sigma * noise) / (sigma * sigma)
            })
            .collect()
    }

    /// Plain recursive SC with min-sum, independent of the list machinery.
    fn sc_reference(alpha: &[f64], frozen: &[bool], u: &mut Vec<u8>) -> Vec<u8> {
        if alpha.len() == 1 {
            let bit = if frozen[0] { 0 } else { hard(alpha[0]) };
            u.push(bit);
            return vec![bit];
        }
        let h = alpha.len() / 2;
        let left: Vec<f64> = (0..h).map(|i| f_minsum(alpha[i], alpha[i + h])).collect();
        let bl = sc_reference(&left, &frozen[..h], u);
        let right: Vec<f64> = (0..h).map(|i| g_fun(alpha[i], alpha[i + h], bl[i])).collect();
        let br = sc_reference(&right, &frozen[h..], u);
        let mut out: Vec<u8> = bl.iter().zip(&br).map(|(a, b)| a ^ b).collect();
        out.extend(br);
        out
    }

    #[test]
    fn noiseless_channel_decodes_with_zero_metric() {
        let seq = ReliabilitySequence::nr5g();
        let code = PolarCode::construct(64, 24, CrcConfig::CCITT16, &seq).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kinds in [NodeKinds::NONE, NodeKinds::ALL] {
            let tree = DecoderTree::build(&code, kinds);
            let payload: Vec<u8> = (0..24).map(|_| rng.random_range(0..2)).collect();
            let u = code.assemble_u(&payload).unwrap();
            let x = code.encode(&u).unwrap();
            let y: Vec<f64> = x.iter().map(|&b| if b == 0 { 30.0 } else { -30.0 }).collect();
            let out = fscl_decode(&code, &tree, &y, &ListConfig::new(8, MetricMode::Approx)).unwrap();
            assert_eq!(out.best().u, u);
            assert_eq!(out.best().metric, 0.0);
            assert_eq!(out.select(&code).u, u);
        }
    }

    #[test]
    fn full_list_matches_codeword_enumeration() {
        let code = example_code();
        let tree = DecoderTree::build(&code, NodeKinds::NONE);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let y: Vec<f64> = (0..8).map(|_| rng.random_range(-4.0..4.0)).collect();
            // every codeword with its hard-decision penalty
            let mut brute: Vec<(Vec<u8>, f64)> = (0..16u32)
                .map(|m| {
                    let mut u = vec![0u8; 8];
                    for (k, &pos) in code.info_set().iter().enumerate() {
                        u[pos] = ((m >> k) & 1) as u8;
                    }
                    let mut x = u.clone();
                    polar_transform(&mut x);
                    let pen = x
                        .iter()
                        .zip(&y)
                        .map(|(&b, &l)| if b != hard(l) { l.abs() } else { 0.0 })
                        .sum();
                    (u, pen)
                })
                .collect();
            brute.sort_by(|a, b| a.1.total_cmp(&b.1));
            let out = scl_decode(&code, &tree, &y, &ListConfig::new(16, MetricMode::Approx)).unwrap();
            assert_eq!(out.candidates.len(), 16);
            assert!((out.best().metric - brute[0].1).abs() < 1e-9);
            for c in &out.candidates {
                let (_, pen) = brute.iter().find(|(u, _)| *u == c.u).unwrap();
                assert!((pen - c.metric).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn list_of_one_is_sc() {
        let seq = ReliabilitySequence::nr5g();
        let code = PolarCode::construct(128, 48, CrcConfig::NONE, &seq).unwrap();
        let tree = DecoderTree::build(&code, NodeKinds::NONE);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let x = vec![0u8; 128];
            let y = noisy_llrs(&mut rng, &x, 0.9);
            let mut u_ref = Vec::new();
            sc_reference(&y, code.frozen_mask(), &mut u_ref);
            let out = scl_decode(&code, &tree, &y, &ListConfig::new(1, MetricMode::Approx)).unwrap();
            assert_eq!(out.candidates.len(), 1);
            assert_eq!(out.best().u, u_ref);
        }
    }

    #[test]
    fn metrics_are_nonnegative_and_sorted() {
        let seq = ReliabilitySequence::nr5g();
        let code = PolarCode::construct(64, 32, CrcConfig::NONE, &seq).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for kinds in [NodeKinds::NONE, NodeKinds::ALL] {
            let tree = DecoderTree::build(&code, kinds);
            for mode in [MetricMode::Approx, MetricMode::Exact] {
                let y = noisy_llrs(&mut rng, &[0; 64], 1.0);
                let out = fscl_decode(&code, &tree, &y, &ListConfig::new(8, mode)).unwrap();
                assert!(out.candidates.len() <= 8);
                assert!(out.candidates.windows(2).all(|w| w[0].metric <= w[1].metric));
                assert!(out.candidates.iter().all(|c| c.metric >= 0.0));
                for c in &out.candidates {
                    assert!(code.encode(&c.u).is_ok(), "frozen bits must stay zero");
                }
            }
        }
    }

    #[test]
    fn fast_tree_touches_two_nodes() {
        let code = example_code();
        let tree = DecoderTree::build(&code, NodeKinds::ALL);
        let y = [1.0, -0.5, 2.0, 0.3, -1.0, 0.7, 1.1, -2.0];
        let out = fscl_decode(&code, &tree, &y, &ListConfig::new(4, MetricMode::Approx)).unwrap();
        assert_eq!(out.touched_leaves, vec![0, 1]);
        assert_eq!(out.touched_edges, vec![0, 1]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let code = example_code();
        let fast = DecoderTree::build(&code, NodeKinds::ALL);
        let sc = DecoderTree::build(&code, NodeKinds::NONE);
        let cfg = ListConfig::new(4, MetricMode::Approx);
        assert!(scl_decode(&code, &fast, &[0.0; 8], &cfg).is_err());
        assert!(scl_decode(&code, &sc, &[0.0; 4], &cfg).is_err());
        assert!(scl_decode(&code, &sc, &[0.0; 8], &ListConfig::new(0, MetricMode::Approx)).is_err());
    }

    #[test]
    fn empty_kinds_fast_equals_scl() {
        let seq = ReliabilitySequence::nr5g();
        let code = PolarCode::construct(64, 20, CrcConfig::CCITT16, &seq).unwrap();
        let tree = DecoderTree::build(&code, NodeKinds::NONE);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for mode in [MetricMode::Approx, MetricMode::Exact] {
            let cfg = ListConfig::new(4, mode);
            let y = noisy_llrs(&mut rng, &[0; 64], 0.8);
            let a = scl_decode(&code, &tree, &y, &cfg).unwrap();
            let b = fscl_decode(&code, &tree, &y, &cfg).unwrap();
            assert_eq!(a.candidates, b.candidates);
        }
    }
}
