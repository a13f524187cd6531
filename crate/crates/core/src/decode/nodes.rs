//! List decoders for the R0, Rep, R1 and SPC constituent nodes.
//!
//! Every function takes the metrics and LLR vectors of the paths entering the
//! node and returns at most `list_size` survivors, each naming its parent
//! path. Candidates are generated in (parent, unflipped-before-flipped) order
//! and that order breaks metric ties when pruning. All updates use the
//! hard-decision penalty `|α|`.

use super::arith::hard;

/// A path leaving a constituent node.
#[derive(Clone, Debug, PartialEq)]
pub struct Survivor {
    pub parent: usize,
    pub bits: Vec<u8>,
    pub metric: f64,
}

/// Indices of the `keep` smallest metrics (ties go to the lower index), in ascending index order.
pub fn select_best(metrics: &[f64], keep: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..metrics.len()).collect();
    if metrics.len() > keep {
        idx.sort_by(|&a, &b| metrics[a].total_cmp(&metrics[b]).then(a.cmp(&b)));
        idx.truncate(keep);
        idx.sort_unstable();
    }
    idx
}

fn prune<T>(cands: Vec<T>, keep: usize, metric: impl Fn(&T) -> f64) -> Vec<T> {
    if cands.len() <= keep {
        return cands;
    }
    let metrics: Vec<f64> = cands.iter().map(&metric).collect();
    let kept = select_best(&metrics, keep);
    let mut slots: Vec<Option<T>> = cands.into_iter().map(Some).collect();
    kept.into_iter().map(|i| slots[i].take().unwrap()).collect()
}

/// Penalty of the all-zero word.
fn zero_penalty(llr: &[f64]) -> f64 {
    llr.iter().filter(|&&a| a < 0.0).map(|a| a.abs()).sum()
}

/// Penalty of the all-one word.
fn one_penalty(llr: &[f64]) -> f64 {
    llr.iter().filter(|&&a| a >= 0.0).map(|a| a.abs()).sum()
}

/// Positions sorted by increasing `|α|`; index order breaks ties.
fn reliability_order(llr: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..llr.len()).collect();
    order.sort_by(|&a, &b| llr[a].abs().total_cmp(&llr[b].abs()));
    order
}

/// Rate-0: the all-zero word, no forking.
pub fn node_r0(metrics: &[f64], llrs: &[Vec<f64>]) -> Vec<Survivor> {
    metrics
        .iter()
        .zip(llrs)
        .enumerate()
        .map(|(j, (&mu, llr))| Survivor {
            parent: j,
            bits: vec![0; llr.len()],
            metric: mu + zero_penalty(llr),
        })
        .collect()
}

/// Repetition: every path forks into the all-zero and all-one words.
pub fn node_rep(metrics: &[f64], llrs: &[Vec<f64>], list_size: usize) -> Vec<Survivor> {
    let mut cands = Vec::with_capacity(2 * metrics.len());
    for (j, (&mu, llr)) in metrics.iter().zip(llrs).enumerate() {
        cands.push(Survivor {
            parent: j,
            bits: vec![0; llr.len()],
            metric: mu + zero_penalty(llr),
        });
        cands.push(Survivor {
            parent: j,
            bits: vec![1; llr.len()],
            metric: mu + one_penalty(llr),
        });
    }
    prune(cands, list_size, |c| c.metric)
}

struct Fork {
    parent: usize,
    bits: Vec<u8>,
    metric: f64,
    /// Parity of `bits` before the SPC parity fix.
    parity: u8,
}

/// Rate-1: start from the hard decisions and flip the `min(N_L - 1, N_v)`
/// least reliable positions one at a time, pruning after each split.
pub fn node_r1(metrics: &[f64], llrs: &[Vec<f64>], list_size: usize) -> Vec<Survivor> {
    let size = llrs.first().map_or(0, Vec::len);
    let steps = list_size.saturating_sub(1).min(size);
    let orders: Vec<Vec<usize>> = llrs.iter().map(|l| reliability_order(l)).collect();
    let mut cands: Vec<Fork> = metrics
        .iter()
        .zip(llrs)
        .enumerate()
        .map(|(j, (&mu, llr))| Fork {
            parent: j,
            bits: llr.iter().map(|&a| hard(a)).collect(),
            metric: mu,
            parity: 0,
        })
        .collect();
    cands = prune(cands, list_size, |c| c.metric);
    for step in 0..steps {
        let mut next = Vec::with_capacity(2 * cands.len());
        for c in cands {
            let pos = orders[c.parent][step];
            let mut flipped = c.bits.clone();
            flipped[pos] ^= 1;
            let metric = c.metric + llrs[c.parent][pos].abs();
            let parent = c.parent;
            next.push(c);
            next.push(Fork {
                parent,
                bits: flipped,
                metric,
                parity: 0,
            });
        }
        cands = prune(next, list_size, |c| c.metric);
    }
    cands
        .into_iter()
        .map(|c| Survivor {
            parent: c.parent,
            bits: c.bits,
            metric: c.metric,
        })
        .collect()
}

/// Single parity check: start from the hard decisions charged `γ|α_min|`,
/// flip the next `min(N_L, N_v) - 1` least reliable positions with increment
/// `|α_i| + (1 - 2γ)|α_min|`, then restore even parity on the least reliable bit.
///
/// `γ` is the parity of the candidate being split, so forks of forks carry the
/// metric of the word they end up emitting.
pub fn node_spc(metrics: &[f64], llrs: &[Vec<f64>], list_size: usize) -> Vec<Survivor> {
    let size = llrs.first().map_or(0, Vec::len);
    let steps = list_size.min(size);
    let orders: Vec<Vec<usize>> = llrs.iter().map(|l| reliability_order(l)).collect();
    let mut cands: Vec<Fork> = metrics
        .iter()
        .zip(llrs)
        .enumerate()
        .map(|(j, (&mu, llr))| {
            let bits: Vec<u8> = llr.iter().map(|&a| hard(a)).collect();
            let parity = bits.iter().fold(0, |p, b| p ^ b);
            let min_abs = llr[orders[j][0]].abs();
            Fork {
                parent: j,
                bits,
                metric: mu + f64::from(parity) * min_abs,
                parity,
            }
        })
        .collect();
    cands = prune(cands, list_size, |c| c.metric);
    for step in 1..steps {
        let mut next = Vec::with_capacity(2 * cands.len());
        for c in cands {
            let llr = &llrs[c.parent];
            let order = &orders[c.parent];
            let pos = order[step];
            let min_abs = llr[order[0]].abs();
            let mut flipped = c.bits.clone();
            flipped[pos] ^= 1;
            let sign = 1.0 - 2.0 * f64::from(c.parity);
            let metric = c.metric + llr[pos].abs() + sign * min_abs;
            let (parent, parity) = (c.parent, c.parity ^ 1);
            next.push(c);
            next.push(Fork {
                parent,
                bits: flipped,
                metric,
                parity,
            });
        }
        cands = prune(next, list_size, |c| c.metric);
    }
    cands
        .into_iter()
        .map(|mut c| {
            let min_pos = orders[c.parent][0];
            c.bits[min_pos] ^= c.parity;
            Survivor {
                parent: c.parent,
                bits: c.bits,
                metric: c.metric,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(llr: &[f64]) -> Vec<Vec<f64>> {
        vec![llr.to_vec()]
    }

    #[test]
    fn select_best_breaks_ties_by_index() {
        assert_eq!(select_best(&[3.0, 1.0, 1.0, 0.5], 2), vec![1, 3]);
        assert_eq!(select_best(&[1.0, 1.0, 1.0], 2), vec![0, 1]);
        assert_eq!(select_best(&[2.0, 1.0], 4), vec![0, 1]);
    }

    #[test]
    fn r0_examples() {
        let s = node_r0(&[0.0], &one(&[1.0, 2.0, 0.5]));
        assert_eq!(s[0].metric, 0.0);
        let s = node_r0(&[0.25], &one(&[-1.5, 2.0]));
        assert_eq!(s[0].metric, 1.75);
        assert_eq!(s[0].bits, vec![0, 0]);
    }

    #[test]
    fn rep_examples() {
        let s = node_rep(&[0.0], &one(&[3.0, -1.0]), 4);
        assert_eq!(s.len(), 2);
        assert_eq!((s[0].bits.clone(), s[0].metric), (vec![0, 0], 1.0));
        assert_eq!((s[1].bits.clone(), s[1].metric), (vec![1, 1], 3.0));
        let s = node_rep(&[0.0], &one(&[1.0, 2.0, 3.0]), 2);
        assert_eq!((s[0].metric, s[1].metric), (0.0, 6.0));
        // list of one keeps the better fork
        let s = node_rep(&[0.0], &one(&[-1.0, -2.0]), 1);
        assert_eq!(s[0].bits, vec![1, 1]);
    }

    #[test]
    fn r1_examples() {
        let s = node_r1(&[0.0], &one(&[0.5, -2.0, 1.0]), 1);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].bits, vec![0, 1, 0]);
        assert_eq!(s[0].metric, 0.0);

        let s = node_r1(&[0.0], &one(&[0.5, -2.0, 1.0]), 2);
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].bits, vec![0, 1, 0]);
        assert_eq!(s[1].bits, vec![1, 1, 0]);
        assert_eq!(s[1].metric, 0.5);
    }

    #[test]
    fn spc_examples() {
        let s = node_spc(&[0.0], &one(&[1.0, 2.0, 3.0, 4.0]), 1);
        assert_eq!(s[0].bits, vec![0, 0, 0, 0]);
        assert_eq!(s[0].metric, 0.0);

        let s = node_spc(&[0.0], &one(&[-0.5, 2.0, 3.0, 4.0]), 1);
        assert_eq!(s[0].bits, vec![0, 0, 0, 0]);
        assert_eq!(s[0].metric, 0.5);

        let s = node_spc(&[0.0], &one(&[-0.5, 2.0, 3.0, 4.0]), 2);
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].bits, vec![0, 0, 0, 0]);
        // second fork flips position 1 and keeps bit 0 at its hard decision
        assert_eq!(s[1].bits, vec![1, 1, 0, 0]);
        assert!((s[1].metric - 2.0).abs() < 1e-15);
    }

    #[test]
    fn spc_metric_matches_emitted_word() {
        let llr = vec![0.3, -0.9, 1.7, -0.2, 2.5, -1.1, 0.8, 0.05];
        for list in [1, 2, 4, 8] {
            for s in node_spc(&[0.0], &one(&llr), list) {
                let penalty: f64 = s
                    .bits
                    .iter()
                    .zip(&llr)
                    .map(|(&b, &a)| if b != hard(a) { a.abs() } else { 0.0 })
                    .sum();
                assert!((penalty - s.metric).abs() < 1e-12);
                assert_eq!(s.bits.iter().fold(0, |p, b| p ^ b), 0);
            }
        }
    }

    #[test]
    fn multiple_paths_prune_globally() {
        let llrs = vec![vec![2.0, 2.0], vec![-1.0, -1.0]];
        let s = node_rep(&[0.0, 5.0], &llrs, 2);
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|x| x.parent == 0));
    }
}
