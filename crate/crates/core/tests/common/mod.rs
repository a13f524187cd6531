#![allow(dead_code)]

use fapolar::decode::{f_minsum, g_fun, hard};
use fapolar::{polar_transform, CrcConfig, PolarCode, ReliabilitySequence};

pub fn nr_code(n: usize, k: usize, crc: usize) -> PolarCode {
    let crc = CrcConfig::for_width(crc).unwrap();
    PolarCode::construct(n, k, crc, &ReliabilitySequence::nr5g()).unwrap()
}

/// Channel LLRs `2y/σ²` of a received frame.
pub fn llrs(y: &[f64], sigma: f64) -> Vec<f64> {
    y.iter().map(|&v| 2.0 * v / (sigma * sigma)).collect()
}

/// LLR of leaf `i` given the decided prefix `u[..i]`, by direct recursion.
fn leaf_llr(alpha: &[f64], i: usize, u: &[u8]) -> f64 {
    if alpha.len() == 1 {
        return alpha[0];
    }
    let h = alpha.len() / 2;
    if i < h {
        let left: Vec<f64> = (0..h).map(|j| f_minsum(alpha[j], alpha[j + h])).collect();
        leaf_llr(&left, i, u)
    } else {
        let mut partial = u[..h].to_vec();
        polar_transform(&mut partial);
        let right: Vec<f64> = (0..h).map(|j| g_fun(alpha[j], alpha[j + h], partial[j])).collect();
        leaf_llr(&right, i - h, &u[h..])
    }
}

/// Output of the reference list decoder: parent index, codeword and metric.
#[derive(Clone, Debug)]
pub struct RefPath {
    pub parent: usize,
    pub word: Vec<u8>,
    pub metric: f64,
}

/// Textbook min-sum SCL of one subtree entered by several paths.
///
/// Each info leaf forks every path (0 before 1), candidates are ranked by
/// metric with ties going to the earlier candidate, and `list` survive.
pub fn reference_scl(metrics: &[f64], alphas: &[Vec<f64>], frozen: &[bool], list: usize) -> Vec<RefPath> {
    struct P {
        parent: usize,
        u: Vec<u8>,
        metric: f64,
    }
    let mut paths: Vec<P> = metrics
        .iter()
        .enumerate()
        .map(|(j, &m)| P {
            parent: j,
            u: Vec::new(),
            metric: m,
        })
        .collect();
    for (i, &fz) in frozen.iter().enumerate() {
        let mut next = Vec::new();
        for p in &paths {
            let l = leaf_llr(&alphas[p.parent], i, &p.u);
            let pen = |b: u8| if b != hard(l) { l.abs() } else { 0.0 };
            let bits: &[u8] = if fz { &[0] } else { &[0, 1] };
            for &b in bits {
                let mut u = p.u.clone();
                u.push(b);
                next.push(P {
                    parent: p.parent,
                    u,
                    metric: p.metric + pen(b),
                });
            }
        }
        let mut order: Vec<usize> = (0..next.len()).collect();
        order.sort_by(|&a, &b| next[a].metric.total_cmp(&next[b].metric).then(a.cmp(&b)));
        order.truncate(list);
        order.sort_unstable();
        let mut slots: Vec<Option<P>> = next.into_iter().map(Some).collect();
        paths = order.into_iter().map(|k| slots[k].take().unwrap()).collect();
    }
    paths
        .into_iter()
        .map(|p| {
            let mut word = p.u;
            polar_transform(&mut word);
            RefPath {
                parent: p.parent,
                word,
                metric: p.metric,
            }
        })
        .collect()
}
