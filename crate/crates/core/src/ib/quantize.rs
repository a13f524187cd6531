//! Mutual-information maximizing scalar quantization of sorted observation spaces.
//!
//! For a binary relevant variable and observations sorted by their LLR, the
//! optimal deterministic compression into `m` clusters is a partition into
//! contiguous intervals. The interval DP below finds it exactly; each layer is
//! solved with divide and conquer over the monotone split points, which the
//! concave-Monge structure of the interval cost allows.

use crate::error::{Error, Result};

/// Probabilities below this are clamped before taking logarithms.
pub const PROB_FLOOR: f64 = 1e-300;

/// Largest LLR inversion between adjacent clusters attributed to rounding.
const LLR_TIE_TOLERANCE: f64 = 1e-9;

/// Joint distribution `p(x, y)` over `x ∈ {0, 1}` and a finite observation alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDist {
    probs: Vec<[f64; 2]>,
}

impl JointDist {
    /// Checks non-negativity and unit total mass (within 1e-12).
    pub fn new(probs: Vec<[f64; 2]>) -> Result<Self> {
        if probs.iter().flatten().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(Error::Input("joint distribution has a negative entry".into()));
        }
        let total: f64 = probs.iter().map(|p| p[0] + p[1]).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Input(format!("joint distribution sums to {total}")));
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[[f64; 2]] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// `ln p(x=0|y) / p(x=1|y)` for observation `y`.
    pub fn llr(&self, y: usize) -> f64 {
        llr_of(self.probs[y])
    }

    pub fn marginal_x(&self) -> [f64; 2] {
        self.probs
            .iter()
            .fold([0.0, 0.0], |acc, p| [acc[0] + p[0], acc[1] + p[1]])
    }

    /// `I(X;Y)` in bits.
    pub fn mutual_information(&self) -> f64 {
        let px = self.marginal_x();
        self.probs.iter().map(|&p| cell_information(p, px)).sum()
    }
}

pub(crate) fn llr_of(p: [f64; 2]) -> f64 {
    (p[0].max(PROB_FLOOR) / p[1].max(PROB_FLOOR)).ln()
}

/// Contribution `Σ_x p(x,c) log2(p(x,c) / (p(x) p(c)))` of one cluster.
fn cell_information(p: [f64; 2], px: [f64; 2]) -> f64 {
    let pc = p[0] + p[1];
    if pc <= 0.0 {
        return 0.0;
    }
    let mut acc = 0.0;
    for x in 0..2 {
        if p[x] > 0.0 && px[x] > 0.0 {
            acc += p[x] * (p[x] / (px[x] * pc)).log2();
        }
    }
    acc
}

/// Translation alphabet of `w`-bit messages: sorted, odd-symmetric LLRs.
#[derive(Clone, Debug, PartialEq)]
pub struct MsgAlphabet {
    llr: Vec<f64>,
}

impl MsgAlphabet {
    pub fn new(llr: Vec<f64>) -> Result<Self> {
        let size = llr.len();
        if size < 2 || !size.is_power_of_two() {
            return Err(Error::Input(format!("alphabet size {size} is not 2^w, w >= 1")));
        }
        if llr.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::Input("alphabet LLRs are not strictly increasing".into()));
        }
        let half = size / 2;
        if (0..half).any(|k| llr[half - 1 - k] != -llr[half + k]) {
            return Err(Error::Input("alphabet LLRs are not odd-symmetric".into()));
        }
        Ok(Self { llr })
    }

    pub fn llr(&self) -> &[f64] {
        &self.llr
    }

    pub fn size(&self) -> usize {
        self.llr.len()
    }

    /// Bit width `w`.
    pub fn width(&self) -> usize {
        self.llr.len().trailing_zeros() as usize
    }
}

/// Optimal contiguous partition of a sorted observation space.
#[derive(Clone, Debug)]
pub struct Partition {
    /// First observation index of each cluster (the first entry is 0).
    pub starts: Vec<usize>,
    /// Cluster of every observation.
    pub mapping: Vec<usize>,
    /// `L(t)` of every cluster.
    pub cell_llr: Vec<f64>,
    /// `p(x, t)`.
    pub joint: JointDist,
    /// `I(X;T)` in bits.
    pub information: f64,
}

/// Splits `cells` into contiguous clusters maximizing the summed information.
///
/// Returns the cluster start indices and the optimum. Requires `1 <= clusters <= cells.len()`.
pub(crate) fn optimal_intervals(cells: &[[f64; 2]], px: [f64; 2], clusters: usize) -> (Vec<usize>, f64) {
    let m = cells.len();
    assert!(clusters >= 1 && clusters <= m);
    let mut pre = vec![[0.0f64; 2]; m + 1];
    for (i, c) in cells.iter().enumerate() {
        pre[i + 1] = [pre[i][0] + c[0], pre[i][1] + c[1]];
    }
    let cost = |j: usize, i: usize| -> f64 {
        cell_information([pre[i][0] - pre[j][0], pre[i][1] - pre[j][1]], px)
    };

    // best[i]: optimum for the first i cells with k clusters; split[k][i]: start of the last cluster.
    let neg = f64::NEG_INFINITY;
    let mut best: Vec<f64> = (0..=m).map(|i| if i >= 1 { cost(0, i) } else { neg }).collect();
    let mut split = vec![vec![0usize; m + 1]; clusters];
    for k in 2..=clusters {
        let mut next = vec![neg; m + 1];
        let mut arg = vec![0usize; m + 1];
        let last = m - (clusters - k);
        solve_layer(&best, &cost, k, last, k - 1, last - 1, &mut next, &mut arg);
        split[k - 1] = arg;
        best = next;
    }
    let mut starts = vec![0usize; clusters];
    let mut end = m;
    for k in (1..clusters).rev() {
        let s = split[k][end];
        starts[k] = s;
        end = s;
    }
    (starts, best[m])
}

/// Fills `next[i]` for `i ∈ [lo, hi]` with `max_j best[j] + cost(j, i)` over `j ∈ [max(opt_lo, k-1), min(opt_hi, i-1)]`.
#[allow(clippy::too_many_arguments)]
fn solve_layer(
    best: &[f64],
    cost: &impl Fn(usize, usize) -> f64,
    lo: usize,
    hi: usize,
    opt_lo: usize,
    opt_hi: usize,
    next: &mut [f64],
    arg: &mut [usize],
) {
    if lo > hi {
        return;
    }
    let mid = (lo + hi) / 2;
    let mut best_val = f64::NEG_INFINITY;
    let mut best_j = opt_lo;
    for j in opt_lo..=opt_hi.min(mid - 1) {
        if best[j] == f64::NEG_INFINITY {
            continue;
        }
        let v = best[j] + cost(j, mid);
        if v > best_val {
            best_val = v;
            best_j = j;
        }
    }
    next[mid] = best_val;
    arg[mid] = best_j;
    if mid > lo {
        solve_layer(best, cost, lo, mid - 1, opt_lo, best_j, next, arg);
    }
    solve_layer(best, cost, mid + 1, hi, best_j, opt_hi, next, arg);
}

/// MI-maximizing contiguous partition of an LLR-sorted joint into `out_size` clusters.
pub fn mi_max_quantize(joint: &JointDist, out_size: usize) -> Result<Partition> {
    let m = joint.len();
    if out_size == 0 {
        return Err(Error::Input("output alphabet must be non-empty".into()));
    }
    if m < out_size {
        return Err(Error::Input(format!(
            "cannot quantize {m} observations into {out_size} clusters"
        )));
    }
    if (1..m).any(|y| joint.llr(y) < joint.llr(y - 1)) {
        return Err(Error::Input("observations are not sorted by LLR".into()));
    }
    let px = joint.marginal_x();
    let (starts, _) = optimal_intervals(joint.probs(), px, out_size);
    let mut mapping = vec![0usize; m];
    for (c, &s) in starts.iter().enumerate() {
        let e = starts.get(c + 1).copied().unwrap_or(m);
        mapping[s..e].iter_mut().for_each(|t| *t = c);
    }
    let mut cells = vec![[0.0f64; 2]; out_size];
    for (y, &t) in mapping.iter().enumerate() {
        cells[t][0] += joint.probs()[y][0];
        cells[t][1] += joint.probs()[y][1];
    }
    let cell_llr = cells.iter().map(|&c| llr_of(c)).collect();
    let information = cells.iter().map(|&c| cell_information(c, px)).sum();
    Ok(Partition {
        starts,
        mapping,
        cell_llr,
        joint: JointDist { probs: cells },
        information,
    })
}

/// Result of a symmetric quantization: per-observation mapping plus the output density.
#[derive(Clone, Debug)]
pub struct SymmetricQuantization {
    pub mapping: Vec<usize>,
    pub alphabet: MsgAlphabet,
    pub joint: JointDist,
}

fn same_key(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Quantizes a symmetric observation space into `out_size` clusters with odd-symmetric LLRs.
///
/// `key[y]` orders the observations (their exact or approximate LLR) and
/// `mirror[y]` is the observation with negated key and swapped `p(x|y)`.
/// Observations with equal keys are merged, the positive half is partitioned
/// optimally into `out_size / 2` intervals and the negative half mirrors it.
/// Zero-key observations go to the weakest negative cluster when `y < mirror[y]`
/// and to the weakest positive one otherwise.
pub fn quantize_symmetric(
    probs: &[[f64; 2]],
    key: &[f64],
    mirror: &[usize],
    out_size: usize,
) -> Result<SymmetricQuantization> {
    if out_size < 2 || !out_size.is_power_of_two() {
        return Err(Error::Input(format!("output size {out_size} is not 2^w")));
    }
    if key.len() != probs.len() || mirror.len() != probs.len() {
        return Err(Error::Input("key and mirror must cover every observation".into()));
    }
    let half = out_size / 2;
    let is_zero = |k: f64| same_key(k, 0.0);

    let mut positive: Vec<usize> = (0..probs.len())
        .filter(|&y| key[y] > 0.0 && !is_zero(key[y]))
        .collect();
    positive.sort_by(|&a, &b| key[a].total_cmp(&key[b]).then(a.cmp(&b)));

    // merge equal keys into groups
    let mut groups: Vec<(f64, [f64; 2])> = Vec::new();
    for &y in &positive {
        match groups.last_mut() {
            Some((k, mass)) if same_key(*k, key[y]) => {
                mass[0] += probs[y][0];
                mass[1] += probs[y][1];
            }
            _ => groups.push((key[y], probs[y])),
        }
    }
    if groups.len() < half {
        // nearly uninformative messages: some clusters stay empty
        log::debug!("{} distinct positive LLRs for {half} clusters", groups.len());
    }

    // positive zero-key observations join the weakest positive cluster
    let zero_pos: [f64; 2] = (0..probs.len())
        .filter(|&y| is_zero(key[y]) && mirror[y] <= y)
        .fold([0.0, 0.0], |a, y| [a[0] + probs[y][0], a[1] + probs[y][1]]);
    let mut cells: Vec<[f64; 2]> = groups.iter().map(|g| g.1).collect();
    let starts = if cells.is_empty() {
        vec![0]
    } else {
        cells[0][0] += zero_pos[0];
        cells[0][1] += zero_pos[1];
        let total: [f64; 2] = probs
            .iter()
            .fold([0.0, 0.0], |a, p| [a[0] + p[0], a[1] + p[1]]);
        optimal_intervals(&cells, total, half.min(cells.len())).0
    };

    // key thresholds between consecutive positive clusters
    let thresholds: Vec<f64> = starts[1..]
        .iter()
        .map(|&s| 0.5 * (groups[s - 1].0 + groups[s].0))
        .collect();
    let positive_cell = |k: f64| thresholds.partition_point(|&th| th < k);

    let mapping: Vec<usize> = (0..probs.len())
        .map(|y| {
            let k = key[y];
            if is_zero(k) {
                if y < mirror[y] {
                    half - 1
                } else {
                    half
                }
            } else if k > 0.0 {
                half + positive_cell(k)
            } else {
                half - 1 - positive_cell(-k)
            }
        })
        .collect();
    let density = density_from_mapping(probs, &mapping, out_size)?;
    Ok(SymmetricQuantization {
        mapping,
        alphabet: density.0,
        joint: density.1,
    })
}

/// Output alphabet and `p(x,t)` of a deterministic mapping, symmetrized.
///
/// Mirrored clusters are averaged so that `p(x, t) = p(1-x, |T|-1-t)` holds
/// exactly; LLRs are computed on the positive half and negated.
pub(crate) fn density_from_mapping(
    probs: &[[f64; 2]],
    mapping: &[usize],
    out_size: usize,
) -> Result<(MsgAlphabet, JointDist)> {
    let mut cells = vec![[0.0f64; 2]; out_size];
    for (p, &t) in probs.iter().zip(mapping) {
        cells[t][0] += p[0];
        cells[t][1] += p[1];
    }
    let half = out_size / 2;
    let mut sym = vec![[0.0f64; 2]; out_size];
    for c in 0..half {
        let pos = cells[half + c];
        let neg = cells[half - 1 - c];
        let a = 0.5 * (pos[0] + neg[1]);
        let b = 0.5 * (pos[1] + neg[0]);
        sym[half + c] = [a, b];
        sym[half - 1 - c] = [b, a];
    }
    // Nearly uninformative clusters can tie in floating point; such ties, and
    // empty clusters, get the smallest representable step above their neighbour.
    let mut llr = vec![0.0; out_size];
    let mut prev = 0.0f64;
    for c in 0..half {
        let mut l = llr_of(sym[half + c]);
        let empty = sym[half + c][0] + sym[half + c][1] == 0.0;
        if empty || l <= prev {
            if !empty && prev - l > LLR_TIE_TOLERANCE {
                return Err(Error::Design(format!(
                    "cluster LLRs are not increasing: {l} after {prev}"
                )));
            }
            l = prev.next_up();
        }
        llr[half + c] = l;
        llr[half - 1 - c] = -l;
        prev = l;
    }
    let total: f64 = sym.iter().map(|p| p[0] + p[1]).sum();
    for p in &mut sym {
        p[0] /= total;
        p[1] /= total;
    }
    Ok((MsgAlphabet::new(llr)?, JointDist::new(sym)?))
}
