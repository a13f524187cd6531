//! Design of the f and g lookup tables of one tree edge.

use serde::{Deserialize, Serialize};

use super::quantize::{density_from_mapping, quantize_symmetric, JointDist};
use super::MessageDensity;
use crate::decode::arith::{f_exact, f_minsum, g_fun};
use crate::error::{Error, Result};
use crate::tree::EdgeKind;

/// Meta-LLR used to sort the observations of an f-table design.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FKey {
    Exact,
    MinSum,
}

/// A designed lookup table.
///
/// f-tables are indexed by `t1 · |T| + t2`, g-tables by `(t1 · |T| + t2) · 2 + β`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodingTable {
    pub edge: usize,
    pub kind: EdgeKind,
    pub map: Vec<u8>,
}

/// Observation space of an f- or g-update: joint, sort key and mirror permutation.
pub struct Observations {
    pub probs: Vec<[f64; 2]>,
    pub key: Vec<f64>,
    pub mirror: Vec<usize>,
}

impl Observations {
    pub fn information(&self) -> f64 {
        JointDist::new(self.probs.clone())
            .map(|j| j.mutual_information())
            .unwrap_or(f64::NAN)
    }
}

/// Observations `(t1, t2)` of a check-node update: the relevant bit is `x1 ⊕ x2`.
pub fn f_observations(a: &MessageDensity, b: &MessageDensity, key: FKey) -> Observations {
    let (ta, tb) = (a.alphabet.size(), b.alphabet.size());
    let (pa, pb) = (a.joint.probs(), b.joint.probs());
    let (la, lb) = (a.alphabet.llr(), b.alphabet.llr());
    let mut probs = Vec::with_capacity(ta * tb);
    let mut keys = Vec::with_capacity(ta * tb);
    let mut mirror = Vec::with_capacity(ta * tb);
    for t1 in 0..ta {
        for t2 in 0..tb {
            let p0 = pa[t1][0] * pb[t2][0] + pa[t1][1] * pb[t2][1];
            let p1 = pa[t1][0] * pb[t2][1] + pa[t1][1] * pb[t2][0];
            probs.push([p0, p1]);
            keys.push(match key {
                FKey::Exact => f_exact(la[t1], lb[t2]),
                FKey::MinSum => f_minsum(la[t1], lb[t2]),
            });
            mirror.push((ta - 1 - t1) * tb + t2);
        }
    }
    Observations {
        probs,
        key: keys,
        mirror,
    }
}

/// Observations `(t1, t2, β)` of a variable-node update: the relevant bit is `x2`.
pub fn g_observations(a: &MessageDensity, b: &MessageDensity) -> Observations {
    let (ta, tb) = (a.alphabet.size(), b.alphabet.size());
    let (pa, pb) = (a.joint.probs(), b.joint.probs());
    let (la, lb) = (a.alphabet.llr(), b.alphabet.llr());
    let mut probs = Vec::with_capacity(2 * ta * tb);
    let mut keys = Vec::with_capacity(2 * ta * tb);
    let mut mirror = Vec::with_capacity(2 * ta * tb);
    for t1 in 0..ta {
        for t2 in 0..tb {
            for beta in 0..2u8 {
                let b = usize::from(beta);
                probs.push([pa[t1][b] * pb[t2][0], pa[t1][b ^ 1] * pb[t2][1]]);
                keys.push(g_fun(la[t1], lb[t2], beta));
                mirror.push(((ta - 1 - t1) * tb + (tb - 1 - t2)) * 2 + b);
            }
        }
    }
    Observations {
        probs,
        key: keys,
        mirror,
    }
}

fn to_table(mapping: Vec<usize>, kind: EdgeKind) -> DecodingTable {
    DecodingTable {
        edge: 0,
        kind,
        map: mapping.into_iter().map(|t| t as u8).collect(),
    }
}

/// IB f-table and the density of its output messages.
pub fn design_f_table(
    a: &MessageDensity,
    b: &MessageDensity,
    key: FKey,
    out_size: usize,
) -> Result<(DecodingTable, MessageDensity)> {
    let obs = f_observations(a, b, key);
    let q = quantize_symmetric(&obs.probs, &obs.key, &obs.mirror, out_size)?;
    Ok((
        to_table(q.mapping, EdgeKind::F),
        MessageDensity {
            alphabet: q.alphabet,
            joint: q.joint,
        },
    ))
}

/// IB g-table and the density of its output messages.
pub fn design_g_table(
    a: &MessageDensity,
    b: &MessageDensity,
    out_size: usize,
) -> Result<(DecodingTable, MessageDensity)> {
    let obs = g_observations(a, b);
    let q = quantize_symmetric(&obs.probs, &obs.key, &obs.mirror, out_size)?;
    Ok((
        to_table(q.mapping, EdgeKind::G),
        MessageDensity {
            alphabet: q.alphabet,
            joint: q.joint,
        },
    ))
}

/// Min-sum on message indices: sign product and smaller magnitude rank.
///
/// Index `t` has sign `t >= |T|/2` and magnitude rank `|t - |T|/2 + 1/2| - 1/2`.
#[inline]
pub fn msib_f_index(t1: u8, t2: u8, size: usize) -> u8 {
    let half = size / 2;
    let split = |t: usize| if t >= half { (true, t - half) } else { (false, half - 1 - t) };
    let (s1, r1) = split(usize::from(t1));
    let (s2, r2) = split(usize::from(t2));
    let r = r1.min(r2);
    (if s1 == s2 { half + r } else { half - 1 - r }) as u8
}

/// Density of the messages produced by the MSIB index rule on an f-edge.
pub fn msib_f_density(a: &MessageDensity, b: &MessageDensity) -> Result<MessageDensity> {
    let size = a.alphabet.size();
    if b.alphabet.size() != size {
        return Err(Error::Design("MSIB f-update needs equal alphabets".into()));
    }
    let obs = f_observations(a, b, FKey::MinSum);
    let mapping: Vec<usize> = (0..size * size)
        .map(|i| usize::from(msib_f_index((i / size) as u8, (i % size) as u8, size)))
        .collect();
    let (alphabet, joint) = density_from_mapping(&obs.probs, &mapping, size)?;
    Ok(MessageDensity { alphabet, joint })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ib::channel::{ChannelQuantizer, DEFAULT_GRID};

    fn channel(w: usize) -> MessageDensity {
        ChannelQuantizer::design(1.0, 0.5, w, DEFAULT_GRID)
            .unwrap()
            .density()
            .unwrap()
    }

    #[test]
    fn msib_index_examples() {
        assert_eq!(msib_f_index(15, 0, 16), 0);
        assert_eq!(msib_f_index(15, 15, 16), 15);
        assert_eq!(msib_f_index(8, 15, 16), 8);
        assert_eq!(msib_f_index(7, 15, 16), 7);
        assert_eq!(msib_f_index(7, 7, 16), 8);
        assert_eq!(msib_f_index(0, 0, 16), 15);
    }

    #[test]
    fn msib_index_is_min_sum_on_index_llrs() {
        for size in [2usize, 4, 8, 16] {
            let m = |t: u8| t as f64 - size as f64 / 2.0 + 0.5;
            for t1 in 0..size as u8 {
                for t2 in 0..size as u8 {
                    assert_eq!(m(msib_f_index(t1, t2, size)), f_minsum(m(t1), m(t2)));
                }
            }
        }
    }

    #[test]
    fn observation_spaces_are_distributions_with_valid_mirrors() {
        let c = channel(3);
        for obs in [
            f_observations(&c, &c, FKey::Exact),
            f_observations(&c, &c, FKey::MinSum),
            g_observations(&c, &c),
        ] {
            let total: f64 = obs.probs.iter().map(|p| p[0] + p[1]).sum();
            assert!((total - 1.0).abs() < 1e-12);
            for (y, &m) in obs.mirror.iter().enumerate() {
                assert_eq!(obs.mirror[m], y);
                assert!((obs.probs[m][0] - obs.probs[y][1]).abs() < 1e-15);
                assert_eq!(obs.key[m], -obs.key[y]);
            }
        }
    }

    #[test]
    fn f_and_g_tables_lose_little_information() {
        let c = channel(4);
        let (ft, fd) = design_f_table(&c, &c, FKey::Exact, 16).unwrap();
        let (gt, gd) = design_g_table(&c, &c, 16).unwrap();
        assert_eq!(ft.map.len(), 256);
        assert_eq!(gt.map.len(), 512);
        let fi = f_observations(&c, &c, FKey::Exact).information();
        let gi = g_observations(&c, &c).information();
        let ci = c.joint.mutual_information();
        assert!(fd.joint.mutual_information() <= fi + 1e-12);
        assert!(fd.joint.mutual_information() <= ci + 1e-12);
        assert!(gd.joint.mutual_information() <= gi + 1e-12);
        assert!(gd.joint.mutual_information() >= ci);
        assert!(fd.joint.mutual_information() >= 0.95 * fi);
        assert!(gd.joint.mutual_information() >= 0.95 * gi);
    }

    #[test]
    fn msib_density_is_symmetric() {
        let c = channel(4);
        let d = msib_f_density(&c, &c).unwrap();
        let p = d.joint.probs();
        for t in 0..16 {
            assert_eq!(p[t][0], p[15 - t][1]);
        }
    }
}
