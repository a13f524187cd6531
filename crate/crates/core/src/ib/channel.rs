//! Quantization of the BPSK/AWGN channel output into `w`-bit messages.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use super::quantize::{quantize_symmetric, JointDist, MsgAlphabet};
use super::MessageDensity;
use crate::error::{Error, Result};

/// Default number of uniform bins used to discretize the channel output.
pub const DEFAULT_GRID: usize = 2000;

/// Noise standard deviation of BPSK at `ebn0_db` and code rate `rate`.
pub fn noise_sigma(ebn0_db: f64, rate: f64) -> f64 {
    (1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))).sqrt()
}

fn phi(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Fine discretization of the channel output with its joint distribution.
#[derive(Clone, Debug)]
pub struct ChannelGrid {
    /// Bin edges, `bins + 1` values; the outer bins extend to infinity.
    pub edges: Vec<f64>,
    pub joint: JointDist,
}

impl ChannelGrid {
    /// Uniform grid over `[-1 - 6σ, 1 + 6σ]` with the tails folded into the end bins.
    /// `p(x=1, bin)` is the exact mirror of `p(x=0, bins - 1 - bin)`.
    pub fn new(sigma: f64, bins: usize) -> Result<Self> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::Config(format!("invalid noise level {sigma}")));
        }
        if bins < 2 {
            return Err(Error::Config("grid needs at least two bins".into()));
        }
        let a = 1.0 + 6.0 * sigma;
        let edges: Vec<f64> = (0..=bins)
            .map(|k| a * (2.0 * k as f64 / bins as f64 - 1.0))
            .collect();
        // transmitted +1 for x = 0
        let cdf = |k: usize| -> f64 {
            if k == 0 {
                0.0
            } else if k == bins {
                1.0
            } else {
                phi((edges[k] - 1.0) / sigma)
            }
        };
        let p0: Vec<f64> = (0..bins).map(|k| 0.5 * (cdf(k + 1) - cdf(k)).max(0.0)).collect();
        let probs = (0..bins).map(|k| [p0[k], p0[bins - 1 - k]]).collect();
        Ok(Self {
            edges,
            joint: JointDist::new(probs)?,
        })
    }
}

/// `w`-bit channel quantizer designed at one operating point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelQuantizer {
    /// `2^w - 1` increasing thresholds on the received value, odd-symmetric.
    pub thresholds: Vec<f64>,
    /// LLR of each quantization cell.
    pub llr: Vec<f64>,
    /// `p(x, t)` of each cell.
    pub joint: Vec<[f64; 2]>,
}

impl ChannelQuantizer {
    pub fn design(ebn0_db: f64, rate: f64, w: usize, bins: usize) -> Result<Self> {
        if !(1..=8).contains(&w) {
            return Err(Error::Config(format!("message width {w} outside 1..=8")));
        }
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::Config(format!("invalid code rate {rate}")));
        }
        let size = 1usize << w;
        if bins < 4 * size {
            return Err(Error::Config(format!(
                "grid of {bins} bins is too coarse for {size} cells"
            )));
        }
        let sigma = noise_sigma(ebn0_db, rate);
        let grid = ChannelGrid::new(sigma, bins)?;
        let probs = grid.joint.probs();
        let key: Vec<f64> = (0..bins).map(|k| grid.joint.llr(k)).collect();
        let mirror: Vec<usize> = (0..bins).map(|k| bins - 1 - k).collect();
        let q = quantize_symmetric(probs, &key, &mirror, size)?;

        // cells are contiguous in the received value; keep the positive boundaries and mirror them
        let half = size / 2;
        let mut positive = Vec::with_capacity(half - 1);
        for k in 1..bins {
            if q.mapping[k] != q.mapping[k - 1] && q.mapping[k] > half {
                positive.push(grid.edges[k]);
            }
        }
        if positive.len() != half - 1 {
            return Err(Error::Design("channel cells are not contiguous".into()));
        }
        let mut thresholds: Vec<f64> = positive.iter().rev().map(|&t| -t).collect();
        thresholds.push(0.0);
        thresholds.extend(&positive);
        Ok(Self {
            thresholds,
            llr: q.alphabet.llr().to_vec(),
            joint: q.joint.probs().to_vec(),
        })
    }

    pub fn width(&self) -> usize {
        self.llr.len().trailing_zeros() as usize
    }

    /// Cell index of a received value: the number of thresholds below it.
    #[inline]
    pub fn quantize(&self, y: f64) -> u8 {
        self.thresholds.partition_point(|&th| th < y) as u8
    }

    pub fn density(&self) -> Result<MessageDensity> {
        Ok(MessageDensity {
            alphabet: MsgAlphabet::new(self.llr.clone())?,
            joint: JointDist::new(self.joint.clone())?,
        })
    }
}

/// Quantizes received samples with the thresholds of a channel quantizer.
pub fn quantize_rx(thresholds: &[f64], y: &[f64]) -> Vec<u8> {
    y.iter()
        .map(|&v| thresholds.partition_point(|&th| th < v) as u8)
        .collect()
}
