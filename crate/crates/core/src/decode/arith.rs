//! LLR arithmetic shared by the float decoders and the table design.

use serde::{Deserialize, Serialize};

/// Path-metric flavour, which also selects the check-node update of float decoders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MetricMode {
    /// `ln(1 + e^{-(1-2u)L})` with the exact boxplus.
    Exact,
    /// Hard-decision penalty `|L|` with min-sum.
    Approx,
}

impl std::str::FromStr for MetricMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" | "ex" => Ok(MetricMode::Exact),
            "approx" | "ap" => Ok(MetricMode::Approx),
            other => Err(crate::Error::Config(format!("unknown metric mode {other:?}"))),
        }
    }
}

impl std::fmt::Display for MetricMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MetricMode::Exact => "exact",
            MetricMode::Approx => "approx",
        })
    }
}

/// Hard decision: 1 for negative LLRs, 0 otherwise.
#[inline]
pub fn hard(l: f64) -> u8 {
    (l < 0.0) as u8
}

/// `ln(1 + e^{-x})` without overflow.
#[inline]
fn softplus_neg(x: f64) -> f64 {
    if x >= 0.0 {
        (-x).exp().ln_1p()
    } else {
        -x + x.exp().ln_1p()
    }
}

/// Boxplus `2 atanh(tanh(a/2) tanh(b/2))` in log-domain form.
#[inline]
pub fn f_exact(a: f64, b: f64) -> f64 {
    let s = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    let m = a.abs().min(b.abs());
    if m == 0.0 {
        return 0.0;
    }
    let (x, y) = (a.abs(), b.abs());
    s * (m + softplus_neg(x + y) - softplus_neg((x - y).abs()))
}

/// Min-sum approximation of the boxplus.
#[inline]
pub fn f_minsum(a: f64, b: f64) -> f64 {
    let m = a.abs().min(b.abs());
    if (a < 0.0) != (b < 0.0) {
        -m
    } else {
        m
    }
}

/// `(-1)^bit · a + b`.
#[inline]
pub fn g_fun(a: f64, b: f64, bit: u8) -> f64 {
    if bit & 1 == 0 {
        b + a
    } else {
        b - a
    }
}

/// Partial-sum combination `[β_l ⊕ β_r, β_r]`.
pub fn combine(left: &[u8], right: &[u8]) -> crate::Result<Vec<u8>> {
    if left.len() != right.len() {
        return Err(crate::Error::Input(format!(
            "combine: lengths {} and {} differ",
            left.len(),
            right.len()
        )));
    }
    let mut out: Vec<u8> = left.iter().zip(right).map(|(l, r)| l ^ r).collect();
    out.extend_from_slice(right);
    Ok(out)
}

/// Path-metric increment for deciding `bit` on a leaf with LLR `l`.
#[inline]
pub fn metric_update(bit: u8, l: f64, mode: MetricMode) -> f64 {
    match mode {
        MetricMode::Exact => {
            let signed = if bit == 0 { l } else { -l };
            softplus_neg(signed)
        }
        MetricMode::Approx => {
            if bit != hard(l) {
                l.abs()
            } else {
                0.0
            }
        }
    }
}
