//! Information-bottleneck design of finite-alphabet decoders.

pub mod channel;
pub mod design;
pub mod file;
pub mod quantize;
pub mod tables;

use serde::{Deserialize, Serialize};

pub use channel::{noise_sigma, quantize_rx, ChannelQuantizer, DEFAULT_GRID};
pub use design::{design_lutset, design_lutset_with_report, EdgeReport, LutHeader, LutSet};
pub use quantize::{mi_max_quantize, quantize_symmetric, JointDist, MsgAlphabet, Partition};
pub use tables::{msib_f_index, DecodingTable};

/// Table family: every update designed by IB, or min-sum f-updates on indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Ib,
    Msib,
}

impl std::str::FromStr for Variant {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ib" => Ok(Variant::Ib),
            "msib" => Ok(Variant::Msib),
            other => Err(crate::Error::Config(format!("unknown table variant {other:?}"))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Ib => "ib",
            Variant::Msib => "msib",
        })
    }
}

/// Messages on one edge: their translation and their joint distribution with the code bit.
#[derive(Clone, Debug, PartialEq)]
pub struct MessageDensity {
    pub alphabet: MsgAlphabet,
    pub joint: JointDist,
}
