//! Finite-alphabet fast successive-cancellation list decoding of polar codes.
//!
//! The crate covers CRC-aided polar code construction and encoding, the
//! pruned decoder tree with rate-0, rate-1, repetition and single-parity-check
//! nodes, floating-point (fast) SCL decoding, information-bottleneck design of
//! `w`-bit lookup tables, the table-driven decoders, and a Monte-Carlo BLER
//! simulator.
//!
//! ```
//! use fapolar::{CrcConfig, DecoderTree, ListConfig, MetricMode, NodeKinds, PolarCode, ReliabilitySequence};
//!
//! let code = PolarCode::construct(128, 64, CrcConfig::CCITT16, &ReliabilitySequence::nr5g()).unwrap();
//! let tree = DecoderTree::build(&code, NodeKinds::ALL);
//! let u = code.assemble_u(&vec![1; 64]).unwrap();
//! let llr: Vec<f64> = code.encode(&u).unwrap().iter().map(|&b| if b == 0 { 4.0 } else { -4.0 }).collect();
//! let out = fapolar::fscl_decode(&code, &tree, &llr, &ListConfig::new(8, MetricMode::Approx)).unwrap();
//! assert_eq!(code.extract_payload(&out.select(&code).u), vec![1; 64]);
//! ```

#![allow(clippy::needless_range_loop)]

pub mod code;
pub mod crc;
pub mod decode;
pub mod error;
pub mod ib;
pub mod lut;
pub mod sim;
pub mod tree;

pub use code::{polar_transform, PolarCode, ReliabilitySequence};
pub use crc::CrcConfig;
pub use decode::{fscl_decode, scl_decode, Candidate, DecodeOutput, ListConfig, MetricMode};
pub use error::{Error, Result};
pub use ib::{design_lutset, LutSet, Variant};
pub use lut::{lut_fscl_decode, lut_scl_decode, LutDecoder};
pub use tree::{DecoderTree, NodeKind, NodeKinds, TableCounts};
