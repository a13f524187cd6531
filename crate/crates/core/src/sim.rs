//! Monte-Carlo BLER simulation over BPSK/AWGN.
//!
//! Frame `i` of a run draws its payload and noise from a ChaCha8 stream keyed
//! by `(seed, i)`, so every decoder sees the same frames at a given seed and
//! results do not depend on the number of worker threads. Frames are decoded
//! in parallel batches and the stopping rule is applied to the batch results
//! in frame order.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::code::PolarCode;
use crate::decode::{fscl_decode, ListConfig};
use crate::error::{Error, Result};
use crate::ib::noise_sigma;
use crate::lut::LutDecoder;
use crate::tree::DecoderTree;

const BATCH: u64 = 256;

/// A decoder under test: maps received samples to an estimate of `u`.
pub trait FrameDecoder: Sync {
    fn code(&self) -> &PolarCode;
    fn decode_frame(&self, y: &[f64], sigma: f64) -> Result<Vec<u8>>;
}

/// Floating-point decoder fed with channel LLRs `2y/σ²`.
pub struct FloatFrameDecoder<'a> {
    pub code: &'a PolarCode,
    pub tree: &'a DecoderTree,
    pub cfg: ListConfig,
}

impl FrameDecoder for FloatFrameDecoder<'_> {
    fn code(&self) -> &PolarCode {
        self.code
    }

    fn decode_frame(&self, y: &[f64], sigma: f64) -> Result<Vec<u8>> {
        let scale = 2.0 / (sigma * sigma);
        let llr: Vec<f64> = y.iter().map(|&v| scale * v).collect();
        let out = fscl_decode(self.code, self.tree, &llr, &self.cfg)?;
        Ok(out.select(self.code).u.clone())
    }
}

/// Table decoder fed with quantized samples.
pub struct TableFrameDecoder<'a> {
    pub decoder: LutDecoder<'a>,
    pub cfg: ListConfig,
}

impl FrameDecoder for TableFrameDecoder<'_> {
    fn code(&self) -> &PolarCode {
        self.decoder.code()
    }

    fn decode_frame(&self, y: &[f64], _sigma: f64) -> Result<Vec<u8>> {
        let out = self.decoder.decode(&self.decoder.quantize(y), &self.cfg)?;
        Ok(out.select(self.decoder.code()).u.clone())
    }
}

/// Stop after `max_frames` frames, or earlier once `min_errors` block errors
/// were seen (`min_errors = 0` disables the error target).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub max_frames: u64,
    pub min_errors: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub ebn0_db: f64,
    pub frames: u64,
    pub errors: u64,
    pub bler: f64,
}

/// Payload and received samples of frame `index`.
pub fn generate_frame(code: &PolarCode, sigma: f64, seed: u64, index: u64) -> Result<(Vec<u8>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let payload: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2u8)).collect();
    let x = code.encode(&code.assemble_u(&payload)?)?;
    let y = x
        .iter()
        .map(|&b| {
            let s = if b == 0 { 1.0 } else { -1.0 };
            let z: f64 = rng.sample(StandardNormal);
            s + sigma * z
        })
        .collect();
    Ok((payload, y))
}

/// Simulates one Eb/N0 point.
pub fn run_point(decoder: &dyn FrameDecoder, ebn0_db: f64, seed: u64, stop: StopRule) -> Result<PointResult> {
    if stop.max_frames == 0 {
        return Err(Error::Config("max_frames must be positive".into()));
    }
    if !ebn0_db.is_finite() {
        return Err(Error::Config("Eb/N0 must be finite".into()));
    }
    let code = decoder.code();
    let sigma = noise_sigma(ebn0_db, code.rate());
    let (mut frames, mut errors) = (0u64, 0u64);
    'run: while frames < stop.max_frames {
        let end = (frames + BATCH).min(stop.max_frames);
        let flags: Vec<bool> = (frames..end)
            .into_par_iter()
            .map(|i| {
                let (payload, y) = generate_frame(code, sigma, seed, i)?;
                let u = decoder.decode_frame(&y, sigma)?;
                Ok(code.extract_payload(&u) != payload)
            })
            .collect::<Result<_>>()?;
        for err in flags {
            frames += 1;
            errors += u64::from(err);
            if stop.min_errors > 0 && errors >= stop.min_errors {
                break 'run;
            }
        }
    }
    log::info!("Eb/N0 {ebn0_db:.2} dB: {errors}/{frames} block errors");
    Ok(PointResult {
        ebn0_db,
        frames,
        errors,
        bler: errors as f64 / frames as f64,
    })
}

/// Simulates every point of `ebn0_db` with the same seed.
pub fn sweep(decoder: &dyn FrameDecoder, ebn0_db: &[f64], seed: u64, stop: StopRule) -> Result<Vec<PointResult>> {
    ebn0_db
        .iter()
        .map(|&e| run_point(decoder, e, seed, stop))
        .collect()
}

/// Identification of a simulated decoder, repeated on every output row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoderLabel {
    /// `scl` or `fscl`.
    pub decoder: String,
    /// Enabled special-node kinds.
    pub schedule: String,
    /// `float`, `ib` or `msib`.
    pub variant: String,
    pub metric: String,
    /// Message width of table decoders.
    pub w: Option<usize>,
    pub list: usize,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub label: DecoderLabel,
    pub seed: u64,
    pub stop: StopRule,
    pub config_hash: String,
    pub wall_time_s: f64,
    pub points: Vec<PointResult>,
}

impl SimReport {
    pub fn new(label: DecoderLabel, seed: u64, stop: StopRule, points: Vec<PointResult>, started: Instant) -> Self {
        let config = serde_json::json!({
            "label": label,
            "seed": seed,
            "stop": stop,
            "ebn0_db": points.iter().map(|p| p.ebn0_db).collect::<Vec<_>>(),
        });
        let digest = Sha256::digest(config.to_string().as_bytes());
        Self {
            label,
            seed,
            stop,
            config_hash: hex::encode(&digest[..16]),
            wall_time_s: started.elapsed().as_secs_f64(),
            points,
        }
    }

    pub const CSV_HEADER: &'static str = "ebn0_db,frames,errors,bler,decoder,schedule,variant,metric,w,list,seed";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        let l = &self.label;
        let w = l.w.map(|w| w.to_string()).unwrap_or_default();
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                p.ebn0_db,
                p.frames,
                p.errors,
                p.bler,
                csv_field(&l.decoder),
                csv_field(&l.schedule),
                csv_field(&l.variant),
                csv_field(&l.metric),
                w,
                l.list,
                self.seed
            );
        }
        out
    }

    /// Writes `<stem>.csv` and `<stem>.json`.
    pub fn write(&self, stem: impl AsRef<Path>) -> Result<()> {
        let stem = stem.as_ref();
        std::fs::write(stem.with_extension("csv"), self.to_csv())?;
        std::fs::write(stem.with_extension("json"), serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}
