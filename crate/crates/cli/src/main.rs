use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fapolar::sim::{self, DecoderLabel, FloatFrameDecoder, FrameDecoder, SimReport, StopRule, TableFrameDecoder};
use fapolar::{
    design_lutset, CrcConfig, DecoderTree, Error, ListConfig, LutDecoder, LutSet, MetricMode, NodeKinds, PolarCode,
    ReliabilitySequence, Result, Variant,
};
use serde::Deserialize;

#[derive(Parser)]
#[command(name = "fapolar", version, about = "Finite-alphabet fast SCL decoding of polar codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Design lookup tables and write them as JSON.
    Design(DesignArgs),
    /// Run a BLER simulation.
    Simulate(SimulateArgs),
    /// Print the number of decoding and translation tables of a table file.
    Tables {
        #[arg(long)]
        lut: PathBuf,
    },
    /// Print the node schedule of the pruned decoder tree as TSV.
    Tree {
        #[command(flatten)]
        code: CodeArgs,
        /// Enabled special nodes, e.g. "r0,r1,rep,spc" ("" for none).
        #[arg(long, default_value = "all")]
        nodes: String,
    },
}

#[derive(Args, Clone)]
struct CodeArgs {
    /// Block length N.
    #[arg(long, default_value_t = 1024)]
    n: usize,
    /// Payload bits K.
    #[arg(long, default_value_t = 512)]
    k: usize,
    /// CRC width (0 or 16).
    #[arg(long, default_value_t = 16)]
    crc: usize,
    /// Reliability sequence file (least reliable index first); defaults to the 5G NR sequence.
    #[arg(long)]
    rate_profile: Option<PathBuf>,
}

impl CodeArgs {
    fn build(&self) -> Result<PolarCode> {
        let seq = match &self.rate_profile {
            Some(path) => ReliabilitySequence::from_file(path)?,
            None => ReliabilitySequence::nr5g(),
        };
        let crc = CrcConfig::for_width(self.crc)
            .ok_or_else(|| Error::Config(format!("unsupported CRC width {}", self.crc)))?;
        PolarCode::construct(self.n, self.k, crc, &seq)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Schedule {
    Sc,
    Fast,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum DecoderFamily {
    Llr,
    Ib,
    Msib,
}

fn tree_kinds(schedule: Schedule, nodes: &str) -> Result<NodeKinds> {
    match schedule {
        Schedule::Sc => Ok(NodeKinds::NONE),
        Schedule::Fast => nodes.parse(),
    }
}

#[derive(Args)]
struct DesignArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, value_parser = parse_variant, default_value = "msib")]
    variant: Variant,
    #[arg(long, value_enum, default_value = "fast")]
    schedule: Schedule,
    #[arg(long, default_value = "all")]
    nodes: String,
    /// Design Eb/N0 in dB.
    #[arg(long)]
    ebn0: f64,
    /// Message width in bits.
    #[arg(long, default_value_t = 4)]
    w: usize,
    #[arg(long)]
    out: PathBuf,
}

fn parse_variant(s: &str) -> std::result::Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Simulation settings. Flags override the values of `--config`.
#[derive(Args)]
struct SimulateArgs {
    /// JSON file with any of the flag names below as keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    crc: Option<usize>,
    #[arg(long)]
    rate_profile: Option<PathBuf>,
    #[arg(long, value_enum)]
    decoder: Option<DecoderFamily>,
    #[arg(long, value_enum)]
    schedule: Option<Schedule>,
    #[arg(long, value_parser = parse_metric)]
    metric: Option<MetricMode>,
    #[arg(long)]
    list: Option<usize>,
    #[arg(long)]
    nodes: Option<String>,
    /// Comma-separated Eb/N0 points in dB.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    ebn0_list: Option<Vec<f64>>,
    #[arg(long)]
    max_frames: Option<u64>,
    #[arg(long)]
    min_errors: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Table file for ib/msib decoders; designed on the fly when absent.
    #[arg(long)]
    lut: Option<PathBuf>,
    /// Design Eb/N0 for on-the-fly table design.
    #[arg(long, allow_hyphen_values = true)]
    design_ebn0: Option<f64>,
    #[arg(long)]
    w: Option<usize>,
    /// CSV output; a JSON mirror is written next to it. Prints CSV to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_metric(s: &str) -> std::result::Result<MetricMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
struct SimFile {
    n: Option<usize>,
    k: Option<usize>,
    crc: Option<usize>,
    rate_profile: Option<PathBuf>,
    decoder: Option<DecoderFamily>,
    schedule: Option<Schedule>,
    metric: Option<String>,
    list: Option<usize>,
    nodes: Option<String>,
    ebn0_list: Option<Vec<f64>>,
    max_frames: Option<u64>,
    min_errors: Option<u64>,
    seed: Option<u64>,
    lut: Option<PathBuf>,
    design_ebn0: Option<f64>,
    w: Option<usize>,
    out: Option<PathBuf>,
}

fn load_sim_file(path: &Path) -> Result<SimFile> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let file = match &args.config {
        Some(path) => load_sim_file(path)?,
        None => SimFile::default(),
    };
    let code_args = CodeArgs {
        n: args.n.or(file.n).unwrap_or(1024),
        k: args.k.or(file.k).unwrap_or(512),
        crc: args.crc.or(file.crc).unwrap_or(16),
        rate_profile: args.rate_profile.or(file.rate_profile),
    };
    let family = args.decoder.or(file.decoder).unwrap_or(DecoderFamily::Llr);
    let schedule = args.schedule.or(file.schedule).unwrap_or(Schedule::Fast);
    let metric = match (args.metric, file.metric) {
        (Some(m), _) => m,
        (None, Some(s)) => s.parse()?,
        (None, None) => MetricMode::Approx,
    };
    let list = args.list.or(file.list).unwrap_or(8);
    let nodes = args.nodes.or(file.nodes).unwrap_or_else(|| "all".into());
    let points = args.ebn0_list.or(file.ebn0_list).unwrap_or_default();
    let stop = StopRule {
        max_frames: args.max_frames.or(file.max_frames).unwrap_or(100_000),
        min_errors: args.min_errors.or(file.min_errors).unwrap_or(100),
    };
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let lut_path = args.lut.or(file.lut);
    let w = args.w.or(file.w).unwrap_or(4);
    let out = args.out.or(file.out);

    let code = code_args.build()?;
    let kinds = tree_kinds(schedule, &nodes)?;
    let tree = DecoderTree::build(&code, kinds);
    let cfg = ListConfig::new(list, metric);
    let decoder_name = if kinds.is_empty() { "scl" } else { "fscl" };

    let started = Instant::now();
    let (results, variant, width) = match family {
        DecoderFamily::Llr => {
            let dec = FloatFrameDecoder {
                code: &code,
                tree: &tree,
                cfg,
            };
            (run_sweep(&dec, &points, seed, stop)?, "float".to_string(), None)
        }
        DecoderFamily::Ib | DecoderFamily::Msib => {
            let variant = if family == DecoderFamily::Ib { Variant::Ib } else { Variant::Msib };
            let set = match &lut_path {
                Some(path) => {
                    let set = LutSet::load(path)?;
                    if set.header.variant != variant {
                        return Err(Error::Config(format!(
                            "{} holds {} tables, not {variant}",
                            path.display(),
                            set.header.variant
                        )));
                    }
                    set
                }
                None => {
                    let design = args.design_ebn0.or(file.design_ebn0).ok_or_else(|| {
                        Error::Config("table decoders need --lut or --design-ebn0".into())
                    })?;
                    design_lutset(&code, &tree, variant, design, w)?
                }
            };
            let width = set.header.w;
            let dec = TableFrameDecoder {
                decoder: LutDecoder::new(&code, &tree, &set)?,
                cfg,
            };
            (run_sweep(&dec, &points, seed, stop)?, variant.to_string(), Some(width))
        }
    };

    let label = DecoderLabel {
        decoder: decoder_name.into(),
        schedule: kinds.to_string(),
        variant,
        metric: metric.to_string(),
        w: width,
        list,
    };
    let report = SimReport::new(label, seed, stop, results, started);
    match out {
        Some(path) => report.write(&path)?,
        None => print!("{}", report.to_csv()),
    }
    Ok(())
}

fn run_sweep(dec: &dyn FrameDecoder, points: &[f64], seed: u64, stop: StopRule) -> Result<Vec<sim::PointResult>> {
    let results = sim::sweep(dec, points, seed, stop)?;
    for pair in results.windows(2) {
        if pair[1].bler > pair[0].bler {
            log::warn!(
                "BLER increases from {} dB to {} dB ({} > {})",
                pair[0].ebn0_db,
                pair[1].ebn0_db,
                pair[1].bler,
                pair[0].bler
            );
        }
    }
    Ok(results)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Design(args) => {
            let code = args.code.build()?;
            let kinds = tree_kinds(args.schedule, &args.nodes)?;
            let tree = DecoderTree::build(&code, kinds);
            let set = design_lutset(&code, &tree, args.variant, args.ebn0, args.w)?;
            set.save(&args.out)?;
            eprintln!(
                "wrote {} decoding and {} translation tables to {}",
                set.decoding_table_count(),
                set.translations.len(),
                args.out.display()
            );
        }
        Command::Simulate(args) => simulate(args)?,
        Command::Tables { lut } => {
            let set = LutSet::load(&lut)?;
            println!(
                "decoding {}, translation {}",
                set.decoding_table_count(),
                set.translations.len()
            );
        }
        Command::Tree { code, nodes } => {
            let code = code.build()?;
            let tree = DecoderTree::build(&code, nodes.parse()?);
            print!("{}", tree.schedule_tsv());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
