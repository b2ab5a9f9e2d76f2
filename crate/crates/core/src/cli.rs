//! The `siderand` command line.
//!
//! Exit codes: 0 on success, 1 on operational failure (including
//! insufficient entropy and unattainable tuning), 2 on usage errors. Seed
//! bytes are written only after every stage has succeeded.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use crate::analysis::{
    aggregate_distribution, collect_runs, top_k_overlap, EntropySummary, OverlapSummary, Report,
};
use crate::autotune::{tune, Verdict};
use crate::collector::{collect_trace, CollectorConfig, TimingTrace};
use crate::conditioner::{condition, write_mk0, DEFAULT_QUALITY_FLOOR};
use crate::error::{Error, Result};
use crate::fips::{fips_pass_rate_csv, FipsBattery};
use crate::timer::{Timer, DEFAULT_PROBE_READS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "siderand", version, about = "Seed material from CPU benchmark runtime jitter")]
struct Cli {
    /// Quantize the host clock to this many nanoseconds (testing only).
    #[arg(long, global = true, hide = true, value_name = "NS")]
    simulate_quantum_ns: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Collect a trace, condition it, and write seed bytes.
    Seed(SeedArgs),
    /// Search for a scale that reaches the distinct-value floor.
    Tune(TuneArgs),
    /// Repeated collection with distribution and entropy reporting.
    Analyze(AnalyzeArgs),
    /// Run the FIPS 140-2 battery over a byte stream.
    Fips(FipsArgs),
    /// Emit the counter-hash reference stream.
    Mk0(Mk0Args),
    /// Probe and print the timer spec.
    Probe(ProbeArgs),
}

#[derive(Debug, Args)]
struct WorkloadArgs {
    #[arg(long)]
    scale: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Start from a saved key=value config.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

impl WorkloadArgs {
    fn resolve(&self) -> Result<CollectorConfig> {
        let mut config = match &self.config {
            Some(path) => CollectorConfig::from_config_text(&fs::read_to_string(path)?)?,
            None => CollectorConfig::default(),
        };
        if let Some(scale) = self.scale {
            config.scale = scale;
        }
        if let Some(samples) = self.samples {
            config.samples = samples;
        }
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Args)]
struct SeedArgs {
    #[command(flatten)]
    workload: WorkloadArgs,
    #[arg(long)]
    stretch: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_QUALITY_FLOOR)]
    floor: usize,
    /// Auto-tune scale before collecting.
    #[arg(long)]
    tune: bool,
    #[arg(long, default_value_t = 5000)]
    budget_ms: u64,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Lowercase hex instead of raw bytes.
    #[arg(long)]
    hex: bool,
}

#[derive(Debug, Args)]
struct TuneArgs {
    #[command(flatten)]
    workload: WorkloadArgs,
    #[arg(long, default_value_t = DEFAULT_QUALITY_FLOOR)]
    floor: usize,
    #[arg(long, default_value_t = 5000)]
    budget_ms: u64,
    /// Save the tuned config as key=value text.
    #[arg(long, value_name = "PATH")]
    save: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    workload: WorkloadArgs,
    #[arg(long, default_value_t = 100)]
    runs: usize,
    #[arg(long, default_value_t = 20)]
    k: usize,
    /// Also collect a second session and report the top-N overlap.
    #[arg(long, value_name = "N")]
    overlap_k: Option<usize>,
    /// Value log, one delta per line.
    #[arg(long, value_name = "PATH")]
    log: Option<PathBuf>,
    /// Histogram CSV.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// JSON report.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FipsArgs {
    #[arg(long, default_value_t = 5000)]
    blocks: u64,
    /// Per-block CSV.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Enable the repeated-word check.
    #[arg(long)]
    continuous: bool,
    /// Input file; `-` or absent reads standard input.
    input: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Mk0Args {
    #[arg(long, default_value_t = 100_000)]
    count: u64,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ProbeArgs {
    #[arg(long, default_value_t = DEFAULT_PROBE_READS)]
    reads: usize,
}

/// Run against the process's standard streams.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_cli_with(argv, io::stdin().lock(), io::stdout().lock(), io::stderr().lock())
}

/// Run with explicit streams.
pub fn run_cli_with<I, T, R, W, E>(argv: I, stdin: R, mut stdout: W, mut stderr: E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    R: Read,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
            } else {
                let _ = write!(stdout, "{rendered}");
            }
            return code;
        }
    };

    match dispatch(cli, stdin, &mut stdout, &mut stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "siderand: {e}");
            match e {
                Error::InvalidArgument(_) | Error::InvalidConfig(_) => EXIT_USAGE,
                _ => EXIT_FAILURE,
            }
        }
    }
}

fn make_timer(quantum: Option<u64>) -> Result<Timer> {
    match quantum {
        Some(q) => Timer::simulated(q),
        None => Timer::host(),
    }
}

fn dispatch<R: Read>(cli: Cli, stdin: R, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let quantum = cli.simulate_quantum_ns;
    match cli.command {
        Command::Seed(args) => seed(args, quantum, stdout, stderr),
        Command::Tune(args) => tune_cmd(args, quantum, stdout, stderr),
        Command::Analyze(args) => analyze(args, quantum, stdout),
        Command::Fips(args) => fips(args, stdin, stdout, stderr),
        Command::Mk0(args) => mk0(args, stdout),
        Command::Probe(args) => {
            let timer = Timer::probe(
                match quantum {
                    Some(q) => std::sync::Arc::new(crate::timer::SimulatedClock::new(q)?),
                    None => std::sync::Arc::new(crate::timer::MonotonicClock),
                },
                args.reads,
            )?;
            writeln!(stdout, "{}", serde_json::to_string_pretty(timer.spec())?)?;
            Ok(EXIT_OK)
        }
    }
}

fn seed(args: SeedArgs, quantum: Option<u64>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let mut config = args.workload.resolve()?;
    if let Some(stretch) = args.stretch {
        config.stretch = stretch;
    }
    let timer = make_timer(quantum)?;

    if args.tune {
        let result = tune(&config, &timer, args.floor, Duration::from_millis(args.budget_ms))?;
        if result.verdict == Verdict::Unattainable {
            writeln!(
                stderr,
                "siderand: tuning unattainable (best median {} distinct, floor {}); no seed written",
                result.achieved_distinct, args.floor
            )?;
            return Ok(EXIT_FAILURE);
        }
        config = result.config;
    }

    let trace = collect_trace(&config, &timer)?;
    let seed = condition(&trace, args.floor).map_err(|e| {
        if matches!(e, Error::InsufficientEntropy { .. }) && !args.tune {
            let _ = writeln!(stderr, "siderand: hint: try --tune or a larger --scale");
        }
        e
    })?;
    let bytes = if args.hex {
        seed.to_hex().into_bytes()
    } else {
        seed.to_bytes()
    };

    match &args.out {
        Some(path) => {
            write_atomically(path, &bytes)?;
            writeln!(
                stderr,
                "wrote {} seed bytes to {} (scale={}, distinct={})",
                seed.total_bytes(),
                path.display(),
                config.scale,
                trace.distinct_count()
            )?;
        }
        None => {
            stdout.write_all(&bytes)?;
            stdout.flush()?;
        }
    }
    Ok(EXIT_OK)
}

/// Write to a sibling temp file and rename, so `path` either does not
/// exist or holds the complete contents.
fn write_atomically(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp_name = path.file_name().map(OsString::from).unwrap_or_default();
    tmp_name.push(".partial");
    let tmp = path.with_file_name(tmp_name);
    let result = (|| {
        let mut f = File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

fn tune_cmd(args: TuneArgs, quantum: Option<u64>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let base = args.workload.resolve()?;
    let timer = make_timer(quantum)?;
    let result = tune(&base, &timer, args.floor, Duration::from_millis(args.budget_ms))?;
    let report = Report {
        timer: timer.spec().clone(),
        config: result.config,
        distribution: None,
        entropy: None,
        tuning: Some(result.clone()),
        overlap: None,
    };
    writeln!(stdout, "{}", report.to_json_pretty()?)?;

    if result.verdict == Verdict::Unattainable {
        writeln!(stderr, "siderand: floor {} unattainable within {} ms", args.floor, args.budget_ms)?;
        return Ok(EXIT_FAILURE);
    }
    if let Some(path) = &args.save {
        write_atomically(path, result.config.to_config_text().as_bytes())?;
    }
    Ok(EXIT_OK)
}

fn analyze(args: AnalyzeArgs, quantum: Option<u64>, stdout: &mut dyn Write) -> Result<i32> {
    if args.runs == 0 {
        return Err(Error::InvalidArgument("runs must be at least 1".into()));
    }
    let config = args.workload.resolve()?;
    let timer = make_timer(quantum)?;
    let traces = collect_runs(&config, &timer, args.runs)?;
    let dist = aggregate_distribution(&traces, args.k)?;
    let entropy = EntropySummary::for_distribution(&dist, config.samples)?;

    let overlap = match args.overlap_k {
        Some(k) => {
            let second = aggregate_distribution(&collect_runs(&config, &timer, args.runs)?, args.k)?;
            Some(OverlapSummary {
                k,
                shared: top_k_overlap(&dist, &second, k)?,
            })
        }
        None => None,
    };

    if let Some(path) = &args.log {
        let mut out = BufWriter::new(File::create(path)?);
        for t in &traces {
            t.write_log(&mut out)?;
        }
        out.flush()?;
    }
    if let Some(path) = &args.csv {
        dist.write_histogram_csv(File::create(path)?)?;
    }

    writeln!(
        stdout,
        "runs={} total_samples={} unique_values={} flatness_ratio={:.3} flat={}",
        dist.runs,
        dist.total_samples,
        dist.unique_values,
        dist.flatness_ratio,
        dist.is_flat()
    )?;
    writeln!(
        stdout,
        "n_top={} entropy_bits={:.2} key_space_log10={:.2} meets_256_bit_standard={}",
        entropy.estimate.n_top, entropy.estimate.bits, entropy.estimate.key_space_log10, entropy.meets_standard
    )?;
    if let Some(o) = &overlap {
        writeln!(stdout, "top_{}_overlap={}", o.k, o.shared)?;
    }

    if let Some(path) = &args.json {
        let report = Report {
            timer: timer.spec().clone(),
            config,
            distribution: Some(dist.summary()),
            entropy: Some(entropy),
            tuning: None,
            overlap,
        };
        fs::write(path, report.to_json_pretty()?)?;
    }
    Ok(EXIT_OK)
}

fn fips<R: Read>(args: FipsArgs, stdin: R, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let battery = FipsBattery {
        continuous_run: args.continuous,
    };
    let input: Box<dyn Read> = match &args.input {
        Some(p) if p.as_os_str() != "-" => Box::new(io::BufReader::new(File::open(p)?)),
        _ => Box::new(io::BufReader::new(stdin)),
    };
    let csv: Box<dyn Write> = match &args.csv {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::sink()),
    };
    match fips_pass_rate_csv(&battery, input, args.blocks, csv) {
        Ok(report) => {
            writeln!(stdout, "{}", report.summary_line())?;
            Ok(EXIT_OK)
        }
        Err(Error::ShortStream { requested, partial }) => {
            writeln!(stdout, "{}", partial.summary_line())?;
            writeln!(
                stderr,
                "siderand: stream ended after {} of {} blocks",
                partial.blocks_tested, requested
            )?;
            Ok(EXIT_FAILURE)
        }
        Err(e) => Err(e),
    }
}

fn mk0(args: Mk0Args, stdout: &mut dyn Write) -> Result<i32> {
    let written = match &args.out {
        Some(path) => write_mk0(args.count, BufWriter::new(File::create(path)?)),
        None => write_mk0(args.count, BufWriter::new(stdout)),
    };
    match written {
        // A reader that stops early (`mk0 | fips --blocks N`) is not an error.
        Err(Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => Ok(EXIT_OK),
        other => other.map(|()| EXIT_OK),
    }
}

/// Replay a value log through the conditioner; used to check that `--hex`
/// and raw output agree for the same trace.
pub fn condition_value_log(deltas: Vec<u64>, stretch: usize, floor: usize, hex: bool) -> Result<Vec<u8>> {
    let seed = condition(&TimingTrace::synthetic_with_stretch(deltas, stretch), floor)?;
    Ok(if hex { seed.to_hex().into_bytes() } else { seed.to_bytes() })
}
