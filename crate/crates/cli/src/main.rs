use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::Serialize;
use wthi_core::binning_sim::{run_experiment, DecodeMode, SimConfig, DEFAULT_BUDGET};
use wthi_core::dmc_whi::{
    classify_interference, classify_profiles, mi_profile_dmc, theorem1_rate, Dmc, InterferenceClass,
    ProductInput, RateTriple,
};
use wthi_core::gwt_hi::{
    asymptotic_rate, classify_regime, linspace, power_control, secrecy_rate, sweep, wiretap_baseline,
    GaussianWthi, PowerAllocation, Regime, SweepVar,
};
use wthi_core::{Error, ProbVector};

/// Secrecy rates for the wiretap channel with a helping interferer.
#[derive(Parser)]
#[command(name = "wthi", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Worker threads (default: all cores).
    #[arg(long, env = "WTHI_THREADS", global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Secrecy rate of the Gaussian channel at fixed powers.
    Rate {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        p1: f64,
        #[arg(long)]
        p2: f64,
    },
    /// Rate-maximizing powers under the given budgets.
    PowerControl {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        p1max: f64,
        #[arg(long)]
        p2max: f64,
    },
    /// Power-unconstrained secrecy rate.
    Asymptotic {
        #[arg(long)]
        a: f64,
    },
    /// Tabulates the Gaussian rate along one parameter.
    Sweep(SweepArgs),
    /// Optimizes the secret rate of a discrete channel over product inputs.
    DmcRate {
        #[arg(long)]
        channel: PathBuf,
        /// Lattice resolution of each input simplex.
        #[arg(long, default_value_t = 16)]
        grid: usize,
    },
    /// Interference class over the uniform input and random product inputs.
    DmcClassify {
        #[arg(long)]
        channel: PathBuf,
        /// Number of random inputs in addition to the uniform one.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Samples binning codes and measures them exactly.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Var {
    A,
    P1,
    P2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    var: Var,
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    #[arg(long)]
    steps: usize,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    p1max: Option<f64>,
    #[arg(long)]
    p2max: Option<f64>,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    power_control: Switch,
    /// CSV destination; rows go to standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    JointMl,
    TreatAsNoise,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    channel: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r1s: f64,
    #[arg(long, default_value_t = 0.0)]
    r1d: f64,
    #[arg(long, default_value_t = 0.0)]
    r2: f64,
    /// Comma-separated codebook seeds.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    seeds: Vec<u64>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, value_enum, default_value_t = Mode::JointMl)]
    mode: Mode,
    /// Source input distribution, comma-separated (default: uniform).
    #[arg(long, value_delimiter = ',')]
    px1: Option<Vec<f64>>,
    /// Helper input distribution, comma-separated (default: uniform).
    #[arg(long, value_delimiter = ',')]
    px2: Option<Vec<f64>>,
    /// Cap on |Y2|^n times the number of codeword pairs.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn io_failure(what: &str, path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{what} {}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.into()).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command, cli.format) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Io(msg) | Failure::Usage(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command, format: Format) -> CliResult {
    match command {
        Command::Rate { a, p1, p2 } => rate(a, p1, p2, format),
        Command::PowerControl { a, p1max, p2max } => power(a, p1max, p2max, format),
        Command::Asymptotic { a } => emit(format, &AsymptoticRecord { a, rate_bits: asymptotic_rate(a)? }),
        Command::Sweep(args) => sweep_cmd(args, format),
        Command::DmcRate { channel, grid } => dmc_rate(&channel, grid, format),
        Command::DmcClassify { channel, samples, seed } => dmc_classify(&channel, samples, seed, format),
        Command::Simulate(args) => simulate(args, format),
    }
}

/// Writes `record` as one JSON document, or as `key: value` lines.
fn emit<T: Serialize>(format: Format, record: &T) -> CliResult {
    let value = serde_json::to_value(record).map_err(|e| Failure::Usage(e.to_string()))?;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&value).map_err(|e| Failure::Usage(e.to_string()))?,
        Format::Text => text_lines(&value),
    };
    let mut out = io::stdout().lock();
    writeln!(out, "{text}").map_err(|e| Failure::Io(format!("writing output: {e}")))
}

fn text_lines(value: &serde_json::Value) -> String {
    let Some(map) = value.as_object() else {
        return value.to_string();
    };
    let width = map.keys().map(String::len).max().unwrap_or(0);
    map.iter()
        .map(|(k, v)| match v {
            serde_json::Value::String(s) => format!("{k:<width$}  {s}"),
            other => format!("{k:<width$}  {other}"),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Serialize)]
struct RateRecord {
    a: f64,
    p1: f64,
    p2: f64,
    regime: Regime,
    rate_bits: f64,
    baseline_bits: f64,
}

fn rate(a: f64, p1: f64, p2: f64, format: Format) -> CliResult {
    GaussianWthi::new(a, p1, p2)?;
    let alloc = PowerAllocation::new(p1, p2)?;
    emit(
        format,
        &RateRecord {
            a,
            p1,
            p2,
            regime: classify_regime(a, p2),
            rate_bits: secrecy_rate(a, alloc),
            baseline_bits: wiretap_baseline(a, p1),
        },
    )
}

#[derive(Serialize)]
struct PowerRecord {
    a: f64,
    p1max: f64,
    p2max: f64,
    p1: f64,
    p2: f64,
    regime: Regime,
    rate_bits: f64,
    baseline_bits: f64,
}

fn power(a: f64, p1max: f64, p2max: f64, format: Format) -> CliResult {
    let ch = GaussianWthi::new(a, p1max, p2max)?;
    let (alloc, rate_bits) = power_control(&ch);
    emit(
        format,
        &PowerRecord {
            a,
            p1max,
            p2max,
            p1: alloc.p1,
            p2: alloc.p2,
            regime: classify_regime(a, alloc.p2),
            rate_bits,
            baseline_bits: wiretap_baseline(a, p1max),
        },
    )
}

#[derive(Serialize)]
struct AsymptoticRecord {
    a: f64,
    rate_bits: f64,
}

#[derive(Serialize)]
struct SweepSummary<'a> {
    rows: usize,
    out: &'a Path,
}

fn sweep_cmd(args: SweepArgs, format: Format) -> CliResult {
    if args.steps < 2 {
        return Err(Failure::Usage(format!("--steps must be >= 2, got {}", args.steps)));
    }
    if !(args.from <= args.to) {
        return Err(Failure::Usage(format!("--from {} must not exceed --to {}", args.from, args.to)));
    }
    let fixed = |value: Option<f64>, name: &str, swept: bool| -> Result<f64, Failure> {
        match (value, swept) {
            (_, true) => Ok(value.unwrap_or(0.0)),
            (Some(v), false) => Ok(v),
            (None, false) => Err(Failure::Usage(format!("--{name} is required unless it is the swept variable"))),
        }
    };
    let a = fixed(args.a, "a", args.var == Var::A)?;
    let p1 = fixed(args.p1max, "p1max", args.var == Var::P1)?;
    let p2 = fixed(args.p2max, "p2max", args.var == Var::P2)?;
    let ch = GaussianWthi::new(a, p1, p2)?;
    let var = match args.var {
        Var::A => SweepVar::A,
        Var::P1 => SweepVar::P1Max,
        Var::P2 => SweepVar::P2Max,
    };
    let rows = sweep(&ch, var, &linspace(args.from, args.to, args.steps), args.power_control == Switch::On)?;

    let csv_bytes = || -> Result<Vec<u8>, Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &rows {
            w.serialize(row).map_err(|e| Failure::Usage(e.to_string()))?;
        }
        w.into_inner().map_err(|e| Failure::Usage(e.to_string()))
    };
    match (&args.out, format) {
        (Some(path), _) => {
            fs::write(path, csv_bytes()?).map_err(|e| io_failure("cannot write", path, e))?;
            emit(format, &SweepSummary { rows: rows.len(), out: path })
        }
        (None, Format::Json) => {
            let text = serde_json::to_string_pretty(&rows).map_err(|e| Failure::Usage(e.to_string()))?;
            writeln!(io::stdout().lock(), "{text}").map_err(|e| Failure::Io(format!("writing output: {e}")))
        }
        (None, Format::Text) => io::stdout()
            .lock()
            .write_all(&csv_bytes()?)
            .map_err(|e| Failure::Io(format!("writing output: {e}"))),
    }
}

fn load_channel(path: &Path) -> Result<Dmc, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure("cannot read", path, e))?;
    Ok(Dmc::from_json(&text)?)
}

#[derive(Serialize)]
struct DmcRateRecord {
    rate_bits: f64,
    px1: Vec<f64>,
    px2: Vec<f64>,
    r1s: f64,
    r1d: f64,
    r2: f64,
    class: InterferenceClass,
}

fn dmc_rate(path: &Path, grid: usize, format: Format) -> CliResult {
    let ch = load_channel(path)?;
    let best = theorem1_rate(&ch, grid)?;
    let class = classify_profiles(&[mi_profile_dmc(&ch, &best.input)?])?.class;
    emit(
        format,
        &DmcRateRecord {
            rate_bits: best.rate_bits,
            px1: best.input.px1.as_slice().to_vec(),
            px2: best.input.px2.as_slice().to_vec(),
            r1s: best.triple.r1s,
            r1d: best.triple.r1d,
            r2: best.triple.r2,
            class,
        },
    )
}

/// Uniformly distributed point of the probability simplex.
fn random_simplex_point(rng: &mut ChaCha8Rng, n: usize) -> Result<ProbVector, Failure> {
    let w: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = w.iter().sum();
    let mut p: Vec<f64> = w.iter().map(|x| x / total).collect();
    let head: f64 = p[..n - 1].iter().sum();
    p[n - 1] = (1.0 - head).max(0.0);
    Ok(ProbVector::new(p)?)
}

fn dmc_classify(path: &Path, samples: usize, seed: u64, format: Format) -> CliResult {
    let ch = load_channel(path)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inputs = vec![ProductInput::uniform(ch.n_x1(), ch.n_x2())?];
    for _ in 0..samples {
        let px1 = random_simplex_point(&mut rng, ch.n_x1())?;
        let px2 = random_simplex_point(&mut rng, ch.n_x2())?;
        inputs.push(ProductInput::new(px1, px2));
    }
    emit(format, &classify_interference(&ch, &inputs)?)
}

fn simulate(args: SimulateArgs, format: Format) -> CliResult {
    let ch = load_channel(&args.channel)?;
    let dist = |given: Option<Vec<f64>>, n: usize| -> Result<ProbVector, Failure> {
        Ok(match given {
            Some(p) => ProbVector::new(p)?,
            None => ProbVector::uniform(n)?,
        })
    };
    let input = ProductInput::new(dist(args.px1, ch.n_x1())?, dist(args.px2, ch.n_x2())?);
    let config = SimConfig {
        trials: args.trials,
        mode: match args.mode {
            Mode::JointMl => DecodeMode::JointMl,
            Mode::TreatAsNoise => DecodeMode::TreatAsNoise,
        },
        budget: args.budget,
    };
    let rates = RateTriple { r1s: args.r1s, r1d: args.r1d, r2: args.r2 };
    let report = run_experiment(&ch, &input, args.n, rates, &args.seeds, &config)?;
    match format {
        Format::Json => emit(format, &report),
        Format::Text => {
            let mut out = String::new();
            for r in &report.reports {
                out.push_str(&text_lines(&serde_json::to_value(r).map_err(|e| Failure::Usage(e.to_string()))?));
                out.push_str("\n\n");
            }
            out.push_str(&format!(
                "mean pe {} equivocation_rate {} leakage {} secrecy_gap {}",
                report.mean.pe, report.mean.equivocation_rate, report.mean.leakage, report.mean.secrecy_gap
            ));
            writeln!(io::stdout().lock(), "{out}").map_err(|e| Failure::Io(format!("writing output: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_lines_align_keys() {
        let v = serde_json::json!({"a": 1.5, "regime": "Weak"});
        assert_eq!(text_lines(&v), "a       1.5\nregime  Weak");
    }

    #[test]
    fn simplex_points_are_distributions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..6 {
            let p = random_simplex_point(&mut rng, n).unwrap();
            assert_eq!(p.len(), n);
            assert!(p.as_slice().iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
