use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use shapelet_core::eval::{evaluate_result, StageTimings};
use shapelet_core::io::write_dataset;
use shapelet_core::testkit::generate_synthetic;
use shapelet_core::{
    ablation, discover_with, evaluate, grid_search, load_dataset, write_result, DatasetFileSpec,
    DiscoveryConfig, DiscoveryResult, EvaluationReport, GridSearch, LookupNorm, PaaRatio, TieOrder,
    TimeSeriesDataset, Variant, DEFAULT_LENGTH_FRACTIONS,
};

const EVALUATE_HEADER: [&str; 12] = [
    "kind",
    "seed",
    "r",
    "p",
    "epsilon",
    "sampled",
    "refused",
    "rejected",
    "accepted",
    "train_acc",
    "test_acc",
    "seconds_total",
];

const BENCH_HEADER: [&str; 16] = [
    "variant",
    "r",
    "p",
    "epsilon",
    "sampled",
    "considered",
    "refused",
    "rejected",
    "accepted",
    "window_evals",
    "f",
    "f_r4",
    "eval_ratio",
    "train_acc",
    "test_acc",
    "seconds_total",
];

#[derive(Parser)]
#[command(
    name = "shapelet",
    version,
    about = "Scalable time-series shapelet discovery"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discover shapelets on a training set and write the result document.
    ///
    /// Prints one summary line to stdout:
    /// `epsilon=<ε|off> shapelets=<|A|> refused=<pct>% train_accuracy=<acc>`.
    Discover(DiscoverArgs),
    /// Discover on --train, classify --test, and print a CSV report.
    ///
    /// CSV columns: kind,seed,r,p,epsilon,sampled,refused,rejected,accepted,
    /// train_acc,test_acc,seconds_total. `kind` is `single` for a plain run;
    /// with --grid there is one `cell` row per (r, p, seed) followed by the
    /// `selected` row(s) of the winning cell.
    Evaluate(EvaluateArgs),
    /// Run the pruning/PAA ablation and print a CSV table.
    ///
    /// CSV columns: variant,r,p,epsilon,sampled,considered,refused,rejected,
    /// accepted,window_evals,f,f_r4,eval_ratio,train_acc,test_acc,
    /// seconds_total. `f` is the considered fraction, `eval_ratio` the
    /// window-evaluation count relative to the `neither` variant.
    Bench(BenchArgs),
    /// Write a two-class synthetic dataset in UCR format.
    Gen(GenArgs),
}

#[derive(Args)]
struct DiscoveryFlags {
    /// PAA ratio r in (0, 1], as `1`, `0.5` or `1/8`.
    #[arg(long = "r", value_name = "R", value_parser = parse_ratio)]
    ratio: Option<PaaRatio>,
    /// Threshold percentile; 0 disables pruning.
    #[arg(long = "p", value_name = "P", default_value = "25", value_parser = parse_percentile)]
    percentile: u8,
    /// Shapelet lengths as comma-separated fractions of the compressed length.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_LENGTH_FRACTIONS)]
    phi: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of sampled candidates (default N·M'·L).
    #[arg(long)]
    budget: Option<u64>,
    /// Compare raw instead of length-normalised squared distances with ε.
    #[arg(long)]
    lookup_unnormalized: bool,
    /// Print timing columns as NA so output is byte-reproducible.
    #[arg(long)]
    no_timings: bool,
}

impl DiscoveryFlags {
    fn config(&self, default_ratio: PaaRatio) -> DiscoveryConfig {
        DiscoveryConfig {
            paa_ratio: self.ratio.unwrap_or(default_ratio),
            percentile: self.percentile,
            length_fractions: self.phi.clone(),
            seed: self.seed,
            candidate_budget: self.budget,
            lookup: if self.lookup_unnormalized {
                LookupNorm::Unnormalized
            } else {
                LookupNorm::Normalized
            },
        }
    }

    fn seconds(&self, duration: Duration) -> String {
        if self.no_timings {
            "NA".into()
        } else {
            format!("{:.3}", duration.as_secs_f64())
        }
    }
}

#[derive(Args)]
struct DiscoverArgs {
    #[arg(long)]
    train: PathBuf,
    /// Result document path.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    flags: DiscoveryFlags,
}

#[derive(Clone, Copy, ValueEnum)]
enum TieOrderArg {
    /// Larger r wins first, then larger p.
    RFirst,
    /// Larger p wins first, then larger r.
    PFirst,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the result document of the (selected) run.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Select (r, p) by train accuracy over a grid.
    #[arg(long)]
    grid: bool,
    #[arg(long, value_delimiter = ',', value_parser = parse_ratio, default_values = ["1", "1/2", "1/4", "1/8"])]
    grid_r: Vec<PaaRatio>,
    #[arg(long, value_delimiter = ',', value_parser = parse_percentile, default_values = ["15", "25", "35"])]
    grid_p: Vec<u8>,
    /// Average cell train accuracy over these seeds (default: --seed).
    #[arg(long, value_delimiter = ',')]
    grid_seeds: Vec<u64>,
    #[arg(long, value_enum, default_value = "r-first")]
    tie_order: TieOrderArg,
    /// Worker threads for grid cells.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    threads: u16,
    #[command(flatten)]
    flags: DiscoveryFlags,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// `all`, `pruning-only`, `paa-only`, or a comma list of
    /// neither,paa,prune,paa+prune.
    #[arg(long, default_value = "all", value_parser = parse_variants)]
    variants: VariantSet,
    #[command(flatten)]
    flags: DiscoveryFlags,
}

#[derive(Args)]
struct GenArgs {
    /// Series per class.
    #[arg(long)]
    n: usize,
    /// Series length (at least 16).
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0.5)]
    sigma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn parse_ratio(s: &str) -> Result<PaaRatio, String> {
    s.parse::<PaaRatio>().map_err(|e| e.to_string())
}

fn parse_percentile(s: &str) -> Result<u8, String> {
    match s.trim().parse::<i64>() {
        Ok(p) if (0..=100).contains(&p) => Ok(p as u8),
        _ => Err("p must be in [0,100]".into()),
    }
}

#[derive(Clone)]
struct VariantSet(Vec<Variant>);

fn parse_variants(s: &str) -> Result<VariantSet, String> {
    let variants = match s {
        "all" => Variant::ALL.to_vec(),
        "pruning-only" => vec![Variant::Exhaustive, Variant::PruningOnly],
        "paa-only" => vec![Variant::Exhaustive, Variant::PaaOnly],
        list => list
            .split(',')
            .map(|name| {
                Variant::from_name(name.trim()).ok_or_else(|| format!("unknown variant `{name}`"))
            })
            .collect::<Result<_, _>>()?,
    };
    Ok(VariantSet(variants))
}

fn usage_error(message: impl std::fmt::Display) -> ! {
    Cli::command()
        .error(ErrorKind::ValueValidation, message)
        .exit()
}

fn checked(config: DiscoveryConfig) -> DiscoveryConfig {
    if let Err(e) = config.validate() {
        usage_error(e);
    }
    config
}

fn load(path: &Path) -> Result<TimeSeriesDataset> {
    let dataset = load_dataset(&DatasetFileSpec::new(path))?;
    eprintln!(
        "loaded {}: {} series of length {}",
        path.display(),
        dataset.n_series(),
        dataset.series_len()
    );
    Ok(dataset)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(
            std::fs::File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        ),
        None => Box::new(io::stdout().lock()),
    })
}

fn epsilon(result: &DiscoveryResult) -> String {
    result.threshold.to_string()
}

fn run_discover(args: &DiscoverArgs) -> Result<()> {
    let config = checked(args.flags.config(PaaRatio::ONE));
    let train = load(&args.train)?;
    let (result, timings) = discover_with(&train, &config, &mut ())?;
    write_result(&result, &args.out)?;
    if !args.flags.no_timings {
        eprintln!(
            "compression {}s, threshold {}s, search {}s",
            args.flags.seconds(timings.compression),
            args.flags.seconds(timings.threshold),
            args.flags.seconds(timings.search)
        );
    }
    println!(
        "epsilon={} shapelets={} refused={:.1}% train_accuracy={}",
        epsilon(&result),
        result.accepted.len(),
        100.0 * result.refused_fraction(),
        result.train_accuracy()
    );
    Ok(())
}

fn evaluate_row(kind: &str, report: &EvaluationReport, flags: &DiscoveryFlags) -> Vec<String> {
    let r = &report.result;
    vec![
        kind.into(),
        r.config.seed.to_string(),
        r.config.paa_ratio.to_string(),
        r.config.percentile.to_string(),
        epsilon(r),
        r.sampled_count.to_string(),
        r.refused_count.to_string(),
        r.rejected_count.to_string(),
        r.accepted.len().to_string(),
        report.train_accuracy.to_string(),
        report.test_accuracy.to_string(),
        flags.seconds(report.timings.total()),
    ]
}

fn log_timings(flags: &DiscoveryFlags, report: &EvaluationReport) {
    if flags.no_timings {
        return;
    }
    let t: &StageTimings = &report.timings;
    eprintln!(
        "r={} p={} seed={}: compression {}s, threshold {}s, discovery {}s, transform {}s",
        report.result.config.paa_ratio,
        report.result.config.percentile,
        report.result.config.seed,
        flags.seconds(t.discovery.compression),
        flags.seconds(t.discovery.threshold),
        flags.seconds(t.discovery.search),
        flags.seconds(t.transform)
    );
}

fn run_evaluate(args: &EvaluateArgs) -> Result<()> {
    let base = checked(args.flags.config(PaaRatio::ONE));
    if args.grid && (args.grid_r.is_empty() || args.grid_p.is_empty()) {
        usage_error("--grid-r and --grid-p must be non-empty");
    }
    let train = load(&args.train)?;
    let test = load(&args.test)?;
    let mut rows = Vec::new();
    let selected_result = if args.grid {
        let grid = GridSearch {
            ratios: args.grid_r.clone(),
            percentiles: args.grid_p.clone(),
            seeds: if args.grid_seeds.is_empty() {
                vec![args.flags.seed]
            } else {
                args.grid_seeds.clone()
            },
            tie_order: match args.tie_order {
                TieOrderArg::RFirst => TieOrder::RatioFirst,
                TieOrderArg::PFirst => TieOrder::PercentileFirst,
            },
            threads: args.threads as usize,
        };
        let outcome = grid_search(&train, &base, &grid)?;
        let mut best_reports = Vec::new();
        for (i, cell) in outcome.cells.iter().enumerate() {
            for (result, timings) in &cell.runs {
                let report = evaluate_result(&train, &test, result.clone(), *timings)?;
                log_timings(&args.flags, &report);
                rows.push(evaluate_row("cell", &report, &args.flags));
                if i == outcome.best {
                    best_reports.push(report);
                }
            }
        }
        let best = outcome.best_cell();
        eprintln!(
            "selected r={} p={} (mean train accuracy {})",
            best.ratio, best.percentile, best.train_accuracy
        );
        for report in &best_reports {
            rows.push(evaluate_row("selected", report, &args.flags));
        }
        best_reports.swap_remove(0).result
    } else {
        let report = evaluate(&train, &test, &base)?;
        log_timings(&args.flags, &report);
        rows.push(evaluate_row("single", &report, &args.flags));
        report.result
    };

    if let Some(path) = &args.report {
        write_result(&selected_result, path)?;
    }
    write_csv(args.out.as_deref(), &EVALUATE_HEADER, &rows)
}

fn run_bench(args: &BenchArgs) -> Result<()> {
    let base = checked(args.flags.config(PaaRatio::new(1, 2).expect("valid ratio")));
    let train = load(&args.train)?;
    let test = load(&args.test)?;
    let results = ablation(&train, &test, &base, &args.variants.0)?;
    let exhaustive = results
        .iter()
        .find(|row| row.variant == Variant::Exhaustive)
        .map(|row| row.report.result.window_evaluations as f64);

    let mut rows = Vec::new();
    for row in &results {
        let r = &row.report.result;
        let f = r.considered_fraction();
        let f_r4 = f * r.config.paa_ratio.as_f64().powi(4);
        eprintln!(
            "{:>10}: considered {:>8}, window evaluations {:>12}, {}s",
            row.variant.name(),
            r.considered_count,
            r.window_evaluations,
            args.flags.seconds(row.report.timings.total())
        );
        rows.push(vec![
            row.variant.name().into(),
            r.config.paa_ratio.to_string(),
            r.config.percentile.to_string(),
            epsilon(r),
            r.sampled_count.to_string(),
            r.considered_count.to_string(),
            r.refused_count.to_string(),
            r.rejected_count.to_string(),
            r.accepted.len().to_string(),
            r.window_evaluations.to_string(),
            f.to_string(),
            f_r4.to_string(),
            exhaustive.map_or("NA".into(), |ex| {
                (r.window_evaluations as f64 / ex).to_string()
            }),
            row.report.train_accuracy.to_string(),
            row.report.test_accuracy.to_string(),
            args.flags.seconds(row.report.timings.total()),
        ]);
    }
    write_csv(args.out.as_deref(), &BENCH_HEADER, &rows)
}

fn write_csv(path: Option<&Path>, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(output(path)?);
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok(())
}

fn run_gen(args: &GenArgs) -> Result<()> {
    let dataset = match generate_synthetic(args.n, args.m, args.sigma, args.seed) {
        Ok(ds) => ds,
        Err(e) => usage_error(e),
    };
    write_dataset(&dataset, &args.out)?;
    eprintln!(
        "wrote {} series of length {} to {}",
        dataset.n_series(),
        dataset.series_len(),
        args.out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Discover(args) => run_discover(args),
        Command::Evaluate(args) => run_evaluate(args),
        Command::Bench(args) => run_bench(args),
        Command::Gen(args) => run_gen(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // Core errors already embed their source in the message.
            let mut message = e.to_string();
            for cause in e.chain().skip(1) {
                let cause = cause.to_string();
                if !message.contains(&cause) {
                    message = format!("{message}: {cause}");
                }
            }
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
