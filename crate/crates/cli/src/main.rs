use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use distrecon::experiments::{count_table, lattice_experiment, random_g_statistics};
use distrecon::geometry::distance_distribution;
use distrecon::io::{load_config, write_csv, LoadedConfig};
use distrecon::recon::{compare_configs, test_reconstructible_2d, test_reconstructible_md, DEFAULT_EPSILON};
use distrecon::{CompareMode, Mode, PointConfig, ReconOptions, ReconReport, Scalar, Verdict};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "distrecon",
    version,
    about = "Reconstructibility of point configurations from distance distributions"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Also write the report to this file (JSON, or CSV for a .csv path).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Args, Clone, Copy)]
struct ModeArgs {
    /// Exact rational arithmetic (default when every coordinate parses).
    #[arg(long, conflicts_with = "float")]
    exact: bool,

    /// Double precision arithmetic.
    #[arg(long)]
    float: bool,
}

impl ModeArgs {
    fn mode(self) -> Option<Mode> {
        match (self.exact, self.float) {
            (true, _) => Some(Mode::Exact),
            (_, true) => Some(Mode::Float),
            _ => None,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the distribution of squared distances.
    Distances {
        file: PathBuf,
        /// Show distances instead of squared distances.
        #[arg(long)]
        sqrt: bool,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Run the reconstructibility test.
    Test {
        file: PathBuf,
        /// Run the determinant test in R^m instead of the planar test.
        #[arg(long)]
        dim: Option<usize>,
        /// Float mode zero threshold, before scaling by d_max^(m+1).
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        /// Use epsilon as an absolute threshold.
        #[arg(long)]
        absolute_epsilon: bool,
        /// Fail immediately when two distances coincide.
        #[arg(long)]
        early_exit: bool,
        /// Evaluate every tuple even after a failure.
        #[arg(long)]
        full: bool,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Compare two configurations.
    Compare {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value_t = CompareArg::Rigid)]
        mode: CompareArg,
        /// Relative tolerance for float comparisons.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        arithmetic: ModeArgs,
    },
    /// Run one of the experiments.
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Clone, Copy, ValueEnum)]
enum CompareArg {
    Rigid,
    Orientation,
    Similarity,
}

impl From<CompareArg> for CompareMode {
    fn from(m: CompareArg) -> Self {
        match m {
            CompareArg::Rigid => CompareMode::Rigid,
            CompareArg::Orientation => CompareMode::Orientation,
            CompareArg::Similarity => CompareMode::Similarity,
        }
    }
}

#[derive(Subcommand)]
enum Experiment {
    /// All four-point subsets of the lattice [0, N]^2.
    Lattice {
        #[arg(short = 'N', long = "N", alias = "box-size", default_value_t = 3)]
        box_size: u32,
    },
    /// Minimum |g| of random four-point configurations in the unit square.
    Random {
        #[arg(long, default_value_t = 5000)]
        trials: u64,
        #[arg(long, default_value_t = 1e-7)]
        threshold: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Number of admissible tuples for each n.
    Counts {
        #[arg(long = "n", value_delimiter = ',', default_values_t = [5, 6, 7, 8])]
        n: Vec<usize>,
    },
}

/// A finished command: text for each format and the exit code.
struct Output {
    human: String,
    json: Value,
    csv: String,
    code: u8,
}

fn csv_text<S: Serialize>(rows: &[S]) -> anyhow::Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let text = match cli.format {
                Format::Human => out.human.clone(),
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&out.json).expect("serializable")),
                Format::Csv => out.csv.clone(),
            };
            print!("{text}");
            if let Some(path) = &cli.out {
                if let Err(e) = write_out(path, &out) {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn write_out(path: &Path, out: &Output) -> anyhow::Result<()> {
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let text = if is_csv { out.csv.clone() } else { format!("{}\n", serde_json::to_string_pretty(&out.json)?) };
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().context("configuring threads")?;
    }
    match &cli.command {
        Command::Distances { file, sqrt, mode } => match load(file, *mode)? {
            LoadedConfig::Exact(p) => distances(&p, *sqrt),
            LoadedConfig::Float(p) => distances(&p, *sqrt),
        },
        Command::Test { file, dim, epsilon, absolute_epsilon, early_exit, full, mode } => {
            let opts = ReconOptions {
                epsilon: *epsilon,
                scale_aware: !absolute_epsilon,
                early_exit_repeated: *early_exit,
                stop_at_first_failure: !full,
                parallel: true,
            };
            match load(file, *mode)? {
                LoadedConfig::Exact(p) => test(&p, *dim, &opts),
                LoadedConfig::Float(p) => test(&p, *dim, &opts),
            }
        }
        Command::Compare { first, second, mode, tol, arithmetic } => {
            match (load(first, *arithmetic)?, load(second, *arithmetic)?) {
                (LoadedConfig::Exact(p), LoadedConfig::Exact(q)) => compare(&p, &q, (*mode).into(), *tol),
                (p, q) => compare(&p.to_float(), &q.to_float(), (*mode).into(), *tol),
            }
        }
        Command::Experiment(e) => experiment(e),
    }
}

fn load(path: &Path, mode: ModeArgs) -> anyhow::Result<LoadedConfig> {
    load_config(path, mode.mode()).with_context(|| format!("reading {}", path.display()))
}

fn fmt_root(v: f64) -> String {
    let s = format!("{v:.5}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn distances<T: Scalar>(p: &PointConfig<T>, sqrt: bool) -> anyhow::Result<Output> {
    let dist = distance_distribution(p)?;
    let shown = |v: &T| if sqrt { fmt_root(v.to_f64().sqrt()) } else { v.to_decimal_string() };
    let mut human = format!("{:<16} occurrences\n", if sqrt { "distance" } else { "squared distance" });
    for (v, k) in dist.entries() {
        writeln!(human, "{:<16} {k}", shown(v))?;
    }
    let summary: Vec<String> = dist.entries().iter().map(|(v, k)| format!("{} ×{k}", shown(v))).collect();
    writeln!(human, "{}", summary.join(", "))?;

    #[derive(Serialize)]
    struct Row {
        value: String,
        count: usize,
    }
    let rows: Vec<Row> = dist.entries().iter().map(|(v, k)| Row { value: shown(v), count: *k }).collect();
    let json = json!({ "mode": T::MODE, "sqrt": sqrt, "total": dist.total(), "entries": rows });
    Ok(Output { human, csv: csv_text(&rows)?, json, code: 0 })
}

fn test<T: Scalar>(p: &PointConfig<T>, dim: Option<usize>, opts: &ReconOptions) -> anyhow::Result<Output> {
    let m = dim.unwrap_or(2);
    if p.dim() != m {
        bail!("configuration lives in R^{} but the test was requested for R^{m}", p.dim());
    }
    let start = Instant::now();
    let report: ReconReport<T> = match dim {
        Some(_) => test_reconstructible_md(p, opts)?,
        None => test_reconstructible_2d(p, opts)?,
    };
    let elapsed = start.elapsed();
    if report.verdict == Verdict::NotApplicable {
        if p.len() <= 3 {
            bail!("{} points: always reconstructible, test not applicable", p.len());
        }
        bail!("{} points in R^{m}: the test needs at least {} points, test not applicable", p.len(), m + 2);
    }
    let doc = report.to_document(Some(elapsed));

    let mut human = String::new();
    writeln!(human, "verdict: {}", report.verdict)?;
    let cert = match (report.verdict, report.certified) {
        (Verdict::PassesTest, true) => "reconstructible from distances",
        (Verdict::PassesTest, false) => "none (a pass certifies reconstructibility only for n >= 5)",
        _ => "none",
    };
    writeln!(human, "certificate: {cert}")?;
    writeln!(human, "points: {}, dimension: {}, mode: {}", report.n, report.dim, report.mode)?;
    if report.mode == Mode::Float {
        writeln!(human, "zero threshold: {:e}", report.threshold)?;
    }
    writeln!(human, "repeated distances: {}", if report.repeated_distances { "yes" } else { "no" })?;
    if report.early_exit {
        writeln!(human, "stopped early on repeated distances")?;
    }
    if let Some(w) = &doc.witness {
        let pairs: Vec<String> = w.pairs.iter().map(|[a, b]| format!("{{{a},{b}}}")).collect();
        writeln!(
            human,
            "witness: i0={} i1={} i2={} pairs {} g = {} (tuple {})",
            w.i0,
            w.i1,
            w.i2,
            pairs.join(" "),
            w.g,
            w.position
        )?;
    }
    if let Some(g) = &doc.min_abs_g {
        writeln!(human, "min |g| over checked tuples: {g}")?;
    }
    writeln!(human, "combinations checked: {} of {}", report.combos_checked, report.combos_total)?;
    writeln!(human, "elapsed: {:.3} s", elapsed.as_secs_f64())?;

    #[derive(Serialize)]
    struct Row {
        verdict: Verdict,
        certified: bool,
        n: usize,
        m: usize,
        mode: Mode,
        threshold: f64,
        repeated_distances: bool,
        witness_position: Option<u128>,
        witness_g: Option<String>,
        min_abs_g: Option<String>,
        combos_checked: u128,
        combos_total: u128,
        wall_time_seconds: f64,
    }
    let row = Row {
        verdict: doc.verdict,
        certified: doc.certified,
        n: doc.n,
        m: doc.m,
        mode: doc.mode,
        threshold: doc.threshold,
        repeated_distances: doc.repeated_distances,
        witness_position: doc.witness.as_ref().map(|w| w.position),
        witness_g: doc.witness.as_ref().map(|w| w.g.clone()),
        min_abs_g: doc.min_abs_g.clone(),
        combos_checked: doc.combos_checked,
        combos_total: doc.combos_total,
        wall_time_seconds: elapsed.as_secs_f64(),
    };
    let code = if report.verdict == Verdict::PassesTest { 0 } else { 1 };
    Ok(Output { human, csv: csv_text(&[row])?, json: serde_json::to_value(&doc)?, code })
}

fn compare<T: Scalar>(p: &PointConfig<T>, q: &PointConfig<T>, mode: CompareMode, tol: f64) -> anyhow::Result<Output> {
    let v = compare_configs(p, q, mode, tol)?;
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut human = format!("distance distributions match: {}\n", yes(v.distribution_match));
    if let Some(s) = v.similarity_match {
        writeln!(human, "rescaled distributions match: {}", yes(s))?;
    }
    if mode == CompareMode::Orientation {
        writeln!(human, "orientation: {:?}", v.orientation)?;
    }
    let code = if v.is_match(mode) { 0 } else { 1 };
    let json = json!({ "mode": mode, "verdict": v, "match": v.is_match(mode) });
    #[derive(Serialize)]
    struct Row {
        mode: CompareMode,
        distribution_match: bool,
        similarity_match: Option<bool>,
        orientation: String,
        matched: bool,
    }
    let row = Row {
        mode,
        distribution_match: v.distribution_match,
        similarity_match: v.similarity_match,
        orientation: format!("{:?}", v.orientation),
        matched: v.is_match(mode),
    };
    Ok(Output { human, csv: csv_text(&[row])?, json, code })
}

fn experiment(e: &Experiment) -> anyhow::Result<Output> {
    match e {
        Experiment::Lattice { box_size } => {
            let r = lattice_experiment(*box_size)?;
            let mut human = format!(
                "{} / {} / {} (configurations / repeated distances / failed)\n",
                r.total_configs, r.repeated_distance_count, r.fail_count
            );
            writeln!(human, "configurations with a zero of g: {}", r.g_zero_count)?;
            if r.nonrepeated_count > 0 {
                writeln!(
                    human,
                    "failures without repeated distances: {} = {:.1}%",
                    r.nonrepeated_fail_fraction, r.nonrepeated_fail_pct
                )?;
            }
            Ok(Output { human, csv: csv_text(std::slice::from_ref(&r))?, json: serde_json::to_value(&r)?, code: 0 })
        }
        Experiment::Random { trials, threshold, seed } => {
            let r = random_g_statistics(*trials, *threshold, *seed);
            let human = format!(
                "{} of {} configurations have min |g| < {:e} (seed {}, {})\n",
                r.below_threshold_count, r.trials, r.threshold, r.seed, r.rng
            );
            Ok(Output { human, csv: csv_text(std::slice::from_ref(&r))?, json: serde_json::to_value(&r)?, code: 0 })
        }
        Experiment::Counts { n } => {
            let rows = count_table(n)?;
            let mut human = format!("{:<4} combinations\n", "n");
            for r in &rows {
                writeln!(human, "{:<4} {}", r.n, r.combinations)?;
            }
            Ok(Output { human, csv: csv_text(&rows)?, json: serde_json::to_value(&rows)?, code: 0 })
        }
    }
}
