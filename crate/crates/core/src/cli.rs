//! The `dfa-decomp` command line.
//!
//! Exit codes: 0 success (SAT, or a complete frontier), 1 UNSAT, 2 error,
//! 3 time budget exhausted (the partial result is still printed).

use std::ffi::OsString;
use std::fmt::Display;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::automata::{decomposition_from_json, decomposition_to_dot, dfa_from_json, Decomposition, DecompositionDoc};
use crate::encoding::{encode, EncodeOptions};
use crate::pareto::{search_frontier, solve_tuple, Frontier, SearchOptions, SizeTuple, StartTuple, TupleOutcome};
use crate::sample::{Apta, LabeledSample};
use crate::satgate::Backend;
use crate::sizing::{decomposition_dl, dfa_dl};
use crate::taskgen::{generate_sample, run_bench, BenchConfig, GenerateOptions, PartialOrderTask};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNSAT: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_TIMEOUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "dfa-decomp",
    version,
    about = "Identify DFA decompositions from labeled examples"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find one decomposition, for given sizes or the first frontier tuple.
    Identify(IdentifyArgs),
    /// Enumerate the Pareto frontier of size tuples.
    Frontier(FrontierArgs),
    /// Run the scaling benchmark and write CSV.
    Bench(BenchArgs),
    /// Description length of a DFA or decomposition file.
    Score(ScoreArgs),
    /// Write the CNF encoding as DIMACS, or the sample itself.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Sample file (JSON or Abbadingo), or `-` for stdin.
    #[arg(required_unless_present = "toy")]
    pub input: Option<PathBuf>,
    /// Use a generated sample of the two-pair ordering task with this many
    /// examples instead of a file.
    #[arg(long, value_name = "COUNT", conflicts_with = "input")]
    pub toy: Option<usize>,
    /// Seed for generated samples.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Number of DFAs in the decomposition (default 1, or the length of
    /// `--sizes`).
    #[arg(long)]
    pub n: Option<usize>,
    /// Disable the symmetry-breaking clauses.
    #[arg(long)]
    pub no_symmetry: bool,
    /// Budget per SAT call in milliseconds.
    #[arg(long, value_name = "MS")]
    pub timeout_ms: Option<u64>,
    /// Budget for the whole search in milliseconds.
    #[arg(long, value_name = "MS")]
    pub global_timeout_ms: Option<u64>,
    /// Largest per-DFA size the search may reach (default: APTA size + 1).
    #[arg(long)]
    pub size_cap: Option<usize>,
    #[arg(long, value_enum)]
    pub start: Option<StartArg>,
    /// `internal`, `dimacs:<path>`, or `dimacs` to use $DFA_DECOMP_SOLVER.
    #[arg(long)]
    pub backend: Option<String>,
    /// Worker threads for solving tuples of one BFS layer.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// TOML file with search options; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StartArg {
    Ones,
    Twos,
}

#[derive(Debug, Args)]
pub struct IdentifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Comma-separated size tuple, e.g. `3,3`.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long)]
    pub json: bool,
    /// Directory for `dfa_<k>.dot` files.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FrontierArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long)]
    pub json: bool,
    /// Directory for DOT files, one subdirectory per frontier tuple.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Q1,
    Q2,
    /// The full grid with 10 seeds and 10 minute budgets.
    Full,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, conflicts_with = "config")]
    pub preset: Option<Preset>,
    /// TOML benchmark configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Run only this seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override the per-search budget.
    #[arg(long, value_name = "MS")]
    pub timeout_ms: Option<u64>,
    /// Cells solved concurrently.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Directory for `bench.csv` and `summary.csv`; rows go to stdout otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Decomposition or DFA JSON file, or `-` for stdin.
    pub input: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Dimacs,
    Json,
    Abbadingo,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = ExportFormat::Dimacs)]
    pub format: ExportFormat,
    /// Size tuple to encode (DIMACS only).
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long)]
    pub no_symmetry: bool,
    /// Output file; stdout otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Search options as read from a TOML file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub n: Option<usize>,
    pub symmetry_breaking: Option<bool>,
    pub start: Option<StartTuple>,
    pub timeout_ms: Option<u64>,
    pub global_timeout_ms: Option<u64>,
    pub size_cap: Option<usize>,
    pub jobs: Option<usize>,
    pub backend: Option<String>,
}

/// A failure tagged with the stage it happened in.
#[derive(Debug)]
pub struct CliError {
    pub stage: &'static str,
    pub message: String,
}

impl CliError {
    fn at(stage: &'static str) -> impl FnOnce(&dyn Display) -> CliError {
        move |e| CliError {
            stage,
            message: e.to_string(),
        }
    }
}

trait Stage<T> {
    fn stage(self, stage: &'static str) -> Result<T, CliError>;
}

impl<T, E: Display> Stage<T> for Result<T, E> {
    fn stage(self, stage: &'static str) -> Result<T, CliError> {
        self.map_err(|e| CliError::at(stage)(&e))
    }
}

/// Entry point for the binary: parses `std::env::args` and writes to the
/// process streams.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command line with explicit arguments and streams.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version also arrive here
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_ERROR;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let result = match cli.command {
        Command::Identify(a) => identify(a, out),
        Command::Frontier(a) => frontier(a, out),
        Command::Bench(a) => bench(a, out),
        Command::Score(a) => score(a, out),
        Command::Export(a) => export(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error [{}]: {}", e.stage, e.message);
            EXIT_ERROR
        }
    }
}

fn read_input(path: &Path) -> io::Result<String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        fs::read_to_string(path)
    }
}

/// Parses sample text, choosing JSON when the first non-blank character is
/// `{` and the Abbadingo format otherwise.
pub fn parse_sample(text: &str) -> Result<LabeledSample, crate::error::SampleError> {
    if text.trim_start().starts_with('{') {
        LabeledSample::from_json(text)
    } else {
        LabeledSample::from_abbadingo(text)
    }
}

fn load_sample(args: &InputArgs) -> Result<LabeledSample, CliError> {
    if let Some(count) = args.toy {
        return generate_sample(&PartialOrderTask::toy(), count, args.seed, &GenerateOptions::default())
            .stage("generating sample");
    }
    let path = args.input.as_ref().expect("clap requires input or --toy");
    let text = read_input(path).stage("reading sample")?;
    parse_sample(&text).stage("parsing sample")
}

fn search_options(args: &SearchArgs) -> Result<(usize, SearchOptions), CliError> {
    let config: SearchConfig = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).stage("reading config")?;
            toml::from_str(&text).stage("parsing config")?
        }
        None => SearchConfig::default(),
    };
    let backend_spec = args.backend.clone().or(config.backend);
    let backend = match backend_spec {
        Some(spec) => spec.parse::<Backend>().stage("configuring backend")?,
        None => Backend::Internal,
    };
    let start = match args.start {
        Some(StartArg::Ones) => StartTuple::Ones,
        Some(StartArg::Twos) => StartTuple::Twos,
        None => config.start.unwrap_or_default(),
    };
    let n = args.n.or(config.n).unwrap_or(1);
    let jobs = args.jobs.or(config.jobs).unwrap_or(1);
    if n == 0 || jobs == 0 {
        return Err(CliError {
            stage: "validating arguments",
            message: "--n and --jobs must be positive".into(),
        });
    }
    let opts = SearchOptions {
        symmetry_breaking: !args.no_symmetry && config.symmetry_breaking.unwrap_or(true),
        start,
        call_timeout: args.timeout_ms.or(config.timeout_ms).map(Duration::from_millis),
        global_timeout: args
            .global_timeout_ms
            .or(config.global_timeout_ms)
            .map(Duration::from_millis),
        size_cap: args.size_cap.or(config.size_cap),
        jobs,
        backend,
    };
    Ok((n, opts))
}

fn write_dot(dir: &Path, decomp: &Decomposition) -> Result<(), CliError> {
    fs::create_dir_all(dir).stage("writing output")?;
    for (k, dot) in decomposition_to_dot(decomp).iter().enumerate() {
        fs::write(dir.join(format!("dfa_{k}.dot")), dot).stage("writing output")?;
    }
    Ok(())
}

fn print_decomposition(out: &mut dyn Write, decomp: &Decomposition) -> io::Result<()> {
    for (k, dfa) in decomp.dfas().iter().enumerate() {
        writeln!(out, "DFA {k} ({} states)", dfa.num_states())?;
        write!(out, "{dfa}")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct IdentifyReport {
    version: &'static str,
    status: &'static str,
    sizes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decomposition: Option<DecompositionDoc>,
}

fn identify(args: IdentifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (n, opts) = search_options(&args.search)?;
    let sizes = match &args.sizes {
        Some(sizes) => {
            let tuple = SizeTuple::new(sizes.clone()).stage("validating arguments")?;
            if (args.search.n.is_some() || n != 1) && tuple.len() != n {
                return Err(CliError {
                    stage: "validating arguments",
                    message: format!("--sizes has {} entries but --n is {n}", tuple.len()),
                });
            }
            Some(tuple)
        }
        None => None,
    };
    let sample = load_sample(&args.input)?;

    let (status, tuple, witness) = match sizes {
        Some(tuple) => {
            let apta = Apta::build(&sample);
            match solve_tuple(&apta, &tuple, opts.symmetry_breaking, &opts.backend, opts.call_timeout)
                .stage("solving")?
            {
                TupleOutcome::Sat(d) => ("sat", Some(tuple), Some(d)),
                TupleOutcome::Unsat => ("unsat", Some(tuple), None),
                TupleOutcome::Timeout => ("timeout", Some(tuple), None),
            }
        }
        None => {
            let frontier = search_frontier(&sample, n, &opts).stage("search")?;
            match frontier.entries.first() {
                Some(e) => ("sat", Some(e.sizes.clone()), Some(e.witness.clone())),
                None => ("timeout", None, None),
            }
        }
    };

    if let (Some(dir), Some(d)) = (&args.out, &witness) {
        write_dot(dir, d)?;
    }
    if args.json {
        let report = IdentifyReport {
            version: crate::automata::FORMAT_VERSION,
            status,
            sizes: tuple.as_ref().map(|t| t.as_slice().to_vec()),
            decomposition: witness.as_ref().map(DecompositionDoc::from_decomposition),
        };
        let text = serde_json::to_string_pretty(&report).stage("writing output")?;
        writeln!(out, "{text}").stage("writing output")?;
    } else {
        let shown = tuple.map(|t| t.to_string()).unwrap_or_default();
        writeln!(out, "{} {shown}", status.to_uppercase()).stage("writing output")?;
        if let Some(d) = &witness {
            print_decomposition(out, d).stage("writing output")?;
        }
    }
    Ok(match status {
        "sat" => EXIT_OK,
        "unsat" => EXIT_UNSAT,
        _ => EXIT_TIMEOUT,
    })
}

/// Frontier report as pretty JSON, newline-terminated.
pub fn frontier_json(frontier: &Frontier) -> String {
    let mut text = serde_json::to_string_pretty(&frontier.report()).expect("reports always serialize");
    text.push('\n');
    text
}

fn frontier(args: FrontierArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (n, opts) = search_options(&args.search)?;
    let sample = load_sample(&args.input)?;
    let frontier = search_frontier(&sample, n, &opts).stage("search")?;
    if let Some(dir) = &args.out {
        for e in &frontier.entries {
            let name = e
                .sizes
                .as_slice()
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join("_");
            write_dot(&dir.join(format!("sizes_{name}")), &e.witness)?;
        }
    }
    if args.json {
        write!(out, "{}", frontier_json(&frontier)).stage("writing output")?;
    } else {
        let w = &mut *out;
        (|| -> io::Result<()> {
            writeln!(w, "frontier for n = {n}:")?;
            for e in &frontier.entries {
                writeln!(w, "{}", e.sizes)?;
                print_decomposition(w, &e.witness)?;
            }
            if let Some(reason) = frontier.report().incomplete_reason {
                writeln!(w, "incomplete: {reason}")?;
            }
            Ok(())
        })()
        .stage("writing output")?;
    }
    Ok(if frontier.is_complete() { EXIT_OK } else { EXIT_TIMEOUT })
}

fn bench(args: BenchArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut configs = match (&args.config, args.preset) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).stage("reading config")?;
            vec![toml::from_str::<BenchConfig>(&text).stage("parsing config")?]
        }
        (None, Some(Preset::Q2)) => vec![BenchConfig::q2_desk()],
        (None, Some(Preset::Full)) => BenchConfig::full_grid(),
        (None, Some(Preset::Q1) | None) => vec![BenchConfig::q1_desk()],
    };
    for c in &mut configs {
        if let Some(seed) = args.seed {
            c.seeds = vec![seed];
        }
        if let Some(ms) = args.timeout_ms {
            c.timeout_ms = ms;
        }
        if let Some(jobs) = args.jobs {
            c.jobs = jobs;
        }
    }
    let mut report = crate::taskgen::BenchReport::default();
    for c in &configs {
        report.rows.extend(run_bench(c).stage("bench")?.rows);
    }
    match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir).stage("writing output")?;
            let rows = fs::File::create(dir.join("bench.csv")).stage("writing output")?;
            report.write_csv(rows).stage("writing output")?;
            let summary = fs::File::create(dir.join("summary.csv")).stage("writing output")?;
            report.write_summary_csv(summary).stage("writing output")?;
        }
        None => report.write_csv(&mut *out).stage("writing output")?,
    }
    Ok(if report.timeouts() == 0 { EXIT_OK } else { EXIT_TIMEOUT })
}

#[derive(Serialize)]
struct ScoreReport {
    sizes: Vec<usize>,
    nats: f64,
    bits: f64,
}

fn score(args: ScoreArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let text = read_input(&args.input).stage("reading automaton")?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(crate::error::AutomatonError::from)
        .stage("parsing automaton")?;
    let (sizes, dl) = if value.get("dfas").is_some() {
        let d = decomposition_from_json(&text).stage("parsing automaton")?;
        (d.sizes(), decomposition_dl(&d))
    } else {
        let d = dfa_from_json(&text).stage("parsing automaton")?;
        (vec![d.num_states()], dfa_dl(&d))
    };
    if args.json {
        let report = ScoreReport {
            sizes,
            nats: dl.nats(),
            bits: dl.bits(),
        };
        let text = serde_json::to_string_pretty(&report).stage("writing output")?;
        writeln!(out, "{text}").stage("writing output")?;
    } else {
        writeln!(out, "nats {:.6}\nbits {:.6}", dl.nats(), dl.bits()).stage("writing output")?;
    }
    Ok(EXIT_OK)
}

fn export(args: ExportArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let sample = load_sample(&args.input)?;
    let text = match args.format {
        ExportFormat::Json => {
            let mut t = sample.to_json();
            t.push('\n');
            t
        }
        ExportFormat::Abbadingo => sample.to_abbadingo(),
        ExportFormat::Dimacs => {
            let sizes = args.sizes.clone().ok_or_else(|| CliError {
                stage: "validating arguments",
                message: "DIMACS export needs --sizes".into(),
            })?;
            let tuple = SizeTuple::new(sizes).stage("validating arguments")?;
            let apta = Apta::build(&sample);
            let encoding = encode(
                &apta,
                &tuple,
                &EncodeOptions {
                    symmetry_breaking: !args.no_symmetry,
                },
            );
            encoding.to_dimacs()
        }
    };
    match &args.out {
        Some(path) => fs::write(path, text).stage("writing output")?,
        None => out.write_all(text.as_bytes()).stage("writing output")?,
    }
    Ok(EXIT_OK)
}
