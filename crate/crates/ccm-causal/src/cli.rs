//! The `ccm-causal` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error. Every output file
//! starts with the effective configuration (a `#` comment line in CSVs, a
//! `run` object in JSON) so any run can be repeated from its outputs.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ccm_causal_core::causal::{EfficacyPolarity, JointMode};
use ccm_causal_core::etc::ConditionalMode;
use ccm_causal_core::eval::default_rates;
use ccm_causal_core::sequence::encode_nucleotides;
use ccm_causal_core::simulate::{default_phi_grid, ArConfig, BenchmarkPlan};
use ccm_causal_core::{causal, CausalConfig, Model, SymbolicSequence};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{self, BenchmarkRow};
use crate::formats::{self, Binning, RunHeader};
use crate::pipeline::{self, BootstrapSettings, Reject};
use crate::{with_jobs, Error};

#[derive(Debug, Parser)]
#[command(
    name = "ccm-causal",
    version,
    about = "Causal direction between symbolic sequences by compression complexity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Infer the direction for one pair file and print JSON verdicts.
    Infer(InferArgs),
    /// Run the coupled AR(1) benchmark.
    Simulate(SimulateArgs),
    /// Score a cohort against a reference genome.
    Genome(GenomeArgs),
    /// Compare causal strengths of a cohort against two candidate sources.
    Candidates(CandidatesArgs),
    /// Decision-rate curves, AUROC and AUPRC for a benchmark CSV.
    EvalReport(EvalReportArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum JointArg {
    Shared,
    Matched,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConditionalArg {
    Firing,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolarityArg {
    Greater,
    Lesser,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Comma-separated models: etc-p, etc-e, lz-p.
    #[arg(long = "models", visible_alias = "model", value_delimiter = ',', default_value = "etc-p,etc-e,lz-p")]
    models: Vec<Model>,
    /// Score gaps at or below this are undecided.
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
    /// Joint LZ term: one shared LZ(x·y), or LZ(x·y) / LZ(y·x) per direction.
    #[arg(long, value_enum, default_value = "shared")]
    joint_lz: JointArg,
    /// Conditional ETC counts only rules that fired, or every rule.
    #[arg(long, value_enum, default_value = "firing")]
    conditional: ConditionalArg,
    /// Which efficacy score wins for ETC-E.
    #[arg(long, value_enum, default_value = "greater")]
    efficacy_polarity: PolarityArg,
}

impl ModelArgs {
    fn models(&self) -> Vec<Model> {
        let mut out = Vec::new();
        for &m in &self.models {
            if !out.contains(&m) {
                out.push(m);
            }
        }
        out
    }

    fn config(&self) -> Result<CausalConfig, CliError> {
        if !(self.threshold >= 0.0 && self.threshold.is_finite()) {
            return Err(CliError::Usage("--threshold must be a finite non-negative number".into()));
        }
        Ok(CausalConfig {
            threshold: self.threshold,
            joint: match self.joint_lz {
                JointArg::Shared => JointMode::Shared,
                JointArg::Matched => JointMode::Matched,
            },
            conditional: match self.conditional {
                ConditionalArg::Firing => ConditionalMode::FiringRules,
                ConditionalArg::All => ConditionalMode::AllRules,
            },
            efficacy_polarity: match self.efficacy_polarity {
                PolarityArg::Greater => EfficacyPolarity::GreaterWins,
                PolarityArg::Lesser => EfficacyPolarity::LesserWins,
            },
        })
    }

    fn describe(&self, h: &mut RunHeader) {
        h.push("models", join(self.models().iter().map(|m| m.name())));
        h.push("threshold", self.threshold);
        h.push("joint_lz", value_name(self.joint_lz));
        h.push("conditional", value_name(self.conditional));
        h.push("efficacy_polarity", value_name(self.efficacy_polarity));
    }
}

#[derive(Debug, Args)]
struct InferArgs {
    /// Two lines: x, then y.
    pair: PathBuf,
    /// Treat values as real numbers and bin them into this many symbols.
    #[arg(long, value_name = "BINS", value_parser = clap::value_parser!(u32).range(2..))]
    discretize: Option<u32>,
    #[arg(long, value_enum, default_value = "equiwidth", requires = "discretize")]
    binning: Binning,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Coupling strengths; defaults to 0, 0.05, ..., 0.95.
    #[arg(long, value_delimiter = ',')]
    phis: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
    trials: u32,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    bins: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.8, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, default_value_t = 0.8, allow_negative_numbers = true)]
    b: f64,
    /// Series length.
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Noise intensity.
    #[arg(long, default_value_t = 0.01)]
    noise: f64,
    /// Benchmark CSV.
    #[arg(long)]
    out: PathBuf,
    /// Per-(model, φ) evaluation as JSON.
    #[arg(long)]
    eval_out: Option<PathBuf>,
    /// Per-(model, φ) decision-rate curves as CSV.
    #[arg(long)]
    curve_out: Option<PathBuf>,
    #[command(flatten)]
    eval: EvalArgs,
    #[command(flatten)]
    model: ModelArgs,
    /// Worker threads (0 = one per logical core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Seed for resolving undecided verdicts; defaults to --seed (or 0).
    #[arg(long)]
    coin_seed: Option<u64>,
    /// Decision rates in (0, 1]; defaults to 0.05, 0.10, ..., 1.0.
    #[arg(long, value_delimiter = ',')]
    rates: Option<Vec<f64>>,
}

impl EvalArgs {
    fn rates(&self) -> Result<Vec<f64>, CliError> {
        match &self.rates {
            None => Ok(default_rates()),
            Some(r) if !r.is_empty() && r.iter().all(|&x| x > 0.0 && x <= 1.0) => Ok(r.clone()),
            Some(_) => Err(CliError::Usage("--rates must lie in (0, 1]".into())),
        }
    }
}

#[derive(Debug, Args)]
struct EvalReportArgs {
    /// Benchmark CSV written by `simulate`.
    input: PathBuf,
    /// Report JSON; printed to standard output when omitted.
    #[arg(long)]
    json_out: Option<PathBuf>,
    /// Decision-rate curves as CSV.
    #[arg(long)]
    csv_out: Option<PathBuf>,
    #[command(flatten)]
    eval: EvalArgs,
}

#[derive(Debug, Args)]
struct CohortArgs {
    /// Cohort FASTA.
    #[arg(long)]
    cohort: PathBuf,
    /// CSV with columns sequence_id,group; without it every sequence is in group "all".
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Rejected and skipped cohort records as CSV.
    #[arg(long)]
    rejects_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenomeArgs {
    /// FASTA holding exactly one reference sequence.
    #[arg(long)]
    reference: PathBuf,
    #[command(flatten)]
    cohort: CohortArgs,
    #[arg(long)]
    records_out: PathBuf,
    #[arg(long)]
    proportions_out: PathBuf,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Debug, Args)]
struct CandidatesArgs {
    /// FASTA holding candidate source a.
    #[arg(long)]
    candidate_a: PathBuf,
    /// FASTA holding candidate source b.
    #[arg(long)]
    candidate_b: PathBuf,
    #[command(flatten)]
    cohort: CohortArgs,
    /// Per-sequence strengths against both candidates as CSV.
    #[arg(long)]
    strengths_out: PathBuf,
    /// Trimmed-mean comparison (a − b) per model as JSON.
    #[arg(long)]
    stats_out: PathBuf,
    #[arg(long, default_value_t = 0.2)]
    trim: f64,
    #[arg(long, default_value_t = 5000, value_parser = clap::value_parser!(u32).range(1..))]
    iterations: u32,
    #[arg(long, default_value_t = 0.95)]
    confidence: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(Error),
}

impl<E: Into<Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Data(e.into())
    }
}

/// Parses `args` (program name first), runs the command and maps the outcome
/// to an exit code.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Infer(a) => infer(a),
        Command::Simulate(a) => simulate(a),
        Command::Genome(a) => genome(a),
        Command::Candidates(a) => candidates(a),
        Command::EvalReport(a) => eval_report(a),
    }
}

fn infer(args: InferArgs) -> Result<(), CliError> {
    let cfg = args.model.config()?;
    let text = read_text(&args.pair)?;
    let (x, y) = formats::parse_pair(&text, args.discretize.map(|b| (b, args.binning)))?;
    let verdicts = causal::evaluate_many(&args.model.models(), &x, &y, &cfg)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for v in &verdicts {
        serde_json::to_writer(&mut out, v).map_err(Error::from)?;
        writeln!(out).map_err(|e| Error::io("<stdout>", e))?;
    }
    Ok(())
}

fn simulate(args: SimulateArgs) -> Result<(), CliError> {
    let causal = args.model.config()?;
    let rates = args.eval.rates()?;
    let phis = args.phis.clone().unwrap_or_else(default_phi_grid);
    let template = ArConfig { a: args.a, b: args.b, n: args.n, noise_intensity: args.noise, ..ArConfig::default() };
    let plan = BenchmarkPlan {
        template,
        causal,
        ..BenchmarkPlan::new(phis.clone(), args.trials, args.bins, args.model.models(), args.seed)
    };
    plan.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let coin_seed = args.eval.coin_seed.unwrap_or(args.seed);

    let mut h = RunHeader::new("simulate")
        .with("phis", join(phis.iter()))
        .with("trials", args.trials)
        .with("bins", args.bins)
        .with("seed", args.seed)
        .with("a", args.a)
        .with("b", args.b)
        .with("n", args.n)
        .with("noise", args.noise);
    args.model.describe(&mut h);

    let records = with_jobs(args.jobs, || bench::run_benchmark(&plan))??;
    let rows = bench::benchmark_rows(&records);
    write_file(&args.out, |w| formats::write_csv(w, &h, &rows))?;

    if args.eval_out.is_some() || args.curve_out.is_some() {
        h.push("coin_seed", coin_seed);
        h.push("rates", join(rates.iter()));
        let cells = bench::evaluate_rows(&rows, &rates, coin_seed)?;
        if let Some(p) = &args.eval_out {
            write_file(p, |w| formats::write_json(w, &h, &cells))?;
        }
        if let Some(p) = &args.curve_out {
            write_file(p, |w| formats::write_csv(w, &h, bench::curve_rows(&cells)))?;
        }
    }
    Ok(())
}

fn eval_report(args: EvalReportArgs) -> Result<(), CliError> {
    let rates = args.eval.rates()?;
    let coin_seed = args.eval.coin_seed.unwrap_or(0);
    let bytes = std::fs::read(&args.input).map_err(|e| Error::io(&args.input, e))?;
    let rows: Vec<BenchmarkRow> = formats::read_csv(bytes.as_slice())?;
    if rows.is_empty() {
        return Err(Error::from(ccm_causal_core::Error::Empty).into());
    }
    let mut h = RunHeader::new("eval-report");
    h.push_digest("input_sha256", &bytes);
    h.push("coin_seed", coin_seed);
    h.push("rates", join(rates.iter()));
    let cells = bench::evaluate_rows(&rows, &rates, coin_seed)?;
    match &args.json_out {
        Some(p) => write_file(p, |w| formats::write_json(w, &h, &cells))?,
        None => formats::write_json(io::stdout().lock(), &h, &cells)?,
    }
    if let Some(p) = &args.csv_out {
        write_file(p, |w| formats::write_csv(w, &h, bench::curve_rows(&cells)))?;
    }
    Ok(())
}

fn genome(args: GenomeArgs) -> Result<(), CliError> {
    let cfg = args.model.config()?;
    let models = args.model.models();
    let mut h = RunHeader::new("genome");
    let (ref_id, reference) = read_single_sequence(&args.reference, "reference", &mut h)?;
    let (cohort, mut rejects) = read_cohort(&args.cohort, &mut h)?;
    args.model.describe(&mut h);

    let run =
        with_jobs(args.jobs, || pipeline::run_reference_experiment(&ref_id, &reference, &cohort, &models, &cfg))??;
    rejects.extend(run.skipped.iter().map(|id| skipped(id, "identical to reference")));
    write_file(&args.records_out, |w| formats::write_csv(w, &h, pipeline::record_rows(&run.records)))?;
    write_file(&args.proportions_out, |w| formats::write_csv(w, &h, pipeline::proportions(&run.records)))?;
    finish_rejects(&args.cohort, &h, &rejects)
}

fn candidates(args: CandidatesArgs) -> Result<(), CliError> {
    let cfg = args.model.config()?;
    let models = args.model.models();
    let settings = BootstrapSettings {
        trim: args.trim,
        iterations: args.iterations,
        confidence: args.confidence,
        seed: args.seed,
    };
    if !(0.0..0.5).contains(&settings.trim) || !(settings.confidence > 0.0 && settings.confidence < 1.0) {
        return Err(CliError::Usage("--trim must lie in [0, 0.5) and --confidence in (0, 1)".into()));
    }
    let mut h = RunHeader::new("candidates");
    let (_, a) = read_single_sequence(&args.candidate_a, "candidate_a", &mut h)?;
    let (_, b) = read_single_sequence(&args.candidate_b, "candidate_b", &mut h)?;
    let (cohort, mut rejects) = read_cohort(&args.cohort, &mut h)?;
    args.model.describe(&mut h);
    h.push("trim", settings.trim);
    h.push("iterations", settings.iterations);
    h.push("confidence", settings.confidence);
    h.push("seed", settings.seed);

    let run = with_jobs(args.jobs, || pipeline::run_candidate_experiment(&a, &b, &cohort, &models, &cfg))??;
    rejects.extend(run.skipped.iter().map(|id| skipped(id, "identical to a candidate")));
    let stats = pipeline::compare_candidates(&run.pairs, &settings)?;
    write_file(&args.strengths_out, |w| formats::write_csv(w, &h, &run.pairs))?;
    write_file(&args.stats_out, |w| formats::write_json(w, &h, &stats))?;
    finish_rejects(&args.cohort, &h, &rejects)
}

/// Reads a FASTA file that must hold exactly one unambiguous record and pins
/// its content in the header.
fn read_single_sequence(path: &Path, key: &str, h: &mut RunHeader) -> Result<(String, SymbolicSequence), Error> {
    let text = read_text(path)?;
    let mut records = formats::parse_fasta(&text)?;
    if records.len() != 1 {
        return Err(Error::Format {
            line: 1,
            message: format!("{}: expected exactly one record, found {}", path.display(), records.len()),
        });
    }
    let r = records.remove(0);
    let seq = encode_nucleotides(&r.sequence)
        .map_err(|e| Error::Format { line: 1, message: format!("{} record {:?}: {e}", path.display(), r.id) })?;
    h.push(key, &r.id);
    h.push_digest(&format!("{key}_sha256"), text.as_bytes());
    Ok((r.id, seq))
}

fn read_cohort(args: &CohortArgs, h: &mut RunHeader) -> Result<(Vec<pipeline::CohortMember>, Vec<Reject>), Error> {
    let text = read_text(&args.cohort)?;
    h.push_digest("cohort_sha256", text.as_bytes());
    let records = formats::parse_fasta(&text)?;
    let groups = match &args.manifest {
        Some(p) => {
            let m = read_text(p)?;
            h.push_digest("manifest_sha256", m.as_bytes());
            Some(formats::parse_manifest(&m)?)
        }
        None => None,
    };
    let (members, rejects) = pipeline::encode_cohort(&records, groups.as_ref());
    for r in &rejects {
        log::warn!("rejected {}: {}", r.sequence_id, r.reason);
    }
    Ok((members, rejects))
}

fn skipped(id: &str, reason: &str) -> Reject {
    Reject { sequence_id: id.to_owned(), reason: reason.to_owned() }
}

fn finish_rejects(args: &CohortArgs, h: &RunHeader, rejects: &[Reject]) -> Result<(), CliError> {
    match &args.rejects_out {
        Some(p) => write_file(p, |w| formats::write_csv(w, h, rejects))?,
        None if !rejects.is_empty() => eprintln!("{} cohort record(s) rejected or skipped", rejects.len()),
        None => {}
    }
    Ok(())
}

fn read_text(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> crate::Result<()>) -> Result<(), Error> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w)?;
    w.flush().map_err(|e| Error::io(path, e))
}

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",")
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn model_list_parsing() {
        let cli = Cli::try_parse_from(["ccm-causal", "infer", "p.txt", "--model", "lz-p,ETC-E,lzp"]).unwrap();
        let Command::Infer(a) = cli.command else { panic!() };
        assert_eq!(a.model.models(), [Model::LzPenalty, Model::EtcEfficacy]);
        assert!(Cli::try_parse_from(["ccm-causal", "infer", "p.txt", "--models", "gzip"]).is_err());
        assert!(Cli::try_parse_from(["ccm-causal", "infer", "p.txt", "--binning", "equifrequency"]).is_err());
    }

    #[test]
    fn simulate_defaults_to_standard_grid() {
        let cli = Cli::try_parse_from(["ccm-causal", "simulate", "--out", "b.csv"]).unwrap();
        let Command::Simulate(a) = cli.command else { panic!() };
        assert_eq!(a.phis.unwrap_or_else(default_phi_grid).len(), 20);
        assert_eq!((a.trials, a.bins, a.n, a.a, a.b, a.noise), (1000, 2, 1000, 0.8, 0.8, 0.01));
    }
}
