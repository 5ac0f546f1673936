//! Command-line interface.
//!
//! Exit codes: 0 on success, 1 when a run fails (unreadable input, strict
//! mode rejection, empty dataset), 2 for command-line usage errors. All
//! file outputs are written atomically: content goes to a temporary file
//! in the target directory first and is renamed into place, so a crashed
//! run never leaves a half-written report behind.

use std::ffi::OsString;
use std::io::{Cursor, Read, Write};
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::{fs, process};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::core::{LabelSpace, TrustParams};
use crate::density::{
    ConditionalDensityPair, DensityConfig, DEFAULT_BINS, DEFAULT_GRID_SIZE,
};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::ingest::{
    load_label_map, parse_predictions, write_predictions, ErrorPolicy, IngestConfig,
    IngestReport, DEFAULT_SUM_TOLERANCE,
};
use crate::metrics::ClassWeighting;
use crate::pipeline::{analyze, Analysis};
use crate::render::density_plot::render_conditional_densities;
use crate::render::heatmap::{render_trust_matrix, HeatmapOptions};
use crate::report::{
    build_report, matrix_support_csv, matrix_values_csv, sha256_hex, spectrum_csv, summary_csv,
    to_json, ClassDensitySection, IngestCounts, Provenance, SpectrumRow, SCHEMA_VERSION,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Classes beyond which figures are skipped; a heatmap with tens of
/// thousands of cells helps nobody and bloats the output directory.
const FIGURE_CLASS_LIMIT: usize = 128;

#[derive(Parser, Debug)]
#[command(
    name = "trustlens",
    version,
    about = "Trust quantification for classifier prediction dumps"
)]
struct Cli {
    /// Worker threads for scoring; TRUSTLENS_THREADS is the fallback
    #[arg(long, global = true, value_name = "N")]
    threads: Option<NonZeroUsize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Score each prediction and emit per-record trust as JSON Lines
    Score(ScoreArgs),
    /// Compute the actor-by-oracle trust matrix
    Matrix(MatrixArgs),
    /// Compute the per-class trust spectrum and NetTrustScore
    Spectrum(SpectrumArgs),
    /// Estimate conditional trust densities per oracle class
    Densities(DensitiesArgs),
    /// Produce the full report bundle: JSON, CSV tables, and figures
    Report(ReportArgs),
    /// Generate synthetic datasets (for tests and demos)
    #[command(hide = true)]
    Fixtures(FixturesArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Prediction dump in JSON Lines form; use - for standard input
    #[arg(long, value_name = "FILE")]
    input: PathBuf,

    /// Label map file: one class name per line, order defines the index
    #[arg(long, value_name = "FILE")]
    labels: PathBuf,

    /// Exponent on the confidence of correct answers
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,

    /// Exponent on the doubt of incorrect answers
    #[arg(long, default_value_t = 1.0)]
    beta: f64,

    /// Accepted deviation of a confidence sum from 1
    #[arg(long, default_value_t = DEFAULT_SUM_TOLERANCE, value_name = "EPS")]
    sum_tolerance: f64,

    /// Keep in-tolerance confidence sums as-is instead of rescaling
    #[arg(long)]
    no_renormalize: bool,

    /// Reject the run on the first bad line; implies --no-renormalize
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Debug)]
struct ScoreArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Output file (default: standard output)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MatrixArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Write the matrix as JSON (default: standard output)
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,

    /// Write cell means as CSV
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,

    /// Write support counts as CSV
    #[arg(long, value_name = "FILE")]
    support_csv: Option<PathBuf>,

    /// Render the heatmap as SVG
    #[arg(long, value_name = "FILE")]
    svg: Option<PathBuf>,

    /// Title drawn above the heatmap
    #[arg(long)]
    title: Option<String>,

    /// Skip per-cell value and support annotations in the heatmap
    #[arg(long)]
    no_annotate: bool,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Class weighting for the NetTrustScore
    #[arg(long, value_enum, default_value_t = WeightingArg::Empirical)]
    weighting: WeightingArg,

    /// Write the spectrum as JSON (default: standard output)
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,

    /// Write the spectrum as CSV
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DensityEstimatorArgs {
    /// Density estimator
    #[arg(long, value_enum, default_value_t = EstimatorArg::Histogram)]
    estimator: EstimatorArg,

    /// Histogram bin count
    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,

    /// Kernel bandwidth (default: rule-of-thumb from the data)
    #[arg(long, value_name = "H")]
    bandwidth: Option<f64>,

    /// Kernel evaluation grid size
    #[arg(long, default_value_t = DEFAULT_GRID_SIZE)]
    grid_size: usize,
}

#[derive(Args, Debug)]
struct DensitiesArgs {
    #[command(flatten)]
    input: InputArgs,

    #[command(flatten)]
    estimator: DensityEstimatorArgs,

    /// Restrict output to one oracle class
    #[arg(long, value_name = "LABEL")]
    class: Option<String>,

    /// Write the densities as JSON (default: standard output)
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,

    /// Write one conditional density figure per class into this directory
    #[arg(long, value_name = "DIR")]
    svg_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[command(flatten)]
    input: InputArgs,

    #[command(flatten)]
    estimator: DensityEstimatorArgs,

    /// Class weighting for the NetTrustScore
    #[arg(long, value_enum, default_value_t = WeightingArg::Empirical)]
    weighting: WeightingArg,

    /// Directory receiving report.json, CSV tables, and figures
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,

    /// Skip SVG figures
    #[arg(long)]
    no_figures: bool,

    /// Title for the heatmap figure
    #[arg(long)]
    title: Option<String>,
}

#[derive(Args, Debug)]
struct FixturesArgs {
    #[command(subcommand)]
    command: FixturesCommand,
}

#[derive(Subcommand, Debug)]
enum FixturesCommand {
    /// Write a synthetic prediction dump and its label map
    Generate(GenerateArgs),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: FixtureKind,

    #[arg(long, default_value_t = 7)]
    seed: u64,

    /// Record count (random kind only)
    #[arg(long, default_value_t = 1000)]
    count: usize,

    /// Class count (random kind only)
    #[arg(long, default_value_t = 10)]
    classes: usize,

    /// Prediction dump output path
    #[arg(long, value_name = "FILE")]
    out: PathBuf,

    /// Label map output path
    #[arg(long, value_name = "FILE")]
    labels_out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FixtureKind {
    CalibratedA,
    CalibratedB,
    Overconfident,
    Bimodal,
    Golden,
    Random,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum WeightingArg {
    Empirical,
    Uniform,
}

impl From<WeightingArg> for ClassWeighting {
    fn from(w: WeightingArg) -> Self {
        match w {
            WeightingArg::Empirical => ClassWeighting::Empirical,
            WeightingArg::Uniform => ClassWeighting::Uniform,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum EstimatorArg {
    Histogram,
    Kde,
}

impl DensityEstimatorArgs {
    fn config(&self) -> DensityConfig {
        match self.estimator {
            EstimatorArg::Histogram => DensityConfig::Histogram { bins: self.bins },
            EstimatorArg::Kde => DensityConfig::Kernel {
                bandwidth: self.bandwidth,
                grid_size: self.grid_size,
            },
        }
    }
}

/// Parses arguments and runs the selected command, returning the process
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = err.print();
            return code;
        }
    };
    if let Err(err) = configure_threads(cli.threads) {
        eprintln!("trustlens: {err}");
        return EXIT_ERROR;
    }
    let outcome = match cli.command {
        Command::Score(args) => cmd_score(args),
        Command::Matrix(args) => cmd_matrix(args),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Densities(args) => cmd_densities(args),
        Command::Report(args) => cmd_report(args),
        Command::Fixtures(args) => cmd_fixtures(args),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(err) => {
            eprintln!("trustlens: {err}");
            EXIT_ERROR
        }
    }
}

fn configure_threads(flag: Option<NonZeroUsize>) -> Result<()> {
    let requested = match flag {
        Some(n) => Some(n.get()),
        None => match std::env::var("TRUSTLENS_THREADS") {
            Ok(value) => {
                let n: usize = value.trim().parse().map_err(|_| {
                    Error::Config(format!(
                        "TRUSTLENS_THREADS must be a positive integer, got {value:?}"
                    ))
                })?;
                if n == 0 {
                    return Err(Error::Config(
                        "TRUSTLENS_THREADS must be a positive integer, got \"0\"".into(),
                    ));
                }
                Some(n)
            }
            Err(std::env::VarError::NotPresent) => None,
            Err(std::env::VarError::NotUnicode(_)) => {
                return Err(Error::Config("TRUSTLENS_THREADS is not valid unicode".into()))
            }
        },
    };
    if let Some(n) = requested {
        // A second initialization (tests, repeated calls) keeps the first
        // pool; that only affects parallelism, never results.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

struct Loaded {
    labels: LabelSpace,
    analysis: Analysis,
    ingest: IngestReport,
    digest: String,
}

fn load_and_analyze(input: &InputArgs) -> Result<Loaded> {
    let params = TrustParams::new(input.alpha, input.beta)?;
    let labels = {
        let file = fs::File::open(&input.labels)
            .map_err(|e| Error::io(input.labels.display().to_string(), e))?;
        load_label_map(std::io::BufReader::new(file))?
    };
    let bytes = read_input_bytes(&input.input)?;
    let digest = sha256_hex(&bytes);
    let config = IngestConfig {
        sum_tolerance: input.sum_tolerance,
        renormalize: !(input.no_renormalize || input.strict),
        on_error: if input.strict {
            ErrorPolicy::Abort
        } else {
            ErrorPolicy::Skip
        },
    };
    let (records, ingest) = parse_predictions(Cursor::new(bytes.as_slice()), &labels, &config)?;
    print_rejections(&ingest);
    if records.is_empty() {
        return Err(Error::invalid("no records were accepted from the input"));
    }
    let analysis = analyze(records, &labels, &params)?;
    Ok(Loaded {
        labels,
        analysis,
        ingest,
        digest,
    })
}

fn read_input_bytes(path: &Path) -> Result<Vec<u8>> {
    let mut bytes = Vec::new();
    if path == Path::new("-") {
        std::io::stdin()
            .read_to_end(&mut bytes)
            .map_err(|e| Error::io("<stdin>", e))?;
    } else {
        fs::File::open(path)
            .and_then(|mut f| f.read_to_end(&mut bytes))
            .map_err(|e| Error::io(path.display().to_string(), e))?;
    }
    Ok(bytes)
}

fn print_rejections(report: &IngestReport) {
    if report.rejections.is_empty() {
        return;
    }
    eprintln!(
        "trustlens: skipped {} of {} lines",
        report.rejections.len(),
        report.accepted as usize + report.rejections.len()
    );
    for r in report.rejections.iter().take(5) {
        eprintln!("  line {}: {}: {}", r.line, r.reason, r.message);
    }
    if report.rejections.len() > 5 {
        eprintln!("  ... and {} more", report.rejections.len() - 5);
    }
}

/// Writes through a temporary file in the same directory, then renames.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::invalid(format!("{} is not a file path", path.display())))?;
    let tmp = parent.join(format!(
        ".{}.tmp{}",
        name.to_string_lossy(),
        process::id()
    ));
    fs::write(&tmp, contents).map_err(|e| Error::io(tmp.display().to_string(), e))?;
    if let Err(e) = fs::rename(&tmp, path) {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path.display().to_string(), e));
    }
    Ok(())
}

fn emit(out: &Option<PathBuf>, contents: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, contents.as_bytes()),
        None => std::io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn cmd_score(args: ScoreArgs) -> Result<()> {
    #[derive(serde::Serialize)]
    struct ScoreLine<'a> {
        id: &'a str,
        trust: f64,
        correct: bool,
        actor_answer: &'a str,
        oracle_answer: &'a str,
    }
    let loaded = load_and_analyze(&args.input)?;
    let mut out = String::new();
    for s in &loaded.analysis.scored {
        let line = ScoreLine {
            id: s.record.id(),
            trust: s.trust,
            correct: s.correct,
            actor_answer: loaded.labels.name(s.actor_answer()).unwrap_or("?"),
            oracle_answer: loaded.labels.name(s.oracle_answer()).unwrap_or("?"),
        };
        out.push_str(
            &serde_json::to_string(&line)
                .map_err(|e| Error::invalid(format!("serialize score line: {e}")))?,
        );
        out.push('\n');
    }
    emit(&args.out, &out)
}

fn matrix_grids(loaded: &Loaded) -> (Vec<Vec<Option<f64>>>, Vec<Vec<u64>>) {
    let k = loaded.labels.count();
    let matrix = &loaded.analysis.matrix;
    let values = (0..k)
        .map(|a| (0..k).map(|o| matrix.value(a, o)).collect())
        .collect();
    let support = (0..k)
        .map(|a| (0..k).map(|o| matrix.support(a, o)).collect())
        .collect();
    (values, support)
}

fn cmd_matrix(args: MatrixArgs) -> Result<()> {
    #[derive(serde::Serialize)]
    struct MatrixDoc {
        schema_version: u32,
        labels: Vec<String>,
        alpha: f64,
        beta: f64,
        record_count: u64,
        values: Vec<Vec<Option<f64>>>,
        support: Vec<Vec<u64>>,
    }
    let loaded = load_and_analyze(&args.input)?;
    let (values, support) = matrix_grids(&loaded);
    let doc = MatrixDoc {
        schema_version: SCHEMA_VERSION,
        labels: loaded.labels.names().to_vec(),
        alpha: args.input.alpha,
        beta: args.input.beta,
        record_count: loaded.analysis.summary.record_count,
        values,
        support,
    };
    let json = serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::invalid(format!("serialize matrix: {e}")))?;

    if let Some(path) = &args.csv {
        write_atomic(path, matrix_values_csv(&loaded.analysis.matrix).as_bytes())?;
    }
    if let Some(path) = &args.support_csv {
        write_atomic(path, matrix_support_csv(&loaded.analysis.matrix).as_bytes())?;
    }
    if let Some(path) = &args.svg {
        let options = HeatmapOptions {
            annotate: !args.no_annotate,
            title: args.title.clone(),
            ..HeatmapOptions::default()
        };
        write_atomic(
            path,
            render_trust_matrix(&loaded.analysis.matrix, &options).as_bytes(),
        )?;
    }
    let to_stdout = args.json.is_none() && args.csv.is_none() && args.support_csv.is_none() && args.svg.is_none();
    if let Some(path) = &args.json {
        write_atomic(path, format!("{json}\n").as_bytes())?;
    } else if to_stdout {
        emit(&None, &format!("{json}\n"))?;
    }
    Ok(())
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<()> {
    #[derive(serde::Serialize)]
    struct SpectrumDoc {
        schema_version: u32,
        weighting: ClassWeighting,
        net_trust_score: f64,
        record_count: u64,
        entries: Vec<SpectrumRow>,
    }
    let loaded = load_and_analyze(&args.input)?;
    let weighting: ClassWeighting = args.weighting.into();
    let net = match weighting {
        ClassWeighting::Empirical => loaded.analysis.summary.net_trust_score,
        ClassWeighting::Uniform => {
            crate::metrics::net_trust_score_weighted(&loaded.analysis.spectrum, weighting)?
        }
    };
    let entries = loaded
        .analysis
        .spectrum
        .entries()
        .iter()
        .enumerate()
        .map(|(i, e)| SpectrumRow {
            label: loaded.labels.name(i).unwrap_or("?").to_owned(),
            trust: e.trust,
            weight: e.weight,
            support: e.support,
        })
        .collect();
    let doc = SpectrumDoc {
        schema_version: SCHEMA_VERSION,
        weighting,
        net_trust_score: net,
        record_count: loaded.analysis.spectrum.record_count(),
        entries,
    };
    let json = serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::invalid(format!("serialize spectrum: {e}")))?;

    if let Some(path) = &args.csv {
        write_atomic(
            path,
            spectrum_csv(&loaded.analysis.spectrum, &loaded.labels).as_bytes(),
        )?;
    }
    if let Some(path) = &args.json {
        write_atomic(path, format!("{json}\n").as_bytes())?;
    } else if args.csv.is_none() {
        emit(&None, &format!("{json}\n"))?;
    }
    Ok(())
}

/// Conditional density pairs for every observed oracle class, in label
/// order. `only` restricts to a single class by name.
fn class_density_pairs(
    loaded: &Loaded,
    config: &DensityConfig,
    only: Option<&str>,
) -> Result<Vec<(String, ConditionalDensityPair)>> {
    if let Some(name) = only {
        if loaded.labels.index_of(name).is_none() {
            return Err(Error::invalid(format!("unknown class {name:?}")));
        }
    }
    let k = loaded.labels.count();
    let mut correct: Vec<Vec<f64>> = vec![Vec::new(); k];
    let mut incorrect: Vec<Vec<f64>> = vec![Vec::new(); k];
    for s in &loaded.analysis.scored {
        let z = s.oracle_answer();
        if s.correct {
            correct[z].push(s.trust);
        } else {
            incorrect[z].push(s.trust);
        }
    }
    let mut pairs = Vec::new();
    for z in 0..k {
        let name = loaded.labels.name(z).unwrap_or("?");
        if let Some(filter) = only {
            if name != filter {
                continue;
            }
        }
        if correct[z].is_empty() && incorrect[z].is_empty() {
            if only.is_some() {
                return Err(Error::invalid(format!(
                    "class {name:?} has no records in this input"
                )));
            }
            continue;
        }
        let pair = crate::density::conditional_densities_from_parts(
            &correct[z],
            &incorrect[z],
            config,
        )?;
        pairs.push((name.to_owned(), pair));
    }
    Ok(pairs)
}

fn density_sections(pairs: &[(String, ConditionalDensityPair)]) -> Vec<ClassDensitySection> {
    pairs
        .iter()
        .map(|(label, pair)| ClassDensitySection {
            label: label.clone(),
            correct: (&pair.correct).into(),
            incorrect: (&pair.incorrect).into(),
            unconditional: (&pair.unconditional).into(),
        })
        .collect()
}

/// Filesystem-safe figure name for a class label, deduplicated by index
/// when two labels collapse to the same text.
fn figure_name(label: &str, used: &mut Vec<String>) -> String {
    let mut base: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect();
    if base.is_empty() {
        base.push('_');
    }
    let mut name = base.clone();
    let mut suffix = 2;
    while used.contains(&name) {
        name = format!("{base}_{suffix}");
        suffix += 1;
    }
    used.push(name.clone());
    name
}

fn cmd_densities(args: DensitiesArgs) -> Result<()> {
    #[derive(serde::Serialize)]
    struct DensitiesDoc {
        schema_version: u32,
        classes: Vec<ClassDensitySection>,
    }
    let loaded = load_and_analyze(&args.input)?;
    let config = args.estimator.config();
    let pairs = class_density_pairs(&loaded, &config, args.class.as_deref())?;
    if let Some(dir) = &args.svg_dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
        let mut used = Vec::new();
        for (label, pair) in &pairs {
            let name = figure_name(label, &mut used);
            let svg = render_conditional_densities(pair, Some(&format!("trust density: {label}")));
            write_atomic(&dir.join(format!("density_{name}.svg")), svg.as_bytes())?;
        }
    }
    let doc = DensitiesDoc {
        schema_version: SCHEMA_VERSION,
        classes: density_sections(&pairs),
    };
    let json = serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::invalid(format!("serialize densities: {e}")))?;
    if let Some(path) = &args.json {
        write_atomic(path, format!("{json}\n").as_bytes())?;
    } else if args.svg_dir.is_none() {
        emit(&None, &format!("{json}\n"))?;
    }
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<()> {
    let loaded = load_and_analyze(&args.input)?;
    let config = args.estimator.config();
    let weighting: ClassWeighting = args.weighting.into();
    let pairs = class_density_pairs(&loaded, &config, None)?;
    let doc = build_report(
        &loaded.analysis.matrix,
        &loaded.analysis.spectrum,
        &loaded.analysis.summary,
        weighting,
        Some(&pairs),
        Provenance {
            input_digest_sha256: Some(loaded.digest.clone()),
            ingest: Some(IngestCounts::from(&loaded.ingest)),
        },
    )?;

    let dir = &args.out_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    write_atomic(&dir.join("report.json"), to_json(&doc)?.as_bytes())?;
    write_atomic(
        &dir.join("matrix.csv"),
        matrix_values_csv(&loaded.analysis.matrix).as_bytes(),
    )?;
    write_atomic(
        &dir.join("matrix_support.csv"),
        matrix_support_csv(&loaded.analysis.matrix).as_bytes(),
    )?;
    write_atomic(
        &dir.join("spectrum.csv"),
        spectrum_csv(&loaded.analysis.spectrum, &loaded.labels).as_bytes(),
    )?;
    write_atomic(&dir.join("summary.csv"), summary_csv(&doc).as_bytes())?;

    if !args.no_figures {
        if loaded.labels.count() <= FIGURE_CLASS_LIMIT {
            let options = HeatmapOptions {
                title: args.title.clone(),
                ..HeatmapOptions::default()
            };
            write_atomic(
                &dir.join("trust_matrix.svg"),
                render_trust_matrix(&loaded.analysis.matrix, &options).as_bytes(),
            )?;
            let mut used = Vec::new();
            for (label, pair) in &pairs {
                let name = figure_name(label, &mut used);
                let svg =
                    render_conditional_densities(pair, Some(&format!("trust density: {label}")));
                write_atomic(&dir.join(format!("density_{name}.svg")), svg.as_bytes())?;
            }
        } else {
            eprintln!(
                "trustlens: skipping figures for {} classes (limit {FIGURE_CLASS_LIMIT})",
                loaded.labels.count()
            );
        }
    }

    println!(
        "net trust score {:.6} over {} records; report written to {}",
        doc.summary.net_trust_score,
        doc.metadata.record_count,
        dir.display()
    );
    Ok(())
}

fn cmd_fixtures(args: FixturesArgs) -> Result<()> {
    let FixturesCommand::Generate(args) = args.command;
    let dataset = match args.kind {
        FixtureKind::CalibratedA => fixtures::calibrated_dataset_a(args.seed),
        FixtureKind::CalibratedB => fixtures::calibrated_dataset_b(args.seed),
        FixtureKind::Overconfident => fixtures::overconfident_dataset(args.seed),
        FixtureKind::Bimodal => fixtures::bimodal_dataset(args.seed),
        FixtureKind::Golden => fixtures::golden_dataset(args.seed),
        FixtureKind::Random => fixtures::random_dataset(args.seed, args.count, args.classes),
    };
    let mut predictions = Vec::new();
    write_predictions(&dataset.records, &dataset.labels, &mut predictions)?;
    write_atomic(&args.out, &predictions)?;
    let mut label_map = dataset.labels.names().join("\n");
    label_map.push('\n');
    write_atomic(&args.labels_out, label_map.as_bytes())?;
    Ok(())
}
