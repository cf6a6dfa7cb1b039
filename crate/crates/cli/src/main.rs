//! `mdfm`: object-type clustering for JSON-OCEL logs.
//!
//! Exit codes: 0 success, 1 parse error, 2 I/O error, 3 unknown object type,
//! 4 threshold outside `[0, 1]`, 64 usage error.

mod output;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mdfm_core::ocel::{fixture, FIXTURE_NAMES};
use mdfm_core::{
    discover_clusters, discover_dfm, discover_dfm_for_types, export_dot, flatten,
    footprint_matrix, generate_synthetic_log, parse_ocel, tune_clusters, ClusterJson, Dfm,
    DfmError, DfmJson, FlattenError, OcelLog, SyntheticSpec, TuneMode,
};

const PARSE: u8 = 1;
const IO: u8 = 2;
const UNKNOWN_TYPE: u8 = 3;
const THRESHOLD: u8 = 4;
const USAGE: u8 = 64;

#[derive(Debug, Parser)]
#[command(name = "mdfm", version, about = "Cluster object types of an object-centric event log")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON-OCEL log (or a synthetic-log spec for `gen`).
    #[arg(short, long, global = true)]
    input: Option<PathBuf>,

    /// Output file; standard output when omitted.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[arg(long, global = true, allow_hyphen_values = true)]
    threshold: Option<f64>,

    /// Comma-separated object types.
    #[arg(long, global = true, value_delimiter = ',')]
    types: Option<Vec<String>>,

    #[arg(long, global = true, value_enum, default_value_t = Mode::Recursive)]
    tune_mode: Mode,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Built-in log used instead of --input: running-example or toy.
    #[arg(long, global = true)]
    fixture: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print log statistics.
    Info,
    /// Export the directly-follows multigraph.
    Dfm {
        /// Add transition probabilities to DOT edge labels.
        #[arg(long)]
        probabilities: bool,
    },
    /// Object-type similarity matrix.
    Sim,
    /// Cluster object types at --threshold.
    Cluster,
    /// Enumerate every distinct clustering over the threshold grid.
    Tune {
        /// Also write the `threshold,num_clusters` step curve here.
        #[arg(long)]
        curve: Option<PathBuf>,
    },
    /// Flatten the log onto --types.
    Flatten,
    /// Footprint similarity of the per-type flattened logs.
    Footprints,
    /// Generate a synthetic log from --fixture or a spec given with --input.
    Gen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Recursive,
    Literal,
}

impl From<Mode> for TuneMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Recursive => TuneMode::Recursive,
            Mode::Literal => TuneMode::Literal,
        }
    }
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("mdfm: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    if let Some(t) = cli.threshold {
        if !(0.0..=1.0).contains(&t) {
            return Err(Failure::new(THRESHOLD, format!("threshold {t} is outside [0, 1]")));
        }
    }
    match &cli.command {
        Command::Info => info(cli),
        Command::Dfm { probabilities } => dfm(cli, *probabilities),
        Command::Sim => sim(cli),
        Command::Cluster => cluster(cli),
        Command::Tune { curve } => tune(cli, curve.as_deref()),
        Command::Flatten => flatten_cmd(cli),
        Command::Footprints => footprints(cli),
        Command::Gen => gen(cli),
    }
}

fn format_for(cli: &Cli, command: &str, allowed: &[Format]) -> Result<Format, Failure> {
    match cli.format {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => Err(Failure::new(
            USAGE,
            format!("`{command}` does not support --format {}", format_name(f)),
        )),
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Dot => "dot",
        Format::Json => "json",
        Format::Csv => "csv",
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    output::read_input(path).map_err(|e| Failure::new(IO, format!("{}: {e}", path.display())))
}

fn fixture_spec(cli: &Cli, name: &str) -> Result<SyntheticSpec, Failure> {
    fixture(name, cli.seed.unwrap_or(0)).ok_or_else(|| {
        Failure::new(
            USAGE,
            format!("unknown fixture `{name}` (expected one of: {})", FIXTURE_NAMES.join(", ")),
        )
    })
}

fn load_log(cli: &Cli) -> Result<OcelLog, Failure> {
    match (&cli.fixture, &cli.input) {
        (Some(_), Some(_)) => Err(Failure::new(USAGE, "--fixture and --input are mutually exclusive")),
        (Some(name), None) => generate(&fixture_spec(cli, name)?),
        (None, Some(path)) => parse_ocel(&read(path)?).map_err(|e| Failure::new(PARSE, e.to_string())),
        (None, None) => Err(Failure::new(USAGE, "an input log is required (--input or --fixture)")),
    }
}

fn generate(spec: &SyntheticSpec) -> Result<OcelLog, Failure> {
    generate_synthetic_log(spec).map_err(|e| Failure::new(PARSE, e.to_string()))
}

fn emit(cli: &Cli, bytes: &[u8]) -> Outcome {
    write_to(cli.output.as_deref(), bytes)
}

fn write_to(path: Option<&Path>, bytes: &[u8]) -> Outcome {
    output::emit(path, bytes).map_err(|e| {
        let target = path.map_or("standard output".to_string(), |p| p.display().to_string());
        Failure::new(IO, format!("{target}: {e}"))
    })
}

fn json_line(value: &impl serde::Serialize) -> Vec<u8> {
    let mut bytes = serde_json::to_vec(value).expect("plain data serializes");
    bytes.push(b'\n');
    bytes
}

fn json_pretty(value: &impl serde::Serialize) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("plain data serializes");
    bytes.push(b'\n');
    bytes
}

fn csv_bytes<E: std::fmt::Debug>(write: impl FnOnce(&mut Vec<u8>) -> Result<(), E>) -> Vec<u8> {
    let mut buf = Vec::new();
    write(&mut buf).expect("writing CSV to memory");
    buf
}

fn selected_types(cli: &Cli) -> Option<Vec<&str>> {
    cli.types
        .as_ref()
        .map(|ts| ts.iter().map(|t| t.trim()).collect())
}

fn info(cli: &Cli) -> Outcome {
    if let Some(f) = cli.format {
        return Err(Failure::new(USAGE, format!("`info` does not support --format {}", format_name(f))));
    }
    let log = load_log(cli)?;
    let per_type = log.objects_per_type();
    let mut report = format!(
        "events: {}, objects: {}, object types: {}\n",
        log.events().len(),
        log.objects().len(),
        per_type.len()
    );
    for (otype, count) in &per_type {
        let _ = writeln!(report, "  {otype}: {count}");
    }
    let _ = writeln!(report, "activities: {}", log.activities().len());
    match log.time_span() {
        Some((start, end)) => {
            let _ = writeln!(report, "time span: {start} .. {end}");
        }
        None => report.push_str("time span: none\n"),
    }
    emit(cli, report.as_bytes())
}

fn discover(cli: &Cli, log: &OcelLog) -> Result<Dfm, Failure> {
    match selected_types(cli) {
        None => Ok(discover_dfm(log)),
        Some(types) => discover_dfm_for_types(log, &types).map_err(|e| match e {
            DfmError::UnknownObjectType(_) => Failure::new(UNKNOWN_TYPE, e.to_string()),
            other => Failure::new(PARSE, other.to_string()),
        }),
    }
}

fn dfm(cli: &Cli, probabilities: bool) -> Outcome {
    let format = format_for(cli, "dfm", &[Format::Dot, Format::Json])?;
    let log = load_log(cli)?;
    let dfm = discover(cli, &log)?;
    let markov = dfm.to_markov();
    let bytes = match format {
        Format::Json => json_pretty(&DfmJson::from(&markov)),
        _ => export_dot(&dfm, probabilities.then_some(&markov)).into_bytes(),
    };
    emit(cli, &bytes)
}

fn sim(cli: &Cli) -> Outcome {
    let format = format_for(cli, "sim", &[Format::Csv, Format::Json])?;
    let log = load_log(cli)?;
    let markov = discover_dfm(&log).to_markov();
    let matrix = markov.similarity_matrix();
    let bytes = match format {
        Format::Json => json_pretty(matrix),
        _ => matrix.to_csv_string(4).into_bytes(),
    };
    emit(cli, &bytes)
}

fn cluster(cli: &Cli) -> Outcome {
    let format = format_for(cli, "cluster", &[Format::Json, Format::Csv])?;
    let threshold = cli
        .threshold
        .ok_or_else(|| Failure::new(USAGE, "`cluster` requires --threshold"))?;
    let log = load_log(cli)?;
    let markov = discover_dfm(&log).to_markov();
    let clusters = discover_clusters(markov.similarity_matrix(), threshold)
        .map_err(|e| Failure::new(THRESHOLD, e.to_string()))?;
    let bytes = match format {
        Format::Csv => {
            let mut out = String::from("object_type,cluster\n");
            for (i, members) in clusters.iter().enumerate() {
                for m in members {
                    let _ = writeln!(out, "{m},{i}");
                }
            }
            out.into_bytes()
        }
        _ => json_line(&ClusterJson::new(threshold, &clusters)),
    };
    emit(cli, &bytes)
}

fn tune(cli: &Cli, curve: Option<&Path>) -> Outcome {
    let format = format_for(cli, "tune", &[Format::Csv, Format::Json])?;
    let log = load_log(cli)?;
    let markov = discover_dfm(&log).to_markov();
    let result = tune_clusters(markov.similarity_matrix(), cli.tune_mode.into());
    let bytes = match format {
        Format::Json => json_pretty(&result.to_json()),
        _ => csv_bytes(|buf| result.write_csv(buf)),
    };
    if let Some(path) = curve {
        let steps = csv_bytes(|buf| result.write_step_curve(buf));
        write_to(Some(path), &steps)?;
    }
    emit(cli, &bytes)
}

fn flatten_cmd(cli: &Cli) -> Outcome {
    let format = format_for(cli, "flatten", &[Format::Csv, Format::Json])?;
    let types = selected_types(cli).ok_or_else(|| Failure::new(USAGE, "`flatten` requires --types"))?;
    let log = load_log(cli)?;
    let flat = flatten(&log, &types).map_err(|e| match e {
        FlattenError::UnknownObjectType(_) => Failure::new(UNKNOWN_TYPE, e.to_string()),
        other => Failure::new(USAGE, other.to_string()),
    })?;
    let bytes = match format {
        Format::Json => json_pretty(&flat),
        _ => csv_bytes(|buf| flat.write_csv(buf)),
    };
    emit(cli, &bytes)
}

fn footprints(cli: &Cli) -> Outcome {
    let format = format_for(cli, "footprints", &[Format::Csv, Format::Json])?;
    let log = load_log(cli)?;
    let matrix = footprint_matrix(&log);
    let bytes = match format {
        Format::Json => json_pretty(&matrix),
        _ => matrix.to_csv_string(4).into_bytes(),
    };
    emit(cli, &bytes)
}

fn gen(cli: &Cli) -> Outcome {
    format_for(cli, "gen", &[Format::Json])?;
    let spec = match (&cli.fixture, &cli.input) {
        (Some(_), Some(_)) => {
            return Err(Failure::new(USAGE, "--fixture and --input are mutually exclusive"))
        }
        (Some(name), None) => fixture_spec(cli, name)?,
        (None, Some(path)) => {
            let mut spec: SyntheticSpec = serde_json::from_slice(&read(path)?)
                .map_err(|e| Failure::new(PARSE, format!("{}: {e}", path.display())))?;
            if let Some(seed) = cli.seed {
                spec.seed = seed;
            }
            spec
        }
        (None, None) => return Err(Failure::new(USAGE, "`gen` requires --fixture or --input")),
    };
    let log = generate(&spec)?;
    emit(cli, mdfm_core::ocel::write_ocel_to_string(&log).as_bytes())
}
