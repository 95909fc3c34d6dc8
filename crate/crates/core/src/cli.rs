//! Command-line front end. Exit codes: 0 success, 1 invalid input or usage,
//! 2 file system failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{
    aggregate_runs, render_report, run_experiment, runs_csv, Approach, ExperimentConfig,
};
use crate::error::{Error, Result};
use crate::kggen::{generate_kg, KnowledgeGraph, DEFAULT_BASE_IRI};
use crate::mapping::{MappingSet, UserInfo};
use crate::metrics::{evaluate, MetricsReport};
use crate::ontology::Ontology;
use crate::reshape::{baseline_schema, reshape, ReshapeOptions, SchemaBuild};
use crate::schema::KgSchema;
use crate::syndata::{generate_synthetic, write_inputs, SynthConfig, SynthInputs};
use crate::tabular::Dataset;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_IO: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ontoreshape",
    version,
    about = "Generate knowledge graphs from tables through a reshaped ontology"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Derive a compact KG schema from the domain ontology.
    Reshape(SchemaArgs),
    /// Derive the naive schema: mapped classes plus their ontology connectors.
    Baseline(SchemaArgs),
    /// Materialize a schema over the data as N-Triples.
    Generate(GenerateArgs),
    /// Evaluate an N-Triples KG against its schema and data.
    Metrics(MetricsArgs),
    /// Run the attribute sub-sampling experiment for both approaches.
    Bench(BenchArgs),
    /// Write a synthetic ontology, dataset, mapping set and user info.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct DataArgs {
    /// Directory with one `<table>.csv` per table.
    #[arg(short = 'd', long = "data", value_name = "DIR")]
    data: PathBuf,
    /// Mapping CSV (`kind,table,attribute,class`).
    #[arg(short = 'm', long = "mappings", value_name = "FILE")]
    mappings: PathBuf,
    /// Main table; defaults to the table mapped to the main class.
    #[arg(long, value_name = "NAME")]
    main_table: Option<String>,
}

#[derive(Debug, Args)]
struct SchemaArgs {
    /// Ontology in OSF form.
    #[arg(short = 'o', long = "ontology", value_name = "FILE")]
    ontology: PathBuf,
    #[command(flatten)]
    data: DataArgs,
    /// User information JSON.
    #[arg(short = 'u', long = "userinfo", value_name = "FILE")]
    userinfo: Option<PathBuf>,
    /// Main class; overrides the user information.
    #[arg(long, value_name = "CLASS")]
    main_class: Option<String>,
    /// Attach attributes without a mapping to the main class.
    #[arg(long)]
    include_unmapped: bool,
    /// Schema output file; standard output when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Schema file written by `reshape` or `baseline`.
    #[arg(long, value_name = "FILE")]
    schema: PathBuf,
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, value_name = "IRI", default_value = DEFAULT_BASE_IRI)]
    base_iri: String,
    /// N-Triples output file; standard output when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Debug, Args)]
struct MetricsArgs {
    /// N-Triples file written by `generate`.
    #[arg(long, value_name = "FILE")]
    kg: PathBuf,
    #[arg(long, value_name = "FILE")]
    schema: PathBuf,
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, value_name = "IRI", default_value = DEFAULT_BASE_IRI)]
    base_iri: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Report output file; standard output when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SynthShape {
    /// Number of measured attributes.
    #[arg(long = "synth-attrs", value_name = "N", default_value_t = 60)]
    attributes: usize,
    #[arg(long, value_name = "N", default_value_t = 1000)]
    rows: usize,
    /// Hops from the main class to each value class.
    #[arg(long, value_name = "N", default_value_t = 4)]
    chain_depth: usize,
    /// Number of entity classes identified by key attributes.
    #[arg(long, value_name = "N", default_value_t = 2)]
    entity_classes: usize,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Ontology; when omitted the inputs are synthesized.
    #[arg(short = 'o', long = "ontology", value_name = "FILE", requires_all = ["data", "mappings", "userinfo"])]
    ontology: Option<PathBuf>,
    #[arg(short = 'd', long = "data", value_name = "DIR", requires = "ontology")]
    data: Option<PathBuf>,
    #[arg(
        short = 'm',
        long = "mappings",
        value_name = "FILE",
        requires = "ontology"
    )]
    mappings: Option<PathBuf>,
    #[arg(
        short = 'u',
        long = "userinfo",
        value_name = "FILE",
        requires = "ontology"
    )]
    userinfo: Option<PathBuf>,
    #[arg(long, value_name = "NAME")]
    main_table: Option<String>,
    #[command(flatten)]
    synth: SynthShape,
    /// Attribute subset sizes, strictly increasing.
    #[arg(
        long,
        value_name = "N,N,...",
        value_delimiter = ',',
        default_value = "10,20,30,40,50,60"
    )]
    counts: Vec<usize>,
    #[arg(long, value_name = "N", default_value_t = 10)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Approaches to run.
    #[arg(
        long,
        value_name = "NAME,...",
        value_delimiter = ',',
        default_value = "baseline,reshape"
    )]
    approaches: Vec<String>,
    /// Worker threads.
    #[arg(long, value_name = "N", default_value_t = 1)]
    jobs: usize,
    /// Output directory for report.csv, report.txt and runs.csv.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[command(flatten)]
    shape: SynthShape,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
            }
            fs::write(path, content).map_err(|e| Error::io(path, e))
        }
        None => std::io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn warn(message: impl std::fmt::Display) {
    eprintln!("warning: {message}");
}

fn load_data(args: &DataArgs, main_class: &str) -> Result<(Dataset, MappingSet)> {
    let mappings = MappingSet::parse(&read(&args.mappings)?)?;
    let main_table = match &args.main_table {
        Some(t) => t.clone(),
        None => mappings
            .table_for_class(main_class)
            .map(str::to_string)
            .ok_or_else(|| {
                Error::Config(format!(
                    "no single table maps to {main_class}; pass --main-table"
                ))
            })?,
    };
    Ok((Dataset::load(&args.data, &main_table)?, mappings))
}

fn user_info(path: Option<&Path>, main_class: Option<&str>) -> Result<UserInfo> {
    let mut user = match path {
        Some(p) => UserInfo::parse(&read(p)?)?,
        None => UserInfo::new(main_class.ok_or(Error::MissingMainClass)?),
    };
    if let Some(mc) = main_class {
        user.main_class = mc.to_string();
    }
    Ok(user)
}

fn report_build(build: &SchemaBuild) {
    for w in &build.warnings {
        warn(w);
    }
    for a in &build.unmapped {
        warn(format_args!(
            "attribute {a} has no mapping and is left out (see --include-unmapped)"
        ));
    }
}

fn schema_command(args: &SchemaArgs, baseline: bool) -> Result<()> {
    let onto = Ontology::parse(&read(&args.ontology)?)?;
    let user = user_info(args.userinfo.as_deref(), args.main_class.as_deref())?;
    let (data, mappings) = load_data(&args.data, &user.main_class)?;
    let options = ReshapeOptions {
        include_unmapped: args.include_unmapped,
    };
    let build = if baseline {
        baseline_schema(&onto, &data, &mappings, &user.main_class, options)?
    } else {
        reshape(&onto, &data, &mappings, &user, options)?
    };
    report_build(&build);
    emit(args.out.as_deref(), &build.schema.serialize())
}

fn generate_command(args: &GenerateArgs) -> Result<()> {
    let schema = KgSchema::parse(&read(&args.schema)?)?;
    let (data, mappings) = load_data(&args.data, &schema.main_class)?;
    let generated = generate_kg(&schema, &data, &mappings)?;
    for w in &generated.warnings {
        warn(w);
    }
    emit(
        args.out.as_deref(),
        &generated.graph.to_ntriples(&args.base_iri)?,
    )
}

fn metrics_command(args: &MetricsArgs) -> Result<()> {
    let schema = KgSchema::parse(&read(&args.schema)?)?;
    let (data, _) = load_data(&args.data, &schema.main_class)?;
    let text = read(&args.kg)?;
    let graph = KnowledgeGraph::from_ntriples(&text, &args.base_iri, &schema, &data)?;
    let report = evaluate(&graph, &schema, &data, text.len());
    let rendered = match args.format {
        Format::Text => report.to_text(),
        Format::Csv => format!("{}\n{}\n", MetricsReport::CSV_HEADER, report.to_csv_row()),
    };
    emit(args.out.as_deref(), &rendered)
}

fn synth_config(shape: &SynthShape, seed: u64) -> SynthConfig {
    SynthConfig {
        n_attributes: shape.attributes,
        n_rows: shape.rows,
        chain_depth: shape.chain_depth,
        n_entity_classes: shape.entity_classes,
        seed,
    }
}

fn bench_command(args: &BenchArgs) -> Result<()> {
    let inputs = match (&args.ontology, &args.data, &args.mappings, &args.userinfo) {
        (Some(o), Some(d), Some(m), Some(u)) => {
            let user = UserInfo::parse(&read(u)?)?;
            let data_args = DataArgs {
                data: d.clone(),
                mappings: m.clone(),
                main_table: args.main_table.clone(),
            };
            let (data, mappings) = load_data(&data_args, &user.main_class)?;
            SynthInputs {
                ontology: Ontology::parse(&read(o)?)?,
                data,
                mappings,
                user,
            }
        }
        _ => generate_synthetic(&synth_config(&args.synth, args.seed))?,
    };
    let cfg = ExperimentConfig {
        attribute_counts: args.counts.clone(),
        repetitions: args.reps,
        seed: args.seed,
        approaches: args
            .approaches
            .iter()
            .map(|a| a.parse())
            .collect::<Result<_>>()?,
        jobs: args.jobs,
    };
    let runs = run_experiment(
        &cfg,
        &inputs.ontology,
        &inputs.data,
        &inputs.mappings,
        &inputs.user,
    )?;
    let rendered = render_report(&aggregate_runs(&runs)?);
    fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;
    emit(Some(&args.out.join("report.csv")), &rendered.csv)?;
    emit(Some(&args.out.join("report.txt")), &rendered.text)?;
    emit(Some(&args.out.join("runs.csv")), &runs_csv(&runs))?;
    let counts = |a: Approach| runs.iter().filter(|r| r.approach == a).count();
    eprintln!(
        "{} runs ({} baseline, {} reshape) written to {}",
        runs.len(),
        counts(Approach::Baseline),
        counts(Approach::Reshape),
        args.out.display()
    );
    Ok(())
}

fn synth_command(args: &SynthArgs) -> Result<()> {
    let inputs = generate_synthetic(&synth_config(&args.shape, args.seed))?;
    write_inputs(&args.out, &inputs)
}

fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Reshape(a) => schema_command(a, false),
        Command::Baseline(a) => schema_command(a, true),
        Command::Generate(a) => generate_command(a),
        Command::Metrics(a) => metrics_command(a),
        Command::Bench(a) => bench_command(a),
        Command::Synth(a) => synth_command(a),
    }
}

/// Runs one invocation and returns its exit code. `argv[0]` is the program name.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_io() {
                EXIT_IO
            } else {
                EXIT_INVALID
            }
        }
    }
}
