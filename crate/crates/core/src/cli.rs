//! Command-line front end. Exit codes: 0 success, 1 I/O failure, 2 domain
//! error (invalid input, failed validation, out-of-range query, failed
//! verification).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::index::{build, BuildConfig, CompressedSA, IndexError, SpaceReport, Stride};
use crate::model::{
    generate, infer_from_alignment, parse_matrix, parse_schema, read_alignment, serialize_matrix, serialize_schema,
    GenParams, ModelError, VirtualText,
};
use crate::oracle::{compare_index, full_compare, CompareReport, OracleError};

#[derive(Debug, Parser)]
#[command(
    name = "ssnpsa",
    version,
    about = "Compressed suffix arrays for spaced-SNP databases"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an index from a schema and matrix, or from an alignment.
    Build(BuildArgs),
    /// Print suffix-array values.
    Query(QueryArgs),
    /// Find occurrences of a pattern.
    Locate(LocateArgs),
    /// Print the space breakdown.
    Stats(StatsArgs),
    /// Generate a random schema and matrix.
    Gen(GenArgs),
    /// Compare an index against the brute-force oracle.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    #[arg(long, requires = "matrix", conflicts_with = "align")]
    pub schema: Option<PathBuf>,
    #[arg(long, requires = "schema")]
    pub matrix: Option<PathBuf>,
    /// Row count, needed when the matrix has no sites (k = 0).
    #[arg(long)]
    pub rows: Option<usize>,
    /// Plain or FASTA alignment of equal-length words.
    #[arg(long)]
    pub align: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub input: InstanceArgs,
    #[arg(long)]
    pub out: PathBuf,
    /// Anchor stride: a positive integer or `auto`.
    #[arg(long, default_value = "auto")]
    pub stride: Stride,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("which").required(true).args(["rank", "range"])))]
pub struct QueryArgs {
    pub index: PathBuf,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Inclusive rank range `a:b`.
    #[arg(long)]
    pub range: Option<String>,
}

#[derive(Debug, Args)]
pub struct LocateArgs {
    pub index: PathBuf,
    #[arg(long)]
    pub pattern: String,
    #[arg(long)]
    pub count_only: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    pub index: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub m: usize,
    /// Alphabet characters.
    #[arg(long, default_value = "acgt")]
    pub sigma: String,
    #[arg(long, default_value_t = 2)]
    pub min_gap: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub max_retries: usize,
    /// Writes `<prefix>.schema` and `<prefix>.matrix`.
    #[arg(long)]
    pub out_prefix: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Existing index file; alternatively pass --schema/--matrix or --align.
    #[arg(conflicts_with_all = ["schema", "align"])]
    pub index: Option<PathBuf>,
    #[command(flatten)]
    pub input: InstanceArgs,
    #[arg(long, default_value = "auto")]
    pub stride: Stride,
    /// Random patterns checked against a naive scan.
    #[arg(long, default_value_t = 20)]
    pub patterns: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Io(_) => 1,
            Failure::Domain(_) => 2,
        }
    }
}

impl From<IndexError> for Failure {
    fn from(e: IndexError) -> Self {
        match e {
            IndexError::Io(io) => Failure::Io(io.to_string()),
            IndexError::Invalid(report) => Failure::Domain(format!("instance fails validation\n{report}")),
            other => Failure::Domain(other.to_string()),
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::UniquenessViolation(report) => Failure::Domain(format!("UniquenessViolation\n{report}")),
            ModelError::TooManyAllelesInColumn { .. } => Failure::Domain(format!("TooManyAllelesInColumn: {e}")),
            other => Failure::Domain(other.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Index(i) => i.into(),
            other => Failure::Domain(other.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| io_failure(path, e))
}

fn load_index(path: &Path) -> Result<CompressedSA, Failure> {
    let bytes = fs::read(path).map_err(|e| io_failure(path, e))?;
    Ok(CompressedSA::from_bytes(&bytes)?)
}

fn load_instance(input: &InstanceArgs) -> Result<VirtualText, Failure> {
    let (schema, matrix) = match (&input.schema, &input.matrix, &input.align) {
        (Some(s), Some(m), None) => {
            let schema_text = read_text(s)?;
            let matrix_text = read_text(m)?;
            let schema = parse_schema(&schema_text)?;
            let matrix = parse_matrix(&matrix_text, &schema, input.rows)?;
            (schema, matrix)
        }
        (None, None, Some(a)) => infer_from_alignment(&read_alignment(&read_text(a)?)?)?,
        _ => return Err(Failure::Domain("give either --schema and --matrix, or --align".into())),
    };
    Ok(VirtualText::new(schema, matrix)?)
}

fn out_err(e: std::io::Error) -> Failure {
    Failure::Io(format!("stdout: {e}"))
}

#[derive(Serialize)]
struct Stats {
    n: usize,
    k: usize,
    m: usize,
    g: usize,
    length: usize,
    #[serde(flatten)]
    space: SpaceReport,
}

fn cmd_build(args: &BuildArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let vt = load_instance(&args.input)?;
    let started = Instant::now();
    let csa = build(vt, &BuildConfig::with_stride(args.stride))?;
    let elapsed = started.elapsed();
    let bytes = csa.to_bytes();
    write_file(&args.out, &bytes)?;
    writeln!(
        out,
        "n\t{}\nk\t{}\nm\t{}\ng\t{}\nbytes\t{}",
        csa.n(),
        csa.k(),
        csa.m(),
        csa.stride(),
        bytes.len()
    )
    .map_err(out_err)?;
    writeln!(err, "build_time_ms\t{}", elapsed.as_millis()).map_err(out_err)?;
    Ok(())
}

fn parse_range(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Domain(format!("range must look like a:b, got {s:?}"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a = a.trim().parse().map_err(|_| bad())?;
    let b = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn cmd_query(args: &QueryArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let csa = load_index(&args.index)?;
    let (a, b) = match (args.rank, &args.range) {
        (Some(r), None) => (r, r),
        (None, Some(range)) => parse_range(range)?,
        _ => return Err(Failure::Domain("give exactly one of --rank or --range".into())),
    };
    // fail before printing anything
    for r in [a, b] {
        csa.sa_access(r)?;
    }
    for rank in a..=b {
        writeln!(out, "{rank}\t{}", csa.sa_access(rank)?).map_err(out_err)?;
    }
    Ok(())
}

fn cmd_locate(args: &LocateArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let csa = load_index(&args.index)?;
    let pattern = args.pattern.as_bytes();
    if args.count_only {
        writeln!(out, "{}", csa.count(pattern)?).map_err(out_err)?;
    } else {
        for p in csa.locate(pattern)? {
            writeln!(out, "{p}").map_err(out_err)?;
        }
    }
    Ok(())
}

fn cmd_stats(args: &StatsArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let csa = load_index(&args.index)?;
    let stats = Stats {
        n: csa.n(),
        k: csa.k(),
        m: csa.m(),
        g: csa.stride(),
        length: csa.len(),
        space: csa.space_report(),
    };
    if args.json {
        let text = serde_json::to_string_pretty(&stats).expect("stats serialize");
        writeln!(out, "{text}").map_err(out_err)?;
    } else {
        let value = serde_json::to_value(&stats).expect("stats serialize");
        for (key, v) in value.as_object().unwrap() {
            writeln!(out, "{key}\t{v}").map_err(out_err)?;
        }
    }
    Ok(())
}

fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let params = GenParams {
        n: args.n,
        k: args.k,
        m: args.m,
        alphabet: args.sigma.as_bytes().to_vec(),
        min_gap: args.min_gap,
        seed: args.seed,
        max_retries: args.max_retries,
    };
    let (schema, matrix) = generate(&params)?;
    let prefix = args.out_prefix.as_os_str().to_owned();
    let with_ext = |ext: &str| {
        let mut p = prefix.clone();
        p.push(ext);
        PathBuf::from(p)
    };
    let schema_path = with_ext(".schema");
    let matrix_path = with_ext(".matrix");
    write_file(&schema_path, serialize_schema(&schema).as_bytes())?;
    write_file(&matrix_path, serialize_matrix(&matrix).as_bytes())?;
    writeln!(
        out,
        "schema\t{}\nmatrix\t{}",
        schema_path.display(),
        matrix_path.display()
    )
    .map_err(out_err)?;
    Ok(())
}

fn print_report(report: &CompareReport, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    writeln!(out, "ranks\t{}/{}", report.ranks_equal, report.ranks_checked).map_err(out_err)?;
    writeln!(out, "chain_ranks\t{}", report.chain_checked).map_err(out_err)?;
    writeln!(out, "patterns\t{}", report.patterns_checked).map_err(out_err)?;
    writeln!(out, "max_steps\t{}", report.max_steps).map_err(out_err)?;
    writeln!(out, "mean_steps\t{:.4}", report.mean_steps).map_err(out_err)?;
    if let Some(d) = &report.first_divergence {
        writeln!(
            out,
            "divergence\trank {} expected {} got {:?}",
            d.rank, d.expected, d.actual
        )
        .map_err(out_err)?;
    }
    if let Some(d) = &report.chain_divergence {
        writeln!(out, "divergence\t{d}").map_err(out_err)?;
    }
    if let Some(d) = &report.pattern_divergence {
        writeln!(out, "divergence\t{d}").map_err(out_err)?;
    }
    writeln!(out, "status\t{}", if report.success() { "ok" } else { "diverged" }).map_err(out_err)?;
    writeln!(
        err,
        "build_time_ms\t{}\nquery_time_ms\t{}",
        report.build_time.as_millis(),
        report.query_time.as_millis()
    )
    .map_err(out_err)?;
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let report = match &args.index {
        Some(path) => compare_index(&load_index(path)?, args.patterns, args.seed)?,
        None => {
            let vt = load_instance(&args.input)?;
            full_compare(&vt, &BuildConfig::with_stride(args.stride), args.patterns, args.seed)?
        }
    };
    print_report(&report, out, err)?;
    if report.success() {
        Ok(())
    } else {
        Err(Failure::Domain("index disagrees with the oracle".into()))
    }
}

/// Parses `args` (including the program name) and runs one subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Build(a) => cmd_build(a, out, err),
        Command::Query(a) => cmd_query(a, out),
        Command::Locate(a) => cmd_locate(a, out),
        Command::Stats(a) => cmd_stats(a, out),
        Command::Gen(a) => cmd_gen(a, out),
        Command::Verify(a) => cmd_verify(a, out, err),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let (Failure::Io(msg) | Failure::Domain(msg)) = &f;
            let _ = writeln!(err, "error: {msg}");
            f.code()
        }
    }
}
