use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dtfreeze::constructions::{
    bipyramid, box_image, cone, interval, pyramid, simple_closed_curve, solid_bipyramid, solid_pyramid, suspension,
    NamedComplex,
};
use dtfreeze::document::{parse_id_list, to_dot, ImageDocument, ReportDocument};
use dtfreeze::suite::{run_row, RowStatus, SuiteConfig, ROWS};
use dtfreeze::verifier::{MinimalSearch, Property, VerificationQuery};
use dtfreeze::{SearchBudget, Verdict, Verifier, VertexId, VertexSet};

const EXIT_HOLDS: u8 = 0;
const EXIT_FAILS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

#[derive(Parser)]
#[command(name = "dtfreeze", version, about = "Freezing, cold, and limiting sets of digital images")]
struct Cli {
    /// Node budget per query.
    #[arg(long, global = true, default_value_t = 100_000_000, alias = "max-nodes")]
    budget_nodes: u64,
    /// Wall-clock budget per query, in milliseconds.
    #[arg(long, global = true, default_value_t = 120_000)]
    budget_ms: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named construction as an image document.
    Build(BuildArgs),
    /// Decide a property of a vertex subset.
    Verify(VerifyArgs),
    /// Decide whether a subset is a minimal freezing set.
    Minimal(SetArgs),
    /// Shrink a freezing set to a minimal one by greedy deletion.
    SearchMinimal(SearchArgs),
    /// Print the diameter, or a distance and its unique shortest path.
    Metric(MetricArgs),
    /// Export an image as DOT or canonical JSON.
    Export(ExportArgs),
    /// Run the theorem instance checks.
    #[command(name = "paper-suite")]
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Interval,
    Box,
    Cycle,
    Cone,
    Suspension,
    Pyramid,
    SolidPyramid,
    Bipyramid,
    SolidBipyramid,
}

#[derive(Args)]
struct FamilyParams {
    #[arg(long)]
    n: Option<i64>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    a: Option<i64>,
    #[arg(long)]
    b: Option<i64>,
    /// Box extents, comma separated.
    #[arg(long, value_delimiter = ',')]
    extents: Vec<i64>,
    #[arg(long)]
    u: Option<usize>,
}

#[derive(Args)]
struct BuildArgs {
    family: Family,
    /// Base of a cone or suspension: a family name or an image file.
    #[arg(long)]
    base: Option<String>,
    #[command(flatten)]
    params: FamilyParams,
}

#[derive(Clone, Copy, ValueEnum)]
enum PropertyArg {
    Freezing,
    Cold,
    Limiting,
    Minimal,
}

#[derive(Args)]
struct SetArgs {
    #[arg(long)]
    image: PathBuf,
    /// Named set, `all`, `empty`, `all-minus-<name>`, `+` unions, or a JSON id-list file.
    #[arg(long)]
    set: String,
}

#[derive(Args)]
struct VerifyArgs {
    property: PropertyArg,
    #[command(flatten)]
    target: SetArgs,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    image: PathBuf,
    /// Freezing set to start from; defaults to the c_1 boundary or the whole image.
    #[arg(long)]
    start: Option<String>,
}

#[derive(Args)]
struct MetricArgs {
    image: PathBuf,
    /// Vertex id or label.
    #[arg(long, requires = "to")]
    from: Option<String>,
    #[arg(long, requires = "from")]
    to: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Dot,
    Json,
}

#[derive(Args)]
struct ExportArgs {
    image: PathBuf,
    #[arg(long, value_enum, default_value = "dot")]
    format: ExportFormat,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    scale: u8,
}

/// A failure that maps to the usage exit code.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = std::result::Result<u8, UsageError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    };
    ExitCode::from(code)
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Build(args) => cmd_build(cli, args),
        Command::Verify(args) => cmd_verify(cli, args),
        Command::Minimal(args) => verify_and_report(cli, args, Property::MinimalFreezing),
        Command::SearchMinimal(args) => cmd_search_minimal(cli, args),
        Command::Metric(args) => cmd_metric(cli, args),
        Command::Export(args) => cmd_export(cli, args),
        Command::Suite(args) => cmd_suite(cli, args),
    }
}

fn verifier(cli: &Cli) -> Verifier {
    Verifier::new(budget(cli))
}

fn budget(cli: &Cli) -> SearchBudget {
    SearchBudget { max_nodes: cli.budget_nodes, max_millis: cli.budget_ms }
}

fn emit(cli: &Cli, text: &str) -> Result<(), UsageError> {
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| UsageError(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn note(cli: &Cli, msg: &str) {
    if !cli.quiet {
        eprintln!("{msg}");
    }
}

fn load(path: &Path) -> Result<NamedComplex, UsageError> {
    let text = fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    Ok(ImageDocument::parse(&text)?.to_complex()?)
}

fn build_family(family: Family, p: &FamilyParams, base: Option<&str>) -> Result<NamedComplex, UsageError> {
    let need_n = || p.n.ok_or_else(|| UsageError("missing --n".into()));
    Ok(match family {
        Family::Interval => {
            let a = p.a.unwrap_or(0);
            let b = p.b.or(p.n).ok_or_else(|| UsageError("missing --b".into()))?;
            interval(a, b)?
        }
        Family::Box => {
            if p.extents.is_empty() {
                return Err(UsageError("missing --extents".into()));
            }
            box_image(&p.extents, p.u.unwrap_or(1))?
        }
        Family::Cycle => simple_closed_curve(p.m.ok_or_else(|| UsageError("missing --m".into()))?)?,
        Family::Cone | Family::Suspension => {
            let base = base.ok_or_else(|| UsageError("missing --base".into()))?;
            let inner = match Family::from_str(base, true) {
                Ok(Family::Cone | Family::Suspension) => {
                    return Err(UsageError("nested bases must be given as image files".into()))
                }
                Ok(f) => build_family(f, p, None)?,
                Err(_) => load(Path::new(base))?,
            };
            match family {
                Family::Cone => cone(&inner.image)?,
                _ => suspension(&inner.image)?,
            }
        }
        Family::Pyramid => pyramid(need_n()?)?,
        Family::SolidPyramid => solid_pyramid(need_n()?)?,
        Family::Bipyramid => bipyramid(need_n()?)?,
        Family::SolidBipyramid => solid_bipyramid(need_n()?)?,
    })
}

fn cmd_build(cli: &Cli, args: &BuildArgs) -> CmdResult {
    let nc = build_family(args.family, &args.params, args.base.as_deref())?;
    emit(cli, &ImageDocument::from_complex(&nc).to_json())?;
    let names: Vec<&str> = nc.named_sets.keys().map(String::as_str).collect();
    note(
        cli,
        &format!("{} vertices, {} edges; named sets: {}", nc.image.len(), nc.image.edge_count(), names.join(", ")),
    );
    Ok(EXIT_HOLDS)
}

fn resolve_vertex(nc: &NamedComplex, term: &str) -> Result<VertexId, UsageError> {
    if let Ok(id) = term.parse::<VertexId>() {
        nc.image.check_vertex(id)?;
        return Ok(id);
    }
    nc.image
        .find_label(term)
        .or_else(|| nc.set(term).filter(|s| s.len() == 1).and_then(|s| s.max()))
        .ok_or_else(|| UsageError(format!("unknown vertex `{term}`")))
}

fn resolve_term(nc: &NamedComplex, term: &str) -> Result<VertexSet, UsageError> {
    match term {
        "all" => Ok(nc.image.vertex_ids()),
        "empty" => Ok(VertexSet::new()),
        _ => {
            if let Some(rest) = term.strip_prefix("all-minus-") {
                return Ok(nc.image.vertex_ids().difference(&resolve_term(nc, rest)?));
            }
            if let Some(s) = nc.set(term) {
                return Ok(s.clone());
            }
            resolve_vertex(nc, term).map(|v| [v].into_iter().collect())
        }
    }
}

fn resolve_set(nc: &NamedComplex, expr: &str) -> Result<VertexSet, UsageError> {
    let path = Path::new(expr);
    if path.is_file() {
        let text = fs::read_to_string(path)?;
        let set = parse_id_list(&text)?;
        nc.image.check_set(&set)?;
        return Ok(set);
    }
    let mut out = VertexSet::new();
    for term in expr.split('+') {
        out = out.union(&resolve_term(nc, term.trim())?);
    }
    Ok(out)
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> CmdResult {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| UsageError(format!("missing --{flag}")));
    let property = match args.property {
        PropertyArg::Freezing => Property::Freezing,
        PropertyArg::Cold => Property::SCold { s: need(args.s, "s")? },
        PropertyArg::Limiting => Property::Limiting { m: need(args.m, "m")?, n: need(args.n, "n")? },
        PropertyArg::Minimal => Property::MinimalFreezing,
    };
    verify_and_report(cli, &args.target, property)
}

fn verify_and_report(cli: &Cli, target: &SetArgs, property: Property) -> CmdResult {
    let nc = load(&target.image)?;
    let subset = resolve_set(&nc, &target.set)?;
    let query = VerificationQuery { property, image: &nc.image, subset, budget: budget(cli) };
    let report = verifier(cli).verify(&query)?;
    emit(cli, &format!("{}\n", ReportDocument::new(report.clone()).to_json()))?;
    let (word, code) = match report.verdict {
        Verdict::Holds => ("holds", EXIT_HOLDS),
        Verdict::Fails => ("fails", EXIT_FAILS),
        Verdict::Unknown => ("unknown", EXIT_UNKNOWN),
    };
    note(cli, &format!("verdict: {word} ({} nodes, {} ms)", report.nodes_expanded, report.elapsed_ms));
    Ok(code)
}

fn cmd_search_minimal(cli: &Cli, args: &SearchArgs) -> CmdResult {
    let nc = load(&args.image)?;
    let start = args.start.as_deref().map(|e| resolve_set(&nc, e)).transpose()?;
    match verifier(cli).search_minimal_freezing(&nc.image, start.as_ref())? {
        MinimalSearch::Found(set) => {
            emit(cli, &format!("{}\n", serde_json::to_string(&set.to_vec())?))?;
            let names: Vec<String> = set.iter().map(|v| nc.image.display_name(v)).collect();
            note(cli, &format!("minimal freezing set of {} vertices: {}", set.len(), names.join(" ")));
            Ok(EXIT_HOLDS)
        }
        MinimalSearch::Unknown => {
            note(cli, "budget exhausted");
            Ok(EXIT_UNKNOWN)
        }
    }
}

fn cmd_metric(cli: &Cli, args: &MetricArgs) -> CmdResult {
    let nc = load(&args.image)?;
    let img = &nc.image;
    let value = match (&args.from, &args.to) {
        (Some(from), Some(to)) => {
            let (x, y) = (resolve_vertex(&nc, from)?, resolve_vertex(&nc, to)?);
            let d = img.distance(x, y)?.ok_or_else(|| UsageError("vertices are in different components".into()))?;
            let path = img.unique_shortest_path(x, y)?;
            serde_json::json!({ "from": x, "to": y, "distance": d, "unique_shortest_path": path })
        }
        _ => serde_json::json!({
            "vertices": img.len(),
            "edges": img.edge_count(),
            "components": img.components().len(),
            "diameter": img.diameter().ok(),
        }),
    };
    emit(cli, &format!("{}\n", serde_json::to_string_pretty(&value)?))?;
    Ok(EXIT_HOLDS)
}

fn cmd_export(cli: &Cli, args: &ExportArgs) -> CmdResult {
    let nc = load(&args.image)?;
    let text = match args.format {
        ExportFormat::Dot => to_dot(&nc.image),
        ExportFormat::Json => ImageDocument::from_complex(&nc).to_json(),
    };
    emit(cli, &text)?;
    Ok(EXIT_HOLDS)
}

fn cmd_suite(cli: &Cli, args: &SuiteArgs) -> CmdResult {
    let cfg = SuiteConfig { scale: args.scale, verifier: verifier(cli), seed: cli.seed };
    let mut rows = Vec::new();
    if !cli.quiet {
        println!("row  status          ms  check");
    }
    for &(id, _) in ROWS.iter() {
        let row = run_row(id, &cfg);
        if !cli.quiet {
            let status = match row.status {
                RowStatus::Pass => "pass",
                RowStatus::Fail => "FAIL",
                RowStatus::Unknown => "unknown",
            };
            println!("{:>3}  {:<8} {:>9}  {}", row.id, status, row.elapsed_ms, row.title);
            if row.status != RowStatus::Pass {
                println!("{:>23}{}", "", row.detail);
            }
        }
        rows.push(row);
    }
    if let Some(path) = &cli.out {
        fs::write(path, serde_json::to_string_pretty(&rows)?)?;
    }
    let code = if rows.iter().any(|r| r.status == RowStatus::Fail) {
        EXIT_FAILS
    } else if rows.iter().any(|r| r.status == RowStatus::Unknown) {
        EXIT_UNKNOWN
    } else {
        EXIT_HOLDS
    };
    Ok(code)
}
