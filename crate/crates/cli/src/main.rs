//! `pathsep`: build, verify and analyse strongly separating path systems.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 unsupported graph class, 4 resource limit.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pathsep::bipartite::{bipartite_bounds, bounds_csv, build_ssp_complete_bipartite, format_sig6, BoundReport};
use pathsep::cubic::{build_ssp_auto, build_ssp_cubic, build_ssp_outerplanar_entry, build_ssp_subcubic, DispatchReport};
use pathsep::degenerate::build_ssp_2degenerate;
use pathsep::generate;
use pathsep::graph::{parse_graph, parse_graph_loose};
use pathsep::oracle::{exact_ssp, OracleConfig};
use pathsep::pathsys::{
    counting_certificate, incidence_profile, parse_paths_json, parse_paths_text, verify_structural_properties,
};
use pathsep::{verify_strong_separation, Error, Graph, PathSystem, Separation};
use serde::Serialize;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "pathsep", version, about = "Strongly separating path systems")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Write a JSON run manifest to this file.
    #[arg(long, global = true, value_name = "FILE")]
    manifest: Option<PathBuf>,
    /// Accept arbitrary non-negative vertex ids in graph files; they are
    /// relabelled densely in ascending order.
    #[arg(long, global = true)]
    loose: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Construct a path system.
    Build(BuildArgs),
    /// Check that a path system strongly separates its graph.
    Verify(VerifyArgs),
    /// Compute the minimum size exactly (small graphs only).
    Exact(ExactArgs),
    /// Lower/upper bounds for complete bipartite graphs.
    Bounds(BoundsArgs),
    /// Generate a graph.
    Gen(GenArgs),
    /// Per-edge multiplicity histogram and counting slacks.
    Profile(ProfileArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Method {
    Auto,
    Degenerate,
    Cubic,
    Subcubic,
    Bipartite,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum PathFormat {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[arg(short, long, value_name = "GRAPH")]
    input: Option<PathBuf>,
    #[arg(short, long, value_enum, default_value = "auto")]
    method: Method,
    /// Shorthand for `-m bipartite`.
    #[arg(long)]
    bipartite: bool,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    /// Output path file (stdout if absent).
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: PathFormat,
    /// Write the construction trace (degenerate method, connected input).
    #[arg(long, value_name = "FILE")]
    trace: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(short, long, value_name = "GRAPH")]
    graph: PathBuf,
    #[arg(short, long, value_name = "PATHS")]
    paths: PathBuf,
    /// Also require every edge on exactly two paths and every vertex the end
    /// of exactly two paths.
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[arg(short, long, value_name = "GRAPH")]
    graph: PathBuf,
    /// Largest number of paths to search.
    #[arg(long, default_value_t = 12)]
    max_budget: usize,
    #[arg(long, default_value_t = 10)]
    max_vertices: usize,
    #[arg(long, default_value_t = 16)]
    max_edges: usize,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Run even above the vertex/edge limits.
    #[arg(long)]
    force: bool,
    /// Write the witness system here.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: usize,
    /// CSV table of the lower bound as a function of `a`.
    #[arg(long)]
    table: bool,
    /// Table rows (defaults to `b`, i.e. `a = 1..b`).
    #[arg(long)]
    steps: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Family {
    TwoDegenerate,
    Cubic,
    CompleteBipartite,
    Named,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(short, long, value_enum)]
    family: Family,
    #[arg(short, long)]
    n: Option<usize>,
    #[arg(short, long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    #[arg(short, long, value_name = "GRAPH")]
    graph: PathBuf,
    #[arg(short, long, value_name = "PATHS")]
    paths: PathBuf,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure::new(2, message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. }
            | Error::VertexOutOfRange { .. }
            | Error::SelfLoop { .. }
            | Error::InvalidEdge(_)
            | Error::InvalidPath { .. }
            | Error::NonEdge { .. }
            | Error::Precondition(_) => 2,
            Error::NotTwoDegenerate
            | Error::NotConnected
            | Error::TooSmall { .. }
            | Error::NotCubic
            | Error::DegreeTooLarge(_)
            | Error::NotApplicable(_)
            | Error::EdgeInTriangle(_)
            | Error::Unsupported(_) => 3,
            Error::LimitExceeded(_) => 4,
            Error::NotSeparating(_) | Error::Internal(_) => 1,
        };
        Failure::new(code, format!("error: {e}"))
    }
}

/// What a command produced: text for stdout, an exit code and a one-line
/// summary for the manifest.
struct Outcome {
    stdout: String,
    code: u8,
    summary: String,
}

type CmdResult = Result<Outcome, Failure>;

fn read(path: &FsPath) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("error: cannot read {}: {e}", path.display())))
}

fn write(path: &FsPath, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::usage(format!("error: cannot write {}: {e}", path.display())))
}

/// Reads a graph; in loose mode also returns the original ids.
fn load_graph(path: &FsPath, loose: bool) -> Result<(Graph, Option<Vec<u64>>), Failure> {
    let text = read(path)?;
    if loose {
        let (g, map) = parse_graph_loose(&text)?;
        Ok((g, Some(map)))
    } else {
        Ok((parse_graph(&text)?, None))
    }
}

fn load_system(g: &Graph, path: &FsPath) -> Result<PathSystem, Failure> {
    let text = read(path)?;
    let lists = if text.trim_start().starts_with('{') {
        let (n, lists) = parse_paths_json(&text)?;
        if n != g.n() {
            return Err(Failure::usage(format!("error: path file declares n={n}, graph has {}", g.n())));
        }
        lists
    } else {
        parse_paths_text(&text)?
    };
    Ok(PathSystem::from_lists(g.clone(), lists)?)
}

fn mapping_comment(map: &Option<Vec<u64>>) -> String {
    let mut out = String::new();
    if let Some(map) = map {
        for (i, orig) in map.iter().enumerate() {
            let _ = writeln!(out, "# vertex {i} = input id {orig}");
        }
    }
    out
}

fn render_system(sys: &PathSystem, format: PathFormat, map: &Option<Vec<u64>>) -> String {
    match format {
        PathFormat::Text => mapping_comment(map) + &sys.to_text(),
        PathFormat::Json => sys.to_json() + "\n",
    }
}

fn describe(report: &DispatchReport) -> String {
    let parts: Vec<String> = report
        .components
        .iter()
        .filter(|c| c.paths > 0)
        .map(|c| format!("{} via {}: {}", c.class, c.builder, c.paths))
        .collect();
    format!("per component [{}], {} K4 component(s)", parts.join("; "), report.k)
}

fn cmd_build(args: &BuildArgs, cli: &Cli) -> CmdResult {
    let method = if args.bipartite { Method::Bipartite } else { args.method };
    let mut map = None;
    let mut trace = None;
    let (sys, how) = if method == Method::Bipartite {
        let (Some(a), Some(b)) = (args.a, args.b) else {
            return Err(Failure::usage("error: the bipartite method needs --a and --b"));
        };
        if args.input.is_some() {
            return Err(Failure::usage("error: the bipartite method takes --a/--b, not an input graph"));
        }
        (build_ssp_complete_bipartite(a, b)?, format!("complete bipartite construction on K_{{{a},{b}}}"))
    } else {
        let Some(input) = &args.input else {
            return Err(Failure::usage("error: --input is required"));
        };
        let (g, m) = load_graph(input, cli.loose)?;
        map = m;
        match method {
            Method::Auto => {
                let (s, r) = build_ssp_auto(&g)?;
                (s, format!("auto dispatch, {}", describe(&r)))
            }
            Method::Subcubic => {
                let (s, r) = build_ssp_subcubic(&g)?;
                (s, format!("subcubic dispatch, {}", describe(&r)))
            }
            Method::Cubic => {
                let c = build_ssp_cubic(&g)?;
                let how = format!("cubic re-routing around edge {}-{}", c.removed.0, c.removed.1);
                (c.system, how)
            }
            Method::Degenerate => {
                if g.is_connected() && g.n() >= 3 {
                    let (s, t) = build_ssp_2degenerate(&g)?;
                    trace = Some(t);
                    (s, "2-degenerate induction".to_string())
                } else {
                    let (s, r) = build_ssp_outerplanar_entry(&g)?;
                    (s, format!("2-degenerate induction, {}", describe(&r)))
                }
            }
            Method::Bipartite => unreachable!(),
        }
    };
    if let Separation::Fail(f) = verify_strong_separation(&sys) {
        return Err(Failure::new(1, format!("error: internal check failed, built system does not separate: {f}")));
    }
    if let Some(path) = &args.trace {
        let Some(t) = &trace else {
            return Err(Failure::usage("error: --trace needs -m degenerate on a connected graph"));
        };
        write(path, &(t.to_json() + "\n"))?;
    }
    let rendered = render_system(&sys, args.format, &map);
    let summary = format!("{} paths on {} vertices ({how})", sys.len(), sys.graph().n());
    let stdout = match (&args.output, cli.json) {
        (Some(path), json) => {
            write(path, &rendered)?;
            if json {
                json!({"verdict": "PASS", "paths": sys.len(), "builder": how}).to_string() + "\n"
            } else {
                summary.clone() + "\n"
            }
        }
        (None, true) => {
            json!({"verdict": "PASS", "paths": sys.len(), "builder": how, "ssp": sys.paths()}).to_string() + "\n"
        }
        (None, false) => {
            eprintln!("{summary}");
            rendered
        }
    };
    Ok(Outcome { stdout, code: 0, summary })
}

fn cmd_verify(args: &VerifyArgs, cli: &Cli) -> CmdResult {
    let (g, _) = load_graph(&args.graph, cli.loose)?;
    let sys = load_system(&g, &args.paths)?;
    let sep = verify_strong_separation(&sys);
    let structural = if args.strict { verify_structural_properties(&sys).err() } else { None };
    let pass = sep.is_pass() && structural.is_none();
    let verdict = if pass { "PASS" } else { "FAIL" };
    let witness = match &sep {
        Separation::Fail(f) => Some(f),
        Separation::Pass => None,
    };
    let stdout = if cli.json {
        json!({"verdict": verdict, "witness": witness, "structure": structural}).to_string() + "\n"
    } else {
        let mut s = format!("{verdict}\n");
        if let Some(f) = witness {
            let _ = writeln!(s, "witness: {f}");
        }
        if let Some(f) = &structural {
            let _ = writeln!(s, "structure: {f}");
        }
        s
    };
    Ok(Outcome { stdout, code: if pass { 0 } else { 1 }, summary: verdict.into() })
}

fn cmd_exact(args: &ExactArgs, cli: &Cli) -> CmdResult {
    let (g, map) = load_graph(&args.graph, cli.loose)?;
    let time_budget = match args.time_limit {
        Some(t) if !(t > 0.0 && t.is_finite()) => return Err(Failure::usage("error: --time-limit must be positive")),
        t => t.map(Duration::from_secs_f64),
    };
    let cfg = OracleConfig {
        max_vertices: args.max_vertices,
        max_edges: args.max_edges,
        max_path_budget: args.max_budget,
        time_budget,
        force: args.force,
        ..OracleConfig::default()
    };
    let out = exact_ssp(&g, &cfg)?;
    if let Some(path) = &args.output {
        write(path, &render_system(&out.witness, PathFormat::Text, &map))?;
    }
    let summary = match out.value() {
        Some(v) => format!("ssp = {v}"),
        None => format!("ssp in [{}, {}] (inconclusive)", out.lower, out.upper),
    };
    let stdout = if cli.json {
        json!({
            "ssp": out.value(),
            "lower": out.lower,
            "upper": out.upper,
            "exact": out.conclusive,
            "witness": out.witness.paths(),
        })
        .to_string()
            + "\n"
    } else {
        summary.clone() + "\n"
    };
    Ok(Outcome { stdout, code: if out.conclusive { 0 } else { 4 }, summary })
}

fn bound_text(r: &BoundReport) -> String {
    let mut s = format!("K_{{{},{}}}: ", r.a, r.b);
    match r.exact {
        Some(e) => {
            let _ = write!(s, "exact = {e}");
        }
        None => {
            let _ = write!(s, "lower ≈ {}", format_sig6(r.lower));
        }
    }
    if let (None, Some(u)) = (r.exact, r.upper) {
        let _ = write!(s, ", upper = {u}");
    }
    s
}

fn cmd_bounds(args: &BoundsArgs, cli: &Cli) -> CmdResult {
    if args.table {
        let csv = bounds_csv(args.b, args.steps.unwrap_or(args.b))?;
        let rows = csv.lines().count() - 1;
        let summary = format!("{rows} rows for b = {}", args.b);
        let stdout = match &args.output {
            Some(p) => {
                write(p, &csv)?;
                summary.clone() + "\n"
            }
            None => csv,
        };
        return Ok(Outcome { stdout, code: 0, summary });
    }
    let Some(a) = args.a else {
        return Err(Failure::usage("error: --a is required unless --table is given"));
    };
    let r = bipartite_bounds(a, args.b)?;
    let summary = bound_text(&r);
    let stdout = if cli.json {
        serde_json::to_string(&r).expect("serializable") + "\n"
    } else {
        summary.clone() + "\n"
    };
    if let Some(p) = &args.output {
        write(p, &stdout)?;
    }
    Ok(Outcome { stdout, code: 0, summary })
}

fn cmd_gen(args: &GenArgs) -> CmdResult {
    let need_n = || args.n.ok_or_else(|| Failure::usage("error: -n is required for this family"));
    let g = match args.family {
        Family::TwoDegenerate => generate::two_degenerate(need_n()?, args.seed)?,
        Family::Cubic => generate::random_cubic(need_n()?, args.seed)?,
        Family::CompleteBipartite => match (args.a, args.b) {
            (Some(a), Some(b)) if a >= 1 && b >= 1 => generate::complete_bipartite(a, b),
            _ => return Err(Failure::usage("error: complete-bipartite needs --a and --b (both >= 1)")),
        },
        Family::Named => {
            let name = args.name.as_deref().ok_or_else(|| {
                Failure::usage(format!("error: --name is required; one of {}", generate::NAMED.join(", ")))
            })?;
            generate::named(name).map_err(|e| Failure::usage(format!("error: {e}")))?
        }
    };
    let text = g.to_text();
    let summary = format!("{} vertices, {} edges", g.n(), g.m());
    let stdout = match &args.output {
        Some(p) => {
            write(p, &text)?;
            summary.clone() + "\n"
        }
        None => text,
    };
    Ok(Outcome { stdout, code: 0, summary })
}

fn cmd_profile(args: &ProfileArgs, cli: &Cli) -> CmdResult {
    let (g, _) = load_graph(&args.graph, cli.loose)?;
    let sys = load_system(&g, &args.paths)?;
    let prof = incidence_profile(&sys);
    let hist: Vec<String> = (0..prof.histogram.len()).map(|i| format!("e{i}={}", prof.e(i))).collect();
    let mut s = format!("p={} m={}\n{}\n", prof.p, g.m(), hist.join(" "));
    let mut cert_json = serde_json::Value::Null;
    match (args.a, args.b) {
        (Some(a), Some(b)) => {
            let c = counting_certificate(&sys, a, b)?;
            let _ = writeln!(s, "length bound 3ab-2e1-e2 <= 2ap: slack {}", c.length_slack());
            let _ = writeln!(
                s,
                "pair bound e2+2e1 <= C(p-e1,2)+2e1: slack {}",
                c.pair_mid - c.pair_lhs
            );
            let _ = writeln!(s, "relaxed pair bound e2+2e1 <= p^2/2: slack {}", c.pair_slack());
            let _ = writeln!(s, "certificate {}", if c.holds() { "holds" } else { "violated" });
            cert_json = serde_json::to_value(&c).expect("serializable");
        }
        (None, None) => {}
        _ => return Err(Failure::usage("error: give both --a and --b")),
    }
    let stdout = if cli.json {
        json!({"p": prof.p, "m": g.m(), "histogram": prof.histogram, "certificate": cert_json}).to_string() + "\n"
    } else {
        s
    };
    Ok(Outcome { stdout, code: 0, summary: hist.join(" ") })
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    inputs: Vec<String>,
    seed: Option<u64>,
    flags: Vec<String>,
    version: &'static str,
    exit_code: u8,
    outcome: String,
}

fn manifest_for(cli: &Cli, code: u8, outcome: String) -> RunManifest {
    let (command, inputs, seed): (&str, Vec<&PathBuf>, Option<u64>) = match &cli.cmd {
        Cmd::Build(a) => ("build", a.input.iter().collect(), None),
        Cmd::Verify(a) => ("verify", vec![&a.graph, &a.paths], None),
        Cmd::Exact(a) => ("exact", vec![&a.graph], None),
        Cmd::Bounds(_) => ("bounds", vec![], None),
        Cmd::Gen(a) => ("gen", vec![], Some(a.seed)),
        Cmd::Profile(a) => ("profile", vec![&a.graph, &a.paths], None),
    };
    RunManifest {
        command: command.into(),
        inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
        seed,
        flags: std::env::args().skip(1).collect(),
        version: env!("CARGO_PKG_VERSION"),
        exit_code: code,
        outcome,
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("PATHSEP_MAX_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::usage(format!("error: PATHSEP_MAX_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::new(4, format!("error: thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.cmd {
        Cmd::Build(a) => cmd_build(a, &cli),
        Cmd::Verify(a) => cmd_verify(a, &cli),
        Cmd::Exact(a) => cmd_exact(a, &cli),
        Cmd::Bounds(a) => cmd_bounds(a, &cli),
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Profile(a) => cmd_profile(a, &cli),
    });
    let (code, summary) = match result {
        Ok(out) => {
            print!("{}", out.stdout);
            (out.code, out.summary)
        }
        Err(f) => {
            eprintln!("{}", f.message);
            (f.code, f.message)
        }
    };
    if let Some(path) = &cli.manifest {
        let m = manifest_for(&cli, code, summary);
        let text = serde_json::to_string_pretty(&m).expect("serializable") + "\n";
        if let Err(e) = fs::write(path, text) {
            eprintln!("error: cannot write manifest {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
