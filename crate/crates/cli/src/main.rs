use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use subpack::bounds::{BoundEngine, KnownValues, MethodRegistry};
use subpack::codefile::{read_code, write_code};
use subpack::constructions::{ConstructionRegistry, Request, Target, DEFAULT_MAX_BLOCKS};
use subpack::ilp::{build_model, writer, DEFAULT_SIZE_CAP};
use subpack::oracle::{exhaustive_max, greedy_lower, verify_covering, verify_packing, CoveringCheck};
use subpack::table::{compare, generate};
use subpack::{CoveringParams, Error, PackingParams};

/// stdout writes that end the process quietly when the reader has gone away
/// (for example `subpack table ... | head`).
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if let Err(e) = write!(std::io::stdout(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            panic!("writing to stdout: {e}");
        }
    }};
}

macro_rules! outln {
    ($($arg:tt)*) => {{
        out!($($arg)*);
        out!("\n");
    }};
}

const OK: u8 = 0;
const INVALID: u8 = 1;
const USAGE: u8 = 2;
const BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "subpack", version, about = "Bounds, constructions and verification for subspace packings")]
struct Cli {
    /// Ignore the bundled table of known values; report only derived bounds.
    #[arg(long, global = true)]
    no_registry: bool,
    /// Seed for randomized searches and sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Work limit: search nodes, covering subsets checked exhaustively,
    /// materialized blocks or ILP rows/columns, depending on the command.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the main artifact (code file or ILP model) here.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Comma-separated upper-bound methods to use (default: all).
    #[arg(long, global = true, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Packing {
    q: u32,
    n: u32,
    k: u32,
    t: u32,
    lambda: u64,
}

impl Packing {
    fn params(&self) -> subpack::Result<PackingParams> {
        PackingParams::new(self.q, self.n, self.k, self.t, self.lambda)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Lower and upper bounds on A_q(n,k,t;lambda) with provenance.
    Bound(Packing),
    /// Build a code and write it in the code file format.
    Construct {
        #[arg(value_parser = construction_names())]
        method: String,
        q: u32,
        n: u32,
        k: u32,
        /// delta for covering methods, t for dual-linkage.
        a: u32,
        /// alpha for covering methods, lambda for dual-linkage.
        b: u64,
        /// Linkage split point (default: the best one).
        #[arg(long)]
        split: Option<u32>,
        /// Skip the oracle check of the result.
        #[arg(long)]
        no_verify: bool,
    },
    /// Check a code file as a packing (t, lambda) or covering (delta, alpha).
    Verify {
        path: PathBuf,
        mode: Mode,
        a: u64,
        b: u64,
    },
    /// Bound table for 2 <= k < n, 1 <= t <= k.
    Table {
        q: u32,
        n: u32,
        lambda: u64,
        /// Compare every cell against the bundled printed table for this n.
        #[arg(long)]
        compare: bool,
    },
    /// Emit the integer program for A_q(n,k,t;lambda) plus a variable index.
    Ilp {
        #[command(flatten)]
        p: Packing,
        #[arg(long, default_value = "lp", value_parser = ["lp", "mps"])]
        format: String,
        /// Add one row per i-subspace, 1 <= i < t.
        #[arg(long)]
        strengthen: bool,
    },
    /// Search for large packings.
    Search {
        kind: SearchKind,
        #[command(flatten)]
        p: Packing,
        /// Greedy restarts.
        #[arg(long, default_value_t = 8)]
        passes: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Packing,
    Covering,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchKind {
    Exhaustive,
    Greedy,
}

fn construction_names() -> Vec<&'static str> {
    ConstructionRegistry::standard().names()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.chain().find_map(|c| c.downcast_ref::<Error>()) {
        Some(Error::SizeCap { .. }) => BUDGET,
        Some(Error::InvalidField(_) | Error::InvalidParams(_) | Error::NotApplicable(_) | Error::UnknownName { .. }) => {
            USAGE
        }
        _ => INVALID,
    }
}

fn engine(cli: &Cli) -> anyhow::Result<BoundEngine> {
    let methods = match &cli.methods {
        Some(names) => MethodRegistry::select(&names.iter().map(String::as_str).collect::<Vec<_>>())?,
        None => MethodRegistry::standard(),
    };
    let known = (!cli.no_registry).then(|| KnownValues::bundled().clone());
    Ok(BoundEngine::with_parts(methods, known))
}

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            out!("{text}");
            Ok(())
        }
    }
}

fn print_json(v: &serde_json::Value) {
    outln!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    match &cli.command {
        Command::Bound(p) => bound(cli, p),
        Command::Construct { method, q, n, k, a, b, split, no_verify } => {
            construct(cli, method, *q, *n, *k, *a, *b, *split, *no_verify)
        }
        Command::Verify { path, mode, a, b } => verify(cli, path, *mode, *a, *b),
        Command::Table { q, n, lambda, compare } => table(cli, *q, *n, *lambda, *compare),
        Command::Ilp { p, format, strengthen } => ilp(cli, p, format, *strengthen),
        Command::Search { kind, p, passes } => search(cli, *kind, p, *passes),
    }
}

fn bound(cli: &Cli, p: &Packing) -> anyhow::Result<u8> {
    let params = p.params()?;
    let r = engine(cli)?.best_upper(&params)?;
    if cli.json {
        print_json(&json!({
            "q": params.q, "n": params.n, "k": params.k, "t": params.t, "lambda": params.lambda,
            "lower": r.lower, "upper": r.upper, "methods": r.provenance,
        }));
    } else {
        outln!("{params}");
        outln!("lower: {}", r.lower);
        outln!("upper: {}", r.upper);
        for e in &r.provenance {
            outln!("  {:<6} {:<18} {}", format!("{:?}", e.side).to_lowercase(), e.method, e.value);
        }
    }
    Ok(OK)
}

#[allow(clippy::too_many_arguments)]
fn construct(cli: &Cli, method: &str, q: u32, n: u32, k: u32, a: u32, b: u64, split: Option<u32>, no_verify: bool) -> anyhow::Result<u8> {
    let target = if method == "dual-linkage" {
        Target::Packing(PackingParams::new(q, n, k, a, b)?)
    } else {
        Target::Covering(CoveringParams::new(q, n, k, a, b)?)
    };
    let max_blocks = cli.budget.map_or(DEFAULT_MAX_BLOCKS, u128::from);
    let built = ConstructionRegistry::standard().get(method)?.build(&Request { target, t: split, max_blocks })?;
    let report = if no_verify {
        None
    } else {
        Some(match target {
            Target::Packing(p) => verify_packing(&built.code, p.t as usize, p.lambda)?,
            Target::Covering(c) => verify_covering(
                &built.code,
                c.delta as usize,
                c.alpha as usize,
                &CoveringCheck { seed: cli.seed, ..Default::default() },
            )?,
        })
    };
    emit(cli.output.as_deref(), &write_code(&built.code)?)?;
    let target_text = match target {
        Target::Packing(p) => p.to_string(),
        Target::Covering(c) => c.to_string(),
    };
    let valid = report.as_ref().is_none_or(|r| r.valid);
    if cli.json {
        eprintln!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "method": method, "params": target_text, "size": built.code.len(),
                "formula": built.formula, "plan": built.plan, "verification": report,
            }))?
        );
    } else {
        eprintln!("{method} {target_text}: {} blocks (formula {}, {})", built.code.len(), built.formula, built.plan);
        if let Some(r) = &report {
            eprint!("{r}");
        }
    }
    Ok(if valid { OK } else { INVALID })
}

fn verify(cli: &Cli, path: &Path, mode: Mode, a: u64, b: u64) -> anyhow::Result<u8> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let code = read_code(&text).with_context(|| format!("parsing {}", path.display()))?;
    let report = match mode {
        Mode::Packing => {
            if a as usize > code.block_dim() {
                return Err(Error::InvalidParams(format!("t = {a} exceeds the block dimension {}", code.block_dim())).into());
            }
            verify_packing(&code, a as usize, b)?
        }
        Mode::Covering => {
            let mut opts = CoveringCheck { seed: cli.seed, ..Default::default() };
            if let Some(budget) = cli.budget {
                opts.budget = budget as u128;
            }
            verify_covering(&code, a as usize, b as usize, &opts)?
        }
    };
    if cli.json {
        print_json(&json!({ "blocks": code.len(), "report": report }));
    } else {
        outln!("blocks: {}", code.len());
        out!("{report}");
    }
    Ok(if report.valid { OK } else { INVALID })
}

fn table(cli: &Cli, q: u32, n: u32, lambda: u64, with_compare: bool) -> anyhow::Result<u8> {
    if n < 3 {
        bail!(Error::InvalidParams("tables need n >= 3".into()));
    }
    let tab = generate(&engine(cli)?, q, n, lambda)?;
    let cmp = with_compare.then(|| compare(&tab, KnownValues::bundled()));
    let sound = cmp.as_ref().is_none_or(|c| c.iter().all(|x| x.sound));
    if cli.json {
        print_json(&json!({ "table": tab, "comparison": cmp }));
    } else {
        out!("{}", tab.render());
        if let Some(cmp) = &cmp {
            if cmp.is_empty() {
                outln!("\nno printed table for n={n}, q={q}, lambda={lambda}");
            } else {
                outln!("\ncomparison with the printed table:");
                for c in cmp {
                    let status = match (c.sound, c.same_interval) {
                        (false, _) => "CONTRADICTS",
                        (true, true) => "same",
                        (true, false) => "differs",
                    };
                    outln!(
                        "  k={} t={}: ours {}-{}, printed {}-{}  {status}",
                        c.k, c.t, c.lower, c.upper, c.fixture_lower, c.fixture_upper
                    );
                }
            }
        }
    }
    Ok(if sound { OK } else { INVALID })
}

fn ilp(cli: &Cli, p: &Packing, format: &str, strengthen: bool) -> anyhow::Result<u8> {
    let params = p.params()?;
    let cap = cli.budget.map_or(DEFAULT_SIZE_CAP, u128::from);
    let model = build_model(&params, strengthen, &engine(cli)?, cap)?;
    let text = writer(format)?.write(&model)?;
    emit(cli.output.as_deref(), &text)?;
    let index = cli.output.as_ref().map(|o| {
        let mut s = o.clone().into_os_string();
        s.push(".index");
        PathBuf::from(s)
    });
    if let Some(ix) = &index {
        fs::write(ix, model.index_text()).with_context(|| format!("writing {}", ix.display()))?;
    }
    let summary = json!({
        "params": params.to_string(), "format": format, "variables": model.variable_count(),
        "rows": model.rows.len(), "coverage_rows": model.coverage_rows(),
        "index": index.map(|p| p.display().to_string()),
    });
    if cli.json {
        eprintln!("{}", serde_json::to_string_pretty(&summary)?);
    } else {
        eprintln!("{params}: {} variables, {} rows ({} coverage)", model.variable_count(), model.rows.len(), model.coverage_rows());
    }
    Ok(OK)
}

fn search(cli: &Cli, kind: SearchKind, p: &Packing, passes: u32) -> anyhow::Result<u8> {
    let params = p.params()?;
    let (code, complete, nodes) = match kind {
        SearchKind::Exhaustive => {
            let r = exhaustive_max(&params, cli.budget.unwrap_or(10_000_000), &engine(cli)?)?;
            (r.witness, r.complete, Some(r.nodes))
        }
        SearchKind::Greedy => (greedy_lower(&params, cli.seed, passes)?, false, None),
    };
    if let Some(path) = &cli.output {
        fs::write(path, write_code(&code)?).with_context(|| format!("writing {}", path.display()))?;
    }
    if cli.json {
        print_json(&json!({ "params": params.to_string(), "value": code.len(), "complete": complete, "nodes": nodes }));
    } else {
        match kind {
            SearchKind::Exhaustive if complete => outln!("{params} = {}", code.len()),
            SearchKind::Exhaustive => outln!("{params} >= {} (node budget exhausted)", code.len()),
            SearchKind::Greedy => outln!("{params} >= {}", code.len()),
        }
    }
    Ok(match kind {
        SearchKind::Exhaustive if !complete => BUDGET,
        _ => OK,
    })
}
