use std::fmt;
use std::fs;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use semiregular::formulas::{self, FamilyParams, Invariant};
use semiregular::hochster::{self, HochsterOptions, DEFAULT_HOCHSTER_CAP};
use semiregular::oracles::DEFAULT_ENUM_CAP;
use semiregular::sdepth::DEFAULT_SDEPTH_CAP;
use semiregular::verify::{self, Caps, Status, VerifyConfig};
use semiregular::{Family, LeveledTree, SimpleGraph};
use serde_json::{json, Value};

/// Perfect semiregular trees: closed-form invariants of their edge ideals and
/// brute-force oracles that check them.
#[derive(Parser, Debug)]
#[command(name = "semiregular", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a tree in the graph text format.
    Gen(GenArgs),
    /// Print every closed-form invariant of one tree as JSON.
    Eval(EvalArgs),
    /// Compare formulas against oracles over a parameter grid.
    Verify(VerifyArgs),
    /// Print the graded Betti table of a graph's edge ideal quotient.
    Betti(BettiArgs),
    /// Print a grid of formula values over n and k.
    Table(TableArgs),
}

#[derive(Args, Debug)]
struct TreeArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    tree: TreeArgs,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    tree: TreeArgs,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Both families when absent.
    #[arg(long)]
    family: Option<Family>,
    #[arg(long, conflicts_with = "n_range")]
    n: Option<usize>,
    #[arg(long, conflicts_with = "k_range")]
    k: Option<usize>,
    /// Inclusive range `A..B`.
    #[arg(long)]
    n_range: Option<String>,
    /// Inclusive range `A..B`.
    #[arg(long)]
    k_range: Option<String>,
}

impl GridArgs {
    fn families(&self) -> Vec<Family> {
        self.family.map_or_else(|| vec![Family::Full, Family::Ary], |f| vec![f])
    }

    fn range(single: Option<usize>, range: &Option<String>, name: &str) -> Result<RangeInclusive<usize>, CliError> {
        match (single, range) {
            (Some(v), _) => Ok(v..=v),
            (None, Some(r)) => Ok(verify::parse_range(r)?),
            (None, None) => Err(CliError::Usage(format!(
                "one of --{name} or --{name}-range is required"
            ))),
        }
    }

    fn n_range(&self) -> Result<RangeInclusive<usize>, CliError> {
        Self::range(self.n, &self.n_range, "n")
    }

    fn k_range(&self) -> Result<RangeInclusive<usize>, CliError> {
        Self::range(self.k, &self.k_range, "k")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Comma-separated: formulas, combinatorial, hochster, sdepth, all.
    #[arg(long, default_value = "all")]
    oracles: String,
    #[arg(long, default_value_t = DEFAULT_HOCHSTER_CAP)]
    hochster_cap: usize,
    #[arg(long, default_value_t = DEFAULT_SDEPTH_CAP)]
    sdepth_cap: usize,
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    enum_cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Drop the per-row timing column.
    #[arg(long)]
    no_timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BettiArgs {
    /// Graph file in the text format written by `gen`.
    #[arg(long, conflicts_with_all = ["family", "n", "k"])]
    graph: Option<PathBuf>,
    #[arg(long, requires_all = ["n", "k"])]
    family: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_HOCHSTER_CAP)]
    hochster_cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long)]
    invariant: String,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum, default_value_t = Format::Md)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(semiregular::Error),
    Io(PathBuf, std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_resource_cap() => 3,
            CliError::Core(semiregular::Error::Inconsistent(_)) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl From<semiregular::Error> for CliError {
    fn from(e: semiregular::Error) -> Self {
        CliError::Core(e)
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(path.clone(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn gen(args: &GenArgs) -> Result<u8, CliError> {
    let t = LeveledTree::build(args.tree.family, args.tree.n, args.tree.k)?;
    emit(&args.out, &t.graph().to_text())?;
    Ok(0)
}

fn eval(args: &EvalArgs) -> Result<u8, CliError> {
    let p = FamilyParams::new(args.tree.family, args.tree.n, args.tree.k)?;
    let mut record = serde_json::Map::new();
    let mut derived = Vec::new();
    for inv in Invariant::ALL {
        let v = formulas::evaluate(&p, inv)?;
        if v.derived {
            derived.push(inv.name());
        }
        let value = serde_json::to_value(&v).expect("formula values serialize");
        record.insert(inv.name().into(), value["value"].clone());
    }
    record.insert("case".into(), json!(formulas::depth_formula(&p)?.case.to_string()));
    record.insert("derived".into(), json!(derived));
    println!("{}", Value::Object(record));
    Ok(0)
}

fn run_verify(args: &VerifyArgs) -> Result<u8, CliError> {
    let config = VerifyConfig {
        families: args.grid.families(),
        n_range: args.grid.n_range()?,
        k_range: args.grid.k_range()?,
        oracles: verify::parse_oracles(&args.oracles)?,
        caps: Caps {
            hochster: args.hochster_cap,
            sdepth: args.sdepth_cap,
            enumeration: args.enum_cap,
        },
    };
    let run = verify::run_verification(&config)?;
    let text = match args.format {
        Format::Csv => run.to_csv(!args.no_timing),
        Format::Json => {
            let mut v = serde_json::to_value(&run).expect("reports serialize");
            if args.no_timing {
                for r in v["reports"].as_array_mut().into_iter().flatten() {
                    r.as_object_mut().map(|o| o.remove("millis"));
                }
            }
            format!("{v:#}\n")
        }
        Format::Md => return Err(CliError::Usage("verify supports --format csv or json".into())),
    };
    emit(&args.out, &text)?;
    eprintln!(
        "{} passed, {} failed, {} skipped",
        run.count(Status::Pass),
        run.count(Status::Fail),
        run.count(Status::Skipped)
    );
    let code = run.exit_code();
    if code == 3 {
        eprintln!("resource cap: every comparison was skipped; raise the caps to run them");
    }
    Ok(code as u8)
}

fn betti(args: &BettiArgs) -> Result<u8, CliError> {
    let g = match (&args.graph, args.family) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.clone(), e))?;
            SimpleGraph::from_text(&text)?
        }
        (None, Some(family)) => {
            let (n, k) = (args.n.expect("required by clap"), args.k.expect("required by clap"));
            LeveledTree::build(family, n, k)?.into_graph()
        }
        (None, None) => return Err(CliError::Usage("give --graph or --family/--n/--k".into())),
    };
    let opts = HochsterOptions {
        cap: args.hochster_cap,
        ..Default::default()
    };
    let run = hochster::betti_table_with(&g, opts)?;
    let text = match args.format {
        Format::Csv => run.table.to_csv(),
        Format::Json => {
            let inv = hochster::invariants_from_betti(&run.table, g.vertex_count())?;
            format!(
                "{}\n",
                json!({ "betti": run.table, "pdim": inv.pdim, "reg": inv.reg, "depth": inv.depth })
            )
        }
        Format::Md => return Err(CliError::Usage("betti supports --format csv or json".into())),
    };
    emit(&args.out, &text)?;
    Ok(0)
}

fn table(args: &TableArgs) -> Result<u8, CliError> {
    let inv: Invariant = args.invariant.parse()?;
    let ns = args.grid.n_range()?;
    let ks = args.grid.k_range()?;
    let mut out = String::new();
    let mut records = Vec::new();
    for family in args.grid.families() {
        let mut grid = Vec::new();
        for n in ns.clone() {
            let mut row = Vec::new();
            for k in ks.clone() {
                let v = formulas::evaluate(&FamilyParams::new(family, n, k)?, inv)?;
                records.push(json!({ "family": family, "n": n, "k": k, "value": v.value.to_string(), "case": v.case.to_string() }));
                row.push(v.value.to_string());
            }
            grid.push((n, row));
        }
        match args.format {
            Format::Md => {
                if !out.is_empty() {
                    out.push('\n');
                }
                out.push_str(&format!("{} {family}\n\n| n \\ k |", inv.name()));
                for k in ks.clone() {
                    out.push_str(&format!(" {k} |"));
                }
                out.push_str("\n|---|");
                out.push_str(&"---|".repeat(ks.clone().count()));
                out.push('\n');
                for (n, row) in &grid {
                    out.push_str(&format!("| {n} | {} |\n", row.join(" | ")));
                }
            }
            Format::Csv => {
                if out.is_empty() {
                    out.push_str("family,invariant,n,k,value\n");
                }
                for (n, row) in &grid {
                    for (k, v) in ks.clone().zip(row) {
                        out.push_str(&format!("{family},{},{n},{k},{v}\n", inv.name()));
                    }
                }
            }
            Format::Json => {}
        }
    }
    if args.format == Format::Json {
        out = format!("{:#}\n", Value::Array(records));
    }
    emit(&args.out, &out)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Eval(a) => eval(a),
        Command::Verify(a) => run_verify(a),
        Command::Betti(a) => betti(a),
        Command::Table(a) => table(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
