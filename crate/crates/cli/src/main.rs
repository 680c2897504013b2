//! Command-line front end: exact counts, table dumps, diagram exports,
//! segment reports, and the self-verification suites.
//!
//! Exit codes are a stable contract: 0 on success, 1 when verification
//! finds a discrepancy, 2 on usage errors. All results go to stdout and are
//! byte-deterministic for identical invocations; warnings and the build
//! summary go to stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use slimcount::cache::{self, CacheFormat};
use slimcount::count::{max_inversions, CountEngine, TableKind};
use slimcount::lattice::build_diagram;
use slimcount::perm::Permutation;
use slimcount::{Nat, NatTable};

mod verify;

const CACHE_ENV: &str = "SLIMCOUNT_CACHE";

#[derive(Parser)]
#[command(
    name = "slimcount",
    version,
    about = "Exact enumeration of slim semimodular lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count lattices or diagrams of a given size exactly.
    Count(CountArgs),
    /// Emit a counting table as CSV or JSON.
    Table(TableArgs),
    /// Build the lattice diagram of a permutation and export it.
    Build(BuildArgs),
    /// Report the segment structure of a permutation.
    Segments(SegmentsArgs),
    /// Run the self-verification suites against brute force.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CountKind {
    /// Slim semimodular lattices with n elements.
    Ssl,
    /// Their planar diagrams with n elements, up to similarity.
    Ssd,
    /// Distributive diagrams of length h (Catalan).
    Dist,
}

#[derive(Args)]
struct CountArgs {
    /// What to count.
    #[arg(long, value_enum)]
    kind: CountKind,
    /// Number of lattice elements (ssl, ssd).
    #[arg(long)]
    n: Option<usize>,
    /// Lattice length (dist).
    #[arg(long)]
    h: Option<usize>,
    #[arg(long, value_enum, default_value = "plain")]
    format: CountFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum CountFormat {
    Plain,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFn {
    P,
    I,
    T,
    It,
    B,
}

impl TableFn {
    fn kind(self) -> TableKind {
        match self {
            TableFn::P => TableKind::Permutations,
            TableFn::I => TableKind::Irreducibles,
            TableFn::T => TableKind::Involutions,
            TableFn::It => TableKind::IrreducibleInvolutions,
            TableFn::B => TableKind::Blocks,
        }
    }
}

#[derive(Args)]
struct TableArgs {
    /// Counting function to tabulate.
    #[arg(long = "fn", value_enum)]
    function: TableFn,
    #[arg(long)]
    max_h: usize,
    /// Largest inversion number to keep per row; defaults to full rows.
    #[arg(long)]
    max_k: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
    /// Directory for cached tables; overrides SLIMCOUNT_CACHE.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// On-disk format for newly written cache files.
    #[arg(long, value_enum, default_value = "json")]
    cache_format: CacheFormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CacheFormatArg {
    Json,
    Bin,
}

impl CacheFormatArg {
    fn format(self) -> CacheFormat {
        match self {
            CacheFormatArg::Json => CacheFormat::Json,
            CacheFormatArg::Bin => CacheFormat::Binary,
        }
    }
}

#[derive(Args)]
struct BuildArgs {
    /// Permutation as comma-separated images, e.g. "3,2,1".
    #[arg(long)]
    perm: String,
    #[arg(long, value_enum, default_value = "dot")]
    out: BuildFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildFormat {
    Dot,
    Json,
}

#[derive(Args)]
struct SegmentsArgs {
    /// Permutation as comma-separated images, e.g. "1,3,4,2,6,5".
    #[arg(long)]
    perm: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest degree for the census and lattice suites (at most 9).
    #[arg(long, default_value_t = 6)]
    max_h: usize,
    /// Largest lattice size for the brute-force count suites (at most 12).
    #[arg(long, default_value_t = 9)]
    max_n: usize,
    /// Also run the isomorphism-vs-block suite.
    #[arg(long)]
    deep: bool,
}

enum CmdError {
    Usage(String),
    VerifyFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Count(args) => cmd_count(args),
        Command::Table(args) => cmd_table(args),
        Command::Build(args) => cmd_build(args),
        Command::Segments(args) => cmd_segments(args),
        Command::Verify(args) => verify::cmd_verify(args.max_h, args.max_n, args.deep),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CmdError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CmdError::VerifyFailed) => ExitCode::from(1),
    }
}

#[derive(Serialize)]
struct CountJson<'a> {
    kind: &'a str,
    n: usize,
    count: String,
}

fn cmd_count(args: CountArgs) -> Result<(), CmdError> {
    let (label, n, count): (&str, usize, Nat) = match args.kind {
        CountKind::Ssl | CountKind::Ssd => {
            if args.h.is_some() {
                return Err(CmdError::Usage("--h only applies to --kind dist".into()));
            }
            let n = args
                .n
                .ok_or_else(|| CmdError::Usage("--n is required for ssl and ssd".into()))?;
            let mut engine = CountEngine::<Nat>::new();
            let (label, count) = match args.kind {
                CountKind::Ssl => ("ssl", engine.count_ssl(n)),
                CountKind::Ssd => ("ssd", engine.count_ssd(n)),
                CountKind::Dist => unreachable!(),
            };
            let count = count.map_err(|e| CmdError::Usage(e.to_string()))?;
            (label, n, count)
        }
        CountKind::Dist => {
            if args.n.is_some() {
                return Err(CmdError::Usage("--n only applies to ssl and ssd".into()));
            }
            let h = args
                .h
                .ok_or_else(|| CmdError::Usage("--h is required for dist".into()))?;
            (
                "dist",
                h,
                slimcount::count_distributive_diagrams::<Nat>(h),
            )
        }
    };
    match args.format {
        CountFormat::Plain => println!("{count}"),
        CountFormat::Json => {
            let doc = CountJson {
                kind: label,
                n,
                count: count.to_string(),
            };
            println!(
                "{}",
                serde_json::to_string(&doc).expect("count serialization cannot fail")
            );
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct TableJson {
    kind: String,
    max_h: usize,
    max_k: usize,
    entries: Vec<TableEntryJson>,
}

#[derive(Serialize)]
struct TableEntryJson {
    h: usize,
    k: usize,
    value: String,
}

fn resolve_cache_dir(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
}

fn compute_table(kind: TableKind, max_h: usize, max_k: usize) -> Result<NatTable, CmdError> {
    let mut engine = CountEngine::<Nat>::new();
    engine
        .ensure(kind, max_h, max_k)
        .map_err(|e| CmdError::Usage(e.to_string()))?;
    Ok(engine.table(kind).expect("just ensured").clone())
}

fn cmd_table(args: TableArgs) -> Result<(), CmdError> {
    let kind = args.function.kind();
    let max_h = args.max_h;
    let max_k = args.max_k.unwrap_or_else(|| max_inversions(max_h));
    let cache_dir = resolve_cache_dir(args.cache_dir);

    let mut table: Option<NatTable> = None;
    if let Some(dir) = &cache_dir {
        table = cache::load_covering(dir, kind, max_h, max_k);
    }
    let table = match table {
        Some(table) => table,
        None => {
            let computed = compute_table(kind, max_h, max_k)?;
            if let Some(dir) = &cache_dir {
                if let Err(e) = cache::store(dir, &computed, args.cache_format.format()) {
                    eprintln!("warning: cannot write cache under {}: {e}", dir.display());
                }
            }
            computed
        }
    };

    match args.format {
        TableFormat::Csv => {
            println!("h,k,value");
            for h in 0..=max_h {
                for k in 0..=max_inversions(h).min(max_k) {
                    let v = table.get(h, k).expect("within requested bounds");
                    println!("{h},{k},{v}");
                }
            }
        }
        TableFormat::Json => {
            let mut entries = Vec::new();
            for h in 0..=max_h {
                for k in 0..=max_inversions(h).min(max_k) {
                    let v = table.get(h, k).expect("within requested bounds");
                    entries.push(TableEntryJson {
                        h,
                        k,
                        value: v.to_string(),
                    });
                }
            }
            let doc = TableJson {
                kind: kind.code().to_string(),
                max_h,
                max_k,
                entries,
            };
            println!(
                "{}",
                serde_json::to_string(&doc).expect("table serialization cannot fail")
            );
        }
    }
    Ok(())
}

fn parse_perm(input: &str) -> Result<Permutation, CmdError> {
    let trimmed = input.trim();
    if trimmed.is_empty() {
        return Err(CmdError::Usage("empty permutation".into()));
    }
    let mut image = Vec::new();
    for part in trimmed.split(',') {
        let value: usize = part
            .trim()
            .parse()
            .map_err(|_| CmdError::Usage(format!("cannot parse {:?} as a value", part.trim())))?;
        image.push(value);
    }
    Permutation::from_image(image).map_err(|e| CmdError::Usage(e.to_string()))
}

fn yes_no(v: bool) -> &'static str {
    if v {
        "yes"
    } else {
        "no"
    }
}

fn cmd_build(args: BuildArgs) -> Result<(), CmdError> {
    let p = parse_perm(&args.perm)?;
    let diagram = build_diagram(&p);
    let lattice = diagram.lattice();
    eprintln!(
        "h={} inv={} size={} slim={} semimodular={} distributive={}",
        p.degree(),
        p.inversions(),
        lattice.size(),
        yes_no(lattice.is_slim()),
        yes_no(lattice.is_semimodular()),
        yes_no(lattice.is_distributive()),
    );
    match args.out {
        BuildFormat::Dot => print!("{}", diagram.to_dot()),
        BuildFormat::Json => println!("{}", diagram.to_json_string()),
    }
    Ok(())
}

fn cmd_segments(args: SegmentsArgs) -> Result<(), CmdError> {
    let p = parse_perm(&args.perm)?;
    let segments = p.segments().expect("degree is at least 1 after parsing");
    let (head, body) = p.head_body().expect("degree is at least 1 after parsing");
    let rendered: Vec<String> = segments
        .iter()
        .map(|(start, end)| {
            let members: Vec<String> = (start..=end).map(|s| s.to_string()).collect();
            format!("{{{}}}", members.join(","))
        })
        .collect();
    println!("perm: {p}");
    println!("degree: {}", p.degree());
    println!("segments: {}", rendered.join("|"));
    println!("head: {head}");
    if body.degree() == 0 {
        println!("body: (empty)");
    } else {
        println!("body: {body}");
    }
    println!(
        "irreducible: {}",
        yes_no(p.is_irreducible().expect("degree is at least 1"))
    );
    println!("involution: {}", yes_no(p.is_involution()));
    println!("inversions: {}", p.inversions());
    println!("block: {}", p.block_canonical().canonical());
    Ok(())
}
