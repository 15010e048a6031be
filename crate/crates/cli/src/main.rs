mod cache;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use commperm::bijection::{verify_cardinality, verify_round_trip};
use commperm::check::CheckReport;
use commperm::conjecture::{sweep_table, SweepReport};
use commperm::counting::{a_transitive, reduction_rhs, CountTable};
use commperm::numtheory::BMethod;
use commperm::oracle::{compare_with_table, histogram_parallel, DEFAULT_CEILING};
use commperm::records::{write_csv, write_jsonl, CountRecord};
use commperm::series::{darcais_polys, nekrasov_okounkov_poly, shift_check, verify_bryan_fulman, RatPolynomial};
use commperm::Error;

use cache::{load_or_build, CacheFile, Loaded};

const EXIT_USAGE: u8 = 1;
const EXIT_MISMATCH: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "commperm", version, about = "Commuting tuples of permutations counted by orbits")]
struct Cli {
    /// Output format for values and reports.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Multiplicative,
    Flag,
    Dirichlet,
}

impl From<Method> for BMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Multiplicative => BMethod::Multiplicative,
            Method::Flag => BMethod::Flag,
            Method::Dirichlet => BMethod::Dirichlet,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// B(p, n), the weighted count of divisor chains of length p-1 ending at n.
    B {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Method::Multiplicative)]
        method: Method,
    },
    /// A(p, n, k), a row A(p, n, ·), or the whole table up to --table.
    A(AArgs),
    /// Polynomials P_n(x) with n! P_n(x) = Σ_k A(p,n,k) x^k, for n ≤ --n.
    Darcais {
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long)]
        n: usize,
    },
    /// Hook-length polynomial Q_n(x) = Σ_λ Π (1 + x/h²).
    Nekrasov {
        #[arg(long)]
        n: usize,
    },
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Log-concavity sweep of A(p, n, ·) in k.
    Conjecture {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n_max: usize,
        /// Read the table from this cache if it covers the sweep, else compute
        /// and store it there.
        #[arg(long)]
        resume: Option<Option<PathBuf>>,
    },
    /// Manage the table cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Args)]
struct AArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, conflicts_with = "table")]
    n: Option<usize>,
    #[arg(long, requires = "n")]
    k: Option<usize>,
    /// Every row n ≤ N.
    #[arg(long)]
    table: Option<usize>,
    /// Read and update the table cache.
    #[arg(long)]
    cache: Option<Option<PathBuf>>,
}

#[derive(Subcommand)]
enum Suite {
    /// Brute-force enumeration against the recurrence.
    Oracle {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: usize,
        /// Refuse runs whose estimated tuple count exceeds this.
        #[arg(long, default_value_t = DEFAULT_CEILING)]
        budget: f64,
    },
    /// Decompose/reconstruct every transitive (p+1)-tuple on n points and
    /// check the witness counts.
    Bijection {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_CEILING)]
        budget: f64,
    },
    /// Product form of the generating function, truncated at u^order.
    Bryanfulman {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 20)]
        order: usize,
    },
    /// Q_n(x) = P_n(x+1) for n ≤ n-max.
    Shift {
        #[arg(long, default_value_t = 24)]
        n_max: usize,
    },
    /// Transitive counts at p+1 from the factorization over r·s = n.
    Reduction {
        #[arg(long, default_value_t = 4)]
        p_max: u32,
        #[arg(long, default_value_t = 40)]
        n_max: usize,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    /// Compute tables for p ≤ p-max, n ≤ n-max and store them.
    Build {
        #[arg(long)]
        p_max: u32,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        path: Option<PathBuf>,
    },
    /// Validate the cache and print its range.
    Info {
        #[arg(long)]
        path: Option<PathBuf>,
    },
    /// Delete the cache file.
    Clear {
        #[arg(long)]
        path: Option<PathBuf>,
    },
}

/// Error carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let code = match e.downcast_ref::<Error>() {
            Some(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: format!("{:#}", e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::new(e).into()
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {}", e);
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let out = &mut io::stdout().lock();
    match &cli.command {
        Command::B { p, n, method } => {
            if *n == 0 {
                return Err(Error::NotPositive("n").into());
            }
            let v = BMethod::from(*method).eval(*p, *n)?;
            match cli.format {
                Format::Human => writeln!(out, "{}", v)?,
                Format::Csv => writeln!(out, "p,n,value\n{},{},{}", p, n, v)?,
                Format::Json => writeln!(out, "{}", serde_json::json!({"p": p, "n": n, "value": v.to_string()}))?,
            }
            Ok(0)
        }
        Command::A(args) => cmd_a(cli.format, args, out),
        Command::Darcais { p, n } => {
            let polys = darcais_polys(*p, *n)?;
            print_polys(cli.format, polys.iter().enumerate(), out)?;
            Ok(0)
        }
        Command::Nekrasov { n } => {
            let q = nekrasov_okounkov_poly(*n);
            print_polys(cli.format, std::iter::once((*n, &q)), out)?;
            Ok(0)
        }
        Command::Verify { suite } => cmd_verify(cli.format, suite, out),
        Command::Conjecture { p, n_max, resume } => cmd_conjecture(cli.format, *p, *n_max, resume, out),
        Command::Cache { action } => cmd_cache(action, out),
    }
}

fn print_records(format: Format, records: &[CountRecord], out: &mut impl Write) -> Result<(), Failure> {
    match format {
        Format::Human => {
            for r in records {
                writeln!(out, "A({},{},{}) = {}", r.p, r.n, r.k, r.value)?;
            }
        }
        Format::Csv => write_csv(records, &mut *out)?,
        Format::Json => write_jsonl(records, &mut *out)?,
    }
    Ok(())
}

fn cmd_a(format: Format, args: &AArgs, out: &mut impl Write) -> Outcome {
    let n_max = match (args.n, args.table) {
        (Some(n), None) => n,
        (None, Some(t)) => t,
        _ => return Err(Error::InvalidRange("give --n (with optional --k) or --table".into()).into()),
    };
    let table = match &args.cache {
        Some(path) => {
            let path = cache::resolve_path(path.as_deref());
            let loaded = load_or_build(&path, &[args.p], n_max)?;
            if let Loaded::Computed { reason, .. } = &loaded {
                eprintln!("cache {}: {}; recomputed", path.display(), reason);
            }
            match loaded {
                Loaded::Hit(t) | Loaded::Computed { table: t, .. } => t,
            }
        }
        None => CountTable::build_for(&[args.p], n_max)?,
    };
    if let (Some(n), Some(k)) = (args.n, args.k) {
        let v = table.a(args.p, n, k).expect("table covers n");
        match format {
            Format::Human => writeln!(out, "{}", v)?,
            _ => print_records(format, &[CountRecord::new(args.p, n, k, &v)], out)?,
        }
        return Ok(0);
    }
    let records: Vec<CountRecord> = match args.n {
        Some(n) => table
            .records_for(args.p)
            .into_iter()
            .filter(|r| r.n == n)
            .collect(),
        None => table.records_for(args.p).into_iter().filter(|r| r.n <= n_max).collect(),
    };
    print_records(format, &records, out)?;
    Ok(0)
}

fn print_polys<'a>(
    format: Format,
    polys: impl Iterator<Item = (usize, &'a RatPolynomial)>,
    out: &mut impl Write,
) -> Result<(), Failure> {
    if format == Format::Csv {
        writeln!(out, "n,degree,coeff")?;
    }
    for (n, poly) in polys {
        match format {
            Format::Human => writeln!(out, "n={}: {}", n, poly)?,
            Format::Json => writeln!(out, "{}", serde_json::to_string(&poly.to_json(n)).map_err(anyhow::Error::from)?)?,
            Format::Csv => {
                for (d, c) in poly.coeffs().iter().enumerate() {
                    writeln!(out, "{},{},{}/{}", n, d, c.numer(), c.denom())?;
                }
            }
        }
    }
    Ok(())
}

fn emit_check(format: Format, report: &CheckReport, out: &mut impl Write) -> Outcome {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(report).map_err(anyhow::Error::from)?)?,
        Format::Csv => writeln!(
            out,
            "name,passed,checked\n\"{}\",{},{}",
            report.name,
            report.passed(),
            report.checked
        )?,
        Format::Human => writeln!(out, "{}", report)?,
    }
    Ok(if report.passed() { 0 } else { EXIT_MISMATCH })
}

fn cmd_verify(format: Format, suite: &Suite, out: &mut impl Write) -> Outcome {
    let report = match suite {
        Suite::Oracle { p, n, budget } => {
            let hist = histogram_parallel(*p, *n, *budget)?;
            let table = CountTable::build_for(&[*p as u32], *n)?;
            compare_with_table(&hist, &table)?
        }
        Suite::Bijection { p, n, budget } => {
            commperm::oracle::enumerate_commuting_with_budget(p + 1, *n, *budget)?;
            let mut report = verify_round_trip(*p, *n)?;
            report.absorb(verify_cardinality(*p, *n)?.check);
            report.name = format!("bijection p+1={} n={}", p + 1, n);
            report
        }
        Suite::Bryanfulman { p, order } => verify_bryan_fulman(*p, *order)?,
        Suite::Shift { n_max } => shift_check(*n_max)?,
        Suite::Reduction { p_max, n_max } => {
            let mut report = CheckReport::new(format!("reduction p<={} n<={}", p_max, n_max));
            for p in 0..=*p_max {
                for n in 1..=*n_max {
                    report.compare(
                        || format!("p={} n={}", p, n),
                        &a_transitive(p + 1, n)?,
                        &reduction_rhs(p, n)?,
                    );
                }
            }
            report
        }
    };
    emit_check(format, &report, out)
}

fn cmd_conjecture(
    format: Format,
    p: u32,
    n_max: usize,
    resume: &Option<Option<PathBuf>>,
    out: &mut impl Write,
) -> Outcome {
    if p == 0 {
        return Err(Error::NotPositive("p").into());
    }
    if n_max < 3 {
        return Err(Error::InvalidRange(format!("n-max = {} < 3", n_max)).into());
    }
    let start = std::time::Instant::now();
    let loaded;
    let built;
    let table = match resume {
        Some(path) => {
            let path = cache::resolve_path(path.as_deref());
            loaded = load_or_build(&path, &[p], n_max).context("loading cache")?;
            match &loaded {
                Loaded::Hit(_) => eprintln!("resumed from {}", path.display()),
                Loaded::Computed { reason, .. } => eprintln!("cache {}: {}; recomputed", path.display(), reason),
            }
            loaded.table()
        }
        None => {
            built = CountTable::build_for(&[p], n_max)?;
            &built
        }
    };
    let mut report: SweepReport = sweep_table(table, p, n_max)?;
    report.wall_time_ms = start.elapsed().as_millis();
    match format {
        Format::Json => {
            let summary = serde_json::json!({
                "p": report.p,
                "n_max": report.n_max,
                "violations": report.violations,
                "max_n_checked": report.max_n_checked,
                "wall_time_ms": report.wall_time_ms,
            });
            writeln!(out, "{}", summary)?;
        }
        Format::Csv => {
            writeln!(out, "n,checked,violations")?;
            for row in &report.rows {
                writeln!(out, "{},{},{}", row.n, row.checked, row.violations)?;
            }
        }
        Format::Human => {
            writeln!(
                out,
                "p={} n<={}: {} inequalities checked, {} violations",
                p,
                n_max,
                report.checked(),
                report.violations.len()
            )?;
            for v in &report.violations {
                let kind = match v.kind {
                    commperm::conjecture::ViolationKind::Regression => "regression",
                    commperm::conjecture::ViolationKind::CounterexampleCandidate => {
                        "counterexample candidate (needs independent confirmation)"
                    }
                };
                writeln!(out, "  n={} k={}: {}", v.n, v.k, kind)?;
            }
            eprintln!("wall time {} ms", report.wall_time_ms);
        }
    }
    Ok(if report.passed() { 0 } else { EXIT_MISMATCH })
}

fn cmd_cache(action: &CacheAction, out: &mut impl Write) -> Outcome {
    match action {
        CacheAction::Build { p_max, n_max, path } => {
            let path = cache::resolve_path(path.as_deref());
            let table = CountTable::build(*p_max, *n_max)?;
            CacheFile::write(&table, &path)?;
            writeln!(out, "wrote p<={} n<={} to {}", p_max, n_max, path.display())?;
            Ok(0)
        }
        CacheAction::Info { path } => {
            let path = cache::resolve_path(path.as_deref());
            match CacheFile::read(&path) {
                Ok(table) => {
                    let ps: Vec<String> = table.ps().map(|p| p.to_string()).collect();
                    writeln!(out, "{}: valid, p in {{{}}}, n<={}", path.display(), ps.join(","), table.n_max())?;
                    Ok(0)
                }
                Err(why) => {
                    writeln!(out, "{}: invalid ({})", path.display(), why)?;
                    Ok(EXIT_MISMATCH)
                }
            }
        }
        CacheAction::Clear { path } => {
            let path = cache::resolve_path(path.as_deref());
            if path.exists() {
                std::fs::remove_file(&path)?;
                writeln!(out, "removed {}", path.display())?;
            } else {
                writeln!(out, "{} does not exist", path.display())?;
            }
            Ok(0)
        }
    }
}
