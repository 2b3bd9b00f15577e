use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cranklab_core::congruence::{
    compute_sl, scan_progressions, scan_progressions_par, sweep_ahlgren_ono, sweep_ono,
    verify_progression, PartitionOracle, ProgressionWitness, ScanParams, DEFAULT_BUDGET,
};
use cranklab_core::qseries::{crank_generating_series, euler_partition_series};
use cranklab_core::tables::{
    verify_dyson_crank_guess, verify_dyson_rank, verify_ramanujan, verify_theta_form,
};
use cranklab_core::{
    partition_count, CongruenceReport, ResidueTable, StatKind, StatTable, Verdict,
};
use serde_json::{json, Value};

use crate::cache::{self, CacheKind, CacheStatus, CachedData};
use crate::output::{self, ReportDocument};

/// Largest `n` for exact (non-modular) `p(n)` output.
pub const EXACT_PCOUNT_LIMIT: u64 = 50_000;
/// Largest `n` for rank tables, which are built by enumeration.
pub const RANK_ENUMERATION_LIMIT: usize = 72;
/// Largest precision for the crank series (cubic cost).
pub const CRANK_SERIES_LIMIT: usize = 3_000;

#[derive(Debug, Parser)]
#[command(
    name = "cranklab",
    version,
    about = "Partition counts, rank/crank tables and partition congruence checks"
)]
pub struct Cli {
    /// Directory for cached tables.
    #[arg(long, global = true, env = "CRANKLAB_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Ceiling on n for p(n) residue computations.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Rank,
    Crank,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesArg {
    /// prod (1 - q^k)^-1, coefficients p(n)
    Euler,
    /// the two-variable crank product
    Crank,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print p(n), or p(n) mod M.
    Pcount {
        n: u64,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Rank or crank histogram (n,m,count) or residue classes (n,residue,count).
    Table {
        #[arg(value_enum)]
        kind: KindArg,
        n: usize,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Dump a truncated generating series.
    Series {
        #[arg(value_enum)]
        which: SeriesArg,
        n: usize,
        #[arg(long = "mod")]
        modulus: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check a congruence family and report every instance.
    Verify {
        #[command(subcommand)]
        family: Family,
    },
    /// Search for progressions Ak+B with every crank class mod l^j divisible by l^i.
    Scan {
        #[arg(long)]
        l: i64,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
        #[arg(long)]
        amax: u64,
        #[arg(long, default_value_t = 1)]
        kmin: u64,
        /// Crank table precision.
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print theta_l, x_l and the residue set S_l.
    Sl { l: i64 },
    /// Manage the table cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Write the JSON report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `summary` prints one line; `json` prints the full report.
    #[arg(long, value_enum, default_value = "summary")]
    pub format: ReportFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Summary,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// p(5n+4), p(7n+5), p(11n+6), p(25n+24).
    Ramanujan {
        #[arg(long)]
        nmax: usize,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// l | p(l n - theta_l).
    Theta {
        #[arg(long)]
        l: i64,
        #[arg(long)]
        nmax: usize,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Equal rank classes mod 5 of 5k+4 and mod 7 of 7k+5.
    DysonRank {
        #[arg(long)]
        kmax: usize,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Equal crank classes mod 11 of 11k+6.
    DysonCrank {
        #[arg(long)]
        kmax: usize,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// p((l^k m^3 n + 1)/24) = 0 mod l.
    Ono {
        #[arg(long)]
        l: i64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        nmax: u64,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// p((I^3 n + 1)/24) = 0 mod l^k.
    AhlgrenOno {
        #[arg(long)]
        l: i64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// The prime I = -1 mod 24l.
        #[arg(long = "iprime")]
        iprime: u64,
        #[arg(long)]
        y: Option<u64>,
        #[arg(long)]
        nmax: u64,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// M(m, l^j, Ak+B) = 0 mod l^i for every m and k <= kmax.
    MahlburgProgression {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
        #[arg(long)]
        kmax: u64,
        #[command(flatten)]
        report: ReportArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum CacheAction {
    /// Build (or refresh) a cache file up to n.
    Build { kind: String, n: usize },
    /// Show the envelope of a cache file.
    Info { kind: String },
    /// Remove all cache files.
    Clear,
}

/// Errors that end the process with exit code 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(cranklab_core::Error),
    Io(io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "I/O error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<cranklab_core::Error> for CliError {
    fn from(e: cranklab_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<cache::CacheError> for CliError {
    fn from(e: cache::CacheError) -> Self {
        match e {
            cache::CacheError::Io(e) => CliError::Io(e),
            cache::CacheError::Build(e) => CliError::Core(e),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    /// A verification found failures that count against its family.
    VerificationFailed,
}

struct Context<'a> {
    cache_dir: Option<PathBuf>,
    budget: u64,
    stderr: &'a mut dyn Write,
}

impl Context<'_> {
    fn table(&mut self, kind: StatKind, n: usize) -> Result<StatTable, CliError> {
        match kind {
            StatKind::Rank if n > RANK_ENUMERATION_LIMIT => return Err(CliError::Usage(format!(
                "rank tables are built by enumeration and limited to n <= {RANK_ENUMERATION_LIMIT}"
            ))),
            StatKind::Crank if n > CRANK_SERIES_LIMIT => {
                return Err(CliError::Usage(format!(
                    "crank tables are limited to n <= {CRANK_SERIES_LIMIT}"
                )))
            }
            _ => {}
        }
        let cache_kind = match kind {
            StatKind::Rank => CacheKind::RankTable,
            StatKind::Crank => CacheKind::CrankTable,
        };
        let data = self.cached(cache_kind, n)?;
        Ok(data.into_table().expect("table kinds hold tables"))
    }

    fn cached(&mut self, kind: CacheKind, n: usize) -> Result<CachedData, CliError> {
        let Some(dir) = self.cache_dir.clone() else {
            return Ok(cache::build(kind, n)?);
        };
        let (data, status) = cache::load_or_build(kind, n, &cache::path_in(&dir, kind))?;
        if let CacheStatus::Built {
            reason: Some(reason),
        } = status
        {
            writeln!(self.stderr, "warning: rebuilt {kind} cache ({reason})")?;
        }
        Ok(data)
    }
}

fn write_to(
    path: Option<&Path>,
    stdout: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> io::Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()
        }
        None => f(stdout),
    }
}

fn params(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn summary_line(report: &CongruenceReport) -> String {
    let s = report.summary();
    let mut line = format!(
        "{}: {} instances, {} hold, {} failures",
        report.family(),
        s.total,
        s.holds,
        s.fails
    );
    if report.failures_expected() && s.fails > 0 {
        line.push_str(" (expected for this family)");
    }
    if s.not_applicable > 0 {
        line.push_str(&format!(", {} not applicable", s.not_applicable));
    }
    if s.out_of_budget > 0 {
        line.push_str(&format!(", {} out of budget", s.out_of_budget));
    }
    line
}

fn emit_report(
    command: &str,
    parameters: BTreeMap<String, Value>,
    report: &CongruenceReport,
    args: &ReportArgs,
    started: Instant,
    stdout: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let mut doc = ReportDocument::new(
        command,
        parameters,
        serde_json::to_value(report).map_err(io::Error::other)?,
    );
    doc.timing_ms = started.elapsed().as_secs_f64() * 1e3;
    if let Some(path) = &args.out {
        write_to(Some(path), stdout, |w| output::write_json(w, &doc))?;
    }
    match args.format {
        ReportFormat::Json => output::write_json(stdout, &doc)?,
        ReportFormat::Summary => writeln!(stdout, "{}", summary_line(report))?,
    }
    Ok(if report.unexpected_failures() > 0 {
        Outcome::VerificationFailed
    } else {
        Outcome::Ok
    })
}

/// Runs one parsed command, writing results to `stdout` and diagnostics to `stderr`.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<Outcome, CliError> {
    let mut ctx = Context {
        cache_dir: cli.cache_dir,
        budget: cli.budget,
        stderr,
    };
    let started = Instant::now();
    match cli.command {
        Command::Pcount { n, modulus } => {
            if n > ctx.budget {
                return Err(CliError::Usage(format!(
                    "n = {n} exceeds the budget {}",
                    ctx.budget
                )));
            }
            match modulus {
                Some(0) => return Err(CliError::Usage("--mod must be positive".into())),
                Some(m) => {
                    let r = ResidueTable::new(m).get(n as usize);
                    writeln!(stdout, "{r}")?;
                }
                None => {
                    if n > EXACT_PCOUNT_LIMIT {
                        return Err(CliError::Usage(format!(
                            "exact p(n) is limited to n <= {EXACT_PCOUNT_LIMIT}; use --mod"
                        )));
                    }
                    let value = if ctx.cache_dir.is_some() {
                        let counts = ctx.cached(CacheKind::PartitionCounts, n as usize)?;
                        counts.into_counts().expect("counts")[n as usize].clone()
                    } else {
                        partition_count(n as usize)
                    };
                    writeln!(stdout, "{value}")?;
                }
            }
            Ok(Outcome::Ok)
        }
        Command::Table {
            kind,
            n,
            q,
            out,
            format,
        } => {
            let kind = match kind {
                KindArg::Rank => StatKind::Rank,
                KindArg::Crank => StatKind::Crank,
            };
            if q == Some(0) {
                return Err(CliError::Usage("--q must be positive".into()));
            }
            let table = ctx.table(kind, n)?;
            write_to(out.as_deref(), stdout, |w| match (format, q) {
                (Format::Csv, None) => output::table_csv(w, &table),
                (Format::Csv, Some(q)) => output::classes_csv(w, &table, q),
                (Format::Json, None) => output::write_json(w, &output::table_json(&table)),
                (Format::Json, Some(q)) => output::write_json(w, &output::classes_json(&table, q)?),
            })?;
            Ok(Outcome::Ok)
        }
        Command::Series {
            which,
            n,
            modulus,
            out,
            format,
        } => {
            match which {
                SeriesArg::Euler => {
                    if n as u64 > EXACT_PCOUNT_LIMIT {
                        return Err(CliError::Usage(format!(
                            "precision limited to {EXACT_PCOUNT_LIMIT}"
                        )));
                    }
                    let mut s = euler_partition_series(n);
                    if let Some(m) = modulus {
                        s = s.reduce_mod(m)?;
                    }
                    write_to(out.as_deref(), stdout, |w| match format {
                        Format::Json => {
                            output::write_json(w, &output::series_json(&s, "euler", modulus))
                        }
                        Format::Csv => output::series_csv(w, &s),
                    })?;
                }
                SeriesArg::Crank => {
                    if n > CRANK_SERIES_LIMIT {
                        return Err(CliError::Usage(format!(
                            "precision limited to {CRANK_SERIES_LIMIT}"
                        )));
                    }
                    let mut s = crank_generating_series(n);
                    if let Some(m) = modulus {
                        s = s.reduce_mod(m)?;
                    }
                    write_to(out.as_deref(), stdout, |w| match format {
                        Format::Json => {
                            output::write_json(w, &output::bivariate_json(&s, "crank", modulus))
                        }
                        Format::Csv => output::bivariate_csv(w, &s),
                    })?;
                }
            }
            Ok(Outcome::Ok)
        }
        Command::Verify { family } => run_verify(&mut ctx, family, started, stdout),
        Command::Scan {
            l,
            i,
            j,
            amax,
            kmin,
            nmax,
            parallel,
            out,
        } => {
            let params = ScanParams {
                l: l.max(0) as u64,
                i,
                j,
                a_max: amax,
                k_min: kmin,
            };
            let table = ctx.table(StatKind::Crank, nmax)?;
            let witnesses = if parallel {
                scan_progressions_par(&params, &table)?
            } else {
                scan_progressions(&params, &table)?
            };
            let mut doc = ReportDocument::new(
                "scan",
                params_of_scan(&params, nmax),
                json!({
                    "framing": "empirical, bounded: each witness holds for every term inside the table",
                    "witnesses": witnesses,
                }),
            );
            doc.timing_ms = started.elapsed().as_secs_f64() * 1e3;
            write_to(out.as_deref(), stdout, |w| output::write_json(w, &doc))?;
            Ok(Outcome::Ok)
        }
        Command::Sl { l } => {
            let sl = compute_sl(l)?;
            output::write_json(stdout, &sl)?;
            Ok(Outcome::Ok)
        }
        Command::Cache { action } => run_cache(&mut ctx, action, stdout),
    }
}

fn params_of_scan(p: &ScanParams, nmax: usize) -> BTreeMap<String, Value> {
    params(&[
        ("l", json!(p.l)),
        ("i", json!(p.i)),
        ("j", json!(p.j)),
        ("amax", json!(p.a_max)),
        ("kmin", json!(p.k_min)),
        ("nmax", json!(nmax)),
    ])
}

fn run_verify(
    ctx: &mut Context<'_>,
    family: Family,
    started: Instant,
    stdout: &mut dyn Write,
) -> Result<Outcome, CliError> {
    match family {
        Family::Ramanujan { nmax, report } => {
            if (25 * nmax + 24) as u64 > ctx.budget {
                return Err(CliError::Usage(format!(
                    "p(25*{nmax}+24) exceeds the budget"
                )));
            }
            let r = verify_ramanujan(nmax);
            emit_report(
                "verify ramanujan",
                params(&[("nmax", json!(nmax))]),
                &r,
                &report,
                started,
                stdout,
            )
        }
        Family::Theta { l, nmax, report } => {
            if (l.unsigned_abs() as u128) * (nmax as u128) > ctx.budget as u128 {
                return Err(CliError::Usage(format!("p({l}*{nmax}) exceeds the budget")));
            }
            let r = verify_theta_form(l, nmax)?;
            emit_report(
                "verify theta",
                params(&[("l", json!(l)), ("nmax", json!(nmax))]),
                &r,
                &report,
                started,
                stdout,
            )
        }
        Family::DysonRank { kmax, report } => {
            let table = ctx.table(StatKind::Rank, 7 * kmax + 5)?;
            let r = verify_dyson_rank(&table, kmax)?;
            emit_report(
                "verify dyson-rank",
                params(&[("kmax", json!(kmax))]),
                &r,
                &report,
                started,
                stdout,
            )
        }
        Family::DysonCrank { kmax, report } => {
            let table = ctx.table(StatKind::Crank, 11 * kmax + 6)?;
            let r = verify_dyson_crank_guess(&table, kmax)?;
            emit_report(
                "verify dyson-crank",
                params(&[("kmax", json!(kmax))]),
                &r,
                &report,
                started,
                stdout,
            )
        }
        Family::Ono {
            l,
            k,
            m,
            nmax,
            report,
        } => {
            let mut oracle = PartitionOracle::new(ctx.budget);
            let r = sweep_ono(l, k, m, nmax, &mut oracle)?;
            emit_report(
                "verify ono",
                params(&[
                    ("l", json!(l)),
                    ("k", json!(k)),
                    ("m", json!(m)),
                    ("nmax", json!(nmax)),
                    ("budget", json!(ctx.budget)),
                ]),
                &r,
                &report,
                started,
                stdout,
            )
        }
        Family::AhlgrenOno {
            l,
            k,
            iprime,
            y,
            nmax,
            report,
        } => {
            let mut oracle = PartitionOracle::new(ctx.budget);
            let r = sweep_ahlgren_ono(l, k, iprime, y, nmax, &mut oracle)?;
            emit_report(
                "verify ahlgren-ono",
                params(&[
                    ("l", json!(l)),
                    ("k", json!(k)),
                    ("iprime", json!(iprime)),
                    ("y", json!(y)),
                    ("nmax", json!(nmax)),
                    ("budget", json!(ctx.budget)),
                ]),
                &r,
                &report,
                started,
                stdout,
            )
        }
        Family::MahlburgProgression {
            a,
            b,
            l,
            i,
            j,
            kmax,
            report,
        } => {
            let needed = a
                .checked_mul(kmax)
                .and_then(|v| v.checked_add(b))
                .ok_or_else(|| CliError::Usage("A*kmax+B overflows".into()))?;
            let table = ctx.table(StatKind::Crank, needed as usize)?;
            let w = verify_progression(&ProgressionWitness::new(a, b, l, i, j, kmax), &table)?;
            let mut r = CongruenceReport::new(
                "mahlburg-progression",
                format!("M(m, {l}^{j}, {a}k+{b}) = 0 mod {l}^{i} for every m and k <= {kmax} (bounded, empirical)"),
            );
            r.push(
                cranklab_core::Instance::new(w.verdict)
                    .param("A", a)
                    .param("B", b)
                    .param("k_checked", kmax),
            );
            debug_assert!(w.verdict != Verdict::NotApplicable);
            emit_report(
                "verify mahlburg-progression",
                params(&[
                    ("a", json!(a)),
                    ("b", json!(b)),
                    ("l", json!(l)),
                    ("i", json!(i)),
                    ("j", json!(j)),
                    ("kmax", json!(kmax)),
                ]),
                &r,
                &report,
                started,
                stdout,
            )
        }
    }
}

fn run_cache(
    ctx: &mut Context<'_>,
    action: CacheAction,
    stdout: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let dir = ctx.cache_dir.clone().ok_or_else(|| {
        CliError::Usage("cache commands need --cache-dir or CRANKLAB_CACHE_DIR".into())
    })?;
    let parse_kind = |s: &str| {
        CacheKind::parse(s).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown cache kind {s:?} (partition_counts, rank_table, crank_table)"
            ))
        })
    };
    match action {
        CacheAction::Build { kind, n } => {
            let kind = parse_kind(&kind)?;
            match kind {
                CacheKind::RankTable => {
                    ctx.table(StatKind::Rank, n)?;
                }
                CacheKind::CrankTable => {
                    ctx.table(StatKind::Crank, n)?;
                }
                CacheKind::PartitionCounts => {
                    if n as u64 > EXACT_PCOUNT_LIMIT {
                        return Err(CliError::Usage(format!(
                            "exact p(n) is limited to n <= {EXACT_PCOUNT_LIMIT}"
                        )));
                    }
                    ctx.cached(kind, n)?;
                }
            }
            writeln!(stdout, "{}", cache::path_in(&dir, kind).display())?;
        }
        CacheAction::Info { kind } => {
            let kind = parse_kind(&kind)?;
            let path = cache::path_in(&dir, kind);
            let bytes = std::fs::read(&path)?;
            let env: cache::CacheEnvelope =
                serde_json::from_slice(&bytes).map_err(io::Error::other)?;
            let valid = cache::checksum(&env.payload) == env.checksum;
            output::write_json(
                stdout,
                &json!({
                    "path": path.display().to_string(),
                    "format_version": env.format_version,
                    "kind": env.kind,
                    "max_n": env.max_n,
                    "checksum": env.checksum,
                    "checksum_valid": valid,
                }),
            )?;
        }
        CacheAction::Clear => {
            for kind in [
                CacheKind::PartitionCounts,
                CacheKind::RankTable,
                CacheKind::CrankTable,
            ] {
                let path = cache::path_in(&dir, kind);
                if path.exists() {
                    std::fs::remove_file(&path)?;
                    writeln!(stdout, "removed {}", path.display())?;
                }
            }
        }
    }
    Ok(Outcome::Ok)
}
