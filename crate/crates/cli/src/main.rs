//! Batch front end: cocycle tables, verification reports and catalog runs.

mod checks;
mod selftest;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use fundclass::catalog::{group_for_level, Catalog, CatalogEntry};
use fundclass::galois::{compute_automorphisms, GaloisGroup};
use fundclass::lfc::{lfc_run, stable_level, Base, CocycleDump, TwoCocycle};
use fundclass::local_field::{FieldDescriptor, LocalField};
use fundclass::Error;
use rayon::prelude::*;
use serde::Serialize;

use checks::{run_check, skipped, Check, CheckOutcome, Status};

#[derive(Parser)]
#[command(name = "fundclass", version, about = "Explicit local fundamental classes over Q_p")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the fundamental class and write its cocycle table.
    Lfc(LfcArgs),
    /// Run verification checks on a field or on a stored cocycle.
    Verify(VerifyArgs),
    /// Run lfc and checks over a catalog of fields.
    Catalog(CatalogArgs),
    /// Quick internal consistency run.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct LfcArgs {
    /// Field descriptor JSON.
    #[arg(long)]
    field: PathBuf,
    /// Level k, or `auto` for the stable level of each field.
    #[arg(long, default_value = "6")]
    k: Level,
    /// Subgroup of Gal(L/Q_p) whose fixed field is the base (comma separated indices).
    #[arg(long)]
    base: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Field descriptor JSON; not needed with --cocycle.
    #[arg(long)]
    field: Option<PathBuf>,
    /// Cocycle dump written by `lfc`.
    #[arg(long)]
    cocycle: Option<PathBuf>,
    /// Level k, or `auto` for the stable level of each field.
    #[arg(long, default_value = "6")]
    k: Level,
    #[arg(long, default_value = "cocycle")]
    checks: String,
    /// Lift the oracle size guards.
    #[arg(long)]
    force: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CatalogArgs {
    /// Catalog JSON; the shipped catalog when absent.
    #[arg(long)]
    field: Option<PathBuf>,
    /// Restrict to these primes (comma separated).
    #[arg(long)]
    primes: Option<String>,
    #[arg(long)]
    max_degree: Option<usize>,
    /// Level k, or `auto` for the stable level of each field.
    #[arg(long, default_value = "6")]
    k: Level,
    #[arg(long, default_value = "cocycle,unramified-exact")]
    checks: String,
    #[arg(long)]
    force: bool,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 20240229)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::NotGalois { .. }) => 2,
        Some(Error::NotEisenstein(_)) => 3,
        Some(Error::PrecisionTooSmall(_) | Error::PrecisionExhausted(_)) => 4,
        Some(Error::OracleTooLarge(_)) => 5,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Lfc(a) => cmd_lfc(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Catalog(a) => cmd_catalog(a),
        Cmd::Selftest(a) => selftest::run(a.seed, a.out.as_deref()),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Level {
    Fixed(i64),
    Auto,
}

impl std::str::FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Level, String> {
        if s == "auto" {
            return Ok(Level::Auto);
        }
        match s.parse::<i64>() {
            Ok(k) if k >= 1 => Ok(Level::Fixed(k)),
            _ => Err(format!("expected a positive integer or `auto`, got `{s}`")),
        }
    }
}

impl Level {
    fn label(self) -> String {
        match self {
            Level::Fixed(k) => k.to_string(),
            Level::Auto => "auto".into(),
        }
    }
}

/// The level to use for `desc` and `Gal(L/Q_p)` at that level.
fn resolve(desc: &FieldDescriptor, k: Level) -> anyhow::Result<(i64, GaloisGroup)> {
    let k = match k {
        Level::Fixed(k) => k,
        Level::Auto => stable_level(&group_for_level(desc, 1)?)?,
    };
    Ok((k, group_for_level(desc, k)?))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let s = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&s).with_context(|| format!("parsing {}", path.display()))
}

/// Writes `value` as pretty JSON to `out` (atomically) or to stdout.
pub(crate) fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> anyhow::Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    match out {
        None => {
            std::io::stdout().write_all(s.as_bytes())?;
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(s.as_bytes())?;
            tmp.as_file().sync_all()?;
            tmp.persist(path).map_err(|e| anyhow!(e.error)).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}

fn parse_indices(s: &str) -> anyhow::Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<usize>().with_context(|| format!("bad index `{x}`")))
        .collect()
}

fn cmd_lfc(a: LfcArgs) -> anyhow::Result<bool> {
    let desc: FieldDescriptor = read_json(&a.field)?;
    let (k, full) = resolve(&desc, a.k)?;
    let base = match &a.base {
        None => Base::Qp,
        Some(s) => Base::Subgroup(parse_indices(s)?),
    };
    let run = lfc_run(&full, &base, k)?;
    emit(&run.dump()?, a.out.as_deref())?;
    Ok(true)
}

#[derive(Serialize)]
struct VerifyReport {
    field: FieldDescriptor,
    k: i64,
    degree: usize,
    base_members: Vec<usize>,
    pass: bool,
    checks: Vec<CheckOutcome>,
    lfc_millis: f64,
}

/// Overall verdict: every check that ran passed.
fn all_pass(checks: &[CheckOutcome]) -> bool {
    checks.iter().all(|c| c.status != Status::Fail)
}

fn load_cocycle(path: &Path) -> anyhow::Result<(GaloisGroup, TwoCocycle)> {
    let dump: CocycleDump = read_json(path)?;
    let u = TwoCocycle::from_dump(&dump)?;
    let full = compute_automorphisms(u.field())?;
    Ok((full, u))
}

fn cmd_verify(a: VerifyArgs) -> anyhow::Result<bool> {
    let checks = Check::parse_list(&a.checks).map_err(Error::InvalidInput)?;
    let t = Instant::now();
    let (full, u) = match (&a.cocycle, &a.field) {
        (Some(c), _) => load_cocycle(c)?,
        (None, Some(f)) => {
            let desc: FieldDescriptor = read_json(f)?;
            let (k, full) = resolve(&desc, a.k)?;
            let u = lfc_run(&full, &Base::Qp, k)?.cocycle;
            (full, u)
        }
        (None, None) => bail!(Error::InvalidInput("verify needs --field or --cocycle".into())),
    };
    let lfc_millis = t.elapsed().as_secs_f64() * 1e3;
    let outcomes = checks.iter().map(|&c| run_check(c, &full, &u, a.force)).collect::<Result<Vec<_>, _>>()?;
    let l: &LocalField = u.field();
    let report = VerifyReport {
        field: l.descriptor(),
        k: u.level(),
        degree: u.group().order(),
        base_members: u.members().to_vec(),
        pass: all_pass(&outcomes),
        checks: outcomes,
        lfc_millis,
    };
    emit(&report, a.out.as_deref())?;
    Ok(report.pass)
}

#[derive(Serialize)]
struct EntrySummary {
    name: String,
    k: i64,
    p: u64,
    degree: usize,
    e: usize,
    f: usize,
    group: String,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exit_code: Option<u8>,
    lfc_millis: f64,
    oracle_millis: f64,
    checks: Vec<CheckOutcome>,
}

#[derive(Serialize)]
struct CatalogSummary {
    k: String,
    checks: Vec<&'static str>,
    total: usize,
    passed: usize,
    entries: Vec<EntrySummary>,
}

fn run_entry(e: &CatalogEntry, level: Level, checks: &[Check], force: bool) -> EntrySummary {
    let mut s = EntrySummary {
        k: 0,
        name: e.name.clone(),
        p: e.field.p,
        degree: e.degree(),
        e: e.e(),
        f: e.field.f,
        group: e.group.clone(),
        pass: false,
        error: None,
        exit_code: None,
        lfc_millis: 0.0,
        oracle_millis: 0.0,
        checks: Vec::new(),
    };
    let res = (|| -> anyhow::Result<()> {
        let (k, full) = resolve(&e.field, level)?;
        s.k = k;
        let t = Instant::now();
        let u = lfc_run(&full, &Base::Qp, k)?.cocycle;
        s.lfc_millis = t.elapsed().as_secs_f64() * 1e3;
        for &c in checks {
            let o = match run_check(c, &full, &u, force) {
                Err(Error::OracleTooLarge(m)) => skipped(c, format!("oracle size guard: {m}")),
                r => r?,
            };
            if c != Check::UnramifiedExact {
                s.oracle_millis += o.millis;
            }
            s.checks.push(o);
        }
        Ok(())
    })();
    match res {
        Ok(()) => s.pass = all_pass(&s.checks),
        Err(err) => {
            s.exit_code = Some(exit_code(&err));
            s.error = Some(format!("{err:#}"));
        }
    }
    s
}

fn cmd_catalog(a: CatalogArgs) -> anyhow::Result<bool> {
    let checks = Check::parse_list(&a.checks).map_err(Error::InvalidInput)?;
    let catalog = match &a.field {
        None => Catalog::shipped(),
        Some(path) => Catalog::from_json(&fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)?,
    };
    let primes = match &a.primes {
        None => Vec::new(),
        Some(s) => parse_indices(s)?.into_iter().map(|x| x as u64).collect(),
    };
    let catalog = catalog.filter(&primes, a.max_degree);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(a.jobs).build()?;
    let entries: Vec<EntrySummary> =
        pool.install(|| catalog.entries.par_iter().map(|e| run_entry(e, a.k, &checks, a.force)).collect());
    let passed = entries.iter().filter(|e| e.pass).count();
    let summary = CatalogSummary {
        k: a.k.label(),
        checks: checks.iter().map(|c| c.name()).collect(),
        total: entries.len(),
        passed,
        entries,
    };
    for e in &summary.entries {
        let verdict = if e.pass { "ok" } else { "FAIL" };
        eprintln!(
            "{:<24} deg {:>2}  k {:>2}  {:>4}  lfc {:>9.1} ms  oracle {:>9.1} ms",
            e.name, e.degree, e.k, verdict, e.lfc_millis, e.oracle_millis
        );
    }
    emit(&summary, a.out.as_deref())?;
    Ok(summary.passed == summary.total)
}
