//! `hsl` — command-line front end for the exact verification suites.
//!
//! Every check is exact rational arithmetic; a run exits 0 only when every
//! assertion in the requested suites holds. Reports are deterministic for a
//! fixed seed (runtimes are opt-in via `--timings`).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hsl_core::harmonic::{self, BasisSpec, SpaceTag};
use hsl_core::report::{AggregateReport, SuiteReport};
use hsl_core::suites::{self, GridBounds};

#[derive(Parser)]
#[command(name = "hsl", version, about = "Exact verification of the higher spin operator calculus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one verification suite over a parameter grid.
    Check(CheckArgs),
    /// Print exact bases or operators in the canonical text form.
    Dump(DumpArgs),
    /// Run every suite over a grid and aggregate the results.
    ReportAll(ReportAllArgs),
    /// List the available suites, spaces and symbolic identities.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct CheckArgs {
    /// Suite name (see `hsl list`).
    suite: String,
    /// Dimension(s): a single value `5` or an inclusive range `5..7`.
    #[arg(long, default_value = "5")]
    m: String,
    /// Value degree(s).
    #[arg(long, default_value = "1")]
    k: String,
    /// Homogeneity degree(s) in x.
    #[arg(long, default_value = "2")]
    l: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Seed for sampled checks (printed in the report).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Allow parameters beyond the default caps (m <= 8, k <= 3, l <= 4).
    #[arg(long)]
    allow_large: bool,
    /// Include runtimes in the report (breaks byte-determinism).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct DumpArgs {
    /// What to dump: currently `basis`.
    what: String,
    /// Space tag: Hk | Hkl | Howe | Mk | Skl.
    #[arg(long)]
    space: String,
    #[arg(long)]
    m: u32,
    #[arg(long, default_value_t = 0)]
    k: u32,
    #[arg(long, default_value_t = 0)]
    l: u32,
    #[arg(long)]
    allow_large: bool,
}

#[derive(Args)]
struct ReportAllArgs {
    #[arg(long, default_value_t = 6)]
    m_max: u32,
    #[arg(long, default_value_t = 2)]
    k_max: u32,
    #[arg(long, default_value_t = 3)]
    l_max: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Directory for the CSV dimension tables.
    #[arg(long)]
    tables_dir: Option<PathBuf>,
    #[arg(long)]
    allow_large: bool,
    #[arg(long)]
    timings: bool,
}

fn parse_range(s: &str) -> Result<Vec<u32>> {
    if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a.trim().parse().context("range start")?;
        let b: u32 = b.trim().parse().context("range end")?;
        if a > b {
            bail!("empty range {s}");
        }
        Ok((a..=b).collect())
    } else {
        Ok(vec![s.trim().parse().context("parameter")?])
    }
}

fn max_dim_cap() -> u32 {
    std::env::var("HSL_MAX_DIM")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(u32::MAX)
}

fn check_caps(m: u32, k: u32, l: u32, allow_large: bool) -> Result<()> {
    if m > max_dim_cap() {
        bail!("m={m} exceeds HSL_MAX_DIM={}", max_dim_cap());
    }
    if !allow_large && (m > 8 || k > 3 || l > 4) {
        bail!("parameters (m={m}, k={k}, l={l}) beyond the default caps; pass --allow-large");
    }
    Ok(())
}

fn emit(reports: &[SuiteReport], format: Format, timings: bool, total: Option<u128>) -> String {
    match format {
        Format::Text => {
            let mut out = String::new();
            for r in reports {
                out.push_str(&r.to_text());
            }
            let failed = reports
                .iter()
                .flat_map(|r| &r.checks)
                .filter(|c| !c.status.ok())
                .count();
            let count: usize = reports.iter().map(|r| r.checks.len()).sum();
            let _ = writeln!(out, "{} checks, {} failed", count, failed);
            if timings {
                if let Some(ms) = total {
                    let _ = writeln!(out, "runtime: {ms} ms");
                }
            }
            out
        }
        Format::Json => {
            let mut agg = AggregateReport::from_suites(reports.to_vec());
            if timings {
                agg.runtime_ms = total;
            }
            agg.to_json()
        }
        Format::Csv => {
            let mut out = String::from("suite,params,check,status\n");
            for r in reports {
                out.push_str(&r.to_csv());
            }
            out
        }
    }
}

fn cmd_check(args: CheckArgs) -> Result<i32> {
    let started = Instant::now();
    let ms = parse_range(&args.m)?;
    let ks = parse_range(&args.k)?;
    let ls = parse_range(&args.l)?;
    let mut reports = Vec::new();
    for &m in &ms {
        for &k in &ks {
            for &l in &ls {
                check_caps(m, k, l, args.allow_large)?;
                let mut r = suites::run_suite(&args.suite, m, k, l, args.seed)
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                if args.timings {
                    r.runtime_ms = Some(started.elapsed().as_millis());
                }
                reports.push(r);
                // Parameter-free suites need only one run.
                if args.suite == "opalgebra" {
                    break;
                }
            }
            if args.suite == "opalgebra" || args.suite == "degeneration" {
                break;
            }
        }
        if args.suite == "opalgebra" {
            break;
        }
    }
    let ok = reports.iter().all(SuiteReport::passed);
    print!(
        "{}",
        emit(
            &reports,
            args.format,
            args.timings,
            Some(started.elapsed().as_millis())
        )
    );
    Ok(if ok { 0 } else { 1 })
}

fn cmd_dump(args: DumpArgs) -> Result<i32> {
    if args.what != "basis" {
        bail!("unknown dump target {}; expected `basis`", args.what);
    }
    check_caps(args.m, args.k, args.l, args.allow_large)?;
    let tag: SpaceTag = args.space.parse().map_err(|e| anyhow::anyhow!("{e}"))?;
    let basis = harmonic::basis(BasisSpec {
        tag,
        m: args.m,
        k: args.k,
        l: args.l,
    })
    .map_err(|e| anyhow::anyhow!("{e}"))?;
    println!(
        "# space={} m={} k={} l={} dim={}",
        tag,
        args.m,
        args.k,
        args.l,
        basis.len()
    );
    match basis {
        harmonic::Basis::Scalar(v) => {
            for p in v {
                println!("{p}");
            }
        }
        harmonic::Basis::Spinor(v) => {
            for p in v {
                println!("{p}");
            }
        }
    }
    Ok(0)
}

fn write_dimension_tables(dir: &PathBuf, bounds: GridBounds) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut kernel_csv = String::from("m,k,l,nullity,formula\n");
    for m in 5..=bounds.m_max {
        for k in 0..=bounds.k_max {
            for l in 2..=bounds.l_max.min(3) {
                let computed = hsl_core::kernelcheck::kernel_dimension(m, k, l)
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                let formula = hsl_core::kernelcheck::kernel_dimension_formula(m, k, l);
                let _ = writeln!(kernel_csv, "{m},{k},{l},{computed},{formula}");
            }
        }
    }
    std::fs::write(dir.join("kernel_dimensions.csv"), kernel_csv)?;
    let mut hdims = String::from("m,k,dim_Hk\n");
    for m in 5..=bounds.m_max {
        for k in 0..=bounds.k_max + 1 {
            let _ = writeln!(hdims, "{m},{k},{}", harmonic::dim_hk(m, k));
        }
    }
    std::fs::write(dir.join("harmonic_dimensions.csv"), hdims)?;
    Ok(())
}

fn cmd_report_all(args: ReportAllArgs) -> Result<i32> {
    let started = Instant::now();
    check_caps(args.m_max, args.k_max, args.l_max, args.allow_large)?;
    let bounds = GridBounds {
        m_max: args.m_max,
        k_max: args.k_max,
        l_max: args.l_max,
    };
    let reports = if args.m_max < 5 {
        Vec::new() // empty grid
    } else {
        suites::run_all(bounds, args.seed).map_err(|e| anyhow::anyhow!("{e}"))?
    };
    if let Some(dir) = &args.tables_dir {
        if args.m_max >= 5 {
            write_dimension_tables(dir, bounds)?;
        }
    }
    let ok = reports.iter().all(SuiteReport::passed);
    print!(
        "{}",
        emit(
            &reports,
            args.format,
            args.timings,
            Some(started.elapsed().as_millis())
        )
    );
    Ok(if ok { 0 } else { 1 })
}

fn cmd_list() -> i32 {
    println!("suites:");
    for s in suites::SUITE_NAMES {
        println!("  {s}");
    }
    println!("spaces (dump basis --space <tag>):");
    for s in ["Hk", "Hkl", "Howe", "Mk", "Skl"] {
        println!("  {s}");
    }
    println!("symbolic identities (opalgebra suite):");
    for id in hsl_core::opalgebra::catalogue() {
        println!("  {id}");
    }
    0
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Check(args) => cmd_check(args),
        Command::Dump(args) => cmd_dump(args),
        Command::ReportAll(args) => cmd_report_all(args),
        Command::List => Ok(cmd_list()),
    };
    match code {
        Ok(c) => std::process::exit(c),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

/// Keep a single source of truth for the parameter map shown in reports.
#[allow(dead_code)]
fn params_of(m: u32, k: u32, l: u32) -> BTreeMap<String, String> {
    let mut p = BTreeMap::new();
    p.insert("m".into(), m.to_string());
    p.insert("k".into(), k.to_string());
    p.insert("l".into(), l.to_string());
    p
}
