//! `cayley-spectra`: build groups, evaluate Cayley graph spectra, run
//! exhaustive group verdicts and the verification suites.

use std::path::PathBuf;
use std::process::ExitCode;

use cayley_spectra::catalog;
use cayley_spectra::cayley::{CayleyGraph, SymmetricSubset};
use cayley_spectra::integrality::{self, Method, SpectrumVerdict};
use cayley_spectra::search::{self, Predicate, SearchOptions};
use cayley_spectra::verify::{self, VerifyConfig, SCHEMA, TOOL_VERSION};
use cayley_spectra::Error;
use clap::{Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "cayley-spectra", version, about = "Integral spectra of Cayley graphs of small groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact spectrum or non-integrality certificate of Cay(G, S).
    Spectrum {
        /// Group expression, e.g. `Q8xZ2^2`.
        group: String,
        /// Element names separated by commas, or a hex mask such as `0x1a`.
        subset: String,
        #[arg(long, default_value = "exact-rank")]
        method: Method,
        /// Write JSON here (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Decide `cayley-integral` or `cis` for a group by exhaustive search.
    Check {
        group: String,
        predicate: Predicate,
        #[command(flatten)]
        run: RunArgs,
        /// Allow groups above the exhaustive-search cap.
        #[arg(long)]
        force: bool,
        /// Resume from and save progress to this file.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(verify::SUITES))]
        suite: String,
        #[command(flatten)]
        run: RunArgs,
        /// Seed of the randomized lift instances.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// List catalog groups or show a group's multiplication table.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, env = "CAYLEY_SPECTRA_THREADS")]
    threads: Option<usize>,
    /// Scan every subset instead of one per conjugation orbit.
    #[arg(long)]
    no_reduce: bool,
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Groups of order 1..=12, optionally of a single order.
    List {
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    Show {
        group: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    tool_version: &'a str,
    command: &'a str,
    result: T,
}

#[derive(Serialize)]
struct SpectrumOutput<'a> {
    group: &'a str,
    order: usize,
    subset: Vec<String>,
    hex: String,
    method: &'a str,
    verdict: &'a SpectrumVerdict,
}

#[derive(Serialize)]
struct CatalogEntry {
    group: String,
    order: usize,
    abelian: bool,
}

#[derive(Serialize)]
struct GroupTable {
    group: String,
    order: usize,
    names: Vec<String>,
    table: Vec<Vec<usize>>,
}

/// A failed command with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::UnknownGroup(_) | Error::OrderTooLarge(_) | Error::CatalogRange(_) => 2,
            Error::NotSymmetric(_) | Error::InvalidSubset(_) => 3,
            Error::SearchCap { .. } => 4,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn io_failure(path: &std::path::Path, e: std::io::Error) -> Failure {
    Failure { code: 1, message: format!("{}: {e}", path.display()) }
}

/// Writes `value` as pretty JSON to `path`, or to stdout for `-`.
/// Returns whether stdout was used.
fn write_json<T: Serialize>(path: Option<&PathBuf>, value: &T) -> Result<bool, Failure> {
    let Some(path) = path else { return Ok(false) };
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure { code: 1, message: e.to_string() })?;
    if path.as_os_str() == "-" {
        println!("{text}");
        return Ok(true);
    }
    std::fs::write(path, text + "\n").map_err(|e| io_failure(path, e))?;
    Ok(false)
}

fn envelope<'a, T: Serialize>(command: &'a str, result: T) -> Envelope<'a, T> {
    Envelope { schema: SCHEMA, tool_version: TOOL_VERSION, command, result }
}

fn fmt_spectrum(m: &std::collections::BTreeMap<i64, usize>) -> String {
    let parts: Vec<String> = m.iter().rev().map(|(l, k)| format!("{l}^{k}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn cmd_spectrum(group: &str, subset: &str, method: Method, json: Option<&PathBuf>) -> Result<(), Failure> {
    let g = catalog::group(group)?;
    let s = SymmetricSubset::parse(&g, subset)?;
    let c = CayleyGraph::new(&g, s);
    let v = integrality::verdict_with(&c, method);
    let names = g.set_names(s.bits());
    let out = SpectrumOutput {
        group,
        order: g.order(),
        subset: names.clone(),
        hex: s.hex(),
        method: method.name(),
        verdict: &v,
    };
    if write_json(json, &envelope("spectrum", &out))? {
        return Ok(());
    }
    println!("Cay({group}, {{{}}}) [{}], order {}, degree {}", names.join(","), s.hex(), g.order(), s.len());
    match &v {
        SpectrumVerdict::Integral { spectrum } => println!("integral: {}", fmt_spectrum(spectrum)),
        SpectrumVerdict::NonIntegral(cert) => {
            println!("non-integral");
            println!(
                "  integer eigenvalues: {} ({} of {})",
                fmt_spectrum(&cert.integer_multiplicities),
                cert.integer_eigenspace_total,
                g.order()
            );
            if let Some(d) = cert.remainder_degree {
                println!("  char poly factor without integer roots, degree {d}");
            }
            let ev: Vec<String> = cert.float_evidence.iter().map(|x| format!("{x:.9}")).collect();
            println!("  non-integer eigenvalues (float): {}", ev.join(", "));
        }
    }
    Ok(())
}

fn cmd_check(
    group: &str,
    predicate: Predicate,
    run: &RunArgs,
    force: bool,
    checkpoint: Option<PathBuf>,
    json: Option<&PathBuf>,
) -> Result<(), Failure> {
    let g = catalog::group(group)?;
    let opts = SearchOptions {
        reduce_conjugacy: !run.no_reduce,
        threads: run.threads,
        force,
        checkpoint,
        label: group.to_string(),
        ..SearchOptions::default()
    };
    let v = search::check(&g, predicate, &opts)?;
    if write_json(json, &envelope("check", &v))? {
        return Ok(());
    }
    println!("{group} (order {}) {}: {}", v.order, predicate.name(), v.holds);
    println!(
        "  {} cells, {} subsets scanned, {} evaluated, {} conjugation maps, {} ms",
        v.cells, v.stats.subsets_enumerated, v.stats.reduced_count, v.automorphisms_used, v.wall_time_ms
    );
    for w in &v.witnesses {
        println!("  witness ({:?}): {{{}}} {}", w.kind, w.elements.join(","), w.hex);
    }
    Ok(())
}

fn cmd_verify(suite: &str, run: &RunArgs, seed: Option<u64>, json: Option<&PathBuf>) -> Result<bool, Failure> {
    let mut cfg = VerifyConfig { reduce_conjugacy: !run.no_reduce, ..VerifyConfig::default() };
    if let Some(t) = run.threads {
        cfg.threads = t.max(1);
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let report = verify::run_suite(suite, &cfg)?;
    if !write_json(json, &report)? {
        print!("{}", report.summary());
    }
    Ok(report.pass)
}

fn cmd_catalog(action: &CatalogAction) -> Result<(), Failure> {
    match action {
        CatalogAction::List { order, json } => {
            let groups = match order {
                Some(n) => catalog::all_groups_of_order(*n)?,
                None => catalog::complete_catalog(),
            };
            let entries: Vec<CatalogEntry> = groups
                .iter()
                .map(|(name, g)| CatalogEntry { group: name.clone(), order: g.order(), abelian: g.is_abelian() })
                .collect();
            if write_json(json.as_ref(), &envelope("catalog list", &entries))? {
                return Ok(());
            }
            for e in &entries {
                println!("{:<10} {:>3}  {}", e.group, e.order, if e.abelian { "abelian" } else { "non-abelian" });
            }
        }
        CatalogAction::Show { group, json } => {
            let g = catalog::group(group)?;
            let t = GroupTable {
                group: group.clone(),
                order: g.order(),
                names: g.names().to_vec(),
                table: g.table_rows(),
            };
            if write_json(json.as_ref(), &envelope("catalog show", &t))? {
                return Ok(());
            }
            println!("{group}, order {}", g.order());
            let w = t.names.iter().map(String::len).max().unwrap_or(1);
            print!("{:>w$} |", "");
            for n in &t.names {
                print!(" {n:>w$}");
            }
            println!();
            println!("{}", "-".repeat((w + 1) * (t.order + 1) + 1));
            for (a, row) in t.table.iter().enumerate() {
                print!("{:>w$} |", t.names[a]);
                for &b in row {
                    print!(" {:>w$}", t.names[b]);
                }
                println!();
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Spectrum { group, subset, method, json } => {
            cmd_spectrum(group, subset, *method, json.as_ref()).map(|_| true)
        }
        Command::Check { group, predicate, run, force, checkpoint, json } => {
            cmd_check(group, *predicate, run, *force, checkpoint.clone(), json.as_ref()).map(|_| true)
        }
        Command::Verify { suite, run, seed, json } => cmd_verify(suite, run, *seed, json.as_ref()),
        Command::Catalog { action } => cmd_catalog(action).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
