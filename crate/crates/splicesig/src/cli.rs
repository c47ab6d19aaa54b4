//! Command-line front end.
//!
//! Exit codes: 0 success, 1 semantic failure (structurally invalid diagram,
//! failed theorem check, failed self-test), 2 I/O, parse or usage error.
//! All reports are deterministic for fixed inputs and seeds; timing goes to
//! stderr only.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::dedekind;
use crate::error::Error;
use crate::graph::SpliceDiagram;
use crate::ops::generate_random;
use crate::report::{AverageJson, CheckLine, RunReport, SGammaJson, StepFunctionJson};
use crate::sgamma::{check_main_theorem, s_gamma};
use crate::signature::{average_signature, signature_function};

#[derive(Parser)]
#[command(
    name = "splicesig",
    version,
    about = "Exact Tristram-Levine signatures and combinatorial invariants of graph links in S^3"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a diagram file: structure, bad leaves, link/multilink status.
    Validate {
        path: PathBuf,
        /// Emit the validation report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Compute S(Gamma), the average signature and the theorem verdict.
    Invariants {
        path: PathBuf,
        /// Emit the full report as JSON.
        #[arg(long)]
        json: bool,
        /// Also write the signature step function as CSV to this path.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        /// Add decimal approximations (non-authoritative) to the output.
        #[arg(long)]
        approx: bool,
    },
    /// Export the signature step function as CSV.
    Signature {
        path: PathBuf,
        /// Write to this path instead of stdout.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        /// Add decimal endpoint columns (non-authoritative).
        #[arg(long)]
        approx: bool,
    },
    /// Check the main theorem on a file or on randomly generated diagrams.
    Check {
        path: Option<PathBuf>,
        /// Check this many generated diagrams instead of a file.
        #[arg(long, value_name = "N")]
        random: Option<u64>,
        /// Base seed for generation; diagram i uses seed + i.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Node-count bound for generated diagrams.
        #[arg(long, value_name = "K", default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
        nodes: u32,
        /// Emit one JSON line per diagram.
        #[arg(long)]
        json: bool,
    },
    /// Generate a random link diagram and print its canonical JSON.
    Generate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Node-count bound.
        #[arg(long, value_name = "K", default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        nodes: u32,
    },
    /// Run the Dedekind-sum identity suites.
    Selftest {
        /// Run the identity suite (the default and only suite).
        #[arg(long)]
        identities: bool,
        /// Largest modulus exercised by the suites.
        #[arg(long = "max-q", value_name = "Q", default_value_t = 300, value_parser = clap::value_parser!(i64).range(1..))]
        max_q: i64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

/// Parses arguments and runs; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let started = Instant::now();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Io(_) | Error::Parse(_) => 2,
                _ => 1,
            }
        }
    };
    eprintln!("completed in {:.3}s", started.elapsed().as_secs_f64());
    code
}

fn dispatch(cli: Cli) -> crate::error::Result<i32> {
    match cli.command {
        Command::Validate { path, json } => cmd_validate(&path, json),
        Command::Invariants { path, json, csv, approx } => cmd_invariants(&path, json, csv.as_deref(), approx),
        Command::Signature { path, csv, approx } => cmd_signature(&path, csv.as_deref(), approx),
        Command::Check { path, random, seed, nodes, json } => cmd_check(path.as_deref(), random, seed, nodes, json),
        Command::Generate { seed, nodes } => cmd_generate(seed, nodes),
        Command::Selftest { identities: _, max_q, seed } => cmd_selftest(max_q, seed),
    }
}

fn load(path: &Path) -> crate::error::Result<SpliceDiagram> {
    SpliceDiagram::parse(&fs::read(path)?)
}

fn cmd_validate(path: &Path, json: bool) -> crate::error::Result<i32> {
    let diagram = load(path)?;
    let report = diagram.validate();
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        if report.is_valid() {
            println!("valid splice diagram");
        } else {
            println!("invalid splice diagram:");
            for e in &report.structural_errors {
                println!("  - {e}");
            }
        }
        if !report.bad_leaves.is_empty() {
            println!("bad leaves: {}", report.bad_leaves.join(", "));
        }
        println!("almost minimal: {}", report.is_almost_minimal);
        println!("link (all multiplicities 1): {}", report.is_link);
        println!("arrowheads with non-zero multiplicity: {}", report.arrowhead_count_nonzero);
    }
    Ok(if report.is_valid() { 0 } else { 1 })
}

fn cmd_invariants(path: &Path, json: bool, csv: Option<&Path>, approx: bool) -> crate::error::Result<i32> {
    let diagram = load(path)?;
    let validation = diagram.validate();
    if !validation.is_valid() {
        if json {
            println!("{}", serde_json::to_string_pretty(&validation).expect("report serializes"));
        } else {
            println!("invalid splice diagram:");
            for e in &validation.structural_errors {
                println!("  - {e}");
            }
        }
        return Ok(1);
    }

    let breakdown = s_gamma(&diagram).ok();
    let computable = validation.arrowhead_count_nonzero > 0;
    let average = if computable { Some(average_signature(&diagram)?) } else { None };
    let step = if computable { Some(signature_function(&diagram)?) } else { None };
    let theorem = check_main_theorem(&diagram)?;

    if let (Some(csv_path), Some(step)) = (csv, &step) {
        fs::write(csv_path, step.to_csv(approx))?;
    }

    let report = RunReport {
        input: path.display().to_string(),
        validation,
        s_gamma: breakdown.as_ref().map(|b| SGammaJson::new(b, approx)),
        average: average.as_ref().map(|a| AverageJson::new(a, approx)),
        step_function: step.as_ref().map(|s| StepFunctionJson { breakpoints: s.breakpoints().len() }),
        theorem,
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        if let Some(b) = &breakdown {
            println!("S(Gamma) = {}", b.total);
            println!("  linking    {}", b.linking);
            println!("  nodes      {}", b.nodes);
            println!("  leaves     {}", b.leaves);
            println!("  edges      {}", b.edges);
            println!("  arrowheads {}", b.arrowheads);
        }
        match &average {
            Some(a) => println!("average signature = {a} (both routes)"),
            None => println!("average signature undefined (no arrowhead with non-zero multiplicity)"),
        }
        if let Some(s) = &step {
            println!("step function breakpoints: {}", s.breakpoints().len());
        }
        match &report.theorem.skipped_reason {
            Some(reason) => println!("theorem check skipped: {reason}"),
            None => println!("theorem (-S/3 = average): {}", if report.theorem.holds { "holds" } else { "FAILS" }),
        }
    }
    Ok(0)
}

fn cmd_signature(path: &Path, csv: Option<&Path>, approx: bool) -> crate::error::Result<i32> {
    let diagram = load(path)?;
    let validation = diagram.validate();
    if !validation.is_valid() {
        for e in &validation.structural_errors {
            eprintln!("  - {e}");
        }
        return Ok(1);
    }
    let step = signature_function(&diagram)?;
    let text = step.to_csv(approx);
    match csv {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn cmd_check(
    path: Option<&Path>,
    random: Option<u64>,
    seed: u64,
    nodes: u32,
    json: bool,
) -> crate::error::Result<i32> {
    match (path, random) {
        (Some(path), None) => {
            let diagram = load(path)?;
            let report = check_main_theorem(&diagram)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&CheckLine { seed: 0, report: report.clone() }).expect("report serializes"));
            } else if let Some(reason) = &report.skipped_reason {
                println!("skipped: {reason}");
            } else if report.holds {
                println!(
                    "holds: average = {} = -({})/3",
                    report.average.as_ref().unwrap(),
                    report.s_gamma.as_ref().unwrap()
                );
            } else {
                println!("FAILS: counterexample diagram follows");
                println!("{}", diagram.to_canonical_json());
            }
            Ok(if report.skipped() || report.holds { 0 } else { 1 })
        }
        (None, Some(count)) => {
            let results: Vec<(u64, crate::error::Result<(SpliceDiagram, crate::sgamma::TheoremReport)>)> =
                (0..count)
                    .into_par_iter()
                    .map(|i| {
                        let s = seed.wrapping_add(i);
                        let out = generate_random(s, nodes)
                            .and_then(|d| check_main_theorem(&d).map(|r| (d, r)));
                        (s, out)
                    })
                    .collect();
            let mut failures = 0u64;
            let mut skipped = 0u64;
            for (s, result) in results {
                let (diagram, report) = result?;
                if json {
                    println!("{}", serde_json::to_string(&CheckLine { seed: s, report: report.clone() }).expect("report serializes"));
                }
                if report.skipped() {
                    skipped += 1;
                } else if !report.holds {
                    failures += 1;
                    println!("FAILS at seed {s}: counterexample diagram follows");
                    println!("{}", diagram.to_canonical_json());
                }
            }
            if !json {
                println!(
                    "checked {count} diagrams: {} held, {skipped} skipped, {failures} failed",
                    count - skipped - failures
                );
            }
            Ok(if failures == 0 { 0 } else { 1 })
        }
        _ => Err(Error::Domain(
            "check needs exactly one of: a diagram path, or --random N".into(),
        )),
    }
}

fn cmd_generate(seed: u64, nodes: u32) -> crate::error::Result<i32> {
    let diagram = generate_random(seed, nodes)?;
    println!("{}", diagram.to_canonical_json());
    Ok(0)
}

fn cmd_selftest(max_q: i64, seed: u64) -> crate::error::Result<i32> {
    let lines = dedekind::identity_suite(max_q, 25, seed)?;
    let mut ok = true;
    for line in &lines {
        println!(
            "{} {} ({} cases)",
            if line.passed() { "ok  " } else { "FAIL" },
            line.name,
            line.cases
        );
        ok &= line.passed();
    }
    Ok(if ok { 0 } else { 1 })
}
