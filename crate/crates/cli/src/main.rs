//! Command-line front end for the Eisenstein toolkit.
//!
//! Exit codes: 0 on success, 1 on usage or validation errors, 2 when a
//! structure report honestly declines to classify.

use clap::{Parser, Subcommand};
use eisenstein_core::report::{
    breuil_table_to_csv, build_bernoulli, build_breuil_table, build_check_k, build_descent,
    build_hecke, build_scan, descent_to_csv, scan_to_csv, to_json, ReportError,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "eisenstein",
    version,
    about = "Exact-arithmetic toolkit: Bernoulli predicates, Breuil-module tables, mod-p Hecke structure"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan primes p <= pmax for irregular pairs and hypothesis flags
    Scan {
        #[arg(long)]
        pmax: u64,
        /// Attach an Eisenstein structure report to each irregular pair
        #[arg(long)]
        with_hecke: bool,
        /// Write the report to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit CSV instead of JSON
        #[arg(long)]
        csv: bool,
        /// Allow pmax beyond the default bound of 1000
        #[arg(long)]
        allow_large: bool,
    },
    /// Rank-one classification tables, descent enumeration, and the
    /// killed-by-p check
    Breuil {
        #[command(subcommand)]
        mode: BreuilMode,
    },
    /// Eisenstein-local structure of the weight-k cuspidal Hecke algebra mod p
    Hecke {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
        /// Use the full generator list up to the Sturm bound
        #[arg(long)]
        sturm: bool,
        #[arg(long)]
        json: bool,
    },
    /// Exact Bernoulli numbers, optionally reduced mod p^prec
    Bernoulli {
        #[arg(long)]
        n: u64,
        /// Reduce mod this prime
        #[arg(long = "mod")]
        modulus: Option<u64>,
        /// p-adic precision of the reduction
        #[arg(long, default_value_t = 1)]
        prec: u32,
    },
}

#[derive(Subcommand)]
enum BreuilMode {
    /// Hom spaces, admissible eta, and not-killed-by-p existence for all
    /// (r, s, a, b) over F_p
    Table {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: usize,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Modules with descent data for every character exponent (e = p + 1)
    Descent {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Confirm that self-extensions of the unique module for omega^k are
    /// killed by p (e = p + 1)
    CheckK {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        json: bool,
    },
}

fn fail(err: ReportError) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(1)
}

fn run_scan(
    pmax: u64,
    with_hecke: bool,
    out: Option<PathBuf>,
    csv: bool,
    allow_large: bool,
) -> ExitCode {
    if pmax > 1000 && allow_large {
        eprintln!("warning: pmax = {pmax} exceeds the default bound; this may take a while");
    }
    let report = match build_scan(pmax, with_hecke, allow_large) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let text = if csv {
        scan_to_csv(&report)
    } else {
        to_json(&report)
    };
    match out {
        None => print!("{text}"),
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
    }
    ExitCode::SUCCESS
}

fn run_breuil(mode: BreuilMode) -> ExitCode {
    match mode {
        BreuilMode::Table { p, e, json, csv } => {
            let report = match build_breuil_table(p, e) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            if json {
                print!("{}", to_json(&report));
            } else if csv {
                print!("{}", breuil_table_to_csv(&report));
            } else {
                println!("rank-one classification over F_{p}, e = {e}");
                println!(
                    "{:>3} {:>3} {:>3} {:>3} {:>8} {:>24} {:>16}",
                    "r", "s", "a", "b", "hom_dim", "eta_set", "not_killed_by_p"
                );
                for row in &report.results {
                    println!(
                        "{:>3} {:>3} {:>3} {:>3} {:>8} {:>24} {:>16}",
                        row.r,
                        row.s,
                        row.a,
                        row.b,
                        row.hom_dimension,
                        if row.eta_set.is_empty() {
                            "-".to_string()
                        } else {
                            row.eta_set.join(";")
                        },
                        row.not_killed_by_p
                    );
                }
            }
            ExitCode::SUCCESS
        }
        BreuilMode::Descent { p, json, csv } => {
            let report = match build_descent(p) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            if json {
                print!("{}", to_json(&report));
            } else if csv {
                print!("{}", descent_to_csv(&report));
            } else {
                println!("descent modules over the tame degree-{} base, a = 1", p + 1);
                println!("{:>3} {:>12} {:>7}", "k", "r values", "unique");
                for row in &report.results {
                    let rs: Vec<String> = row.rs.iter().map(|r| r.to_string()).collect();
                    println!("{:>3} {:>12} {:>7}", row.k, rs.join(";"), row.unique);
                }
            }
            ExitCode::SUCCESS
        }
        BreuilMode::CheckK { p, k, json } => {
            let report = match build_check_k(p, k) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            if json {
                print!("{}", to_json(&report));
            } else if report.results.confirmed {
                println!(
                    "confirmed: every self-extension of A({}, 1) at e = {} is killed by p = {p} (k = {k})",
                    report.results.r,
                    p + 1
                );
            } else {
                println!(
                    "refuted: A({}, 1) admits a self-extension not killed by p = {p} (k = {k})",
                    report.results.r
                );
            }
            ExitCode::SUCCESS
        }
    }
}

fn run_hecke(p: u64, k: u64, sturm: bool, json: bool) -> ExitCode {
    let report = match build_hecke(p, k, sturm) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let classified = report.results.classified();
    if json {
        print!("{}", to_json(&report));
    } else {
        let r = &report.results;
        println!("Eisenstein-local structure at (p, k) = ({p}, {k})");
        println!("  cusp space dimension : {}", r.dim_cusp_space);
        println!("  generator primes     : {:?}", r.generator_primes);
        println!("  localized dimension  : {}", r.localized_dimension);
        println!("  local                : {}", r.is_local);
        println!("  monogenic            : {}", r.is_monogenic);
        println!("  nilpotency index     : {}", r.nilpotency_index);
        println!("  generator            : {}", r.generator_label);
        println!("  structure            : {}", r.structure_descriptor);
    }
    if classified {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn run_bernoulli(n: u64, modulus: Option<u64>, prec: u32) -> ExitCode {
    let report = match build_bernoulli(n, modulus.map(|p| (p, prec))) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    println!("B_{n} = {}", report.results.exact);
    if let Some(residue) = &report.results.residue {
        let p = modulus.expect("residue implies modulus");
        println!("B_{n} = {residue} mod {p}^{prec}");
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    // die quietly when a downstream pipe closes (e.g. `... | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    // usage problems exit 1 (clap would default to 2, which is reserved
    // for honest non-classification); --help/--version stay 0
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Scan {
            pmax,
            with_hecke,
            out,
            csv,
            allow_large,
        } => run_scan(pmax, with_hecke, out, csv, allow_large),
        Command::Breuil { mode } => run_breuil(mode),
        Command::Hecke { p, k, sturm, json } => run_hecke(p, k, sturm, json),
        Command::Bernoulli { n, modulus, prec } => run_bernoulli(n, modulus, prec),
    }
}
