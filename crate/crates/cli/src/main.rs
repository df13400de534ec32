//! `clari`: check proof scripts, normalize terms, certify stability, and
//! search for Heyting-algebra countermodels.

#![allow(clippy::result_large_err)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use clari_core::classical::prove_stable;
use clari_core::diagnostic::format_diagnostic;
use clari_core::eval::DEFAULT_FUEL;
use clari_core::heyting::{
    countermodel_json, eval_formula, find_countermodel, render_countermodel, PropFormula,
    MAX_ENUMERATION_SIZE,
};
use clari_core::session::Session;
use clari_core::stdlib::load_stdlib;
use clari_core::syntax::parse_term;
use clari_core::typing::Context;
use clari_core::{DiagCode, Diagnostic};

#[derive(Parser)]
#[command(name = "clari", version, about = "Proof checker for a dependent type theory with a classical fragment")]
struct Cli {
    /// Reduction budget per normalization.
    #[arg(long, global = true, default_value_t = DEFAULT_FUEL)]
    fuel: u64,
    /// Emit diagnostics as JSON lines.
    #[arg(long, global = true)]
    json: bool,
    /// Do not load the standard library first.
    #[arg(long, global = true)]
    no_stdlib: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check script files in order.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Print the normal form of an expression.
    Normalize {
        #[arg(short = 'e', long = "expr")]
        expr: String,
    },
    /// Certify that an expression is double-negation stable.
    Stable {
        #[arg(short = 'e', long = "expr")]
        expr: String,
    },
    /// Search finite Heyting algebras for a model refuting a formula.
    Countermodel {
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
    },
    /// Load the standard library and report what was checked.
    Stdlib {
        #[arg(long, default_value_t = 1)]
        tier: u8,
    },
}

fn exit_code(d: &Diagnostic) -> u8 {
    match d.code {
        DiagCode::Parse => 2,
        DiagCode::Fuel => 3,
        DiagCode::Usage | DiagCode::Io => 4,
        _ => 1,
    }
}

fn session(cli: &Cli) -> Result<Session, Diagnostic> {
    // The library is always checked under the default budget.
    let mut s = Session::new(DEFAULT_FUEL);
    if !cli.no_stdlib {
        load_stdlib(&mut s, 1)?;
    }
    s.fuel = cli.fuel;
    Ok(s)
}

fn run(cli: &Cli) -> Result<(), Diagnostic> {
    match &cli.command {
        Command::Check { files } => {
            let mut s = session(cli)?;
            let before = s.counts();
            for f in files {
                for ev in s.run_file(f)? {
                    println!("{ev}");
                }
            }
            let c = s.counts();
            println!(
                "ok: {} definitions, {} theorems, {} statement-only",
                c.definitions - before.definitions,
                c.theorems - before.theorems,
                c.statements - before.statements
            );
        }
        Command::Normalize { expr } => {
            let s = session(cli)?;
            let t = parse_term(expr, "<expr>")?;
            let ck = s.checker();
            ck.infer(&Context::new(), &t)?;
            println!("{}", ck.normalize(&t)?);
        }
        Command::Stable { expr } => {
            let s = session(cli)?;
            let t = parse_term(expr, "<expr>")?;
            let c = prove_stable(s.env(), s.hints(), &Context::new(), &t, cli.fuel)
                .map_err(|e| e.into_diagnostic())?;
            println!("stable: {}", c.target);
            println!("certificate: {}", c.witness);
        }
        Command::Countermodel { expr, max_size } => {
            if *max_size == 0 || *max_size > MAX_ENUMERATION_SIZE {
                return Err(Diagnostic::new(
                    DiagCode::Usage,
                    format!("--max-size must be between 1 and {MAX_ENUMERATION_SIZE}"),
                ));
            }
            let t = parse_term(expr, "<expr>")?;
            let f = PropFormula::from_term(&t, &[])
                .map_err(|e| Diagnostic::new(DiagCode::Usage, e.to_string()))?;
            match find_countermodel(&f, *max_size).expect("size checked above") {
                Some((h, v)) => {
                    let value = eval_formula(&h, &v, &f).expect("valuation is total");
                    println!("countermodel for {f}");
                    println!("{}", render_countermodel(&h, &v, value));
                    println!("{}", countermodel_json(&h, &v, value));
                }
                None => println!("no countermodel of size at most {max_size} for {f}"),
            }
        }
        Command::Stdlib { tier } => {
            let mut s = Session::new(cli.fuel);
            let r = load_stdlib(&mut s, *tier)?;
            println!("stdlib tier {tier}: {}", r.summary());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(d) => {
            eprintln!("{}", format_diagnostic(&d, cli.json));
            ExitCode::from(exit_code(&d))
        }
    }
}
