use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::BigRational;

use qcalc::cli::{parse_expr, run_suite, SuiteId, SuiteOptions};
use qcalc::coset::Example;
use qcalc::group::GroupPresentation;
use qcalc::Error;

#[derive(Parser)]
#[command(name = "qcalc", version, about = "Symbolic checks for the SL_q(2,R) differential calculus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite.
    Check {
        /// group, cartan, wznw, coset, symops, qplane or all.
        #[arg(long)]
        suite: SuiteId,
        /// Coset example (1, 2 or 3).
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        example: Option<u8>,
        /// Truncation order of the quantum-plane series.
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Print the JSON report instead of text.
        #[arg(long)]
        json: bool,
        /// Specialize q to a rational value, e.g. `1` or `3/2`.
        #[arg(long)]
        q0: Option<BigRational>,
    },
    /// Print the normal form of an expression in the group presentation.
    Normalize {
        #[arg(short = 'e', long = "expr")]
        expr: String,
    },
    /// Print every rewrite step on the way to the normal form.
    ReduceTrace {
        #[arg(short = 'e', long = "expr")]
        expr: String,
    },
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::Syntax { .. } | Error::UnknownGenerator(_) | Error::Usage(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Check { suite, example, order, seed, json, q0 } => {
            let opts = SuiteOptions { q0, seed, order, example: example.and_then(Example::from_number) };
            let report = run_suite(suite, &opts)?;
            if json {
                println!("{}", report.to_json()?);
            } else {
                print!("{}", report.render_text());
            }
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Normalize { expr } => {
            let g = GroupPresentation::new()?;
            let e = parse_expr(&expr, g.alphabet())?;
            println!("{}", g.reduce(&e)?.render(g.alphabet()));
            Ok(ExitCode::SUCCESS)
        }
        Command::ReduceTrace { expr } => {
            let g = GroupPresentation::new()?;
            let a = g.alphabet();
            let e = parse_expr(&expr, a)?;
            println!("   {}", e.render(a));
            let steps = g.sys.reduce_trace(&e)?;
            for (i, s) in steps.iter().enumerate() {
                println!("{:>3} [{}]", i + 1, s.rule);
                println!("   {}", s.result.render(a));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse()).unwrap_or_else(fail)
}
