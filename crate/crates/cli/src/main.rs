use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use freetrace::count::{cmd_count, CountConfig, MethodChoice, NSpec};
use freetrace::report::{render, Format};
use freetrace::verify::{run_verify, summary_rows, VerifyConfig, DEFAULT_QS};
use freetrace::{classify, hints, periods, resolve_budget, table, CliError};
use freetrace_core::oracle::{Quantity, DEFAULT_SINGLE_BUDGET, DEFAULT_SWEEP_BUDGET};
use num_bigint::BigUint;

#[derive(Parser)]
#[command(name = "freetrace", version, about = "Counts of N-free elements, elements of given order and irreducible polynomials with prescribed trace")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,
    /// Factorization hints file (`n = p1^e1 * p2^e2 * ...` per line).
    #[arg(long, global = true)]
    hints: Option<PathBuf>,
    /// Enumeration budget; overrides FREETRACE_BUDGET.
    #[arg(long, global = true)]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// One count in F_{q^m}, q = p^s.
    Count {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[arg(long)]
        m: u32,
        /// A divisor of q^m - 1, or `max`.
        #[arg(long = "N", default_value = "max")]
        n: NSpec,
        /// Trace value: `0`, `pow:i`, or an integer when s = 1.
        #[arg(long, default_value = "0")]
        c: String,
        /// Z, P, I or WH.
        #[arg(long, default_value = "Z", value_parser = parse_quantity)]
        quantity: Quantity,
        #[arg(long, value_enum, default_value = "formula")]
        method: MethodChoice,
    },
    /// Primitive trace-zero counts in F_{p^4} for Mersenne primes p.
    Table {
        /// Mersenne exponents; defaults to 2..31, plus 61 and 89 with --hints.
        #[arg(long, value_delimiter = ',')]
        exponents: Option<Vec<u32>>,
    },
    /// Formula-versus-enumeration sweeps.
    Verify {
        /// Largest q^m swept.
        #[arg(long, default_value_t = 10_000)]
        cap: u64,
        /// Field sizes q to sweep.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_QS)]
        qs: Vec<u64>,
        /// Largest q^{m+1} for irreducible-polynomial enumeration.
        #[arg(long, default_value_t = 30_000)]
        carlitz_cap: u64,
        /// Largest q^m for the period identity suite.
        #[arg(long, default_value_t = 10_000)]
        period_cap: u64,
        /// Corrupt one formula value to exercise the failure path.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Structural facts about F_{q^m} over F_q.
    Classify {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: u32,
    },
    /// The Gaussian periods of type d as JSON.
    Periods {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        d: u64,
    },
}

fn parse_quantity(s: &str) -> Result<Quantity, String> {
    s.parse()
}

fn emit(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let hint_entries = match &cli.hints {
        Some(path) => hints::load_hints(path)?,
        None => Vec::new(),
    };
    let hint_primes: Vec<BigUint> = hints::hint_primes(&hint_entries);
    match cli.command {
        Command::Count { p, s, m, n, c, quantity, method } => {
            let budget = resolve_budget(cli.budget, DEFAULT_SINGLE_BUDGET)?;
            let cfg = CountConfig { p, s, m, n, c, quantity, method, budget, hints: hint_primes };
            let outcome = cmd_count(&cfg)?;
            emit(&render(&outcome.reports, cli.format)?)?;
            Ok(if outcome.matched == Some(false) { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        Command::Table { exponents } => {
            let exponents = exponents.unwrap_or_else(|| {
                let mut e = table::DEFAULT_EXPONENTS.to_vec();
                if cli.hints.is_some() {
                    e.extend(table::HINTED_EXPONENTS);
                }
                e
            });
            let rows = table::cmd_table(&exponents, &hint_primes)?;
            emit(&render(&rows, cli.format)?)?;
            Ok(if rows.iter().all(|r| r.matched) { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Verify { cap, qs, carlitz_cap, period_cap, inject_fault } => {
            let budget = resolve_budget(cli.budget, DEFAULT_SWEEP_BUDGET)?;
            if cap > budget {
                return Err(CliError::Budget(format!("cap {cap} exceeds the enumeration budget {budget}")));
            }
            let cfg = VerifyConfig { cap, qs, carlitz_cap, period_cap, classifiers: true, budget, inject_fault };
            let tally = run_verify(&cfg);
            emit(&render(&summary_rows(&tally), cli.format)?)?;
            Ok(if tally.ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Classify { q, m } => {
            let row = classify::cmd_classify(q, m, &hint_primes)?;
            emit(&render(&[row], cli.format)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Periods { p, s, m, d } => {
            let budget = resolve_budget(cli.budget, DEFAULT_SINGLE_BUDGET)?;
            let dump = periods::cmd_periods(p, s, m, d, budget)?;
            emit(&format!("{}\n", serde_json::to_string(&dump)?))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("freetrace: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
