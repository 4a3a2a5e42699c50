use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qec_cli::commands::{cmd_qec, table_rows, write_table, Format, TableKind};
use qec_cli::record::Method;
use qec_cli::verify::{self, Suite};
use qec_cli::{exit, exit_code};

/// Quadratic embedding constants of graphs.
///
/// Graph expressions: `family:n` with family one of empty, path, cycle,
/// complete; `join(G, H)`; `edgelist(PATH)`.
#[derive(Parser)]
#[command(name = "qec", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Graph expression, e.g. "join(empty:2, cycle:5)"
    expr: Option<String>,

    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,

    /// Print the record as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate fan QE constants or Chebyshev-family polynomials for n = 1..=N
    Table {
        #[arg(value_enum)]
        kind: TableKind,
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run a cross-checking suite
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        n_max: Option<usize>,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = io::stdout().lock();
    match cli.command {
        Some(Command::Table { kind, n_max, format }) => match table_rows(kind, n_max) {
            Ok(rows) => match write_table(&rows, format, &mut stdout) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(exit::INTERNAL, e),
            },
            Err(e) => fail(exit_code(&e), e),
        },
        Some(Command::Verify { suite, seed, n_max }) => {
            let checks = verify::run(suite, seed, n_max);
            let mut ok = true;
            for c in &checks {
                ok &= c.passed();
                let _ = writeln!(stdout, "{}", c.report());
            }
            let failed = checks.iter().filter(|c| !c.passed()).count();
            let _ = writeln!(stdout, "{} checks, {failed} failed", checks.len());
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(exit::VERIFY_FAILED)
            }
        }
        None => {
            let Some(expr) = cli.expr else {
                return fail(exit::PARSE, "missing graph expression (see --help)");
            };
            match cmd_qec(&expr, cli.method) {
                Ok(rec) => {
                    let text = if cli.json {
                        serde_json::to_string_pretty(&rec).expect("record serializes") + "\n"
                    } else {
                        rec.to_text()
                    };
                    let _ = stdout.write_all(text.as_bytes());
                    ExitCode::SUCCESS
                }
                Err(e) => fail(exit_code(&e), e),
            }
        }
    }
}
