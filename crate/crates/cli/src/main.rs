use std::process::ExitCode;

use clap::{Parser, Subcommand};
use galimage::standard::StandardKind;
use galimage::theorems::{CurveFilter, Engine, TorsionField};
use galimage::{EnumConfig, Exec, DEFAULT_BUDGET};
use galimage_cli::query::{answer, Query, Theorem};
use galimage_cli::render::Format;
use galimage_cli::tables::{build, Range, TableName};
use galimage_cli::verify::{run, Scope};
use galimage_cli::{exit, exit_code};

/// Degree sets for Cartan-type mod-ell Galois images and ell-torsion.
#[derive(Parser)]
#[command(name = "galimage", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest group order whose subgroups may be enumerated.
    #[arg(long, global = true, env = "GALIMAGE_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Run the enumeration kernels on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Regenerate a table.
    Table {
        #[arg(value_enum)]
        name: TableName,
        /// Comma-separated odd primes.
        #[arg(long, value_delimiter = ',', conflicts_with = "ell_max")]
        ell: Option<Vec<u64>>,
        /// Every odd prime up to this bound.
        #[arg(long)]
        ell_max: Option<u64>,
        /// Largest degree in the grid.
        #[arg(long)]
        d_max: Option<u64>,
    },
    /// Decide one degree question.
    Query {
        #[arg(value_enum)]
        theorem: Theorem,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        d: u64,
        /// Standard subgroup for thm1: Z, Cs, Cns, Ns, Nns or Cr.
        #[arg(long = "M", default_value = "Z")]
        m: StandardKind,
        /// any, cm or non-cm.
        #[arg(long, default_value = "any")]
        filter: CurveFilter,
        /// Torsion field for thm3: rational-j or over-q.
        #[arg(long, default_value = "rational-j")]
        mode: TorsionField,
    },
    /// Check closed forms and structural facts against enumeration.
    Verify {
        #[arg(value_enum)]
        scope: Scope,
        #[arg(long, value_delimiter = ',')]
        ell: Option<Vec<u64>>,
        /// Include the full GL2(7) lattice.
        #[arg(long)]
        slow: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = EnumConfig::with_budget(cli.budget);
    if cli.sequential || !Exec::available() {
        cfg = cfg.sequential();
    }
    let engine = Engine::new(cfg);
    let result = match cli.command {
        Command::Table {
            name,
            ell,
            ell_max,
            d_max,
        } => {
            let range = Range { ells: ell, ell_max, d_max };
            build(name, &engine, &range).map(|t| (t.render(cli.format), true))
        }
        Command::Query {
            theorem,
            ell,
            d,
            m,
            filter,
            mode,
        } => {
            let q = Query {
                theorem,
                ell,
                d,
                m,
                filter,
                field: mode,
            };
            answer(&engine, &q).map(|a| (a.render(cli.format), true))
        }
        Command::Verify { scope, ell, slow } => run(scope, ell, slow, &cfg).map(|r| (r.render(cli.format), r.ok())),
    };
    match result {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(exit::VERIFY_FAILED)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
