use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use torsion_clean::cli::{self, CliError, Command, Format, RunConfig};
use torsion_clean::rings::DEFAULT_MAX_SIZE;

/// Exact torsion-clean index computations on finite rings.
///
/// Ring specs: GF(q), M(n,GF(q)), T(m,GF(q)), P(R1,R2,...), Q(GF(q),p,v).
/// Exit codes: 0 success, 1 failed check, 2 usage or parse error,
/// 3 no decomposition, 4 size guard exceeded.
#[derive(Parser)]
#[command(name = "tcl", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV (survey only).
    #[arg(long, global = true)]
    csv: bool,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest ring cardinality accepted.
    #[arg(long, global = true, env = "TCL_MAX_SIZE", default_value_t = DEFAULT_MAX_SIZE)]
    max_size: u64,
    /// Worker threads (0 = all logical CPUs).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Omit timing fields so output is byte-stable.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Idempotents, units, radical, center and ring predicates.
    Analyze { spec: String },
    /// Minimal (strong) torsion-clean index with witnesses.
    Index {
        spec: String,
        #[arg(long)]
        strong: bool,
        #[arg(long)]
        no_conjugacy_reduction: bool,
    },
    /// Smallest decomposition r = e + u with u^n = 1.
    Decompose {
        spec: String,
        /// Decimal encoding or bracket literal such as [[1,1],[1,0]].
        element: String,
        n: u64,
        #[arg(long)]
        strong: bool,
    },
    /// Run the theorem checks.
    Verify {
        spec: String,
        /// One of: identity-eq, unique-clean-radical, lemma-reduced, thm-pi,
        /// idempotent-lifting, prop-fields, thm-comm, lemma-l, cor-uu, thm-ab, thm-stn.
        #[arg(long)]
        check: Option<String>,
    },
    /// Index and structure table over many rings (built-in corpus when none given).
    Survey {
        specs: Vec<String>,
        #[arg(long)]
        no_conjugacy_reduction: bool,
    },
}

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (command, specs, strong, no_reduction) = match args.command {
        Cmd::Analyze { spec } => (Command::Analyze, vec![spec], false, false),
        Cmd::Index { spec, strong, no_conjugacy_reduction } => {
            (Command::Index, vec![spec], strong, no_conjugacy_reduction)
        }
        Cmd::Decompose { spec, element, n, strong } => {
            (Command::Decompose { element, n }, vec![spec], strong, false)
        }
        Cmd::Verify { spec, check } => (Command::Verify { check }, vec![spec], false, false),
        Cmd::Survey { specs, no_conjugacy_reduction } => {
            (Command::Survey, specs, false, no_conjugacy_reduction)
        }
    };
    let c = args.common;
    let config = RunConfig {
        command,
        specs,
        strong,
        conjugacy_reduction: !no_reduction,
        format: if c.json {
            Format::Json
        } else if c.csv {
            Format::Csv
        } else {
            Format::Text
        },
        max_size: c.max_size,
        jobs: c.jobs,
        out: c.out,
        timing: !c.no_timing,
    };
    let run = cli::execute(&config);
    let mut code = run.exit_code();
    match &config.out {
        Some(path) => {
            if let Err(source) = std::fs::write(path, &run.output) {
                let err = CliError::Io { path: path.clone(), source };
                eprintln!("tcl: {err}");
                code = code.max(err.exit_code());
            }
        }
        None => print!("{}", run.output),
    }
    if let Err(e) = &run.outcome {
        eprintln!("tcl: {e}");
    }
    ExitCode::from(code as u8)
}
