use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fairdiv::Kind;
use fairdiv_cli::commands::{self, Method, Question, SolveFlags};
use fairdiv_cli::doc::parse_rational;
use fairdiv_cli::gen::{generate, GenSpec};
use fairdiv_cli::{CliError, Limits, EXIT_FAILS, EXIT_OK};
use serde::Serialize;

/// EEFX allocations with certificates, fairness checks and exhaustive oracles.
///
/// Agents and items are numbered from 1 in all files. Exit codes: 0 success,
/// 1 a checked notion fails, 2 invalid input, 3 search budget exceeded,
/// 4 precondition failed, 5 internal error. FAIRDIV_BUDGET overrides search
/// limits, e.g. `max_assignments=1000000,time_limit_ms=2000,mms_max_items=14`.
#[derive(Parser)]
#[command(name = "fairdiv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Goods,
    Chores,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Pipeline,
    Mms,
}

#[derive(Clone, Copy, ValueEnum)]
enum QuestionArg {
    Eefx,
    Eef1,
    EfxExists,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an EEFX allocation.
    Solve {
        #[arg(required = true)]
        instances: Vec<PathBuf>,
        /// Attach a verified certificate for every agent.
        #[arg(long)]
        certificates: bool,
        /// Attach the fairness report.
        #[arg(long)]
        report: bool,
        /// Solve up to this many files concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Check fairness notions of an allocation; exit 1 if any fails.
    Check {
        instance: PathBuf,
        allocation: PathBuf,
        /// Comma-separated: efx, ef1, eefx, prop1, propm, propx, mms or mms:α.
        #[arg(long, default_value = "efx")]
        notions: String,
        /// Certificates to try before falling back to the eefx oracle.
        #[arg(long)]
        certificates: Option<PathBuf>,
    },
    /// Produce an EEFX certificate for one agent.
    Certify {
        instance: PathBuf,
        /// A solve report (pipeline method) or any allocation document.
        allocation: PathBuf,
        #[arg(long)]
        agent: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Pipeline)]
        method: MethodArg,
    },
    /// Generate a random additive instance.
    Gen {
        #[arg(long)]
        agents: usize,
        #[arg(long)]
        items: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Goods)]
        kind: KindArg,
        #[arg(long, default_value_t = 20)]
        max_value: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sort every agent's values so all agents share one item order.
        #[arg(long)]
        ordered: bool,
        /// Target correlation factor in (0, 1], e.g. 3/4.
        #[arg(long, value_name = "ALPHA")]
        alpha_correlated: Option<String>,
    },
    /// Answer a question by exhaustive search.
    Oracle {
        instance: PathBuf,
        /// Required for eefx and eef1.
        allocation: Option<PathBuf>,
        #[arg(long, value_enum)]
        question: QuestionArg,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn print(doc: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(doc).map_err(|e| CliError::new(fairdiv_cli::EXIT_INTERNAL, e.to_string()))?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(CliError::new(fairdiv_cli::EXIT_INTERNAL, format!("writing output: {e}")))
        }
        _ => Ok(()),
    }
}

fn verdict(holds: bool) -> i32 {
    if holds {
        EXIT_OK
    } else {
        EXIT_FAILS
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let limits = Limits::from_env()?;
    match cli.command {
        Command::Solve {
            instances,
            certificates,
            report,
            jobs,
        } => {
            let flags = SolveFlags { certificates, report };
            if let [single] = instances.as_slice() {
                print(&commands::solve(&read(single)?, flags, &limits)?)?;
                return Ok(EXIT_OK);
            }
            let files = instances
                .iter()
                .map(|p| Ok((p.display().to_string(), read(p)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            let mut docs = Vec::new();
            let mut code = EXIT_OK;
            for r in commands::solve_many(&files, flags, &limits, jobs) {
                match r {
                    Ok(d) => docs.push(d),
                    Err(e) => {
                        eprintln!("error: {e}");
                        if code == EXIT_OK {
                            code = e.code;
                        }
                    }
                }
            }
            print(&docs)?;
            Ok(code)
        }
        Command::Check {
            instance,
            allocation,
            notions,
            certificates,
        } => {
            let notions = commands::parse_notions(&notions)?;
            let certs = certificates.as_deref().map(read).transpose()?;
            let doc = commands::check(&read(&instance)?, &read(&allocation)?, &notions, certs.as_deref(), &limits)?;
            print(&doc)?;
            Ok(verdict(doc.holds))
        }
        Command::Certify {
            instance,
            allocation,
            agent,
            method,
        } => {
            let method = match method {
                MethodArg::Pipeline => Method::Pipeline,
                MethodArg::Mms => Method::Mms,
            };
            print(&commands::certify(&read(&instance)?, &read(&allocation)?, agent, method, &limits)?)?;
            Ok(EXIT_OK)
        }
        Command::Gen {
            agents,
            items,
            kind,
            max_value,
            seed,
            ordered,
            alpha_correlated,
        } => {
            let kind = match kind {
                KindArg::Goods => Kind::Goods,
                KindArg::Chores => Kind::Chores,
            };
            let alpha = alpha_correlated
                .map(|a| parse_rational(&a).map_err(|e| CliError::input(format!("--alpha-correlated: {e}"))))
                .transpose()?;
            let spec = GenSpec {
                max_value,
                ordered,
                alpha,
                ..GenSpec::new(agents, items, kind, seed)
            };
            print(&generate(&spec)?)?;
            Ok(EXIT_OK)
        }
        Command::Oracle {
            instance,
            allocation,
            question,
        } => {
            let question = match question {
                QuestionArg::Eefx => Question::Eefx,
                QuestionArg::Eef1 => Question::Eef1,
                QuestionArg::EfxExists => Question::EfxExists,
            };
            let alloc = allocation.as_deref().map(read).transpose()?;
            let doc = commands::oracle(&read(&instance)?, alloc.as_deref(), question, &limits)?;
            print(&doc)?;
            Ok(verdict(doc.answer))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { fairdiv_cli::EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
