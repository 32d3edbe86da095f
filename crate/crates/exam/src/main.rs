//! Command-line front end: run a machine on a term, run the property
//! suites, or generate random term corpora.

use std::io::Read;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use exam::check::{run_suite, SuiteKind};
use exam::gen::{gen_terms, GenMode};
use exam::pools::{self, Pool, TemplateKind};
use exam::syntax::HoleName;
use exam::trace::{Detail, MachineKind, Outcome, RunConfig, Trace};
use exam::{exam as machine, parse};

#[derive(Parser)]
#[command(name = "exam", about = "Strong evaluation of lambda-terms by scheduled jumping machines")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Records,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Format, String> {
        match s {
            "text" => Ok(Format::Text),
            "records" => Ok(Format::Records),
            _ => Err(format!("unknown format {s:?} (expected text or records)")),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a machine on a term and print the final read-back and counters.
    Reduce {
        /// File holding one term (`--` starts a comment); standard input
        /// when absent.
        file: Option<PathBuf>,
        #[arg(long, default_value = "exam")]
        machine: MachineKind,
        /// Pool template (exam only): set, stack, least-level, fair,
        /// interactive. With `interactive` and no file, the term is the
        /// first input line and later lines answer the prompts.
        #[arg(long, default_value = "stack")]
        template: TemplateKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        fuel: u64,
        /// How much of the run to print: none, labels, full.
        #[arg(long, default_value = "none")]
        trace: Detail,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Run a property suite over random terms.
    Check {
        /// transparency, projection, reflection, measure, diamond,
        /// invariants, differential, leftmost, level, fair; all when
        /// absent.
        #[arg(long)]
        suite: Option<SuiteKind>,
        #[arg(long, default_value_t = 60)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 18)]
        size: usize,
    },
    /// Generate a random term corpus, one term per line.
    Gen {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 15)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "closed")]
        mode: GenMode,
    },
}

fn read_input(file: &Option<PathBuf>, first_line_only: bool) -> Result<String, String> {
    match file {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display())),
        None if first_line_only => {
            let mut line = String::new();
            std::io::stdin()
                .read_line(&mut line)
                .map_err(|e| format!("cannot read standard input: {e}"))?;
            Ok(line)
        }
        None => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| format!("cannot read standard input: {e}"))?;
            Ok(text)
        }
    }
}

fn prompt_chooser() -> pools::Chooser {
    std::sync::Arc::new(std::sync::Mutex::new(|items: &[pools::ChoiceItem]| {
        let mut err = std::io::stderr();
        let _ = writeln!(err, "selectable jobs:");
        for item in items {
            let _ = writeln!(err, "  {}: {} | stack depth {}", item.name, item.term, item.stack_depth);
        }
        let _ = write!(err, "pick> ");
        let _ = err.flush();
        let mut line = String::new();
        if std::io::stdin().read_line(&mut line).unwrap_or(0) == 0 {
            return items[0].name;
        }
        let ans = line.trim();
        let id = ans
            .strip_prefix('α')
            .unwrap_or(ans)
            .parse::<u64>()
            .ok();
        match id {
            Some(id) if items.iter().any(|i| i.name == HoleName(id)) => HoleName(id),
            _ => {
                let _ = writeln!(err, "unknown job {ans:?}, taking {}", items[0].name);
                items[0].name
            }
        }
    }))
}

fn cmd_reduce(
    file: Option<PathBuf>,
    machine_kind: MachineKind,
    template: TemplateKind,
    seed: u64,
    fuel: u64,
    detail: Detail,
    format: Format,
) -> Result<ExitCode, String> {
    let interactive = machine_kind == MachineKind::Exam && template == TemplateKind::Interactive;
    let input = read_input(&file, interactive)?;
    let term = parse(&input).map_err(|e| e.to_string())?;
    let config = RunConfig { machine: machine_kind, template, seed, fuel, trace_detail: detail };
    let trace: Trace = if interactive {
        let s = machine::init_with_pool(&term, |job| Pool::interactive(job, prompt_chooser()));
        let t = Trace::new_exam(term.clone(), template, seed, fuel);
        machine::run_from(s, t, fuel, detail == Detail::Full).0
    } else {
        config.execute(&term)
    };
    match format {
        Format::Records => print!("{}", trace.to_records()),
        Format::Text => match detail {
            Detail::None => {
                println!("{}", trace.final_term);
                println!(
                    "-- beta {} overhead {} ({})",
                    trace.beta_count,
                    trace.overhead_count,
                    match trace.outcome {
                        Outcome::Final => "final",
                        Outcome::FuelExhausted => "fuel exhausted",
                    }
                );
            }
            Detail::Labels | Detail::Full => print!("{}", trace.render_text()),
        },
    }
    Ok(match trace.outcome {
        Outcome::Final => ExitCode::SUCCESS,
        Outcome::FuelExhausted => ExitCode::from(2),
    })
}

fn cmd_check(suite: Option<SuiteKind>, count: usize, seed: u64, size: usize) -> ExitCode {
    let suites: Vec<SuiteKind> = match suite {
        Some(k) => vec![k],
        None => SuiteKind::ALL.to_vec(),
    };
    let mut ok = true;
    for kind in suites {
        let report = run_suite(kind, count, seed, size);
        println!("{report}");
        ok &= report.ok();
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn cmd_gen(count: usize, size: usize, seed: u64, mode: GenMode) -> ExitCode {
    for t in gen_terms(count, size, seed, mode) {
        println!("{t}");
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are not usage errors
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::FAILURE;
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match cli.cmd {
        Cmd::Reduce { file, machine, template, seed, fuel, trace, format } => {
            match cmd_reduce(file, machine, template, seed, fuel, trace, format) {
                Ok(code) => code,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Cmd::Check { suite, count, seed, size } => cmd_check(suite, count, seed, size),
        Cmd::Gen { count, size, seed, mode } => cmd_gen(count, size, seed, mode),
    }
}
