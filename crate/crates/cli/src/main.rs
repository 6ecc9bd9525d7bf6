//! `capcert`: exact JSON/CSV front-end to the capacity certificates, the grid
//! oracle and the reduction demonstrators.
//!
//! Exit status: 0 on success, 2 on invalid input, 3 when a budget ran out
//! before the requested result was reached.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use capcert::appendix::{entropy_power_identity, exp_approx, rationality_refutation};
use capcert::oracle::{grid_capacity_with, instability_csv, instability_report_with, GridOptions};
use capcert::reduction::{
    approx_hardness_demo, closed_form_gadget_optimizer, effective_convergence_check,
    halting_decider_via_optimizer, hardness_threshold, TuringMachine, Verdict,
};
use capcert::{capacity_certified, optimizer_heuristic, Channel, Error, Rational, RealRep};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const AFTER_HELP: &str = "\
CHANNEL JSON
  {\"x\": <inputs>, \"y\": <outputs>, \"rows\": [[\"<rational>\", ...], ...]}
  Exactly x rows of exactly y entries. Every entry is a string holding an
  integer or a fraction \"n/d\" and must be non-negative. Every row must sum
  to exactly 1 as a rational; the first offending row is reported by its
  0-based index. Example, the binary symmetric channel with crossover 1/4:
    {\"x\": 2, \"y\": 2, \"rows\": [[\"3/4\", \"1/4\"], [\"1/4\", \"3/4\"]]}

TURING MACHINE TEXT
  One item per line; '#' starts a comment; blank lines are ignored.
    start: <state>              required
    halt: <state>               required, has no transitions
    blank: <symbol>             optional, defaults to _
    <state> <symbol> -> <state'> <symbol'> L|R
  The alphabet is the blank, 1 and every symbol used in a transition. Every
  non-halting state needs exactly one transition per symbol. Input l is the
  word 1^l with the head on its first cell; steps count transitions taken.

OUTPUT
  Rationals are printed as exact strings \"n/d\" and lists are ordered
  deterministically, so identical invocations give byte-identical output.
  --float-preview adds decimal approximations on stderr; they are not
  certified.

EXIT STATUS
  0 success, 2 invalid input, 3 budget exhausted or not converged.";

#[derive(Parser)]
#[command(
    name = "capcert",
    version,
    about = "Certified channel capacity and optimizer-reduction demonstrators"
)]
#[command(after_long_help = AFTER_HELP)]
struct Cli {
    /// Also print non-certified decimal approximations to stderr.
    #[arg(long, global = true)]
    float_preview: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certified capacity bracket of width below 2^-M.
    Capacity {
        channel: PathBuf,
        /// Target precision exponent.
        #[arg(long = "M", default_value_t = 20)]
        m: u32,
        #[arg(long, default_value_t = 100_000)]
        max_iter: u64,
    },
    /// Heuristic optimizer after a fixed number of iterations (uncertified).
    Optimizer {
        channel: PathBuf,
        #[arg(long, default_value_t = 500)]
        iters: u64,
        /// Precision exponent of each step.
        #[arg(long = "M", default_value_t = 30)]
        m: u32,
    },
    /// Exhaustive grid search over the input simplex.
    Oracle {
        channel: PathBuf,
        /// Grid denominator d.
        #[arg(long, default_value_t = 64)]
        grid: u64,
        /// Precision exponent of each evaluation.
        #[arg(long = "M", default_value_t = 30)]
        m: u32,
        #[command(flatten)]
        guard: GridGuard,
    },
    /// CSV table of channel distance against optimizer distance.
    Instability {
        #[arg(long, default_value_t = 10)]
        tmax: u32,
        #[arg(long, default_value_t = 64)]
        grid: u64,
        #[command(flatten)]
        guard: GridGuard,
    },
    /// Halting decider or convergence report for a machine.
    Reduce {
        machine: PathBuf,
        #[arg(long, default_value_t = 1)]
        l: u64,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Mode::Decider)]
        mode: Mode,
        /// Last n checked in convergence mode.
        #[arg(long, default_value_t = 50)]
        nmax: u64,
    },
    /// Decider driven by an alpha-accurate optimizer.
    ApproxHardness {
        machine: PathBuf,
        #[arg(long)]
        alpha: Rational,
        #[arg(long, default_value_t = 1)]
        l: u64,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
    },
    /// Certified Taylor approximation of e^(-x) for x in [0, 1].
    Exp {
        #[arg(long)]
        x: Rational,
        #[arg(long)]
        n: u32,
    },
    /// Exact entropy-power identities and rationality exclusion for h2(p).
    EntropyCheck {
        #[arg(long)]
        p: Rational,
        #[arg(long, default_value_t = 50)]
        vmax: u64,
    },
}

#[derive(Args)]
struct GridGuard {
    /// Worker threads; output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value_t = GridOptions::default().max_inputs)]
    max_inputs: usize,
    #[arg(long, default_value_t = GridOptions::default().max_denominator)]
    max_denominator: u64,
}

impl GridGuard {
    fn options(&self) -> GridOptions {
        GridOptions {
            max_inputs: self.max_inputs,
            max_denominator: self.max_denominator,
            threads: self.threads,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Decider,
    Convergence,
}

/// Why a run stopped without success.
enum Failure {
    Invalid(String),
    Exhausted,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Unresolved { .. } => {
                eprintln!("error: {e}");
                Failure::Exhausted
            }
            e => Failure::Invalid(e.to_string()),
        }
    }
}

/// Structured output plus whether the requested result was reached.
enum Output {
    Json(Value, bool),
    Csv(String),
}

fn load_channel(path: &Path) -> Result<Channel, Failure> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn load_machine(path: &Path) -> Result<TuringMachine, Failure> {
    read(path)?
        .parse()
        .map_err(|e: Error| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn run(command: Command) -> Result<Output, Failure> {
    Ok(match command {
        Command::Capacity {
            channel,
            m,
            max_iter,
        } => {
            let w = load_channel(&channel)?;
            let cert = capacity_certified(&w, m, max_iter)?;
            Output::Json(json!(cert), cert.converged)
        }
        Command::Optimizer { channel, iters, m } => {
            let w = load_channel(&channel)?;
            let (p, diagnostics) = optimizer_heuristic(&w, iters, m)?;
            Output::Json(
                json!({ "distribution": p, "diagnostics": diagnostics }),
                true,
            )
        }
        Command::Oracle {
            channel,
            grid,
            m,
            guard,
        } => {
            let w = load_channel(&channel)?;
            let result = grid_capacity_with(&w, grid, m, &guard.options())?;
            Output::Json(json!(result), true)
        }
        Command::Instability { tmax, grid, guard } => {
            let rows = instability_report_with(tmax, grid, &guard.options())?;
            Output::Csv(instability_csv(&rows))
        }
        Command::Reduce {
            machine,
            l,
            budget,
            mode,
            nmax,
        } => {
            let tm = load_machine(&machine)?;
            match mode {
                Mode::Decider => {
                    let report = halting_decider_via_optimizer(
                        &tm,
                        l,
                        &closed_form_gadget_optimizer,
                        budget,
                    )?;
                    let done = report.verdict != Verdict::BudgetExhausted;
                    Output::Json(json!(report), done)
                }
                Mode::Convergence => {
                    if l == 0 {
                        return Err(Failure::Invalid("--l must be at least 1".into()));
                    }
                    let reports = [2 * l - 1, 2 * l]
                        .into_iter()
                        .map(|k| effective_convergence_check(&tm, k, nmax, budget))
                        .collect::<capcert::Result<Vec<_>>>()?;
                    Output::Json(json!(reports), true)
                }
            }
        }
        Command::ApproxHardness {
            machine,
            alpha,
            l,
            budget,
        } => {
            let tm = load_machine(&machine)?;
            let threshold = hardness_threshold(&alpha)?;
            let report =
                approx_hardness_demo(&tm, l, &closed_form_gadget_optimizer, &alpha, budget)?;
            let done = report.verdict != Verdict::BudgetExhausted;
            Output::Json(
                json!({ "alpha": alpha, "threshold": threshold, "report": report }),
                done,
            )
        }
        Command::Exp { x, n } => {
            let result = exp_approx(&RealRep::constant(x), n)?;
            Output::Json(json!(result), true)
        }
        Command::EntropyCheck { p, vmax } => {
            let refutation = rationality_refutation(&p, vmax)?;
            let identity = entropy_power_identity(&p)?;
            Output::Json(
                json!({ "identity": identity, "refutation": refutation }),
                true,
            )
        }
    })
}

/// Replaces every string that parses as a rational by its nearest `f64`.
fn float_preview(v: &Value) -> Value {
    match v {
        Value::String(s) => match s.parse::<Rational>() {
            Ok(r) => json!(r.to_f64()),
            Err(_) => v.clone(),
        },
        Value::Array(items) => Value::Array(items.iter().map(float_preview).collect()),
        Value::Object(map) => Value::Object(
            map.iter()
                .map(|(k, v)| (k.clone(), float_preview(v)))
                .collect(),
        ),
        _ => v.clone(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Output::Json(value, done)) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&value).expect("valid JSON")
            );
            if cli.float_preview {
                eprintln!("non-certified decimal preview:");
                eprintln!(
                    "{}",
                    serde_json::to_string_pretty(&float_preview(&value)).expect("valid JSON")
                );
            }
            if done {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Ok(Output::Csv(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Exhausted) => ExitCode::from(3),
    }
}
