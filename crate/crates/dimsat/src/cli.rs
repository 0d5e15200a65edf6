//! The `dimsat` command-line frontend.
//!
//! Exit codes follow the SAT-competition convention: 10 for satisfiable,
//! 20 for unsatisfiable, 0 for unknown. Parse failures exit 1, invalid
//! parameters exit 2.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{run_bench, run_instance, BenchPlan, InstanceSource, PlanConfig};
use crate::cnf::{parse_dimacs, write_dimacs};
use crate::oracle::{gen_random_ksat, GenSpec};
use crate::solver::{InitialPolarity, Mode, Objective, SolveResult, SolverConfig, Trace};

#[derive(Parser, Debug)]
#[command(
    name = "dimsat",
    version,
    about = "Local-search SAT solver minimizing the number of distinct variables in unsatisfied clauses"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve a DIMACS CNF file and print a certificate.
    Solve(SolveArgs),
    /// Generate a random k-SAT instance in DIMACS format.
    Gen(GenArgs),
    /// Run a batch of (instance, config, repetition) cells and emit a
    /// summary CSV.
    Bench(BenchArgs),
    /// Solve a DIMACS CNF file and emit the per-iteration descent CSV.
    Trace(TraceArgs),
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum ModeArg {
    Strict,
    Sideways,
    #[default]
    Restart,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum PolarityArg {
    #[default]
    True,
    False,
    Random,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum ObjectiveArg {
    #[default]
    Dimensionality,
    UnsatCount,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum FormatArg {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct SolverFlags {
    /// Descent mode.
    #[arg(long, value_enum, default_value_t)]
    mode: ModeArg,
    /// RNG seed; falls back to DIMSAT_SEED, then 0.
    #[arg(long, env = "DIMSAT_SEED")]
    seed: Option<u64>,
    /// Iteration budget per descent attempt (default 100 per variable).
    #[arg(long)]
    max_iters: Option<u64>,
    /// Cap on consecutive zero-delta moves (default 10x the plateau-entry
    /// dimensionality).
    #[arg(long)]
    max_sideways: Option<u64>,
    /// Restarts allowed in restart mode.
    #[arg(long)]
    restarts: Option<u32>,
    /// Dimensionality at which the exhaustive subcube sweep kicks in (0-30).
    #[arg(long)]
    endgame_threshold: Option<u32>,
    /// Largest multi-variable move drawn from the occurrence ranking (1-3).
    #[arg(long)]
    flip_cardinality: Option<u32>,
    /// Starting assignment polarity.
    #[arg(long, value_enum, default_value_t)]
    polarity: PolarityArg,
    /// Quantity minimized by move selection.
    #[arg(long, value_enum, default_value_t)]
    objective: ObjectiveArg,
}

impl SolverFlags {
    fn to_config(&self) -> SolverConfig {
        let defaults = SolverConfig::default();
        SolverConfig {
            mode: match self.mode {
                ModeArg::Strict => Mode::Strict,
                ModeArg::Sideways => Mode::Sideways,
                ModeArg::Restart => Mode::Restart,
            },
            max_iters: self.max_iters,
            max_sideways: self.max_sideways,
            restarts: self.restarts.unwrap_or(defaults.restarts),
            endgame_threshold: self.endgame_threshold.unwrap_or(defaults.endgame_threshold),
            flip_cardinality: self.flip_cardinality.unwrap_or(defaults.flip_cardinality),
            seed: self.seed.unwrap_or(0),
            initial_polarity: match self.polarity {
                PolarityArg::True => InitialPolarity::AllTrue,
                PolarityArg::False => InitialPolarity::AllFalse,
                PolarityArg::Random => InitialPolarity::Random,
            },
        }
    }

    fn objective(&self) -> Objective {
        match self.objective {
            ObjectiveArg::Dimensionality => Objective::Dimensionality,
            ObjectiveArg::UnsatCount => Objective::UnsatCount,
        }
    }
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// DIMACS CNF input file.
    file: PathBuf,
    #[command(flatten)]
    solver: SolverFlags,
    /// Write the per-iteration descent CSV here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Output format for the result.
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Number of variables.
    #[arg(short = 'n', long)]
    num_vars: u32,
    /// Number of clauses (exclusive with --ratio).
    #[arg(short = 'm', long, conflicts_with = "ratio")]
    num_clauses: Option<usize>,
    /// Clause-to-variable ratio; the clause count is round(ratio * n).
    #[arg(long)]
    ratio: Option<f64>,
    /// Literals per clause.
    #[arg(short = 'k', long, default_value_t = 3)]
    clause_width: u32,
    /// RNG seed; falls back to DIMSAT_SEED, then 0.
    #[arg(long, env = "DIMSAT_SEED")]
    seed: Option<u64>,
    /// Reject duplicate clauses instead of allowing them.
    #[arg(long)]
    no_duplicate_clauses: bool,
    /// Output file (stdout when omitted).
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// JSON plan file describing instances, configs, and repetitions.
    #[arg(long, conflicts_with = "instances")]
    plan: Option<PathBuf>,
    /// Instance files, directories, or glob patterns.
    instances: Vec<String>,
    #[command(flatten)]
    solver: SolverFlags,
    /// Also run the other objective on every cell for comparison.
    #[arg(long)]
    compare_objectives: bool,
    /// Repetitions per (instance, config) cell.
    #[arg(long, default_value_t = 1)]
    reps: u32,
    /// Per-run wall-clock budget in milliseconds.
    #[arg(long)]
    time_budget_ms: Option<u64>,
    /// Directory for summary.csv and traces (summary prints to stdout when
    /// omitted).
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Write one trace CSV per run (requires --out-dir).
    #[arg(long)]
    traces: bool,
    /// Zero the wall_ms column so repeated runs are byte-identical.
    #[arg(long)]
    stable_output: bool,
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    /// DIMACS CNF input file.
    file: PathBuf,
    #[command(flatten)]
    solver: SolverFlags,
    /// Output file (stdout when omitted).
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
struct JsonResult<'a> {
    instance: &'a str,
    status: crate::solver::Status,
    model: Option<Vec<i32>>,
    iterations: u64,
    restarts_used: u32,
    initial_dimensionality: usize,
    final_dimensionality: usize,
    max_plateau: u64,
}

pub fn run_from_args() -> i32 {
    run(Cli::parse())
}

pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Gen(args) => cmd_gen(&args),
        Command::Bench(args) => cmd_bench(&args),
        Command::Trace(args) => cmd_trace(&args),
    }
}

fn solve_file(args_file: &PathBuf, flags: &SolverFlags) -> Result<(SolveResult, Trace, String), i32> {
    let text = match std::fs::read_to_string(args_file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args_file.display());
            return Err(1);
        }
    };
    let formula = match parse_dimacs(&text) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {}: {e}", args_file.display());
            return Err(1);
        }
    };
    let cfg = flags.to_config();
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return Err(2);
    }
    let (result, trace) = run_instance(&formula, &cfg, flags.objective(), None);
    Ok((result, trace, args_file.display().to_string()))
}

pub fn cmd_solve(args: &SolveArgs) -> i32 {
    let (result, trace, instance) = match solve_file(&args.file, &args.solver) {
        Ok(ok) => ok,
        Err(code) => return code,
    };
    if let Some(path) = &args.trace {
        if let Err(e) = std::fs::write(path, trace.to_csv()) {
            eprintln!("error: cannot write trace {}: {e}", path.display());
            return 1;
        }
    }
    match args.format {
        FormatArg::Text => print!("{}", result.certificate()),
        FormatArg::Json => {
            let json = JsonResult {
                instance: &instance,
                status: result.status,
                model: result
                    .model
                    .as_ref()
                    .map(|m| m.dimacs_codes().collect()),
                iterations: result.iterations,
                restarts_used: result.restarts_used,
                initial_dimensionality: trace.initial_dimensionality,
                final_dimensionality: result.final_dimensionality,
                max_plateau: trace.max_plateau(),
            };
            println!(
                "{}",
                serde_json::to_string(&json).expect("result serializes")
            );
        }
    }
    result.exit_code()
}

pub fn cmd_gen(args: &GenArgs) -> i32 {
    let num_clauses = match (args.num_clauses, args.ratio) {
        (Some(m), None) => m,
        (None, Some(ratio)) => {
            if !(ratio.is_finite() && ratio > 0.0) {
                eprintln!("error: --ratio must be positive");
                return 2;
            }
            (ratio * f64::from(args.num_vars)).round() as usize
        }
        (None, None) => {
            eprintln!("error: one of --num-clauses or --ratio is required");
            return 2;
        }
        (Some(_), Some(_)) => unreachable!("clap rejects the conflict"),
    };
    let spec = GenSpec {
        num_vars: args.num_vars,
        num_clauses,
        clause_width: args.clause_width,
        seed: args.seed.unwrap_or(0),
        allow_duplicate_clauses: !args.no_duplicate_clauses,
    };
    let formula = match gen_random_ksat(&spec) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let text = write_dimacs(&formula);
    match &args.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 1;
            }
        }
        None => print!("{text}"),
    }
    0
}

pub fn cmd_bench(args: &BenchArgs) -> i32 {
    let plan = if let Some(path) = &args.plan {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read plan {}: {e}", path.display());
                return 1;
            }
        };
        match serde_json::from_str::<BenchPlan>(&text) {
            Ok(p) => p,
            Err(e) => {
                eprintln!("error: invalid plan {}: {e}", path.display());
                return 2;
            }
        }
    } else {
        if args.instances.is_empty() {
            eprintln!("error: give instance paths or --plan <file>");
            return 2;
        }
        let solver = args.solver.to_config();
        let mut configs = vec![PlanConfig {
            name: objective_name(args.solver.objective()).into(),
            objective: args.solver.objective(),
            solver: solver.clone(),
        }];
        if args.compare_objectives {
            let other = match args.solver.objective() {
                Objective::Dimensionality => Objective::UnsatCount,
                Objective::UnsatCount => Objective::Dimensionality,
            };
            configs.push(PlanConfig {
                name: objective_name(other).into(),
                objective: other,
                solver,
            });
        }
        BenchPlan {
            instances: args
                .instances
                .iter()
                .map(|p| InstanceSource::Path(p.clone()))
                .collect(),
            configs,
            repetitions: args.reps,
            time_budget_ms: args.time_budget_ms,
            output_dir: args.out_dir.clone(),
            write_traces: args.traces,
            stable_output: args.stable_output,
        }
    };
    match run_bench(&plan) {
        Ok(outcome) => {
            match &plan.output_dir {
                None => print!("{}", outcome.summary_csv),
                Some(dir) => eprintln!(
                    "c bench: {} rows written to {}",
                    outcome.rows.len(),
                    dir.join("summary.csv").display()
                ),
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn objective_name(objective: Objective) -> &'static str {
    match objective {
        Objective::Dimensionality => "dimensionality",
        Objective::UnsatCount => "unsat-count",
    }
}

pub fn cmd_trace(args: &TraceArgs) -> i32 {
    let (result, trace, _) = match solve_file(&args.file, &args.solver) {
        Ok(ok) => ok,
        Err(code) => return code,
    };
    let csv = trace.to_csv();
    match &args.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, csv) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 1;
            }
        }
        None => print!("{csv}"),
    }
    result.exit_code()
}
