//! Batch experiment harness: solve ensembles of instances under one or more
//! solver configurations and write a summary CSV plus optional per-run
//! traces. Given fixed seeds the output is reproducible row for row.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{normalize, parse_dimacs, Formula};
use crate::oracle::{gen_random_ksat, GenSpec};
use crate::solver::{self, Objective, SolveResult, SolverConfig, Status, Trace};

pub const SUMMARY_HEADER: &str =
    "instance,config,seed,status,iterations,wall_ms,dim_initial,dim_final,max_plateau";

/// Where instances come from: DIMACS files (paths, directories, or glob
/// patterns) or generated ensembles.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceSource {
    Path(String),
    Generated {
        #[serde(flatten)]
        spec: GenSpec,
        #[serde(default = "default_count")]
        count: usize,
    },
}

fn default_count() -> usize {
    1
}

/// One named solver configuration within a plan.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlanConfig {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub objective: Objective,
    #[serde(flatten)]
    pub solver: SolverConfig,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchPlan {
    pub instances: Vec<InstanceSource>,
    pub configs: Vec<PlanConfig>,
    #[serde(default = "default_repetitions")]
    pub repetitions: u32,
    /// Per-run wall-clock budget; runs over budget finish as `unknown`.
    #[serde(default)]
    pub time_budget_ms: Option<u64>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Write one trace CSV per run under `<output_dir>/traces/`.
    #[serde(default)]
    pub write_traces: bool,
    /// Report `wall_ms` as 0 so that repeated runs produce byte-identical
    /// summaries.
    #[serde(default)]
    pub stable_output: bool,
}

fn default_repetitions() -> u32 {
    1
}

impl BenchPlan {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.instances.is_empty() {
            return Err(BenchError::EmptyPlan("instances"));
        }
        if self.configs.is_empty() {
            return Err(BenchError::EmptyPlan("configs"));
        }
        if self.repetitions == 0 {
            return Err(BenchError::ZeroRepetitions);
        }
        for config in &self.configs {
            config
                .solver
                .validate()
                .map_err(|e| BenchError::InvalidConfig(config.name.clone(), e))?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("plan has no {0}")]
    EmptyPlan(&'static str),
    #[error("repetitions must be at least 1")]
    ZeroRepetitions,
    #[error("config '{0}': {1}")]
    InvalidConfig(String, crate::solver::ConfigError),
    #[error("invalid glob pattern '{pattern}': {source}")]
    BadGlob {
        pattern: String,
        source: glob::PatternError,
    },
    #[error("failed to write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// One line of the summary CSV.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub config: String,
    pub seed: u64,
    pub status: Status,
    pub iterations: u64,
    pub wall_ms: u64,
    pub dim_initial: usize,
    pub dim_final: usize,
    pub max_plateau: u64,
}

impl BenchRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.instance,
            self.config,
            self.seed,
            self.status,
            self.iterations,
            self.wall_ms,
            self.dim_initial,
            self.dim_final,
            self.max_plateau
        )
    }
}

#[derive(Debug)]
pub struct BenchOutcome {
    pub rows: Vec<BenchRow>,
    pub summary_csv: String,
}

struct ResolvedInstance {
    id: String,
    formula: Option<Arc<Formula>>,
}

fn has_glob_chars(s: &str) -> bool {
    s.contains(['*', '?', '['])
}

fn load_file(path: &Path) -> Result<Formula, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    parse_dimacs(&text).map_err(|e| e.to_string())
}

fn resolve_instances(sources: &[InstanceSource]) -> Result<Vec<ResolvedInstance>, BenchError> {
    let mut resolved = Vec::new();
    for source in sources {
        match source {
            InstanceSource::Path(p) => {
                let path = Path::new(p);
                if path.is_dir() {
                    let mut entries: Vec<PathBuf> = std::fs::read_dir(path)
                        .map_err(|e| BenchError::Io {
                            path: path.to_path_buf(),
                            source: e,
                        })?
                        .filter_map(|e| e.ok().map(|e| e.path()))
                        .filter(|p| p.extension().is_some_and(|ext| ext == "cnf"))
                        .collect();
                    entries.sort();
                    for entry in entries {
                        push_file(&mut resolved, &entry);
                    }
                } else if has_glob_chars(p) {
                    let mut matches: Vec<PathBuf> = glob::glob(p)
                        .map_err(|e| BenchError::BadGlob {
                            pattern: p.clone(),
                            source: e,
                        })?
                        .filter_map(Result::ok)
                        .collect();
                    matches.sort();
                    for entry in matches {
                        push_file(&mut resolved, &entry);
                    }
                } else {
                    push_file(&mut resolved, path);
                }
            }
            InstanceSource::Generated { spec, count } => {
                for i in 0..*count {
                    let mut per_instance = spec.clone();
                    per_instance.seed = spec.seed.wrapping_add(i as u64);
                    let id = format!(
                        "gen:n{}:m{}:k{}:s{}",
                        per_instance.num_vars,
                        per_instance.num_clauses,
                        per_instance.clause_width,
                        per_instance.seed
                    );
                    match gen_random_ksat(&per_instance) {
                        Ok(f) => resolved.push(ResolvedInstance {
                            id,
                            formula: Some(Arc::new(f)),
                        }),
                        Err(e) => {
                            eprintln!("c bench: could not generate {id}: {e}");
                            resolved.push(ResolvedInstance { id, formula: None });
                        }
                    }
                }
            }
        }
    }
    Ok(resolved)
}

fn push_file(resolved: &mut Vec<ResolvedInstance>, path: &Path) {
    let id = path.display().to_string();
    match load_file(path) {
        Ok(f) => resolved.push(ResolvedInstance {
            id,
            formula: Some(Arc::new(f)),
        }),
        Err(e) => {
            eprintln!("c bench: could not load {id}: {e}");
            resolved.push(ResolvedInstance { id, formula: None });
        }
    }
}

/// Runs one solver invocation with normalization and the trivially-unsat
/// short-circuit applied, honoring an optional wall-clock deadline.
pub fn run_instance(
    formula: &Formula,
    cfg: &SolverConfig,
    objective: Objective,
    deadline: Option<Instant>,
) -> (SolveResult, Trace) {
    let (normalized, report) = normalize(formula);
    if report.trivially_unsat {
        // An empty clause refutes every assignment; no search needed.
        return (
            SolveResult {
                status: Status::UnsatExhausted,
                model: None,
                iterations: 0,
                restarts_used: 0,
                final_dimensionality: 0,
            },
            Trace::default(),
        );
    }
    solver::search(&normalized, cfg, objective, deadline)
}

/// Executes the plan. Cells run in parallel but results are assembled in
/// plan order (instance-major, then config, then repetition).
pub fn run_bench(plan: &BenchPlan) -> Result<BenchOutcome, BenchError> {
    plan.validate()?;
    let instances = resolve_instances(&plan.instances)?;
    let configs: Vec<PlanConfig> = plan
        .configs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut c = c.clone();
            if c.name.is_empty() {
                c.name = format!("config-{i}");
            }
            c
        })
        .collect();

    struct Cell<'a> {
        instance: &'a ResolvedInstance,
        config: &'a PlanConfig,
        rep: u32,
    }
    let mut cells = Vec::new();
    for instance in &instances {
        for config in &configs {
            for rep in 0..plan.repetitions {
                cells.push(Cell {
                    instance,
                    config,
                    rep,
                });
            }
        }
    }

    let budget = plan.time_budget_ms.map(Duration::from_millis);
    let results: Vec<(BenchRow, Option<Trace>)> = cells
        .par_iter()
        .map(|cell| {
            // Repetitions get consecutive seeds off the config's base seed.
            let mut cfg = cell.config.solver.clone();
            cfg.seed = cfg.seed.wrapping_add(cell.rep as u64);
            let row_base = BenchRow {
                instance: cell.instance.id.clone(),
                config: cell.config.name.clone(),
                seed: cfg.seed,
                status: Status::Unknown,
                iterations: 0,
                wall_ms: 0,
                dim_initial: 0,
                dim_final: 0,
                max_plateau: 0,
            };
            let Some(formula) = cell.instance.formula.as_ref() else {
                return (row_base, None);
            };
            let start = Instant::now();
            let deadline = budget.map(|b| start + b);
            let (result, trace) = run_instance(formula, &cfg, cell.config.objective, deadline);
            let wall_ms = if plan.stable_output {
                0
            } else {
                start.elapsed().as_millis() as u64
            };
            let row = BenchRow {
                status: result.status,
                iterations: result.iterations,
                wall_ms,
                dim_initial: trace.initial_dimensionality,
                dim_final: result.final_dimensionality,
                max_plateau: trace.max_plateau(),
                ..row_base
            };
            let trace = plan.write_traces.then_some(trace);
            (row, trace)
        })
        .collect();

    let mut summary = String::from(SUMMARY_HEADER);
    summary.push('\n');
    for (row, _) in &results {
        summary.push_str(&row.to_csv_line());
        summary.push('\n');
    }

    if let Some(dir) = &plan.output_dir {
        std::fs::create_dir_all(dir).map_err(|e| BenchError::Io {
            path: dir.clone(),
            source: e,
        })?;
        let summary_path = dir.join("summary.csv");
        std::fs::write(&summary_path, &summary).map_err(|e| BenchError::Io {
            path: summary_path.clone(),
            source: e,
        })?;
        if plan.write_traces {
            let trace_dir = dir.join("traces");
            std::fs::create_dir_all(&trace_dir).map_err(|e| BenchError::Io {
                path: trace_dir.clone(),
                source: e,
            })?;
            for (row, trace) in &results {
                if let Some(trace) = trace {
                    let file = format!(
                        "{}__{}__s{}.csv",
                        sanitize(&row.instance),
                        sanitize(&row.config),
                        row.seed
                    );
                    let path = trace_dir.join(file);
                    std::fs::write(&path, trace.to_csv()).map_err(|e| BenchError::Io {
                        path: path.clone(),
                        source: e,
                    })?;
                }
            }
        }
    }

    Ok(BenchOutcome {
        rows: results.into_iter().map(|(row, _)| row).collect(),
        summary_csv: summary,
    })
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect()
}
