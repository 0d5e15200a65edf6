//! Solve outcomes and the per-iteration descent record.

use std::fmt;

use serde::Serialize;

use crate::cnf::{Assignment, Var};
use crate::partition::count_transitions;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Sat,
    /// Every assignment over all variables was enumerated and none is a
    /// model.
    UnsatExhausted,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Sat => "sat",
            Status::UnsatExhausted => "unsat_exhausted",
            Status::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    Greedy,
    Sideways,
    Restart,
    Endgame,
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveKind::Greedy => "greedy",
            MoveKind::Sideways => "sideways",
            MoveKind::Restart => "restart",
            MoveKind::Endgame => "endgame",
        })
    }
}

/// One accepted step: the state *after* the move was applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    pub iteration: u64,
    pub dimensionality: usize,
    pub unsat_count: usize,
    /// Flipped variables; empty for restarts and failed endgame sweeps.
    pub move_vars: Vec<Var>,
    pub kind: MoveKind,
}

impl TraceRecord {
    /// Number of flip-set transitions still open from this state
    /// (2^dimensionality − 1).
    pub fn max_transitions(&self) -> u128 {
        count_transitions(self.dimensionality)
    }
}

/// Per-iteration descent record plus plateau statistics.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub initial_dimensionality: usize,
    pub initial_unsat_count: usize,
    /// The per-leg iteration budget actually in effect (the configured value
    /// or the 100-per-variable default), kept for reproducibility.
    pub max_iters: u64,
    pub records: Vec<TraceRecord>,
    /// Lengths of maximal runs of accepted non-improving moves.
    pub plateau_lengths: Vec<u64>,
}

impl Trace {
    pub const CSV_HEADER: &'static str = "iteration,dimensionality,unsat_count,move_vars,move_kind";

    pub fn max_plateau(&self) -> u64 {
        self.plateau_lengths.iter().copied().max().unwrap_or(0)
    }

    /// CSV export; `move_vars` is semicolon-joined.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for rec in &self.records {
            let vars = rec
                .move_vars
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(";");
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                rec.iteration, rec.dimensionality, rec.unsat_count, vars, rec.kind
            ));
        }
        out
    }
}

/// Final outcome of a solver run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub status: Status,
    pub model: Option<Assignment>,
    pub iterations: u64,
    pub restarts_used: u32,
    pub final_dimensionality: usize,
}

impl SolveResult {
    /// SAT-competition certificate text: an `s` status line, plus `v` lines
    /// of signed literals terminated by 0 for satisfiable results.
    pub fn certificate(&self) -> String {
        match self.status {
            Status::Sat => {
                let model = self.model.as_ref().expect("sat result carries a model");
                let mut line = String::from("v");
                for code in model.dimacs_codes() {
                    line.push(' ');
                    line.push_str(&code.to_string());
                }
                line.push_str(" 0");
                format!("s SATISFIABLE\n{line}\n")
            }
            Status::UnsatExhausted => "s UNSATISFIABLE\n".to_string(),
            Status::Unknown => "s UNKNOWN\n".to_string(),
        }
    }

    /// SAT-competition exit code: 10 sat, 20 unsat, 0 unknown.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Sat => 10,
            Status::UnsatExhausted => 20,
            Status::Unknown => 0,
        }
    }
}
