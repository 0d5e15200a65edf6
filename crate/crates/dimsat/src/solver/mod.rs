//! The dimensionality-descent loop.
//!
//! Starting from a canonical assignment, the solver repeatedly flips the
//! most promising left-batch variables to shrink the number of distinct
//! variables still appearing in unsatisfied clauses. Once that number falls
//! below a threshold, an exhaustive Gray-code sweep of the remaining subcube
//! finishes the job; sweeping all variables proves unsatisfiability.

mod config;
mod trace;

pub use config::{ConfigError, InitialPolarity, Mode, Objective, SolverConfig};
pub use trace::{MoveKind, SolveResult, Status, Trace, TraceRecord};

use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cnf::{Assignment, Clause, Formula, Literal, Var};
use crate::partition::{ClausePartition, Move};

/// The all-true, all-false, or seeded-uniform starting assignment.
pub fn canonical_assignment(
    formula: &Formula,
    polarity: InitialPolarity,
    rng: &mut impl Rng,
) -> Assignment {
    let n = formula.num_vars();
    match polarity {
        InitialPolarity::AllTrue => Assignment::all_true(n),
        InitialPolarity::AllFalse => Assignment::all_false(n),
        InitialPolarity::Random => {
            Assignment::from_values((0..n).map(|_| rng.random_bool(0.5)).collect())
        }
    }
}

fn objective_value(partition: &ClausePartition<'_>, objective: Objective) -> i64 {
    match objective {
        Objective::Dimensionality => partition.dimensionality() as i64,
        Objective::UnsatCount => partition.unsat_count() as i64,
    }
}

pub(crate) fn score_move_by(
    partition: &mut ClausePartition<'_>,
    mv: &Move,
    objective: Objective,
) -> i64 {
    let before = objective_value(partition, objective);
    partition.apply_move(mv);
    let after = objective_value(partition, objective);
    partition.apply_move(mv); // flipping is an involution: this undoes the move
    debug_assert_eq!(objective_value(partition, objective), before);
    after - before
}

/// Dimensionality delta of applying `mv` (negative is improvement), computed
/// by apply-then-undo; the partition is unchanged on return.
pub fn score_move(partition: &mut ClausePartition<'_>, mv: &Move) -> i64 {
    score_move_by(partition, mv, Objective::Dimensionality)
}

pub(crate) fn select_move_by(
    partition: &mut ClausePartition<'_>,
    cfg: &SolverConfig,
    objective: Objective,
    rng: &mut impl Rng,
) -> Option<(Move, i64)> {
    if partition.dimensionality() == 0 {
        return None;
    }
    // In strict mode the ranking (and therefore tie-breaking) is fully
    // deterministic; sideways/restart break ranking ties with the seeded RNG.
    let ranking = match cfg.mode {
        Mode::Strict => partition.occurrence_ranking(),
        Mode::Sideways | Mode::Restart => partition.occurrence_ranking_shuffled(rng),
    };

    // Candidates: every single left-batch flip, in ranking order, plus
    // prefixes of the ranking up to flip_cardinality. Best key is
    // (delta, cardinality, ranking position).
    let mut best: Option<(Move, i64, usize, usize)> = None;
    for (pos, &(var, _)) in ranking.iter().enumerate() {
        let mv = Move::single(var);
        let delta = score_move_by(partition, &mv, objective);
        let key = (delta, 1usize, pos);
        if best
            .as_ref()
            .is_none_or(|(_, d, c, p)| key < (*d, *c, *p))
        {
            best = Some((mv, delta, 1, pos));
        }
    }
    let max_card = (cfg.flip_cardinality as usize).min(ranking.len());
    for card in 2..=max_card {
        let mv = Move::new(ranking[..card].iter().map(|&(v, _)| v))
            .expect("ranking prefixes are nonempty");
        let delta = score_move_by(partition, &mv, objective);
        let key = (delta, card, 0usize);
        if best
            .as_ref()
            .is_none_or(|(_, d, c, p)| key < (*d, *c, *p))
        {
            best = Some((mv, delta, card, 0));
        }
    }
    best.map(|(mv, delta, _, _)| (mv, delta))
}

/// The move with the minimum dimensionality delta among all single
/// left-batch flips plus ranking-prefix multi-flips.
pub fn select_move(
    partition: &mut ClausePartition<'_>,
    cfg: &SolverConfig,
    rng: &mut impl Rng,
) -> Option<(Move, i64)> {
    select_move_by(partition, cfg, Objective::Dimensionality, rng)
}

/// Result of an exhaustive subcube sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndgameOutcome {
    /// First model found in Gray-code order, if any. The partition is left
    /// at the model when one is found, and restored to the entry assignment
    /// otherwise.
    pub model: Option<Assignment>,
    /// All 2^n subcube assignments were visited and none is a model. This
    /// proves global unsatisfiability only when the subcube spans every
    /// variable.
    pub exhausted: bool,
    /// Assignments examined, including the entry point.
    pub visited: u64,
    /// The enumerated variables, ascending.
    pub subcube_vars: Vec<Var>,
}

/// Enumerates all assignments of the current left-batch variables (all other
/// variables fixed) in Gray-code order, evaluating the full formula
/// incrementally at each step. Stops at the first model or after `budget`
/// visits.
pub fn endgame_exhaust(partition: &mut ClausePartition<'_>, budget: u64) -> EndgameOutcome {
    endgame_with_deadline(partition, budget, None)
}

fn endgame_with_deadline(
    partition: &mut ClausePartition<'_>,
    budget: u64,
    deadline: Option<Instant>,
) -> EndgameOutcome {
    let vars = partition.left_variables();
    let n = vars.len();
    assert!(n <= 30, "endgame subcubes are capped at 2^30 points");
    let total: u64 = 1u64 << n;
    let mut visited: u64 = 1;
    if partition.dimensionality() == 0 {
        return EndgameOutcome {
            model: Some(partition.assignment().clone()),
            exhausted: false,
            visited,
            subcube_vars: vars,
        };
    }

    // Reflected Gray code: step i flips bit trailing_zeros(i), so consecutive
    // assignments differ in exactly one variable. `code` tracks the XOR mask
    // against the entry assignment for restoration.
    let mut code: u64 = 0;
    let mut out_of_budget = false;
    for step in 1..total {
        if visited >= budget {
            out_of_budget = true;
            break;
        }
        if deadline.is_some_and(|d| step % 4096 == 0 && Instant::now() >= d) {
            out_of_budget = true;
            break;
        }
        let bit = step.trailing_zeros() as usize;
        partition.flip_fast(vars[bit]);
        code ^= 1 << bit;
        visited += 1;
        if partition.dimensionality() == 0 {
            return EndgameOutcome {
                model: Some(partition.assignment().clone()),
                exhausted: false,
                visited,
                subcube_vars: vars,
            };
        }
    }

    // No model: put the partition back at the entry assignment.
    for (bit, &var) in vars.iter().enumerate() {
        if code & (1 << bit) != 0 {
            partition.flip_fast(var);
        }
    }
    EndgameOutcome {
        model: None,
        exhausted: !out_of_budget,
        visited,
        subcube_vars: vars,
    }
}

/// Why a descent attempt stopped.
enum LegEnd {
    Sat,
    UnsatProved,
    Stuck,
    DeadlineHit,
}

struct SearchState {
    trace: Trace,
    iteration: u64,
    plateau_run: u64,
}

impl SearchState {
    fn push(&mut self, dimensionality: usize, unsat_count: usize, move_vars: Vec<Var>, kind: MoveKind) {
        self.iteration += 1;
        if kind == MoveKind::Sideways {
            self.plateau_run += 1;
        } else {
            self.flush_plateau();
        }
        self.trace.records.push(TraceRecord {
            iteration: self.iteration,
            dimensionality,
            unsat_count,
            move_vars,
            kind,
        });
    }

    fn flush_plateau(&mut self) {
        if self.plateau_run > 0 {
            self.trace.plateau_lengths.push(self.plateau_run);
            self.plateau_run = 0;
        }
    }
}

/// Runs the descent with the dimensionality objective.
pub fn descend(formula: &Formula, cfg: &SolverConfig) -> (SolveResult, Trace) {
    search(formula, cfg, Objective::Dimensionality, None)
}

/// Shared loop skeleton for both objectives. `deadline`, when set, turns the
/// run into `Status::Unknown` once passed (budget exhaustion, not an error).
pub(crate) fn search(
    formula: &Formula,
    cfg: &SolverConfig,
    objective: Objective,
    deadline: Option<Instant>,
) -> (SolveResult, Trace) {
    cfg.validate().expect("invalid solver configuration");
    assert!(
        formula.clauses().iter().all(|c| !c.is_empty()),
        "solving requires a normalized formula without empty clauses"
    );
    let num_vars = formula.num_vars();
    let max_iters = cfg
        .max_iters
        .unwrap_or_else(|| 100 * u64::from(num_vars.max(1)));

    let mut master = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut leg_rng = ChaCha8Rng::seed_from_u64(master.next_u64());
    let initial = canonical_assignment(formula, cfg.initial_polarity, &mut leg_rng);
    let mut partition =
        ClausePartition::new(formula, initial).expect("canonical assignment length matches");

    let mut state = SearchState {
        trace: Trace {
            initial_dimensionality: partition.dimensionality(),
            initial_unsat_count: partition.unsat_count(),
            max_iters,
            ..Trace::default()
        },
        iteration: 0,
        plateau_run: 0,
    };
    let mut restarts_used = 0u32;

    loop {
        let leg_end = run_leg(
            &mut partition,
            cfg,
            objective,
            max_iters,
            deadline,
            &mut state,
            &mut leg_rng,
        );
        state.flush_plateau();
        match leg_end {
            LegEnd::Sat => {
                let model = partition.assignment().clone();
                debug_assert!(formula.is_satisfied_by(&model));
                return finish(Status::Sat, Some(model), state, restarts_used, 0);
            }
            LegEnd::UnsatProved => {
                let dim = partition.dimensionality();
                return finish(Status::UnsatExhausted, None, state, restarts_used, dim);
            }
            LegEnd::DeadlineHit => {
                let dim = partition.dimensionality();
                return finish(Status::Unknown, None, state, restarts_used, dim);
            }
            LegEnd::Stuck => {
                if cfg.mode == Mode::Restart && restarts_used < cfg.restarts {
                    restarts_used += 1;
                    leg_rng = ChaCha8Rng::seed_from_u64(master.next_u64());
                    let assignment =
                        canonical_assignment(formula, InitialPolarity::Random, &mut leg_rng);
                    partition.reset(assignment);
                    state.push(
                        partition.dimensionality(),
                        partition.unsat_count(),
                        Vec::new(),
                        MoveKind::Restart,
                    );
                } else {
                    let dim = partition.dimensionality();
                    return finish(Status::Unknown, None, state, restarts_used, dim);
                }
            }
        }
    }
}

fn finish(
    status: Status,
    model: Option<Assignment>,
    mut state: SearchState,
    restarts_used: u32,
    final_dimensionality: usize,
) -> (SolveResult, Trace) {
    state.flush_plateau();
    (
        SolveResult {
            status,
            model,
            iterations: state.iteration,
            restarts_used,
            final_dimensionality,
        },
        state.trace,
    )
}

#[allow(clippy::too_many_arguments)]
fn run_leg(
    partition: &mut ClausePartition<'_>,
    cfg: &SolverConfig,
    objective: Objective,
    max_iters: u64,
    deadline: Option<Instant>,
    state: &mut SearchState,
    rng: &mut ChaCha8Rng,
) -> LegEnd {
    let num_vars = partition.formula().num_vars() as usize;
    let mut leg_iters = 0u64;
    let mut sideways_run = 0u64;
    let mut sideways_cap = 0u64;

    loop {
        if partition.dimensionality() == 0 {
            return LegEnd::Sat;
        }
        if deadline.is_some_and(|d| Instant::now() >= d) {
            return LegEnd::DeadlineHit;
        }
        if leg_iters >= max_iters {
            return LegEnd::Stuck;
        }

        let dim = partition.dimensionality();
        if cfg.endgame_threshold > 0 && dim <= cfg.endgame_threshold as usize {
            let entry = partition.assignment().clone();
            let subcube_len = dim;
            let outcome = endgame_with_deadline(partition, u64::MAX, deadline);
            match outcome.model {
                Some(ref model) => {
                    state.push(0, 0, model.diff_vars(&entry), MoveKind::Endgame);
                    return LegEnd::Sat;
                }
                None => {
                    state.push(
                        partition.dimensionality(),
                        partition.unsat_count(),
                        Vec::new(),
                        MoveKind::Endgame,
                    );
                    if outcome.exhausted {
                        if subcube_len == num_vars {
                            return LegEnd::UnsatProved;
                        }
                        return LegEnd::Stuck;
                    }
                    if deadline.is_some_and(|d| Instant::now() >= d) {
                        return LegEnd::DeadlineHit;
                    }
                    return LegEnd::Stuck;
                }
            }
        }

        let (mv, delta) = match select_move_by(partition, cfg, objective, rng) {
            Some(found) => found,
            None => return LegEnd::Sat,
        };
        let kind = match cfg.mode {
            Mode::Strict => {
                if delta < 0 {
                    MoveKind::Greedy
                } else {
                    return LegEnd::Stuck;
                }
            }
            Mode::Sideways | Mode::Restart => {
                if delta < 0 {
                    sideways_run = 0;
                    MoveKind::Greedy
                } else if delta == 0 {
                    if sideways_run == 0 {
                        sideways_cap = cfg
                            .max_sideways
                            .unwrap_or(10 * partition.dimensionality() as u64);
                    }
                    if sideways_run < sideways_cap {
                        sideways_run += 1;
                        MoveKind::Sideways
                    } else {
                        return LegEnd::Stuck;
                    }
                } else {
                    return LegEnd::Stuck;
                }
            }
        };
        partition.apply_move(&mv);
        leg_iters += 1;
        state.push(
            partition.dimensionality(),
            partition.unsat_count(),
            mv.vars().to_vec(),
            kind,
        );
    }
}

/// Repeatedly solves, blocking each found model with the clause that negates
/// it over all variables, until `limit` models are collected or the space is
/// exhausted. Returned models are pairwise distinct.
pub fn enumerate_solutions(formula: &Formula, cfg: &SolverConfig, limit: usize) -> Vec<Assignment> {
    assert!(limit >= 1, "limit must be at least 1");
    let mut work = formula.clone();
    let mut models = Vec::new();
    while models.len() < limit {
        let (result, _) = descend(&work, cfg);
        match (result.status, result.model) {
            (Status::Sat, Some(model)) => {
                debug_assert!(formula.is_satisfied_by(&model));
                models.push(model.clone());
                if formula.num_vars() == 0 {
                    break; // the empty assignment is the only model
                }
                let blocking: Clause = (1..=formula.num_vars())
                    .map(|v| Literal::new(v, !model.value(v)))
                    .collect();
                work.push_clause(blocking);
            }
            _ => break,
        }
    }
    models
}
