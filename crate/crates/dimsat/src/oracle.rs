//! Ground truth and benchmark material: an exhaustive brute-force solver, a
//! seeded random k-SAT generator, and the unsat-count baseline search used
//! for objective comparisons.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{Assignment, Clause, Formula, Literal};
use crate::partition::{ClausePartition, Move};
use crate::solver::{Objective, SolveResult, SolverConfig, Trace};

/// Hard cap on brute-force enumeration (2^26 ≈ 67M assignments).
pub const BRUTE_FORCE_VAR_CAP: u32 = 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteForceResult {
    /// The lexicographically-first model (`false < true`, variable 1 most
    /// significant).
    Sat(Assignment),
    Unsat,
}

impl BruteForceResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, BruteForceResult::Sat(_))
    }

    pub fn model(&self) -> Option<&Assignment> {
        match self {
            BruteForceResult::Sat(a) => Some(a),
            BruteForceResult::Unsat => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{num_vars} variables exceed the brute-force cap of {cap}")]
    TooManyVariables { num_vars: u32, cap: u32 },
}

/// Minimal incremental evaluator, deliberately separate from
/// [`ClausePartition`] so the oracle stays independent of the machinery it
/// is used to check.
struct GrayEvaluator {
    occurrences: Vec<Vec<(u32, bool)>>,
    true_counts: Vec<u32>,
    unsat_count: usize,
    assignment: Assignment,
}

impl GrayEvaluator {
    fn new(formula: &Formula, assignment: Assignment) -> Self {
        let n = formula.num_vars() as usize;
        let mut occurrences: Vec<Vec<(u32, bool)>> = vec![Vec::new(); n];
        let mut true_counts = Vec::with_capacity(formula.num_clauses());
        let mut unsat_count = 0;
        for (ci, clause) in formula.clauses().iter().enumerate() {
            let mut count = 0u32;
            for lit in clause.iter() {
                occurrences[lit.index()].push((ci as u32, lit.is_positive()));
                if lit.satisfied_by(assignment.value(lit.var())) {
                    count += 1;
                }
            }
            true_counts.push(count);
            if count == 0 {
                unsat_count += 1;
            }
        }
        GrayEvaluator {
            occurrences,
            true_counts,
            unsat_count,
            assignment,
        }
    }

    fn flip(&mut self, index: usize) {
        let var = index as u32 + 1;
        self.assignment.flip(var);
        let value = self.assignment.value(var);
        for &(ci, positive) in &self.occurrences[index] {
            let count = &mut self.true_counts[ci as usize];
            if positive == value {
                *count += 1;
                if *count == 1 {
                    self.unsat_count -= 1;
                }
            } else {
                *count -= 1;
                if *count == 0 {
                    self.unsat_count += 1;
                }
            }
        }
    }

    fn is_model(&self) -> bool {
        self.unsat_count == 0
    }
}

/// Exhaustively enumerates all 2^num_vars assignments in Gray-code order with
/// incremental evaluation and returns the lexicographically-first model.
pub fn brute_force_solve(formula: &Formula) -> Result<BruteForceResult, OracleError> {
    let n = formula.num_vars();
    if n > BRUTE_FORCE_VAR_CAP {
        return Err(OracleError::TooManyVariables {
            num_vars: n,
            cap: BRUTE_FORCE_VAR_CAP,
        });
    }
    let mut eval = GrayEvaluator::new(formula, Assignment::all_false(n));
    let mut best: Option<Assignment> = None;
    if eval.is_model() {
        best = Some(eval.assignment.clone());
    }
    let total = 1u64 << n;
    for step in 1..total {
        eval.flip(step.trailing_zeros() as usize);
        if eval.is_model() && best.as_ref().is_none_or(|b| eval.assignment < *b) {
            best = Some(eval.assignment.clone());
        }
    }
    Ok(match best {
        Some(model) => {
            debug_assert!(formula.is_satisfied_by(&model));
            BruteForceResult::Sat(model)
        }
        None => BruteForceResult::Unsat,
    })
}

/// Parameters for the fixed-clause-length random model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub num_vars: u32,
    pub num_clauses: usize,
    pub clause_width: u32,
    pub seed: u64,
    /// Clauses may repeat across the formula (the standard random model).
    #[serde(default = "default_allow_duplicates")]
    pub allow_duplicate_clauses: bool,
}

fn default_allow_duplicates() -> bool {
    true
}

impl GenSpec {
    pub fn new(num_vars: u32, num_clauses: usize, clause_width: u32, seed: u64) -> GenSpec {
        GenSpec {
            num_vars,
            num_clauses,
            clause_width,
            seed,
            allow_duplicate_clauses: true,
        }
    }

    fn label(&self) -> String {
        let mut label = format!(
            "generated: n={} m={} k={} seed={}",
            self.num_vars, self.num_clauses, self.clause_width, self.seed
        );
        if !self.allow_duplicate_clauses {
            label.push_str(" no-duplicates");
        }
        label
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("clause width {width} exceeds variable count {num_vars}")]
    WidthExceedsVars { width: u32, num_vars: u32 },
    #[error("clause width must be at least 1")]
    ZeroWidth,
    #[error("clause count must be at least 1")]
    ZeroClauses,
    #[error("could not draw {requested} distinct clauses (only {distinct} exist)")]
    NotEnoughDistinctClauses { requested: usize, distinct: u128 },
}

/// Draws `num_clauses` clauses, each over `clause_width` distinct variables
/// chosen uniformly with uniform polarities. Identical specs produce
/// identical formulas.
pub fn gen_random_ksat(spec: &GenSpec) -> Result<Formula, GenError> {
    if spec.clause_width == 0 {
        return Err(GenError::ZeroWidth);
    }
    if spec.num_clauses == 0 {
        return Err(GenError::ZeroClauses);
    }
    if spec.clause_width > spec.num_vars {
        return Err(GenError::WidthExceedsVars {
            width: spec.clause_width,
            num_vars: spec.num_vars,
        });
    }
    if !spec.allow_duplicate_clauses {
        let distinct = distinct_clause_count(spec.num_vars, spec.clause_width);
        if (spec.num_clauses as u128) > distinct {
            return Err(GenError::NotEnoughDistinctClauses {
                requested: spec.num_clauses,
                distinct,
            });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut clauses = Vec::with_capacity(spec.num_clauses);
    let mut seen: HashSet<Vec<i32>> = HashSet::new();
    while clauses.len() < spec.num_clauses {
        let mut vars: Vec<u32> = rand::seq::index::sample(
            &mut rng,
            spec.num_vars as usize,
            spec.clause_width as usize,
        )
        .into_iter()
        .map(|i| i as u32 + 1)
        .collect();
        vars.sort_unstable();
        let literals: Vec<Literal> = vars
            .into_iter()
            .map(|v| Literal::new(v, rng.random_bool(0.5)))
            .collect();
        if !spec.allow_duplicate_clauses {
            let key: Vec<i32> = literals.iter().map(|l| l.to_dimacs()).collect();
            if !seen.insert(key) {
                continue;
            }
        }
        clauses.push(Clause::new(literals));
    }
    Ok(Formula::new(spec.num_vars, clauses).with_source_name(spec.label()))
}

/// C(n,k) · 2^k, saturating.
fn distinct_clause_count(n: u32, k: u32) -> u128 {
    let mut binom: u128 = 1;
    for i in 1..=k as u128 {
        binom = binom.saturating_mul(n as u128 - i + 1) / i;
    }
    if k >= 127 {
        u128::MAX
    } else {
        binom.saturating_mul(1u128 << k)
    }
}

/// Same loop skeleton as the dimensionality descent, but moves are scored by
/// the change in unsatisfied-clause count. The trace still records the
/// dimensionality column for comparison.
pub fn baseline_unsat_count_search(formula: &Formula, cfg: &SolverConfig) -> (SolveResult, Trace) {
    crate::solver::search(formula, cfg, Objective::UnsatCount, None)
}

/// The baseline's move selector: minimum unsat-count delta over the same
/// candidate set as [`crate::solver::select_move`].
pub fn select_unsat_count_move(
    partition: &mut ClausePartition<'_>,
    cfg: &SolverConfig,
    rng: &mut impl Rng,
) -> Option<(Move, i64)> {
    crate::solver::select_move_by(partition, cfg, Objective::UnsatCount, rng)
}

/// Unsat-count delta of a move, by apply-then-undo.
pub fn score_unsat_count_move(partition: &mut ClausePartition<'_>, mv: &Move) -> i64 {
    crate::solver::score_move_by(partition, mv, Objective::UnsatCount)
}
