//! Incremental maintenance of the clause partition under variable flips.
//!
//! Clauses are split into the *left batch* (unsatisfied under the current
//! assignment) and the *right batch* (satisfied). The partition tracks, per
//! clause, how many of its literals are currently true, and per variable, how
//! many left-batch clauses mention it. The *dimensionality* — the number of
//! distinct variables occurring in left-batch clauses — is the solver's
//! objective and is kept up to date on every flip instead of being recomputed.

use thiserror::Error;

use crate::cnf::{Assignment, Formula, Var};

const NOT_IN_LEFT: usize = usize::MAX;

/// A nonempty set of variables to flip simultaneously. Variables are kept
/// sorted and deduplicated; moves are sets, not sequences.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    vars: Vec<Var>,
}

impl Move {
    /// Returns `None` if the set is empty after deduplication.
    pub fn new(vars: impl IntoIterator<Item = Var>) -> Option<Move> {
        let mut vars: Vec<Var> = vars.into_iter().collect();
        assert!(vars.iter().all(|&v| v >= 1), "variable indices are 1-based");
        vars.sort_unstable();
        vars.dedup();
        if vars.is_empty() {
            None
        } else {
            Some(Move { vars })
        }
    }

    pub fn single(var: Var) -> Move {
        Move { vars: vec![var] }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn cardinality(&self) -> usize {
        self.vars.len()
    }
}

/// Effect of a single flip on the partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipDelta {
    pub var: Var,
    /// Clause indices that moved left → right (became satisfied).
    pub moved_to_sat: Vec<usize>,
    /// Clause indices that moved right → left (became unsatisfied).
    pub moved_to_unsat: Vec<usize>,
    pub dim_before: usize,
    pub dim_after: usize,
}

/// Aggregate effect of a multi-variable move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveDelta {
    pub dim_before: usize,
    pub dim_after: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("assignment has {got} values but the formula declares {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
}

#[derive(Clone, Copy, Debug)]
struct Occurrence {
    clause: u32,
    positive: bool,
}

/// The left/right clause split with incremental occurrence counts.
///
/// Requires a normalized formula: no duplicate literals within a clause, no
/// tautologies, no empty clauses. Single-owner mutable; independent partitions
/// over the same shared `Formula` may run in parallel.
#[derive(Debug)]
pub struct ClausePartition<'a> {
    formula: &'a Formula,
    assignment: Assignment,
    /// Per variable (0-based), the clauses mentioning it.
    occurrences: Vec<Vec<Occurrence>>,
    /// Per clause, the number of currently-true literals.
    sat_true_count: Vec<u32>,
    /// Left batch as an unordered vector plus position index for O(1) moves.
    unsat: Vec<usize>,
    unsat_pos: Vec<usize>,
    /// Per variable (0-based), the number of left-batch clauses containing it
    /// (polarity-blind, one count per distinct clause).
    left_occurrence: Vec<u32>,
    dimensionality: usize,
}

impl<'a> ClausePartition<'a> {
    /// Builds the partition by a full scan.
    pub fn new(formula: &'a Formula, assignment: Assignment) -> Result<Self, PartitionError> {
        if assignment.len() != formula.num_vars() as usize {
            return Err(PartitionError::AssignmentLength {
                expected: formula.num_vars() as usize,
                got: assignment.len(),
            });
        }
        let n = formula.num_vars() as usize;
        let m = formula.num_clauses();
        let mut occurrences: Vec<Vec<Occurrence>> = vec![Vec::new(); n];
        for (ci, clause) in formula.clauses().iter().enumerate() {
            debug_assert!(!clause.is_empty(), "normalized formulas have no empty clauses");
            for lit in clause.iter() {
                occurrences[lit.index()].push(Occurrence {
                    clause: ci as u32,
                    positive: lit.is_positive(),
                });
            }
        }
        let mut partition = ClausePartition {
            formula,
            assignment,
            occurrences,
            sat_true_count: vec![0; m],
            unsat: Vec::new(),
            unsat_pos: vec![NOT_IN_LEFT; m],
            left_occurrence: vec![0; n],
            dimensionality: 0,
        };
        partition.recount();
        Ok(partition)
    }

    /// Reinitializes to a new assignment, reusing the occurrence lists.
    pub fn reset(&mut self, assignment: Assignment) {
        assert_eq!(assignment.len(), self.formula.num_vars() as usize);
        self.assignment = assignment;
        self.recount();
    }

    fn recount(&mut self) {
        self.unsat.clear();
        self.unsat_pos.fill(NOT_IN_LEFT);
        self.left_occurrence.fill(0);
        self.dimensionality = 0;
        for (ci, clause) in self.formula.clauses().iter().enumerate() {
            let true_count = clause
                .iter()
                .filter(|l| l.satisfied_by(self.assignment.value(l.var())))
                .count() as u32;
            self.sat_true_count[ci] = true_count;
            if true_count == 0 {
                self.insert_left(ci);
            }
        }
    }

    fn insert_left(&mut self, clause_idx: usize) {
        debug_assert_eq!(self.unsat_pos[clause_idx], NOT_IN_LEFT);
        self.unsat_pos[clause_idx] = self.unsat.len();
        self.unsat.push(clause_idx);
        for lit in self.formula.clause(clause_idx).iter() {
            let count = &mut self.left_occurrence[lit.index()];
            *count += 1;
            if *count == 1 {
                self.dimensionality += 1;
            }
        }
    }

    fn remove_left(&mut self, clause_idx: usize) {
        let pos = self.unsat_pos[clause_idx];
        debug_assert_ne!(pos, NOT_IN_LEFT);
        let last = *self.unsat.last().expect("left batch is nonempty");
        self.unsat.swap_remove(pos);
        if pos < self.unsat.len() {
            self.unsat_pos[last] = pos;
        }
        self.unsat_pos[clause_idx] = NOT_IN_LEFT;
        for lit in self.formula.clause(clause_idx).iter() {
            let count = &mut self.left_occurrence[lit.index()];
            *count -= 1;
            if *count == 0 {
                self.dimensionality -= 1;
            }
        }
    }

    /// Negates one variable, updating only the clauses that mention it.
    pub fn flip(&mut self, var: Var) -> FlipDelta {
        let dim_before = self.dimensionality;
        let mut moved_to_sat = Vec::new();
        let mut moved_to_unsat = Vec::new();
        self.assignment.flip(var);
        let new_value = self.assignment.value(var);
        let occs = std::mem::take(&mut self.occurrences[(var - 1) as usize]);
        for occ in &occs {
            let ci = occ.clause as usize;
            if occ.positive == new_value {
                self.sat_true_count[ci] += 1;
                if self.sat_true_count[ci] == 1 {
                    self.remove_left(ci);
                    moved_to_sat.push(ci);
                }
            } else {
                self.sat_true_count[ci] -= 1;
                if self.sat_true_count[ci] == 0 {
                    self.insert_left(ci);
                    moved_to_unsat.push(ci);
                }
            }
        }
        self.occurrences[(var - 1) as usize] = occs;
        FlipDelta {
            var,
            moved_to_sat,
            moved_to_unsat,
            dim_before,
            dim_after: self.dimensionality,
        }
    }

    /// Flip without building the moved-clause lists; the hot path for
    /// scoring, the endgame sweep, and move application.
    pub(crate) fn flip_fast(&mut self, var: Var) {
        self.assignment.flip(var);
        let new_value = self.assignment.value(var);
        let occs = std::mem::take(&mut self.occurrences[(var - 1) as usize]);
        for occ in &occs {
            let ci = occ.clause as usize;
            if occ.positive == new_value {
                self.sat_true_count[ci] += 1;
                if self.sat_true_count[ci] == 1 {
                    self.remove_left(ci);
                }
            } else {
                self.sat_true_count[ci] -= 1;
                if self.sat_true_count[ci] == 0 {
                    self.insert_left(ci);
                }
            }
        }
        self.occurrences[(var - 1) as usize] = occs;
    }

    /// Flips every variable in the move; the outcome is order-independent.
    pub fn apply_move(&mut self, mv: &Move) -> MoveDelta {
        let dim_before = self.dimensionality;
        for &v in mv.vars() {
            self.flip_fast(v);
        }
        MoveDelta {
            dim_before,
            dim_after: self.dimensionality,
        }
    }

    /// Variables with nonzero left-batch occurrence, sorted by descending
    /// count and ascending variable index on ties. Its length equals the
    /// dimensionality.
    pub fn occurrence_ranking(&self) -> Vec<(Var, u32)> {
        let mut ranking: Vec<(Var, u32)> = self
            .left_occurrence
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (i as Var + 1, c))
            .collect();
        ranking.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        ranking
    }

    /// Like [`occurrence_ranking`](Self::occurrence_ranking) but with ties
    /// broken by the seeded RNG instead of variable index.
    pub fn occurrence_ranking_shuffled(&self, rng: &mut impl rand::Rng) -> Vec<(Var, u32)> {
        use rand::seq::SliceRandom;
        let mut ranking: Vec<(Var, u32)> = self
            .left_occurrence
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (i as Var + 1, c))
            .collect();
        ranking.shuffle(rng);
        // Stable sort keeps the shuffled order within equal counts.
        ranking.sort_by_key(|&(_, count)| std::cmp::Reverse(count));
        ranking
    }

    /// Left-batch variables in ascending order.
    pub fn left_variables(&self) -> Vec<Var> {
        self.left_occurrence
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| i as Var + 1)
            .collect()
    }

    pub fn formula(&self) -> &'a Formula {
        self.formula
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    pub fn dimensionality(&self) -> usize {
        self.dimensionality
    }

    pub fn unsat_count(&self) -> usize {
        self.unsat.len()
    }

    /// Left-batch clause indices, in no particular order.
    pub fn unsat_clauses(&self) -> &[usize] {
        &self.unsat
    }

    pub fn is_unsat_clause(&self, clause_idx: usize) -> bool {
        self.unsat_pos[clause_idx] != NOT_IN_LEFT
    }

    pub fn left_occurrence(&self, var: Var) -> u32 {
        self.left_occurrence[(var - 1) as usize]
    }

    /// True iff a from-scratch recount over the current assignment produces
    /// identical batches, counts, and dimensionality. Test oracle for the
    /// incremental updates; deliberately bypasses them.
    pub fn rebuild_check(&self) -> bool {
        let m = self.formula.num_clauses();
        let n = self.formula.num_vars() as usize;
        let mut true_counts = vec![0u32; m];
        let mut left_occ = vec![0u32; n];
        let mut in_left = vec![false; m];
        for (ci, clause) in self.formula.clauses().iter().enumerate() {
            let count = clause
                .iter()
                .filter(|l| l.satisfied_by(self.assignment.value(l.var())))
                .count() as u32;
            true_counts[ci] = count;
            if count == 0 {
                in_left[ci] = true;
                for lit in clause.iter() {
                    left_occ[lit.index()] += 1;
                }
            }
        }
        let dim = left_occ.iter().filter(|&&c| c > 0).count();
        self.sat_true_count == true_counts
            && self.left_occurrence == left_occ
            && self.dimensionality == dim
            && self.unsat.len() == in_left.iter().filter(|&&b| b).count()
            && self.unsat.iter().all(|&ci| in_left[ci])
            && (0..m).all(|ci| in_left[ci] == (self.unsat_pos[ci] != NOT_IN_LEFT))
    }
}

/// Number of distinct nonempty flip-sets over `n` left-batch variables:
/// Σ_{k=1..n} C(n,k) = 2^n − 1, saturating for n ≥ 128.
pub fn count_transitions(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}
