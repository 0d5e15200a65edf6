//! dimsat — a stochastic local-search SAT solver built around an unusual
//! objective: instead of minimizing the number of unsatisfied clauses, it
//! minimizes the *dimensionality* of the current state, the number of
//! distinct variables that still appear in unsatisfied clauses.
//!
//! Clauses are kept partitioned into an unsatisfied left batch and a
//! satisfied right batch, with per-variable occurrence counts over the left
//! batch maintained incrementally under flips. The descent heuristic flips
//! the most frequently occurring left-batch variables; once the
//! dimensionality is small enough, an exhaustive Gray-code sweep of the
//! remaining subcube either finds a model or, when the subcube spans every
//! variable, proves unsatisfiability.
//!
//! The crate ships:
//!
//! - [`cnf`] — the CNF data model, DIMACS parsing/serialization,
//!   normalization, and assignment evaluation;
//! - [`partition`] — the incremental clause partition and the
//!   dimensionality bookkeeping;
//! - [`solver`] — the descent loop, move selection, endgame sweep, and
//!   model enumeration via blocking clauses;
//! - [`oracle`] — a brute-force reference solver, a seeded random k-SAT
//!   generator, and the unsat-count baseline search;
//! - [`bench`] — a reproducible batch experiment harness with CSV output;
//! - [`cli`] — the `dimsat` command-line frontend.

pub mod bench;
pub mod cli;
pub mod cnf;
pub mod oracle;
pub mod partition;
pub mod solver;

pub use cnf::{parse_dimacs, write_dimacs, Assignment, Clause, Formula, Literal, Var};
pub use partition::{ClausePartition, Move};
pub use solver::{descend, enumerate_solutions, SolveResult, SolverConfig, Status, Trace};
