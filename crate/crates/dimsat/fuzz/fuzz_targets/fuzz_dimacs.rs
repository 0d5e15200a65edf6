//! Feeds arbitrary bytes to the DIMACS parser. Accepted inputs must
//! round-trip through the writer, normalize without panicking, and support
//! partition construction and evaluation on small instances.

#![no_main]

use libfuzzer_sys::fuzz_target;

use dimsat::cnf::{normalize, parse_dimacs, write_dimacs, Assignment};
use dimsat::partition::ClausePartition;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(formula) = parse_dimacs(text) else {
        return;
    };

    let reparsed = parse_dimacs(&write_dimacs(&formula)).expect("writer output must parse");
    assert!(reparsed.structurally_equal(&formula), "round-trip changed the formula");

    let (normalized, report) = normalize(&formula);
    let (again, _) = normalize(&normalized);
    assert!(again.structurally_equal(&normalized), "normalize must be idempotent");

    // Deeper checks only on instances small enough to evaluate cheaply.
    if report.trivially_unsat || formula.num_vars() > 64 || formula.num_clauses() > 256 {
        return;
    }
    let assignment = Assignment::all_true(normalized.num_vars());
    let unsat = normalized.unsatisfied_clauses(&assignment);
    let mut p = ClausePartition::new(&normalized, assignment).expect("length matches");
    assert_eq!(p.unsat_count(), unsat.len());
    assert_eq!(p.dimensionality() == 0, unsat.is_empty());
    for v in 1..=normalized.num_vars() {
        p.flip(v);
    }
    assert!(p.rebuild_check(), "incremental state diverged from scratch recount");
});
