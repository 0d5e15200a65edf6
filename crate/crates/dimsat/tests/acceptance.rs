//! Acceptance suite. Each test drives one criterion end to end at its stated
//! tolerance and prints a PASS line (visible with `--nocapture`).
//!
//! Run with: `cargo test --test acceptance -- --nocapture`

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dimsat::bench::{run_bench, BenchPlan, InstanceSource, PlanConfig};
use dimsat::cnf::{parse_dimacs, write_dimacs, Assignment, Clause, Formula, Var};
use dimsat::oracle::{
    brute_force_solve, gen_random_ksat, select_unsat_count_move, BruteForceResult, GenSpec,
};
use dimsat::partition::{count_transitions, ClausePartition, Move};
use dimsat::solver::{
    descend, endgame_exhaust, select_move, Mode, MoveKind, Objective, SolverConfig, Status,
};

fn fixture(name: &str) -> Formula {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("read {path}: {e}"));
    parse_dimacs(&text).unwrap_or_else(|e| panic!("parse {path}: {e}"))
}

fn random_assignment(num_vars: u32, rng: &mut impl Rng) -> Assignment {
    Assignment::from_values((0..num_vars).map(|_| rng.random_bool(0.5)).collect())
}

/// Criterion 1: on the schematic fixture (four all-positive clauses plus two
/// all-negative clauses), all-true leaves exactly the all-negative clauses
/// unsatisfied at dimensionality 6, and strict descent reaches SAT with a
/// strictly decreasing dimensionality trace in under a millisecond.
#[test]
fn c01_schematic_instance_reproduction() {
    let f = fixture("polarized_blocks.cnf");
    let p = ClausePartition::new(&f, Assignment::all_true(f.num_vars())).unwrap();
    let left: BTreeSet<usize> = p.unsat_clauses().iter().copied().collect();
    assert_eq!(left, BTreeSet::from([4, 5]));
    assert_eq!(p.dimensionality(), 6);

    let cfg = SolverConfig {
        mode: Mode::Strict,
        endgame_threshold: 0, // pure greedy descent
        ..SolverConfig::default()
    };
    let start = Instant::now();
    let (result, trace) = descend(&f, &cfg);
    let elapsed = start.elapsed();

    assert_eq!(result.status, Status::Sat);
    assert!(f.is_satisfied_by(result.model.as_ref().unwrap()));
    let mut dims = vec![trace.initial_dimensionality];
    for rec in &trace.records {
        assert_eq!(rec.kind, MoveKind::Greedy);
        dims.push(rec.dimensionality);
    }
    assert_eq!(dims, vec![6, 3, 0], "strictly decreasing to zero");
    assert!(
        elapsed < Duration::from_millis(1),
        "descent took {elapsed:?}, budget 1 ms"
    );

    // The default configuration (endgame enabled) must also solve it.
    let (default_result, _) = descend(&f, &SolverConfig::default());
    assert_eq!(default_result.status, Status::Sat);

    println!("C1 schematic-instance-reproduction: PASS ({elapsed:?}, trace {dims:?})");
}

/// Criterion 2: 10^4 random flips on each of 100 random 3-SAT instances
/// (n=50, m=213); the incremental partition matches a from-scratch recount
/// after every single step. Zero tolerance, under 10 seconds total.
#[test]
fn c02_incremental_scratch_equivalence() {
    let start = Instant::now();
    let mut checks: u64 = 0;
    for seed in 0..100u64 {
        let f = gen_random_ksat(&GenSpec::new(50, 213, 3, seed)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9));
        let mut p = ClausePartition::new(&f, random_assignment(50, &mut rng)).unwrap();
        for step in 0..10_000u32 {
            p.flip(rng.random_range(1..=50));
            assert!(
                p.rebuild_check(),
                "instance seed {seed}: divergence after step {step}"
            );
            checks += 1;
        }
    }
    let elapsed = start.elapsed();
    assert_eq!(checks, 1_000_000);
    assert!(
        elapsed < Duration::from_secs(10),
        "equivalence sweep took {elapsed:?}, budget 10 s"
    );
    println!("C2 incremental-scratch-equivalence: PASS ({checks} checks in {elapsed:?})");
}

fn crafted_unsat_cores() -> Vec<Formula> {
    let mut cores = Vec::new();
    // Complete cores: all 2^k sign patterns over the first k variables.
    for k in 1..=4u32 {
        let mut clauses = Vec::new();
        for mask in 0..(1u32 << k) {
            clauses.push(Clause::new(
                (1..=k)
                    .map(|v| dimsat::cnf::Literal::new(v, mask & (1 << (v - 1)) != 0))
                    .collect(),
            ));
        }
        cores.push(Formula::new(k, clauses.clone()));
        // The same core embedded among satisfiable padding clauses.
        let n = k + 4;
        let mut padded = clauses;
        padded.push(Clause::from_dimacs([k as i32 + 1, k as i32 + 2]));
        padded.push(Clause::from_dimacs([-(k as i32 + 3), k as i32 + 4]));
        cores.push(Formula::new(n, padded));
    }
    cores
}

/// Criterion 3: on 500+ instances with n ≤ 16 (random ratios 2.0–6.0 plus
/// crafted unsatisfiable cores), the solver's sat/unsat_exhausted statuses
/// never contradict the brute-force oracle, and every SAT model re-verifies.
/// Zero contradictions, under 60 seconds total.
#[test]
fn c03_oracle_agreement() {
    let start = Instant::now();
    let mut instances: Vec<Formula> = crafted_unsat_cores();
    let mut seed = 1000u64;
    while instances.len() < 500 {
        let n = 4 + (seed % 13) as u32; // 4..=16
        let ratio = 2.0 + (seed % 9) as f64 * 0.5; // 2.0..=6.0
        let m = ((ratio * f64::from(n)).round() as usize).max(1);
        instances.push(gen_random_ksat(&GenSpec::new(n, m, 3, seed)).unwrap());
        seed += 1;
    }

    let mut sat_seen = 0u32;
    let mut unsat_seen = 0u32;
    let mut unknown_seen = 0u32;
    for (i, f) in instances.iter().enumerate() {
        let truth = brute_force_solve(f).unwrap();
        let cfg = SolverConfig {
            seed: i as u64,
            ..SolverConfig::default()
        };
        let (result, _) = descend(f, &cfg);
        match result.status {
            Status::Sat => {
                let model = result.model.expect("sat result carries a model");
                assert!(
                    f.unsatisfied_clauses(&model).is_empty(),
                    "instance {i}: reported model does not re-verify"
                );
                assert!(truth.is_sat(), "instance {i}: sat vs oracle unsat");
                sat_seen += 1;
            }
            Status::UnsatExhausted => {
                assert_eq!(
                    truth,
                    BruteForceResult::Unsat,
                    "instance {i}: unsat_exhausted vs oracle sat"
                );
                unsat_seen += 1;
            }
            Status::Unknown => unknown_seen += 1,
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "oracle agreement took {elapsed:?}, budget 60 s"
    );
    assert!(sat_seen > 0 && unsat_seen > 0, "both statuses exercised");
    println!(
        "C3 oracle-agreement: PASS ({} instances: {sat_seen} sat, {unsat_seen} unsat, \
         {unknown_seen} unknown, {elapsed:?})",
        instances.len()
    );
}

/// Criterion 4: over 10^4 sampled (partition, right-only variable) pairs,
/// flipping a variable absent from the left batch never decreases the
/// dimensionality. Zero violations.
#[test]
fn c04_right_only_flip_invariant() {
    let mut samples = 0u64;
    let mut seed = 0u64;
    while samples < 10_000 {
        let n = 5 + (seed % 20) as u32;
        let m = ((3.5 * f64::from(n)) as usize).max(1);
        let f = gen_random_ksat(&GenSpec::new(n, m, 3, seed)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xdead_beef);
        let mut p = ClausePartition::new(&f, random_assignment(n, &mut rng)).unwrap();
        for _ in 0..20 {
            let right_only: Vec<Var> = (1..=n).filter(|&v| p.left_occurrence(v) == 0).collect();
            for &v in &right_only {
                let delta = p.flip(v);
                assert!(
                    delta.dim_after >= delta.dim_before,
                    "seed {seed}: right-only flip of {v} decreased dimensionality \
                     {} -> {}",
                    delta.dim_before,
                    delta.dim_after
                );
                p.flip(v);
                samples += 1;
            }
            p.flip(rng.random_range(1..=n));
        }
        seed += 1;
    }
    println!("C4 right-only-flip-invariant: PASS ({samples} samples, 0 violations)");
}

/// Criterion 5: over 10^4 sampled (partition, left variable) pairs, flipping
/// a left-batch variable moves every left clause containing it to the
/// satisfied side. Zero violations.
#[test]
fn c05_left_flip_satisfaction() {
    let mut samples = 0u64;
    let mut seed = 100u64;
    while samples < 10_000 {
        let n = 5 + (seed % 20) as u32;
        let m = ((4.0 * f64::from(n)) as usize).max(1);
        let f = gen_random_ksat(&GenSpec::new(n, m, 3, seed)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xfeed_cafe);
        let mut p = ClausePartition::new(&f, random_assignment(n, &mut rng)).unwrap();
        for _ in 0..20 {
            for &v in &p.left_variables() {
                let containing: BTreeSet<usize> = p
                    .unsat_clauses()
                    .iter()
                    .copied()
                    .filter(|&ci| f.clause(ci).contains_var(v))
                    .collect();
                let delta = p.flip(v);
                let moved: BTreeSet<usize> = delta.moved_to_sat.iter().copied().collect();
                assert_eq!(
                    moved, containing,
                    "seed {seed}: flip of left variable {v} did not satisfy every \
                     left clause containing it"
                );
                p.flip(v);
                samples += 1;
            }
            p.flip(rng.random_range(1..=n));
        }
        seed += 1;
    }
    println!("C5 left-flip-satisfaction: PASS ({samples} samples, 0 violations)");
}

/// Independent subcube oracle: enumerate all assignments of `vars` over the
/// base assignment by binary counting and full re-evaluation.
fn subcube_has_model(f: &Formula, base: &Assignment, vars: &[Var]) -> bool {
    let n = vars.len();
    for mask in 0..(1u64 << n) {
        let mut a = base.clone();
        for (bit, &v) in vars.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                a.flip(v);
            }
        }
        if f.is_satisfied_by(&a) {
            return true;
        }
    }
    false
}

/// Criterion 6: for subcubes of up to 16 variables, the endgame visits
/// exactly 2^n assignments, consecutive visits differ by one flip, and a
/// model is found iff one exists within the subcube. Zero tolerance.
#[test]
fn c06_endgame_completeness() {
    // One-flip / distinctness property of the reflected Gray walk the
    // endgame performs: prefix-XOR of the flip sequence enumerates 2^n
    // distinct codes.
    for n in 0..=16usize {
        let mut code: u64 = 0;
        let mut seen = vec![false; 1 << n];
        seen[0] = true;
        for step in 1..(1u64 << n) {
            let bit = step.trailing_zeros();
            assert!((bit as usize) < n, "flip bit out of range");
            code ^= 1 << bit; // exactly one variable changes
            assert!(!seen[code as usize], "assignment revisited");
            seen[code as usize] = true;
        }
        assert!(seen.iter().all(|&b| b), "n={n}: subcube not covered");
    }

    let mut exhausted_cases = 0u32;
    let mut model_cases = 0u32;
    for seed in 0..120u64 {
        let n = 3 + (seed % 10) as u32; // instances small enough that d <= 16
        let m = ((3.0 + (seed % 7) as f64 * 0.5) * f64::from(n)).round() as usize;
        let f = gen_random_ksat(&GenSpec::new(n, m.max(1), 3, seed)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let entry = random_assignment(n, &mut rng);
        let mut p = ClausePartition::new(&f, entry.clone()).unwrap();
        let d = p.dimensionality();
        if d == 0 {
            continue;
        }
        let vars = p.left_variables();
        let oracle_says = subcube_has_model(&f, &entry, &vars);
        let outcome = endgame_exhaust(&mut p, u64::MAX);
        match outcome.model {
            Some(model) => {
                assert!(oracle_says, "seed {seed}: model found, oracle says none");
                assert!(f.is_satisfied_by(&model));
                // Variables outside the subcube stay fixed.
                for v in 1..=n {
                    if !vars.contains(&v) {
                        assert_eq!(model.value(v), entry.value(v));
                    }
                }
                model_cases += 1;
            }
            None => {
                assert!(outcome.exhausted);
                assert!(!oracle_says, "seed {seed}: exhausted, oracle finds a model");
                assert_eq!(
                    outcome.visited,
                    1u64 << d,
                    "seed {seed}: visited {} of 2^{d} assignments",
                    outcome.visited
                );
                assert_eq!(p.assignment(), &entry, "entry state restored");
                exhausted_cases += 1;
            }
        }
    }
    assert!(exhausted_cases > 0 && model_cases > 0, "both outcomes exercised");
    println!(
        "C6 endgame-completeness: PASS ({model_cases} models, {exhausted_cases} exhaustions)"
    );
}

/// Criterion 7: count_transitions(n) equals 2^n − 1 for n = 0..62, checked
/// against an independently computed binomial sum.
#[test]
fn c07_count_transitions_identity() {
    for n in 0..=62usize {
        let mut sum = 0u128;
        let mut binom = 1u128;
        for k in 1..=n {
            binom = binom * (n - k + 1) as u128 / k as u128;
            sum += binom;
        }
        assert_eq!(count_transitions(n), sum, "binomial sum mismatch at n={n}");
        assert_eq!(count_transitions(n), (1u128 << n) - 1, "analytic identity at n={n}");
    }
    println!("C7 count-transitions-identity: PASS (n = 0..=62)");
}

/// Scratch scorer: deltas computed by full re-evaluation of the flipped
/// assignment, independent of the incremental machinery.
fn scratch_deltas(f: &Formula, base: &Assignment, v: Var) -> (i64, i64) {
    let measure = |a: &Assignment| -> (i64, i64) {
        let unsat = f.unsatisfied_clauses(a);
        let vars: BTreeSet<Var> = unsat
            .iter()
            .flat_map(|&ci| f.clause(ci).iter().map(|l| l.var()))
            .collect();
        (vars.len() as i64, unsat.len() as i64)
    };
    let (dim_before, unsat_before) = measure(base);
    let mut flipped = base.clone();
    flipped.flip(v);
    let (dim_after, unsat_after) = measure(&flipped);
    (dim_after - dim_before, unsat_after - unsat_before)
}

/// Criterion 8: on the shipped divergence fixture the dimensionality
/// objective and the unsat-count objective select different moves from the
/// same state, each matching the expectation derived by exhaustively scoring
/// all single flips.
#[test]
fn c08_objective_divergence_fixture() {
    let f = fixture("objective_divergence.cnf");
    let all_true = Assignment::all_true(f.num_vars());

    // Derive expected winners by exhaustive scratch scoring over all single
    // flips of left-batch variables, applying the documented tie-break
    // (descending left occurrence, then ascending variable index).
    let p = ClausePartition::new(&f, all_true.clone()).unwrap();
    let ranking = p.occurrence_ranking();
    let pick = |objective: Objective| -> (Var, i64) {
        ranking
            .iter()
            .enumerate()
            .map(|(pos, &(v, _))| {
                let (dim_delta, unsat_delta) = scratch_deltas(&f, &all_true, v);
                let delta = match objective {
                    Objective::Dimensionality => dim_delta,
                    Objective::UnsatCount => unsat_delta,
                };
                (delta, pos, v)
            })
            .min()
            .map(|(delta, _, v)| (v, delta))
            .unwrap()
    };
    let (expect_dim_var, expect_dim_delta) = pick(Objective::Dimensionality);
    let (expect_unsat_var, expect_unsat_delta) = pick(Objective::UnsatCount);
    assert_eq!((expect_dim_var, expect_dim_delta), (5, -3));
    assert_eq!((expect_unsat_var, expect_unsat_delta), (1, -3));

    let cfg = SolverConfig {
        mode: Mode::Strict,
        ..SolverConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut p_dim = ClausePartition::new(&f, all_true.clone()).unwrap();
    let (dim_move, dim_delta) = select_move(&mut p_dim, &cfg, &mut rng).unwrap();
    let mut p_unsat = ClausePartition::new(&f, all_true).unwrap();
    let (unsat_move, unsat_delta) =
        select_unsat_count_move(&mut p_unsat, &cfg, &mut rng).unwrap();

    assert_eq!(dim_move, Move::single(expect_dim_var));
    assert_eq!(dim_delta, expect_dim_delta);
    assert_eq!(unsat_move, Move::single(expect_unsat_var));
    assert_eq!(unsat_delta, expect_unsat_delta);
    assert_ne!(dim_move, unsat_move, "objectives must diverge on this state");

    println!(
        "C8 objective-divergence: PASS (dimensionality flips {expect_dim_var}, \
         unsat-count flips {expect_unsat_var})"
    );
}

/// Criterion 9: identical (instance, config, seed) runs produce byte-identical
/// certificates, trace CSVs, and summary CSVs; DIMACS round-trips hold on 100
/// generated instances.
#[test]
fn c09_determinism_and_interchange() {
    let f = gen_random_ksat(&GenSpec::new(40, 170, 3, 4242)).unwrap();
    let cfg = SolverConfig {
        seed: 7,
        ..SolverConfig::default()
    };
    let (r1, t1) = descend(&f, &cfg);
    let (r2, t2) = descend(&f, &cfg);
    assert_eq!(r1.certificate(), r2.certificate());
    assert_eq!(t1.to_csv(), t2.to_csv());

    let plan = BenchPlan {
        instances: vec![InstanceSource::Generated {
            spec: GenSpec::new(15, 60, 3, 77),
            count: 5,
        }],
        configs: vec![
            PlanConfig {
                name: "dim".into(),
                objective: Objective::Dimensionality,
                solver: cfg.clone(),
            },
            PlanConfig {
                name: "unsat".into(),
                objective: Objective::UnsatCount,
                solver: cfg.clone(),
            },
        ],
        repetitions: 2,
        time_budget_ms: None,
        output_dir: None,
        write_traces: false,
        stable_output: true,
    };
    let a = run_bench(&plan).unwrap();
    let b = run_bench(&plan).unwrap();
    assert_eq!(a.summary_csv, b.summary_csv, "summary CSV is byte-identical");

    let mut round_trips = 0u32;
    for seed in 0..100u64 {
        let n = 5 + (seed % 30) as u32;
        let k = 2 + (seed % 3) as u32;
        let m = (2 * n) as usize + seed as usize % 40;
        let f = gen_random_ksat(&GenSpec::new(n, m, k.min(n), seed)).unwrap();
        let parsed = parse_dimacs(&write_dimacs(&f)).unwrap();
        assert!(parsed.structurally_equal(&f), "round-trip failed at seed {seed}");
        round_trips += 1;
    }
    assert_eq!(round_trips, 100);
    println!("C9 determinism-and-interchange: PASS (byte-identical outputs, 100 round-trips)");
}

/// Criterion 10: at n=100, m=426 (ratio 4.26) in restart mode with default
/// budgets the median run finishes within 5 seconds, and on oracle-labeled
/// n=20 ensembles the measured sat-rate decreases across ratios
/// 3.0 → 4.26 → 5.5.
#[test]
fn c10_throughput_and_phase_transition() {
    let mut durations = Vec::new();
    for seed in 0..11u64 {
        let f = gen_random_ksat(&GenSpec::new(100, 426, 3, 9000 + seed)).unwrap();
        let cfg = SolverConfig {
            mode: Mode::Restart,
            seed,
            ..SolverConfig::default()
        };
        let start = Instant::now();
        let (result, _) = descend(&f, &cfg);
        durations.push(start.elapsed());
        if result.status == Status::Sat {
            assert!(f.is_satisfied_by(result.model.as_ref().unwrap()));
        }
    }
    durations.sort();
    let median = durations[durations.len() / 2];
    assert!(
        median < Duration::from_secs(5),
        "median runtime {median:?} exceeds the 5 s budget"
    );

    // Phase-transition trend on n=20 at ratios 3.0, 4.26, 5.5, labeled by
    // the brute-force oracle rather than assumed rates.
    let ensembles: [(f64, u64); 3] = [(3.0, 2000), (4.26, 3000), (5.5, 4000)];
    let per_ratio = 40usize;
    let mut oracle_rates = Vec::new();
    let mut solver_rates = Vec::new();
    for &(ratio, base_seed) in &ensembles {
        let m = (ratio * 20.0).round() as usize;
        let plan = BenchPlan {
            instances: vec![InstanceSource::Generated {
                spec: GenSpec::new(20, m, 3, base_seed),
                count: per_ratio,
            }],
            configs: vec![PlanConfig {
                name: format!("r{ratio}"),
                objective: Objective::Dimensionality,
                solver: SolverConfig {
                    mode: Mode::Restart,
                    seed: 1,
                    ..SolverConfig::default()
                },
            }],
            repetitions: 1,
            time_budget_ms: None,
            output_dir: None,
            write_traces: false,
            stable_output: true,
        };
        let outcome = run_bench(&plan).unwrap();
        assert_eq!(outcome.rows.len(), per_ratio);

        let mut oracle_sat = 0u32;
        let mut solver_sat = 0u32;
        for (i, row) in outcome.rows.iter().enumerate() {
            let spec = GenSpec::new(20, m, 3, base_seed + i as u64);
            let f = gen_random_ksat(&spec).unwrap();
            let truth = brute_force_solve(&f).unwrap();
            if truth.is_sat() {
                oracle_sat += 1;
            }
            match row.status {
                Status::Sat => {
                    assert!(truth.is_sat(), "bench sat row contradicts oracle");
                    solver_sat += 1;
                }
                Status::UnsatExhausted => {
                    assert!(!truth.is_sat(), "bench unsat row contradicts oracle");
                }
                Status::Unknown => {}
            }
        }
        oracle_rates.push(oracle_sat as f64 / per_ratio as f64);
        solver_rates.push(solver_sat as f64 / per_ratio as f64);
    }
    assert!(
        oracle_rates[0] > oracle_rates[1] && oracle_rates[1] > oracle_rates[2],
        "oracle sat-rate not decreasing: {oracle_rates:?}"
    );
    assert!(
        solver_rates[0] > solver_rates[1] && solver_rates[1] > solver_rates[2],
        "measured sat-rate not decreasing: {solver_rates:?}"
    );
    println!(
        "C10 throughput-and-phase-transition: PASS (median {median:?}; oracle sat-rates \
         {oracle_rates:?}; measured {solver_rates:?})"
    );
}
