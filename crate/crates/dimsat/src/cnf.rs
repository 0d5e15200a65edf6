//! CNF data model: literals, clauses, formulas, assignments, DIMACS
//! parsing/serialization, and normalization.
//!
//! Variables are 1-based externally (DIMACS convention) and mapped to dense
//! 0-based indices internally; `Literal` stores the signed DIMACS code.

use std::fmt;

use thiserror::Error;

/// 1-based variable index, as used in DIMACS files.
pub type Var = u32;

/// A signed occurrence of a variable. The internal representation is the
/// non-zero DIMACS code: positive for the variable itself, negative for its
/// negation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal(i32);

impl Literal {
    /// Builds a literal over `var` (must be ≥ 1 and representable as `i32`).
    pub fn new(var: Var, positive: bool) -> Literal {
        assert!(var >= 1, "variable indices are 1-based");
        assert!(var <= i32::MAX as u32, "variable index too large");
        Literal(if positive { var as i32 } else { -(var as i32) })
    }

    /// Decodes a DIMACS literal; `None` for the clause terminator `0`.
    pub fn from_dimacs(code: i32) -> Option<Literal> {
        if code == 0 {
            None
        } else {
            Some(Literal(code))
        }
    }

    pub fn var(self) -> Var {
        self.0.unsigned_abs()
    }

    /// Dense 0-based index of the variable.
    pub fn index(self) -> usize {
        (self.var() - 1) as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn negated(self) -> Literal {
        Literal(-self.0)
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    /// True iff the literal agrees with `value` assigned to its variable.
    pub fn satisfied_by(self, value: bool) -> bool {
        value == self.is_positive()
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A disjunction of literals.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Clause {
        Clause { literals }
    }

    /// Convenience constructor from DIMACS codes; panics on a `0` code.
    pub fn from_dimacs(codes: impl IntoIterator<Item = i32>) -> Clause {
        codes
            .into_iter()
            .map(|c| Literal::from_dimacs(c).expect("0 is the clause terminator, not a literal"))
            .collect()
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Literal> {
        self.literals.iter()
    }

    pub fn contains_var(&self, var: Var) -> bool {
        self.literals.iter().any(|l| l.var() == var)
    }

    /// True iff at least one literal agrees with the assignment.
    pub fn is_satisfied_by(&self, assignment: &Assignment) -> bool {
        self.literals
            .iter()
            .any(|l| l.satisfied_by(assignment.value(l.var())))
    }
}

impl FromIterator<Literal> for Clause {
    fn from_iter<T: IntoIterator<Item = Literal>>(iter: T) -> Clause {
        Clause::new(iter.into_iter().collect())
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.literals).finish()
    }
}

/// One truth value per variable; index `i` holds variable `i + 1`.
///
/// The derived ordering is lexicographic over `(x1, x2, …)` with
/// `false < true`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn all_true(num_vars: u32) -> Assignment {
        Assignment {
            values: vec![true; num_vars as usize],
        }
    }

    pub fn all_false(num_vars: u32) -> Assignment {
        Assignment {
            values: vec![false; num_vars as usize],
        }
    }

    pub fn from_values(values: Vec<bool>) -> Assignment {
        Assignment { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, var: Var) -> bool {
        self.values[(var - 1) as usize]
    }

    pub fn set(&mut self, var: Var, value: bool) {
        self.values[(var - 1) as usize] = value;
    }

    pub fn flip(&mut self, var: Var) {
        let idx = (var - 1) as usize;
        self.values[idx] = !self.values[idx];
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// Signed DIMACS codes in ascending variable order.
    pub fn dimacs_codes(&self) -> impl Iterator<Item = i32> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| if v { i as i32 + 1 } else { -(i as i32 + 1) })
    }

    /// Variables on which the two assignments disagree, ascending.
    pub fn diff_vars(&self, other: &Assignment) -> Vec<Var> {
        debug_assert_eq!(self.len(), other.len());
        self.values
            .iter()
            .zip(&other.values)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i as Var + 1)
            .collect()
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Assignment[")?;
        for &v in &self.values {
            write!(f, "{}", if v { '1' } else { '0' })?;
        }
        write!(f, "]")
    }
}

/// A CNF instance: variable count plus clause list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    num_vars: u32,
    clauses: Vec<Clause>,
    source_name: Option<String>,
}

impl Formula {
    /// Panics if any literal falls outside `[1, num_vars]`.
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Formula {
        for clause in &clauses {
            for lit in clause.iter() {
                assert!(
                    lit.var() >= 1 && lit.var() <= num_vars,
                    "literal {lit} out of range for {num_vars} variables"
                );
            }
        }
        Formula {
            num_vars,
            clauses,
            source_name: None,
        }
    }

    pub fn empty(num_vars: u32) -> Formula {
        Formula::new(num_vars, Vec::new())
    }

    pub fn with_source_name(mut self, name: impl Into<String>) -> Formula {
        self.source_name = Some(name.into());
        self
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause(&self, index: usize) -> &Clause {
        &self.clauses[index]
    }

    pub fn source_name(&self) -> Option<&str> {
        self.source_name.as_deref()
    }

    /// Panics if a literal is out of range.
    pub fn push_clause(&mut self, clause: Clause) {
        for lit in clause.iter() {
            assert!(
                lit.var() >= 1 && lit.var() <= self.num_vars,
                "literal {lit} out of range for {} variables",
                self.num_vars
            );
        }
        self.clauses.push(clause);
    }

    /// Indices of clauses with no satisfied literal; empty iff `assignment`
    /// is a model.
    pub fn unsatisfied_clauses(&self, assignment: &Assignment) -> Vec<usize> {
        assert_eq!(
            assignment.len(),
            self.num_vars as usize,
            "assignment length must match variable count"
        );
        self.clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_satisfied_by(assignment))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_satisfied_by(&self, assignment: &Assignment) -> bool {
        assert_eq!(assignment.len(), self.num_vars as usize);
        self.clauses.iter().all(|c| c.is_satisfied_by(assignment))
    }

    /// Equality on variable count and clause list, ignoring the source label.
    pub fn structurally_equal(&self, other: &Formula) -> bool {
        self.num_vars == other.num_vars && self.clauses == other.clauses
    }
}

/// A parse failure, with the 1-based input line it was detected on.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: expected 'p cnf <vars> <clauses>' header before clause data")]
    MissingHeader { line: usize },
    #[error("line {line}: duplicate 'p cnf' header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: malformed header ({reason})")]
    MalformedHeader { line: usize, reason: String },
    #[error("line {line}: invalid token '{token}'")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: literal {literal} out of range (header declared {num_vars} variables)")]
    LiteralOutOfRange {
        line: usize,
        literal: i64,
        num_vars: u32,
    },
    #[error("line {line}: clause not terminated by 0 at end of input")]
    UnterminatedClause { line: usize },
    #[error("line {line}: header declared {declared} clauses, found {found}")]
    ClauseCountMismatch {
        line: usize,
        declared: usize,
        found: usize,
    },
}

/// Parses DIMACS CNF: optional `c` comment lines, one `p cnf <vars> <clauses>`
/// header, then whitespace-separated literals with `0` terminators.
pub fn parse_dimacs(text: &str) -> Result<Formula, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::DuplicateHeader { line });
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(DimacsError::MalformedHeader {
                    line,
                    reason: "expected 'p cnf <vars> <clauses>'".into(),
                });
            }
            let num_vars: u32 = fields[2].parse().map_err(|_| DimacsError::MalformedHeader {
                line,
                reason: format!("invalid variable count '{}'", fields[2]),
            })?;
            let num_clauses: usize =
                fields[3].parse().map_err(|_| DimacsError::MalformedHeader {
                    line,
                    reason: format!("invalid clause count '{}'", fields[3]),
                })?;
            header = Some((num_vars, num_clauses));
            continue;
        }

        let (num_vars, declared) = header.ok_or(DimacsError::MissingHeader { line })?;
        for token in trimmed.split_whitespace() {
            let code: i64 = token.parse().map_err(|_| DimacsError::InvalidToken {
                line,
                token: token.to_string(),
            })?;
            if code == 0 {
                if clauses.len() == declared {
                    return Err(DimacsError::ClauseCountMismatch {
                        line,
                        declared,
                        found: declared + 1,
                    });
                }
                clauses.push(Clause::new(std::mem::take(&mut current)));
            } else {
                if code.unsigned_abs() > num_vars as u64 {
                    return Err(DimacsError::LiteralOutOfRange {
                        line,
                        literal: code,
                        num_vars,
                    });
                }
                current.push(Literal::from_dimacs(code as i32).expect("non-zero code"));
            }
        }
    }

    let (num_vars, declared) = header.ok_or(DimacsError::MissingHeader {
        line: last_line.max(1),
    })?;
    if !current.is_empty() {
        return Err(DimacsError::UnterminatedClause { line: last_line });
    }
    if clauses.len() != declared {
        return Err(DimacsError::ClauseCountMismatch {
            line: last_line,
            declared,
            found: clauses.len(),
        });
    }
    Ok(Formula::new(num_vars, clauses))
}

/// Serializes to DIMACS. The source label, when present, is written as a
/// leading comment line; `parse_dimacs(write_dimacs(f))` reproduces the
/// clause structure exactly.
pub fn write_dimacs(formula: &Formula) -> String {
    let mut out = String::new();
    if let Some(name) = formula.source_name() {
        out.push_str("c ");
        out.push_str(name);
        out.push('\n');
    }
    out.push_str(&format!(
        "p cnf {} {}\n",
        formula.num_vars(),
        formula.num_clauses()
    ));
    for clause in formula.clauses() {
        for lit in clause.iter() {
            out.push_str(&lit.to_dimacs().to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

/// What `normalize` changed or found.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalizeReport {
    pub duplicate_literals_removed: usize,
    pub tautologies_dropped: usize,
    pub empty_clauses: usize,
    /// Set when the formula contains an empty clause and is therefore
    /// unsatisfiable without any search.
    pub trivially_unsat: bool,
}

/// Removes duplicate literals within clauses and drops tautological clauses.
/// Empty clauses are kept and flagged in the report; the solver entry points
/// require them to be handled before search.
///
/// Idempotent: normalizing a normalized formula is a no-op.
pub fn normalize(formula: &Formula) -> (Formula, NormalizeReport) {
    let mut report = NormalizeReport::default();
    let mut clauses = Vec::with_capacity(formula.num_clauses());

    'clauses: for clause in formula.clauses() {
        let mut kept: Vec<Literal> = Vec::with_capacity(clause.len());
        for &lit in clause.iter() {
            if kept.contains(&lit.negated()) {
                report.tautologies_dropped += 1;
                continue 'clauses;
            }
            if kept.contains(&lit) {
                report.duplicate_literals_removed += 1;
            } else {
                kept.push(lit);
            }
        }
        if kept.is_empty() {
            report.empty_clauses += 1;
            report.trivially_unsat = true;
        }
        clauses.push(Clause::new(kept));
    }

    let mut normalized = Formula::new(formula.num_vars(), clauses);
    if let Some(name) = formula.source_name() {
        normalized = normalized.with_source_name(name);
    }
    (normalized, report)
}
