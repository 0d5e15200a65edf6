//! Solver configuration: descent mode, budgets, and the starting assignment.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// How non-improving moves are handled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Accept only strictly improving moves; halt at the first local minimum.
    Strict,
    /// Additionally accept zero-delta moves, up to a cap of consecutive ones.
    Sideways,
    /// Sideways acceptance plus reinitialization from a fresh random
    /// assignment whenever a descent gets stuck.
    Restart,
}

/// Polarity of the starting assignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialPolarity {
    AllTrue,
    AllFalse,
    Random,
}

/// Which quantity move scoring minimizes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Distinct variables in unsatisfied clauses.
    #[default]
    Dimensionality,
    /// Plain unsatisfied-clause count.
    UnsatCount,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub mode: Mode,
    /// Iteration budget per descent attempt; `None` means 100 · num_vars.
    pub max_iters: Option<u64>,
    /// Cap on consecutive zero-delta moves; `None` means 10 · the
    /// dimensionality at plateau entry.
    pub max_sideways: Option<u64>,
    /// Reinitializations allowed in restart mode.
    pub restarts: u32,
    /// Run the exhaustive subcube sweep once the dimensionality falls to
    /// this value or below. At most 30; 0 disables the endgame.
    pub endgame_threshold: u32,
    /// Largest move drawn from the top of the occurrence ranking (1–3).
    pub flip_cardinality: u32,
    pub seed: u64,
    pub initial_polarity: InitialPolarity,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            mode: Mode::Restart,
            max_iters: None,
            max_sideways: None,
            restarts: 10,
            endgame_threshold: 20,
            flip_cardinality: 1,
            seed: 0,
            initial_polarity: InitialPolarity::AllTrue,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("max_iters must be at least 1")]
    ZeroMaxIters,
    #[error("endgame_threshold {0} exceeds the maximum of 30")]
    EndgameThresholdTooLarge(u32),
    #[error("flip_cardinality {0} must be between 1 and 3")]
    FlipCardinalityOutOfRange(u32),
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.max_iters == Some(0) {
            return Err(ConfigError::ZeroMaxIters);
        }
        if self.endgame_threshold > 30 {
            return Err(ConfigError::EndgameThresholdTooLarge(self.endgame_threshold));
        }
        if !(1..=3).contains(&self.flip_cardinality) {
            return Err(ConfigError::FlipCardinalityOutOfRange(self.flip_cardinality));
        }
        Ok(())
    }
}
