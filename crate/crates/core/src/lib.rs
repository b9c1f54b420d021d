//! Simulator for single-query database search over an ensemble of η
//! identical N-dimensional subsystems.
//!
//! One parity-phase oracle query acts on the whole ensemble. Because the
//! global sign `(-1)^(number of subsystems in a marked state)` factorizes into
//! one sign flip per subsystem, a single N-vector describes every subsystem.
//! An inversion about average then raises the marked amplitude to about
//! `3/√N`, and measuring all subsystems and taking the majority recovers the
//! marked item once η grows like `N log N`.
//!
//! Modules:
//! - [`state`]: amplitude vectors for one subsystem and for the explicit `N^η` product.
//! - [`operators`]: phase inversion (direct and via an ancilla XOR), inversion about average.
//! - [`oracle`]: marked items, parity queries, query accounting, the binary-search baseline.
//! - [`ensemble`]: measurement sampling, majority decode, deviation statistics.
//! - [`bruteforce`]: the exponential reference path used to certify the factorized one.
//! - [`experiment`] and [`report`]: seeded trials, sweeps, CSV/JSON output.

pub mod bruteforce;
pub mod ensemble;
pub mod error;
pub mod exec;
pub mod experiment;
pub mod operators;
pub mod oracle;
pub mod report;
pub mod state;

pub use bruteforce::{cross_validate, validate_all, validation_grid, ValidationCase, ValidationReport};
pub use ensemble::{
    decode, deviation_stats, measurement_distribution, probability_gap, recommended_eta, sample_tally,
    DeviationStats, ExperimentPlan, MeasurementTally, DEFAULT_ETA_MULTIPLIER,
};
pub use error::{Result, SearchError};
pub use exec::Execution;
pub use experiment::{run_experiment, run_trial, sweep, EtaRule, ExperimentReport, TrialOutcome};
pub use operators::{d_matrix, inversion_about_average, phase_invert, post_step_amplitudes, xor_oracle_apply, AncillaState};
pub use oracle::{
    classical_binary_search, counts_to_query, parity_answer, quantum_phase_query, random_marked, DatabaseSpec,
    MarkedSet, ParityQuery, QueryLedger,
};
pub use state::{Amplitude, GlobalState, SubsystemState, DEFAULT_GLOBAL_CAP};
