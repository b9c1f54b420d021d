//! End-to-end trials, aggregated experiments and parameter sweeps.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::ensemble::{
    measurement_distribution, post_step_probabilities, probability_gap, recommended_eta, sample_tally,
    ExperimentPlan, MeasurementTally,
};
use crate::error::{Result, SearchError};
use crate::exec::{par_map_range, Execution};
use crate::operators::inversion_about_average;
use crate::oracle::{classical_binary_search, quantum_phase_query, random_marked, MarkedSet, QueryLedger};
use crate::report::sig10;
use crate::state::SubsystemState;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    pub decoded: usize,
    pub tally: MeasurementTally,
    pub ledger: QueryLedger,
}

/// One pass of the algorithm: uniform state, one oracle query, one inversion
/// about average, η measurements, majority decode.
pub fn run_trial(plan: &ExperimentPlan, trial_index: u64) -> Result<TrialOutcome> {
    let mut ledger = QueryLedger::default();
    let state = SubsystemState::uniform(plan.n())?;
    let state = quantum_phase_query(&state, &plan.db, &mut ledger)?;
    let state = inversion_about_average(&state);
    let dist = measurement_distribution(&state);
    let tally = sample_tally(&dist, plan.eta as u64, plan.trial_seed(trial_index))?;
    Ok(TrialOutcome { decoded: tally.decoded, tally, ledger })
}

/// Aggregate of one experiment. Field names double as CSV/JSON column names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub k: usize,
    pub eta: usize,
    pub trials: usize,
    pub seed: u64,
    pub marked: MarkedSet,
    /// Fraction of trials whose decoded item is marked.
    #[serde(serialize_with = "sig10")]
    pub success_rate: f64,
    #[serde(serialize_with = "sig10")]
    pub tie_rate: f64,
    /// Mean observations per marked item per trial.
    #[serde(serialize_with = "sig10")]
    pub mean_marked_count: f64,
    #[serde(serialize_with = "sig10")]
    pub exact_marked_probability: f64,
    #[serde(rename = "approx_9_over_N", serialize_with = "sig10")]
    pub approx_9_over_n: f64,
    /// Oracle calls recorded by each trial's ledger.
    pub quantum_queries: u64,
    /// Binary-search questions for the same database; absent when k > 1.
    pub classical_queries: Option<u64>,
    pub wall_time_ms: u64,
    #[serde(serialize_with = "sig10")]
    pub probability_gap: f64,
    pub warnings: Vec<String>,
}

impl ExperimentReport {
    /// Copy with the wall-clock field zeroed, for reproducible output.
    pub fn without_timing(mut self) -> Self {
        self.wall_time_ms = 0;
        self
    }
}

pub fn run_experiment(plan: &ExperimentPlan, exec: Execution) -> Result<ExperimentReport> {
    let start = Instant::now();
    let outcomes: Vec<TrialOutcome> = par_map_range(exec, plan.trials as u64, |i| run_trial(plan, i))
        .into_iter()
        .collect::<Result<_>>()?;

    let marked = plan.db.marked();
    let (n, k) = (plan.n(), plan.k());
    let mut successes = 0u64;
    let mut ties = 0u64;
    let mut marked_total = 0u64;
    for (i, o) in outcomes.iter().enumerate() {
        if o.ledger.oracle_calls != 1 {
            return Err(SearchError::Validation(format!(
                "trial {i} used {} oracle calls",
                o.ledger.oracle_calls
            )));
        }
        successes += marked.contains(o.decoded) as u64;
        ties += o.tally.tie as u64;
        marked_total += marked.iter().map(|&m| o.tally.counts[m]).sum::<u64>();
    }

    let classical_queries = if k == 1 {
        let mut ledger = QueryLedger::default();
        let found = classical_binary_search(&plan.db, &mut ledger)?;
        if !marked.contains(found) {
            return Err(SearchError::Validation(format!("binary search returned {found}")));
        }
        Some(ledger.classical_calls)
    } else {
        None
    };

    let trials = plan.trials as f64;
    let mut warnings = Vec::new();
    if plan.db.heavily_marked() {
        warnings.push(format!("k={k} >= N/4 for N={n}: the majority signal of one step is weak"));
    }
    if ties > 0 {
        warnings.push(format!("{ties} of {} trials tied; decoded to the smallest index", plan.trials));
    }

    let (p_marked, _) = post_step_probabilities(n, k)?;
    Ok(ExperimentReport {
        n,
        k,
        eta: plan.eta,
        trials: plan.trials,
        seed: plan.seed,
        marked: marked.clone(),
        success_rate: successes as f64 / trials,
        tie_rate: ties as f64 / trials,
        mean_marked_count: marked_total as f64 / (trials * k as f64),
        exact_marked_probability: p_marked,
        approx_9_over_n: 9.0 / n as f64,
        quantum_queries: 1,
        classical_queries,
        wall_time_ms: start.elapsed().as_millis() as u64,
        probability_gap: probability_gap(n, k)?,
        warnings,
    })
}

/// How many subsystems each experiment uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EtaRule {
    Fixed(usize),
    /// `⌈c · N · ln N⌉`.
    Multiplier(f64),
}

impl EtaRule {
    pub fn eta_for(&self, n: usize) -> Result<usize> {
        match *self {
            EtaRule::Fixed(eta) => Ok(eta),
            EtaRule::Multiplier(c) => recommended_eta(n, c),
        }
    }
}

/// One experiment per `(N, k)` pair, `N` outermost. Marked items are placed
/// with [`random_marked`] seeded by `seed`. All plans are validated before any
/// trial runs.
pub fn sweep(
    ns: &[usize],
    ks: &[usize],
    eta_rule: EtaRule,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<ExperimentReport>> {
    let mut plans = Vec::with_capacity(ns.len() * ks.len());
    for &n in ns {
        for &k in ks {
            let marked = random_marked(n, k, seed)?;
            plans.push(ExperimentPlan::new(n, marked, eta_rule.eta_for(n)?, seed, trials)?);
        }
    }
    plans.iter().map(|p| run_experiment(p, exec)).collect()
}
