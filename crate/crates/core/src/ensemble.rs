//! Measurement of the η subsystems, majority decoding and the sampling
//! statistics around it.

use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Result, SearchError};
use crate::operators::post_step_amplitudes;
use crate::oracle::{DatabaseSpec, MarkedSet};
use crate::state::{check_dim, SubsystemState};

/// Default multiplier `c` in `η = ⌈c·N·ln N⌉`.
pub const DEFAULT_ETA_MULTIPLIER: f64 = 4.0;

/// Parameters of a batch of independent trials on one database.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub db: DatabaseSpec,
    pub eta: usize,
    pub seed: u64,
    pub trials: usize,
}

impl ExperimentPlan {
    pub fn new(n: usize, marked: MarkedSet, eta: usize, seed: u64, trials: usize) -> Result<Self> {
        let db = DatabaseSpec::new(n, marked)?;
        if eta == 0 {
            return Err(SearchError::domain("eta must be at least 1"));
        }
        if trials == 0 {
            return Err(SearchError::domain("trials must be at least 1"));
        }
        Ok(ExperimentPlan { db, eta, seed, trials })
    }

    pub fn n(&self) -> usize {
        self.db.n()
    }

    pub fn k(&self) -> usize {
        self.db.k()
    }

    /// Generator seed for one trial: `seed XOR trial_index`.
    pub fn trial_seed(&self, trial_index: u64) -> u64 {
        self.seed ^ trial_index
    }
}

/// Observed counts per item and the majority verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeasurementTally {
    pub counts: Vec<u64>,
    pub decoded: usize,
    pub tie: bool,
}

impl MeasurementTally {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        let (decoded, tie) = decode(&counts);
        MeasurementTally { counts, decoded, tie }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Index with the most observations. Ties go to the smallest index and set the flag.
pub fn decode(counts: &[u64]) -> (usize, bool) {
    let mut best = 0;
    let mut tie = false;
    for (i, &c) in counts.iter().enumerate().skip(1) {
        if c > counts[best] {
            best = i;
            tie = false;
        } else if c == counts[best] {
            tie = true;
        }
    }
    (best, tie)
}

/// Born-rule outcome probabilities `|amp_i|²`.
pub fn measurement_distribution(state: &SubsystemState) -> Vec<f64> {
    state.amplitudes().iter().map(|a| a.norm_sqr()).collect()
}

/// `eta` independent categorical draws from `dist`, seeded deterministically.
pub fn sample_tally(dist: &[f64], eta: u64, seed: u64) -> Result<MeasurementTally> {
    if dist.is_empty() || dist.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(SearchError::domain("distribution must be finite and non-negative"));
    }
    let total: f64 = dist.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(SearchError::domain(format!("distribution sums to {total}, not 1")));
    }
    let sampler = WeightedIndex::new(dist).map_err(|e| SearchError::domain(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; dist.len()];
    for _ in 0..eta {
        counts[sampler.sample(&mut rng)] += 1;
    }
    Ok(MeasurementTally::from_counts(counts))
}

/// `⌈c · N · ln N⌉` subsystems.
pub fn recommended_eta(n: usize, c: f64) -> Result<usize> {
    if n < 2 {
        return Err(SearchError::domain(format!("N must be at least 2, got {n}")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(SearchError::domain(format!("eta multiplier must be positive, got {c}")));
    }
    let nf = n as f64;
    Ok((c * nf * nf.ln()).ceil() as usize)
}

/// Marked minus unmarked outcome probability after one step: `8(N - 2k)/N²`.
pub fn probability_gap(n: usize, k: usize) -> Result<f64> {
    let (m, u) = post_step_amplitudes(n, k)?;
    Ok(m * m - u * u)
}

/// Exact per-item outcome probabilities `(marked, unmarked)` after one step.
pub fn post_step_probabilities(n: usize, k: usize) -> Result<(f64, f64)> {
    check_dim(n)?;
    let (m, u) = post_step_amplitudes(n, k)?;
    Ok((m * m, u * u))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationStats {
    /// `η / N`.
    pub k_ratio: f64,
    /// Expected observations of each marked item, about `9K` for small k.
    pub expected_marked: f64,
    /// Expected observations of each unmarked item, about `K`.
    pub expected_unmarked: f64,
    /// Standardized deviation of the total marked count from its mean,
    /// using the binomial variance. Zero when the variance vanishes.
    pub gamma: f64,
}

pub fn deviation_stats(tally: &MeasurementTally, plan: &ExperimentPlan) -> Result<DeviationStats> {
    let (n, k) = (plan.n(), plan.k());
    if tally.counts.len() != n {
        return Err(SearchError::domain(format!(
            "tally has {} items, plan has {n}",
            tally.counts.len()
        )));
    }
    let (pm, pu) = post_step_probabilities(n, k)?;
    let eta = plan.eta as f64;
    let p = (k as f64 * pm).min(1.0);
    let observed: u64 = plan.db.marked().iter().map(|&i| tally.counts[i]).sum();
    let var = eta * p * (1.0 - p);
    let gamma = if var > 1e-12 {
        (observed as f64 - eta * p) / var.sqrt()
    } else {
        0.0
    };
    Ok(DeviationStats {
        k_ratio: eta / n as f64,
        expected_marked: eta * pm,
        expected_unmarked: eta * pu,
        gamma,
    })
}
