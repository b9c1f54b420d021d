//! Exponential-cost reference path. Builds the explicit `N^η` state, applies
//! the global parity-phase query and `D` on every subsystem, and compares the
//! single-subsystem marginals with the factorized pipeline.

use serde::Serialize;

use crate::ensemble::measurement_distribution;
use crate::error::{Result, SearchError};
use crate::exec::{par_map, Execution};
use crate::operators::{inversion_about_average, reflect_about_mean};
use crate::oracle::{quantum_phase_query, DatabaseSpec, MarkedSet, QueryLedger};
use crate::state::{global_len, GlobalState, SubsystemState};

/// Negates every basis amplitude whose digit string contains an odd number of marked items.
pub fn global_parity_phase(g: &GlobalState, marked: &MarkedSet) -> Result<GlobalState> {
    marked.check_range(g.dim())?;
    let amps = g
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(idx, &a)| {
            let hits = (0..g.eta()).filter(|&p| marked.contains(g.digit(idx, p))).count();
            if hits % 2 == 1 {
                -a
            } else {
                a
            }
        })
        .collect();
    Ok(g.with_amplitudes(amps))
}

/// `D ⊗ D ⊗ … ⊗ D`, applied one digit axis at a time.
pub fn global_d_all(g: &GlobalState) -> GlobalState {
    let n = g.dim();
    let mut amps = g.amplitudes().to_vec();
    let mut fiber = Vec::with_capacity(n);
    for pos in 0..g.eta() {
        let stride = n.pow((g.eta() - 1 - pos) as u32);
        for block in (0..amps.len()).step_by(n * stride) {
            for offset in 0..stride {
                let base = block + offset;
                fiber.clear();
                fiber.extend((0..n).map(|j| amps[base + j * stride]));
                for (j, v) in reflect_about_mean(&fiber).into_iter().enumerate() {
                    amps[base + j * stride] = v;
                }
            }
        }
    }
    g.with_amplitudes(amps)
}

/// Outcome distribution of subsystem `pos` alone.
pub fn marginal(g: &GlobalState, pos: usize) -> Result<Vec<f64>> {
    if pos >= g.eta() {
        return Err(SearchError::domain(format!(
            "subsystem {pos} out of range for eta={}",
            g.eta()
        )));
    }
    let mut p = vec![0.0; g.dim()];
    for (idx, a) in g.amplitudes().iter().enumerate() {
        p[g.digit(idx, pos)] += a.norm_sqr();
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationCase {
    pub n: usize,
    pub eta: usize,
    pub marked: MarkedSet,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub case: ValidationCase,
    /// Largest `|p_factorized(i) - p_global(pos, i)|` over all subsystems and items.
    pub max_discrepancy: f64,
}

impl ValidationReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_discrepancy < tol
    }
}

/// Runs the factorized and brute-force pipelines on one case and reports the
/// largest marginal discrepancy.
pub fn cross_validate(case: &ValidationCase, cap: usize) -> Result<ValidationReport> {
    global_len(case.n, case.eta, cap)?;
    let db = DatabaseSpec::new(case.n, case.marked.clone())?;
    let uniform = SubsystemState::uniform(case.n)?;

    let mut ledger = QueryLedger::default();
    let factorized = inversion_about_average(&quantum_phase_query(&uniform, &db, &mut ledger)?);
    let expect = measurement_distribution(&factorized);

    let global = GlobalState::tensor_power(&uniform, case.eta, cap)?;
    let global = global_d_all(&global_parity_phase(&global, &case.marked)?);

    let mut max_discrepancy: f64 = 0.0;
    for pos in 0..case.eta {
        for (a, b) in marginal(&global, pos)?.iter().zip(&expect) {
            max_discrepancy = max_discrepancy.max((a - b).abs());
        }
    }
    Ok(ValidationReport { case: case.clone(), max_discrepancy })
}

/// Every case `(N, η, M)` with `N` from `ns`, `η` from `etas` and `M` any
/// marked set with `1 <= |M| < N`.
pub fn validation_grid(ns: &[usize], etas: &[usize]) -> Vec<ValidationCase> {
    let mut cases = Vec::new();
    for &n in ns {
        for &eta in etas {
            // Sets beyond 2^20 subsets are out of reach anyway; the cap check rejects such N.
            let subsets: u64 = if n < 64 { (1u64 << n) - 1 } else { u64::MAX };
            for mask in 1..subsets {
                let marked = MarkedSet::new((0..n).filter(|&i| mask >> i & 1 == 1));
                cases.push(ValidationCase { n, eta, marked });
            }
        }
    }
    cases
}

/// Cross-validates every case, stopping at the first error.
pub fn validate_all(cases: &[ValidationCase], cap: usize, exec: Execution) -> Result<Vec<ValidationReport>> {
    for c in cases {
        global_len(c.n, c.eta, cap)?;
    }
    par_map(exec, cases, |c| cross_validate(c, cap)).into_iter().collect()
}
