//! The database side: ground-truth marked items, the N-bit parity query,
//! query accounting, and the classical binary-search baseline.

use std::fmt;

use rand::{seq::index, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SearchError};
use crate::operators::phase_invert;
use crate::state::{check_dim, SubsystemState};

/// Sorted, duplicate-free set of item indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarkedSet(Vec<usize>);

impl MarkedSet {
    pub fn new(items: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = items.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        MarkedSet(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, item: usize) -> bool {
        self.0.binary_search(&item).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &usize> + '_ {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Items of `0..n` not in this set.
    pub fn complement(&self, n: usize) -> MarkedSet {
        MarkedSet((0..n).filter(|&i| !self.contains(i)).collect())
    }

    pub(crate) fn check_range(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&max) if max >= n => Err(SearchError::domain(format!(
                "marked index {max} out of range for N={n}"
            ))),
            _ => Ok(()),
        }
    }
}

impl<const K: usize> From<[usize; K]> for MarkedSet {
    fn from(items: [usize; K]) -> Self {
        MarkedSet::new(items)
    }
}

impl FromIterator<usize> for MarkedSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        MarkedSet::new(iter)
    }
}

impl fmt::Display for MarkedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `k` distinct items out of `0..n`, placed by a seeded generator.
pub fn random_marked(n: usize, k: usize, seed: u64) -> Result<MarkedSet> {
    if k == 0 || k >= n {
        return Err(SearchError::domain(format!("need 1 <= k < N, got k={k}, N={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(MarkedSet::new(index::sample(&mut rng, n, k)))
}

/// An N-item database with a non-empty, proper subset of marked items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatabaseSpec {
    n: usize,
    marked: MarkedSet,
}

impl DatabaseSpec {
    pub fn new(n: usize, marked: MarkedSet) -> Result<Self> {
        check_dim(n)?;
        marked.check_range(n)?;
        if marked.is_empty() || marked.len() >= n {
            return Err(SearchError::domain(format!(
                "need 1 <= |marked| < N, got {} of {n}",
                marked.len()
            )));
        }
        Ok(DatabaseSpec { n, marked })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.marked.len()
    }

    pub fn marked(&self) -> &MarkedSet {
        &self.marked
    }

    /// Set once `k >= N/4`: one step no longer gives a reliable majority signal.
    pub fn heavily_marked(&self) -> bool {
        4 * self.k() >= self.n
    }
}

/// Per-item parity bits of the subsystem counts: bit i = count_i mod 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityQuery {
    bits: Vec<bool>,
}

impl ParityQuery {
    pub fn new(bits: Vec<bool>) -> Self {
        ParityQuery { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

impl fmt::Display for ParityQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

pub fn counts_to_query(counts: &[u64]) -> ParityQuery {
    ParityQuery::new(counts.iter().map(|c| c % 2 == 1).collect())
}

/// Running tally of oracle questions. Each trial owns its own ledger.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct QueryLedger {
    pub oracle_calls: u64,
    pub classical_calls: u64,
}

/// One-bit answer to a parity query: 1 iff the total count over all marked
/// items is odd.
pub fn parity_answer(db: &DatabaseSpec, q: &ParityQuery, ledger: &mut QueryLedger) -> Result<u8> {
    if q.len() != db.n {
        return Err(SearchError::domain(format!(
            "query has {} bits, database has {} items",
            q.len(),
            db.n
        )));
    }
    ledger.oracle_calls += 1;
    Ok(db.marked.iter().fold(0u8, |acc, &i| acc ^ q.bits[i] as u8))
}

/// The single oracle query as seen by the factorized state: the global sign
/// `(-1)^(marked count)` splits into one sign flip per subsystem, so the
/// shared subsystem vector is phase-inverted on the marked items. Costs one
/// oracle call regardless of the number of subsystems.
pub fn quantum_phase_query(
    state: &SubsystemState,
    db: &DatabaseSpec,
    ledger: &mut QueryLedger,
) -> Result<SubsystemState> {
    if state.dim() != db.n {
        return Err(SearchError::domain(format!(
            "state has dimension {}, database has {} items",
            state.dim(),
            db.n
        )));
    }
    let out = phase_invert(state, &db.marked)?;
    ledger.oracle_calls += 1;
    Ok(out)
}

/// Locates the unique marked item with `log2 N` "is it in this half?" questions.
pub fn classical_binary_search(db: &DatabaseSpec, ledger: &mut QueryLedger) -> Result<usize> {
    if db.k() != 1 {
        return Err(SearchError::Unsupported(format!(
            "binary search needs exactly one marked item, got {}",
            db.k()
        )));
    }
    let (mut lo, mut hi) = (0, db.n);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        ledger.classical_calls += 1;
        let in_lower = db.marked.iter().any(|&m| (lo..mid).contains(&m));
        if in_lower {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(lo)
}
