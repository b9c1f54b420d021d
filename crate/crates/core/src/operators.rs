//! Unitary building blocks: selective phase inversion (direct and through an
//! ancilla XOR), inversion about average `D`, and the closed form for one
//! query-plus-`D` step starting from the uniform state.

use crate::error::{Result, SearchError};
use crate::oracle::MarkedSet;
use crate::state::{check_dim, norm, Amplitude, SubsystemState, NORM_TOL};

/// Negates the amplitude of every marked basis state.
pub fn phase_invert(state: &SubsystemState, marked: &MarkedSet) -> Result<SubsystemState> {
    marked.check_range(state.dim())?;
    let mut amps = state.amplitudes().to_vec();
    for &i in marked.iter() {
        amps[i] = -amps[i];
    }
    Ok(SubsystemState::from_unitary_image(amps))
}

/// Reflection of every amplitude about the mean: `x_i -> 2·mean - x_i`.
///
/// Equal to multiplying by [`d_matrix`], in O(N).
pub fn inversion_about_average(state: &SubsystemState) -> SubsystemState {
    SubsystemState::from_unitary_image(reflect_about_mean(state.amplitudes()))
}

pub(crate) fn reflect_about_mean(amps: &[Amplitude]) -> Vec<Amplitude> {
    let mean = amps.iter().sum::<Amplitude>() / amps.len() as f64;
    amps.iter().map(|&x| 2.0 * mean - x).collect()
}

/// Dense `D`: `2/N` off the diagonal, `-1 + 2/N` on it. Row-major.
pub fn d_matrix(n: usize) -> Result<Vec<Vec<f64>>> {
    if n < 2 {
        return Err(SearchError::domain(format!("D needs N >= 2, got {n}")));
    }
    let off = 2.0 / n as f64;
    Ok((0..n)
        .map(|i| (0..n).map(|j| if i == j { off - 1.0 } else { off }).collect())
        .collect())
}

/// Amplitudes `(marked, unmarked)` after phase-inverting `k` of `n` items in
/// the uniform state and applying `D` once:
/// `((3N - 4k) / N^{3/2}, (N - 4k) / N^{3/2})`.
pub fn post_step_amplitudes(n: usize, k: usize) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(SearchError::domain(format!("N must be at least 2, got {n}")));
    }
    if k == 0 || k >= n {
        return Err(SearchError::domain(format!("need 1 <= k < N, got k={k}, N={n}")));
    }
    let (nf, kf) = (n as f64, k as f64);
    let scale = nf * nf.sqrt();
    Ok(((3.0 * nf - 4.0 * kf) / scale, (nf - 4.0 * kf) / scale))
}

/// Joint state of a subsystem and one ancilla bit; index `2x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AncillaState {
    dim: usize,
    amps: Vec<Amplitude>,
}

impl AncillaState {
    pub fn from_amplitudes(dim: usize, amps: Vec<Amplitude>) -> Result<Self> {
        check_dim(dim)?;
        if amps.len() != 2 * dim {
            return Err(SearchError::domain(format!(
                "ancilla state for N={dim} needs {} amplitudes, got {}",
                2 * dim,
                amps.len()
            )));
        }
        let nrm = norm(&amps);
        if (nrm - 1.0).abs() > NORM_TOL {
            return Err(SearchError::domain(format!("ancilla state not normalized (norm {nrm})")));
        }
        Ok(AncillaState { dim, amps })
    }

    /// `|x, b⟩`.
    pub fn basis(dim: usize, x: usize, b: u8) -> Result<Self> {
        check_dim(dim)?;
        if x >= dim || b > 1 {
            return Err(SearchError::domain(format!("basis |{x},{b}> out of range for N={dim}")));
        }
        let mut amps = vec![Amplitude::new(0.0, 0.0); 2 * dim];
        amps[2 * x + b as usize] = Amplitude::new(1.0, 0.0);
        Ok(AncillaState { dim, amps })
    }

    /// `state ⊗ ancilla`, where `ancilla` holds the amplitudes of `|0⟩` and `|1⟩`.
    pub fn product(state: &SubsystemState, ancilla: [Amplitude; 2]) -> Result<Self> {
        let amps = state
            .amplitudes()
            .iter()
            .flat_map(|&a| [a * ancilla[0], a * ancilla[1]])
            .collect();
        Self::from_amplitudes(state.dim(), amps)
    }

    /// `state ⊗ (|0⟩ - |1⟩)/√2`.
    pub fn with_minus_ancilla(state: &SubsystemState) -> Result<Self> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::product(state, [Amplitude::new(h, 0.0), Amplitude::new(-h, 0.0)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }
}

/// `|x, b⟩ -> |x, f(x) XOR b⟩` with `f(x) = 1` exactly on the marked items.
pub fn xor_oracle_apply(joint: &AncillaState, marked: &MarkedSet) -> Result<AncillaState> {
    marked.check_range(joint.dim)?;
    let mut amps = joint.amps.clone();
    for &x in marked.iter() {
        amps.swap(2 * x, 2 * x + 1);
    }
    Ok(AncillaState { dim: joint.dim, amps })
}
