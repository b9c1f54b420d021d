//! Amplitude vectors for one subsystem (the factorized picture) and for the
//! explicit η-fold tensor product (the brute-force picture).

use num_complex::Complex64;

use crate::error::{Result, SearchError};

/// A single complex amplitude.
pub type Amplitude = Complex64;

/// Tolerance used when checking that a stored state is normalized.
pub const NORM_TOL: f64 = 1e-9;

/// Default upper bound on the number of amplitudes in a [`GlobalState`].
pub const DEFAULT_GLOBAL_CAP: usize = 1 << 20;

/// Euclidean norm of an amplitude slice.
pub fn norm(amps: &[Amplitude]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if n < 2 || !n.is_power_of_two() {
        return Err(SearchError::domain(format!(
            "subsystem dimension must be a power of two >= 2, got {n}"
        )));
    }
    Ok(())
}

fn check_amplitudes(amps: &[Amplitude]) -> Result<()> {
    if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(SearchError::domain("non-finite amplitude"));
    }
    let nrm = norm(amps);
    if (nrm - 1.0).abs() > NORM_TOL {
        return Err(SearchError::domain(format!("state is not normalized (norm {nrm})")));
    }
    Ok(())
}

/// State of one N-dimensional subsystem over basis states `0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsystemState {
    amps: Vec<Amplitude>,
}

impl SubsystemState {
    /// Equal superposition over all `n` basis states.
    pub fn uniform(n: usize) -> Result<Self> {
        check_dim(n)?;
        let a = Amplitude::new(1.0 / (n as f64).sqrt(), 0.0);
        Ok(SubsystemState { amps: vec![a; n] })
    }

    /// Builds a state from explicit amplitudes. The dimension must be a power
    /// of two and the vector must be finite and normalized.
    pub fn from_amplitudes(amps: Vec<Amplitude>) -> Result<Self> {
        check_dim(amps.len())?;
        check_amplitudes(&amps)?;
        Ok(SubsystemState { amps })
    }

    /// Convenience constructor for real amplitude vectors.
    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::from_amplitudes(amps.iter().map(|&x| Amplitude::new(x, 0.0)).collect())
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_dim(n)?;
        if index >= n {
            return Err(SearchError::domain(format!("basis index {index} out of range for N={n}")));
        }
        let mut amps = vec![Amplitude::new(0.0, 0.0); n];
        amps[index] = Amplitude::new(1.0, 0.0);
        Ok(SubsystemState { amps })
    }

    // Callers in this crate only produce amplitudes through unitary maps.
    pub(crate) fn from_unitary_image(amps: Vec<Amplitude>) -> Self {
        debug_assert!((norm(&amps) - 1.0).abs() < NORM_TOL);
        SubsystemState { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    /// Multiplies every amplitude by `phase`. `phase` is expected to have unit modulus.
    pub fn scaled(&self, phase: Amplitude) -> Self {
        SubsystemState::from_unitary_image(self.amps.iter().map(|a| a * phase).collect())
    }

    /// True when `self = c · other` entrywise within `tol` for some unit complex `c`.
    ///
    /// `c` is read off the largest-magnitude entry of `other`.
    pub fn equal_up_to_global_phase(&self, other: &SubsystemState, tol: f64) -> bool {
        equal_up_to_global_phase(&self.amps, &other.amps, tol)
    }

    /// η-fold tensor power, refusing to allocate more than `cap` amplitudes.
    pub fn tensor_power(&self, eta: usize, cap: usize) -> Result<GlobalState> {
        GlobalState::tensor_power(self, eta, cap)
    }
}

/// See [`SubsystemState::equal_up_to_global_phase`].
pub fn equal_up_to_global_phase(a: &[Amplitude], b: &[Amplitude], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let Some((pivot, bp)) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm_sqr().total_cmp(&y.1.norm_sqr()))
    else {
        return true;
    };
    if bp.norm() <= tol {
        return a.iter().all(|x| x.norm() <= tol);
    }
    let c = a[pivot] / bp;
    if (c.norm() - 1.0).abs() > tol {
        return false;
    }
    a.iter().zip(b).all(|(x, y)| (x - c * y).norm() <= tol)
}

/// Explicit state of η subsystems with `N^η` amplitudes.
///
/// Basis index `idx` is read as a big-endian base-N digit string of length η:
/// digit 0 (most significant) is the basis state of subsystem 0.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalState {
    dim: usize,
    eta: usize,
    amps: Vec<Amplitude>,
}

/// Number of amplitudes in an η-fold product of N-dimensional subsystems,
/// or a resource error when it exceeds `cap`.
pub fn global_len(dim: usize, eta: usize, cap: usize) -> Result<usize> {
    let needed = (dim as u128).checked_pow(eta as u32).unwrap_or(u128::MAX);
    if eta == 0 || needed > cap as u128 {
        if eta == 0 {
            return Err(SearchError::domain("eta must be at least 1"));
        }
        return Err(SearchError::Resource { needed, cap });
    }
    Ok(needed as usize)
}

impl GlobalState {
    pub fn tensor_power(state: &SubsystemState, eta: usize, cap: usize) -> Result<Self> {
        let dim = state.dim();
        let len = global_len(dim, eta, cap)?;
        // Grow one factor at a time; the last-appended factor becomes the least
        // significant digit, giving big-endian ordering.
        let mut amps = Vec::with_capacity(len);
        amps.extend_from_slice(state.amplitudes());
        for _ in 1..eta {
            amps = amps
                .iter()
                .flat_map(|&hi| state.amplitudes().iter().map(move |&lo| hi * lo))
                .collect();
        }
        Ok(GlobalState { dim, eta, amps })
    }

    /// Builds a global state from explicit amplitudes.
    pub fn from_amplitudes(dim: usize, eta: usize, amps: Vec<Amplitude>, cap: usize) -> Result<Self> {
        check_dim(dim)?;
        let len = global_len(dim, eta, cap)?;
        if amps.len() != len {
            return Err(SearchError::domain(format!(
                "expected {len} amplitudes for N={dim}, eta={eta}, got {}",
                amps.len()
            )));
        }
        check_amplitudes(&amps)?;
        Ok(GlobalState { dim, eta, amps })
    }

    pub(crate) fn with_amplitudes(&self, amps: Vec<Amplitude>) -> Self {
        debug_assert_eq!(amps.len(), self.amps.len());
        GlobalState { dim: self.dim, eta: self.eta, amps }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eta(&self) -> usize {
        self.eta
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    /// Digit of subsystem `pos` in basis index `idx`.
    pub fn digit(&self, idx: usize, pos: usize) -> usize {
        let stride = self.dim.pow((self.eta - 1 - pos) as u32);
        (idx / stride) % self.dim
    }
}
