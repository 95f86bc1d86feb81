//! Moment algebra for observables linear in a single bosonic mode.
//!
//! Both mixed observables are of the form `c0 + mu a + mu* a^dagger`, so
//! their statistics in vacuum and coherent states reduce to two lines of
//! algebra driven by `[a, a^dagger] = 1`: the mean shifts with the state,
//! the variance is `|mu|^2` regardless. The [`fock`] submodule carries a
//! truncated matrix representation used as an independent oracle.

use crate::functionals::{FunctionalError, Functionals};
use crate::model::{CircuitSpec, ExternalModeSpec, GaussianPulseSpec};
use num_complex::Complex64;

/// Hermitian observable `c0 + mu a + mu* a^dagger`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearObservable {
    pub offset: f64,
    pub amplitude: Complex64,
}

impl LinearObservable {
    pub fn new(offset: f64, amplitude: Complex64) -> Self {
        Self { offset, amplitude }
    }
}

impl std::ops::Add for LinearObservable {
    type Output = LinearObservable;

    fn add(self, rhs: LinearObservable) -> LinearObservable {
        LinearObservable {
            offset: self.offset + rhs.offset,
            amplitude: self.amplitude + rhs.amplitude,
        }
    }
}

/// State of the external mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeState {
    Vacuum,
    Coherent(Complex64),
}

impl ModeState {
    fn displacement(&self) -> Complex64 {
        match self {
            ModeState::Vacuum => Complex64::ZERO,
            ModeState::Coherent(a0) => *a0,
        }
    }
}

/// `<c0 + mu a + mu* a^dagger>`: `c0` in vacuum, `c0 + 2 Re(mu a0)` in a
/// coherent state.
pub fn mean(obs: &LinearObservable, state: &ModeState) -> f64 {
    obs.offset + 2.0 * (obs.amplitude * state.displacement()).re
}

/// Variance of a linear observable: `|mu|^2` in vacuum and in every
/// coherent state (displacement shifts the mean only).
pub fn variance(obs: &LinearObservable, _state: &ModeState) -> f64 {
    obs.amplitude.norm_sqr()
}

/// The reported observable pair: variance shifts of transmitted-pulse
/// energy and momentum, built from the quadrature overlap amplitudes.
pub fn variance_shift(
    pulse: &GaussianPulseSpec,
    mode: &ExternalModeSpec,
    circuit: &CircuitSpec,
) -> Result<(f64, f64), FunctionalError> {
    // Any time past the validity gate works (the amplitudes are
    // time-independent there); leave a safety margin of four sigma.
    let t_eval = (0.5 * mode.ell() + 12.0 * pulse.sigma()) / circuit.wave_speed();
    let amp = Functionals::new(circuit).mixed_overlap_amplitude(pulse, mode, t_eval)?;
    let h_obs = LinearObservable::new(0.0, amp.mu_h);
    let p_obs = LinearObservable::new(0.0, amp.mu_p);
    Ok((
        variance(&h_obs, &ModeState::Vacuum),
        variance(&p_obs, &ModeState::Vacuum),
    ))
}

/// Truncated Fock-space representation, used as the independent oracle for
/// the moment formulas: build the observable as an explicit matrix, build
/// the state as an explicit vector, and take literal expectation values.
pub mod fock {
    use super::LinearObservable;
    use num_complex::Complex64;

    /// Dense complex matrix in the number basis `|0> .. |dim-1>`.
    pub struct FockMatrix {
        dim: usize,
        data: Vec<Complex64>,
    }

    impl FockMatrix {
        fn zeros(dim: usize) -> Self {
            Self {
                dim,
                data: vec![Complex64::ZERO; dim * dim],
            }
        }

        fn at(&self, row: usize, col: usize) -> Complex64 {
            self.data[row * self.dim + col]
        }

        fn at_mut(&mut self, row: usize, col: usize) -> &mut Complex64 {
            &mut self.data[row * self.dim + col]
        }

        /// Matrix of `c0 + mu a + mu* a^dagger`; `a |n> = sqrt(n) |n-1>`.
        pub fn observable(obs: &LinearObservable, dim: usize) -> Self {
            let mut m = Self::zeros(dim);
            for n in 0..dim {
                *m.at_mut(n, n) = Complex64::from(obs.offset);
                if n + 1 < dim {
                    let root = ((n + 1) as f64).sqrt();
                    *m.at_mut(n, n + 1) = obs.amplitude * root;
                    *m.at_mut(n + 1, n) = obs.amplitude.conj() * root;
                }
            }
            m
        }

        fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
            (0..self.dim)
                .map(|row| (0..self.dim).map(|col| self.at(row, col) * v[col]).sum())
                .collect()
        }
    }

    fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    }

    /// Normalized coherent-state vector `e^{-|a0|^2/2} sum a0^n/sqrt(n!) |n>`
    /// truncated to `dim` entries (vacuum for `a0 = 0`).
    pub fn coherent_vector(a0: Complex64, dim: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::ZERO; dim];
        let mut coeff = Complex64::from((-0.5 * a0.norm_sqr()).exp());
        for (n, slot) in v.iter_mut().enumerate() {
            *slot = coeff;
            coeff = coeff * a0 / ((n + 1) as f64).sqrt();
        }
        v
    }

    /// `(mean, variance)` of the observable in the given truncated state,
    /// computed literally as `<v|M|v>` and `<v|M^2|v> - <v|M|v>^2`.
    pub fn moments(obs: &LinearObservable, a0: Complex64, dim: usize) -> (f64, f64) {
        let state = coherent_vector(a0, dim);
        let m = FockMatrix::observable(obs, dim);
        let mv = m.apply(&state);
        let mean = inner(&state, &mv).re;
        let second = inner(&mv, &mv).re;
        (mean, second - mean * mean)
    }
}
