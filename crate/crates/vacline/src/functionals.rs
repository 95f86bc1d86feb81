//! Numerical energy, momentum, continuity-residual, and mixed-overlap
//! integrals: the quadrature route that independently checks the closed
//! forms of [`crate::analytic`].
//!
//! Fields enter through the [`FieldSampler`] trait, which yields the value
//! and first derivatives at any `(t, x)` plus a finite support window. The
//! overlap amplitudes are the coefficients `mu` of the mixed observables
//! `H_m = mu_H a + mu_H* a^dagger` (and likewise `P_m`), obtained by
//! integrating closed-form derivative fields so that quadrature is the only
//! numerical error in the chain.

use crate::greens::ModeResponse;
use crate::model::{CircuitSpec, ExternalModeSpec, GaussianPulseSpec};
use crate::quad::{self, QuadConfig, QuadError};
use num_complex::Complex64;
use thiserror::Error;

/// Field value and first derivatives at one spacetime point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub value: f64,
    pub d_t: f64,
    pub d_x: f64,
}

/// Uniform view of a classical field configuration.
pub trait FieldSampler {
    fn sample(&self, t: f64, x: f64) -> FieldSample;

    /// Window outside which the field is negligible at time `t`.
    fn support(&self, t: f64) -> (f64, f64);
}

/// The incident Gaussian packet as a sampler, moving at the line speed in
/// either direction.
#[derive(Debug, Clone, Copy)]
pub struct GaussianPulseField {
    pulse: GaussianPulseSpec,
    c: f64,
    direction: f64,
}

impl GaussianPulseField {
    pub fn right_mover(pulse: GaussianPulseSpec, circuit: &CircuitSpec) -> Self {
        Self {
            pulse,
            c: circuit.wave_speed(),
            direction: 1.0,
        }
    }

    pub fn left_mover(pulse: GaussianPulseSpec, circuit: &CircuitSpec) -> Self {
        Self {
            pulse,
            c: circuit.wave_speed(),
            direction: -1.0,
        }
    }

    fn center(&self, t: f64) -> f64 {
        self.direction * self.c * t
    }
}

impl FieldSampler for GaussianPulseField {
    fn sample(&self, t: f64, x: f64) -> FieldSample {
        let s = self.pulse.sigma();
        let u = x - self.center(t);
        let value = self.pulse.amplitude() * (-u * u / (2.0 * s * s)).exp();
        let slope = -(u / (s * s)) * value;
        FieldSample {
            value,
            d_t: -self.direction * self.c * slope,
            d_x: slope,
        }
    }

    fn support(&self, t: f64) -> (f64, f64) {
        let pad = 10.0 * self.pulse.sigma();
        (self.center(t) - pad, self.center(t) + pad)
    }
}

/// Overlap amplitudes of the mixed energy and momentum observables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapAmplitude {
    pub mu_h: Complex64,
    pub mu_p: Complex64,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum FunctionalError {
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("field support window is not finite at t = {t}")]
    UnboundedSupport { t: f64 },
    #[error(
        "pulse support overlaps the source region: evaluation time must \
         exceed {min_valid_t}"
    )]
    PulseInsideSource { min_valid_t: f64 },
}

/// Quadrature-backed functionals for a given line.
#[derive(Debug, Clone, Copy)]
pub struct Functionals {
    circuit: CircuitSpec,
    quad: QuadConfig,
}

impl Functionals {
    pub fn new(circuit: &CircuitSpec) -> Self {
        Self {
            circuit: *circuit,
            quad: QuadConfig::default(),
        }
    }

    pub fn with_quad(mut self, quad: QuadConfig) -> Self {
        self.quad = quad;
        self
    }

    fn window(&self, field: &impl FieldSampler, t: f64) -> Result<(f64, f64), FunctionalError> {
        let (lo, hi) = field.support(t);
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(FunctionalError::UnboundedSupport { t });
        }
        Ok((lo, hi))
    }

    /// Self-energy `int [ (1/2c^2) (d_t psi)^2 + (1/2) (d_x psi)^2 ] dx`
    /// over the support window at time `t`.
    pub fn energy(&self, field: &impl FieldSampler, t: f64) -> Result<f64, FunctionalError> {
        let (lo, hi) = self.window(field, t)?;
        let inv_c2 = self.circuit.wave_speed().powi(-2);
        let v = quad::integrate(
            |x| {
                let s = field.sample(t, x);
                0.5 * (inv_c2 * s.d_t * s.d_t + s.d_x * s.d_x)
            },
            lo,
            hi,
            &[],
            &self.quad,
        )?;
        Ok(v)
    }

    /// Field momentum `-(1/c^2) int (d_t psi)(d_x psi) dx`.
    pub fn momentum(&self, field: &impl FieldSampler, t: f64) -> Result<f64, FunctionalError> {
        let (lo, hi) = self.window(field, t)?;
        let inv_c2 = self.circuit.wave_speed().powi(-2);
        let v = quad::integrate(
            |x| {
                let s = field.sample(t, x);
                -inv_c2 * s.d_t * s.d_x
            },
            lo,
            hi,
            &[],
            &self.quad,
        )?;
        Ok(v)
    }

    /// Overlap amplitudes between the incident pulse and the driven field,
    /// evaluated at a time late enough that the pulse sits entirely
    /// downstream of the source region (`t > (ell/2 + 8 sigma)/c`, keeping
    /// the Gaussian tail inside the source below `e^{-32}`). The result is
    /// time-independent for all valid `t` because both factors are then
    /// right-movers.
    pub fn mixed_overlap_amplitude(
        &self,
        pulse: &GaussianPulseSpec,
        mode: &ExternalModeSpec,
        t: f64,
    ) -> Result<OverlapAmplitude, FunctionalError> {
        let c = self.circuit.wave_speed();
        let min_valid_t = (0.5 * mode.ell() + 8.0 * pulse.sigma()) / c;
        if t <= min_valid_t {
            return Err(FunctionalError::PulseInsideSource { min_valid_t });
        }

        let field = GaussianPulseField::right_mover(*pulse, &self.circuit);
        let response = ModeResponse::new(mode, &self.circuit);
        let (lo, hi) = field.support(t);
        let edges = [-0.5 * mode.ell(), 0.5 * mode.ell()];
        let inv_c2 = c.powi(-2);

        let mu_h = quad::integrate_complex(
            |x| {
                let p = field.sample(t, x);
                let g = response.gradient(t, x);
                inv_c2 * p.d_t * g.d_t + p.d_x * g.d_x
            },
            lo,
            hi,
            &edges,
            &self.quad,
        )?;
        let mu_p = quad::integrate_complex(
            |x| {
                let p = field.sample(t, x);
                let g = response.gradient(t, x);
                -(inv_c2 * (p.d_t * g.d_x + p.d_x * g.d_t))
            },
            lo,
            hi,
            &edges,
            &self.quad,
        )?;
        Ok(OverlapAmplitude { mu_h, mu_p })
    }

    /// Residual of the continuity relation, `d_mu T^mu_nu - psi d_nu f`,
    /// as the 2-vector `(nu = 0, nu = 1)`, by central differences with step
    /// `h`. Vanishes as `O(h^2)` for exact fields.
    pub fn continuity_residual(
        &self,
        field: &impl FieldSampler,
        source: &impl Fn(f64, f64) -> f64,
        t: f64,
        x: f64,
        h: f64,
    ) -> [f64; 2] {
        fn d_dt(f: impl Fn(f64, f64) -> f64, t: f64, x: f64, h: f64) -> f64 {
            (f(t + h, x) - f(t - h, x)) / (2.0 * h)
        }
        fn d_dx(f: impl Fn(f64, f64) -> f64, t: f64, x: f64, h: f64) -> f64 {
            (f(t, x + h) - f(t, x - h)) / (2.0 * h)
        }

        let inv_c2 = self.circuit.wave_speed().powi(-2);
        // Canonical tensor of the interacting Lagrangian: the psi*f piece
        // belongs to T^0_0 and T^1_1, otherwise the equation-of-motion terms
        // do not cancel against the force density.
        let t00 = |tt: f64, xx: f64| {
            let s = field.sample(tt, xx);
            0.5 * (inv_c2 * s.d_t * s.d_t + s.d_x * s.d_x) + s.value * source(tt, xx)
        };
        let t10 = |tt: f64, xx: f64| {
            let s = field.sample(tt, xx);
            -s.d_x * s.d_t
        };
        let t01 = |tt: f64, xx: f64| {
            let s = field.sample(tt, xx);
            inv_c2 * s.d_t * s.d_x
        };
        let t11 = |tt: f64, xx: f64| {
            let s = field.sample(tt, xx);
            -0.5 * (inv_c2 * s.d_t * s.d_t + s.d_x * s.d_x) + s.value * source(tt, xx)
        };

        let psi = field.sample(t, x).value;
        let r0 = d_dt(t00, t, x, h) + d_dx(t10, t, x, h) - psi * d_dt(source, t, x, h);
        let r1 = d_dt(t01, t, x, h) + d_dx(t11, t, x, h) - psi * d_dx(source, t, x, h);
        [r0, r1]
    }
}

/// Relative mismatch between the sampler's declared derivatives and central
/// differences of its values; used to validate sampler implementations.
pub fn derivative_consistency_error(
    field: &impl FieldSampler,
    t: f64,
    x: f64,
    h: f64,
) -> (f64, f64) {
    let s = field.sample(t, x);
    let dt_fd = (field.sample(t + h, x).value - field.sample(t - h, x).value) / (2.0 * h);
    let dx_fd = (field.sample(t, x + h).value - field.sample(t, x - h).value) / (2.0 * h);
    let scale = s.d_t.abs().max(s.d_x.abs()).max(1e-300);
    ((s.d_t - dt_fd).abs() / scale, (s.d_x - dx_fd).abs() / scale)
}
