//! Causal propagator of the 1+1-D wave operator and the particular solution
//! it generates from the monochromatic source.
//!
//! The propagator is defined by `(dtt - dxx) G = -delta delta` with the
//! retarded (`omega + i eps`) contour, whose `eps -> 0` limit is the step
//! kernel `G = -1/2 theta(dt - |dx|)`. Convolving with the source of the
//! external mode gives the driven-field coefficient of the annihilation
//! operator in closed form everywhere on the line: a right-mover downstream
//! of the source region, a left-mover upstream, and a standing profile
//! inside. The conjugate coefficient multiplies the creation operator, so
//! the field stays Hermitian.

use crate::model::{CircuitSpec, ExternalModeSpec};
use crate::quad::{self, QuadConfig, QuadError};
use num_complex::Complex64;

/// Stateless evaluator of the causal step kernel.
#[derive(Debug, Clone, Copy, Default)]
pub struct RetardedKernel;

impl RetardedKernel {
    /// Kernel at unit wave speed: `-1/2` strictly inside the future light
    /// cone, zero outside.
    pub fn eval(&self, dt: f64, dx: f64) -> f64 {
        self.eval_with_speed(dt, dx, 1.0)
    }

    /// Kernel for wave speed `c`: `-c/2` for `c dt > |dx|`, zero otherwise.
    pub fn eval_with_speed(&self, dt: f64, dx: f64, c: f64) -> f64 {
        if c * dt > dx.abs() {
            -0.5 * c
        } else {
            0.0
        }
    }
}

/// Driven-field coefficient `g` of the annihilation operator and its first
/// derivatives, `psi_q = g a + g* a^dagger`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiQGradient {
    pub value: Complex64,
    pub d_t: Complex64,
    pub d_x: Complex64,
}

/// Evaluator for the particular solution generated by the external mode.
#[derive(Debug, Clone, Copy)]
pub struct ModeResponse {
    omega: f64,
    ell: f64,
    c: f64,
    /// `-(c/2) sqrt(gamma_C) phi`, the prefactor common to every branch.
    front: Complex64,
}

impl ModeResponse {
    pub fn new(mode: &ExternalModeSpec, circuit: &CircuitSpec) -> Self {
        let c = circuit.wave_speed();
        Self {
            omega: mode.omega_e(),
            ell: mode.ell(),
            c,
            front: -0.5 * c * circuit.gamma_c().sqrt() * mode.phi(),
        }
    }

    fn kappa(&self) -> f64 {
        self.omega / self.c
    }

    /// Closed-form spatial factor `int_{-ell/2}^{ell/2} e^{i kappa |x - x'|} dx'`.
    fn spatial_factor(&self, x: f64) -> Complex64 {
        let k = self.kappa();
        let half = 0.5 * self.ell;
        if x.abs() >= half {
            // One-sided: 2 sin(k ell/2)/k times the plane-wave phase.
            Complex64::from(2.0 * (k * half).sin() / k)
                * Complex64::new(0.0, k * x.abs()).exp()
        } else {
            // Inside the source: (2/(i k)) [e^{i k ell/2} cos(k x) - 1].
            (Complex64::new(0.0, k * half).exp() * (k * x).cos() - 1.0) * 2.0
                / Complex64::new(0.0, k)
        }
    }

    fn d_spatial_factor(&self, x: f64) -> Complex64 {
        let k = self.kappa();
        let half = 0.5 * self.ell;
        if x.abs() >= half {
            Complex64::new(0.0, k * x.signum()) * self.spatial_factor(x)
        } else {
            Complex64::new(0.0, 2.0) * Complex64::new(0.0, k * half).exp() * (k * x).sin()
        }
    }

    /// Coefficient of the annihilation operator at `(t, x)`.
    pub fn coefficient(&self, t: f64, x: f64) -> Complex64 {
        self.front * Complex64::new(0.0, -self.omega * t).exp() * self.spatial_factor(x)
    }

    /// Coefficient and its time/space derivatives in closed form.
    pub fn gradient(&self, t: f64, x: f64) -> PsiQGradient {
        let phase = Complex64::new(0.0, -self.omega * t).exp();
        let spatial = self.spatial_factor(x);
        let value = self.front * phase * spatial;
        PsiQGradient {
            value,
            d_t: Complex64::new(0.0, -self.omega) * value,
            d_x: self.front * phase * self.d_spatial_factor(x),
        }
    }

    /// Same coefficient with the spatial integral done by adaptive
    /// quadrature of `e^{i kappa |x - x'|}` instead of the closed form.
    /// Kept as an independent cross-check of the branch algebra.
    pub fn coefficient_by_quadrature(
        &self,
        t: f64,
        x: f64,
        cfg: &QuadConfig,
    ) -> Result<Complex64, QuadError> {
        let k = self.kappa();
        let half = 0.5 * self.ell;
        let integral = quad::integrate_complex(
            |xp| Complex64::new(0.0, k * (x - xp).abs()).exp(),
            -half,
            half,
            &[x],
            cfg,
        )?;
        Ok(self.front * Complex64::new(0.0, -self.omega * t).exp() * integral)
    }
}

/// Coefficient pair `(coefficient of a, coefficient of a^dagger)` of the
/// driven field at `(t, x)`; the second entry is the conjugate of the first.
pub fn psi_q_frequency_domain(
    t: f64,
    x: f64,
    mode: &ExternalModeSpec,
    circuit: &CircuitSpec,
) -> (Complex64, Complex64) {
    let g = ModeResponse::new(mode, circuit).coefficient(t, x);
    (g, g.conj())
}
