//! Simulation and cross-validation of a classical current pulse on a 1-D LC
//! transmission line picking up energy-momentum fluctuations from the vacuum
//! of a single external electromagnetic mode.
//!
//! The long-wavelength limit of the LC ladder is the 1+1-D wave equation with
//! a source term set by the external magnetic flux. Driving the line with a
//! quantized monochromatic mode turns the field equation into a Langevin
//! equation: the particular solution is linear in the mode operator, so every
//! observable built from it is a linear form `c0 + mu a + mu* a^†` whose
//! vacuum statistics follow from `[a, a^†] = 1`.
//!
//! The crate provides three independent routes to the same physics and the
//! machinery to compare them:
//!
//! * [`analytic`] - closed-form pulse, transmitted-wave coefficient, and the
//!   mixed-variance law with its dimensionless prefactor;
//! * [`greens`] + [`functionals`] - the causal propagator, the driven-field
//!   coefficients it generates, and adaptive-quadrature energy / momentum /
//!   overlap integrals;
//! * [`lattice`] - time-domain leapfrog integration of the discrete ladder
//!   with a coherent drive, recovering the continuum transfer function as
//!   `dx -> 0`.
//!
//! [`quantum`] turns overlap amplitudes into means and variances, and
//! [`model`] holds the validated parameter set shared by everything else.
//! All internal computation uses natural units (`hbar = 1`, wave speed `c`
//! derived from the line densities); SI values are converted at the edges.

pub mod analytic;
pub mod functionals;
pub mod greens;
pub mod lattice;
pub mod model;
pub mod quad;
pub mod quantum;

pub use model::{
    CircuitSpec, ExternalModeSpec, GaussianPulseSpec, Model, ModelError, RawConfig, UnitsMode,
};
