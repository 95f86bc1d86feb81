//! Validated model parameters and the unit conventions shared by all modules.
//!
//! Everything downstream of [`RawConfig::validate`] works in natural units:
//! `hbar = 1`, lengths in meters, times measured so that the vacuum speed of
//! light equals one. The wave speed of the line itself, `c = 1/sqrt(gL*gC)`,
//! is *derived* and need not equal 1 (it does for the default configuration
//! `gamma_L = gamma_C = 1`). SI inputs are converted on the way in and
//! derived quantities are converted back only when formatted for output.

use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;

/// Vacuum speed of light in m/s, used only by the SI conversion path.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Reduced Planck constant in J*s, used only by the SI conversion path.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Inductance and capacitance per unit length of the ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitSpec {
    gamma_l: f64,
    gamma_c: f64,
}

impl CircuitSpec {
    pub fn new(gamma_l: f64, gamma_c: f64) -> Result<Self, ModelError> {
        require_positive("gamma_L", gamma_l)?;
        require_positive("gamma_C", gamma_c)?;
        Ok(Self { gamma_l, gamma_c })
    }

    pub fn gamma_l(&self) -> f64 {
        self.gamma_l
    }

    pub fn gamma_c(&self) -> f64 {
        self.gamma_c
    }

    /// Wave speed `1/sqrt(gamma_L * gamma_C)`. Always recomputed so it can
    /// never drift out of sync with the densities.
    pub fn wave_speed(&self) -> f64 {
        1.0 / (self.gamma_l * self.gamma_c).sqrt()
    }
}

/// The monochromatic external mode: frequency, per-inductor flux amplitude,
/// and the length of the line segment it illuminates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExternalModeSpec {
    omega_e: f64,
    phi: Complex64,
    ell: f64,
}

impl ExternalModeSpec {
    pub fn new(omega_e: f64, phi: Complex64, ell: f64) -> Result<Self, ModelError> {
        require_positive("omega_e", omega_e)?;
        require_positive("ell", ell)?;
        if !phi.re.is_finite() || !phi.im.is_finite() {
            return Err(ModelError::NonFinite { field: "phi" });
        }
        Ok(Self { omega_e, phi, ell })
    }

    pub fn omega_e(&self) -> f64 {
        self.omega_e
    }

    pub fn phi(&self) -> Complex64 {
        self.phi
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }
}

/// Incident Gaussian wave packet of energy `E0` and characteristic length
/// `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPulseSpec {
    e0: f64,
    sigma: f64,
}

impl GaussianPulseSpec {
    pub fn new(e0: f64, sigma: f64) -> Result<Self, ModelError> {
        if !e0.is_finite() {
            return Err(ModelError::NonFinite { field: "E0" });
        }
        if e0 < 0.0 {
            return Err(ModelError::Invalid {
                field: "E0",
                reason: "must be nonnegative",
            });
        }
        require_positive("sigma", sigma)?;
        Ok(Self { e0, sigma })
    }

    pub fn e0(&self) -> f64 {
        self.e0
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Peak amplitude `A = sqrt(2 sigma E0 / sqrt(pi))`.
    pub fn amplitude(&self) -> f64 {
        (2.0 * self.sigma * self.e0 / std::f64::consts::PI.sqrt()).sqrt()
    }
}

/// Input/output unit convention. Internal computation is always natural.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnitsMode {
    #[default]
    Natural,
    Si,
}

/// Dimension tags understood by the unit converters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Time,
    Frequency,
    Energy,
    /// Flux amplitude of the external mode, per unit cell length.
    Flux,
}

impl UnitsMode {
    /// Convert an SI (or already-natural) value into internal natural units.
    ///
    /// Natural mode is the identity. SI mode maps onto a meter-based system
    /// with `hbar = c_light = 1`: times become lengths (`t -> c t`),
    /// frequencies and energies become inverse lengths.
    pub fn to_natural(&self, value: f64, dim: Dimension) -> f64 {
        match self {
            UnitsMode::Natural => value,
            UnitsMode::Si => match dim {
                Dimension::Length => value,
                Dimension::Time => value * SPEED_OF_LIGHT,
                Dimension::Frequency => value / SPEED_OF_LIGHT,
                Dimension::Energy => value / (HBAR * SPEED_OF_LIGHT),
                Dimension::Flux => value / HBAR.sqrt(),
            },
        }
    }

    /// Inverse of [`UnitsMode::to_natural`].
    pub fn from_natural(&self, value: f64, dim: Dimension) -> f64 {
        match self {
            UnitsMode::Natural => value,
            UnitsMode::Si => match dim {
                Dimension::Length => value,
                Dimension::Time => value / SPEED_OF_LIGHT,
                Dimension::Frequency => value * SPEED_OF_LIGHT,
                Dimension::Energy => value * (HBAR * SPEED_OF_LIGHT),
                Dimension::Flux => value * HBAR.sqrt(),
            },
        }
    }
}

impl std::str::FromStr for UnitsMode {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "natural" => Ok(UnitsMode::Natural),
            "si" => Ok(UnitsMode::Si),
            _ => Err(ModelError::Invalid {
                field: "units",
                reason: "must be one of: natural, si",
            }),
        }
    }
}

/// The fully validated model shared by every solver.
///
/// Immutable after construction; safe to share across worker threads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Model {
    pub circuit: CircuitSpec,
    pub mode: ExternalModeSpec,
    pub pulse: GaussianPulseSpec,
    pub units: UnitsMode,
}

/// Raw key-value configuration, before validation. Every field is optional;
/// missing fields fall back to the defaults of [`RawConfig::default`] when
/// validated, and later sources (CLI flags) override earlier ones (files)
/// one key at a time via [`RawConfig::merge`].
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub gamma_l: Option<f64>,
    pub gamma_c: Option<f64>,
    pub omega_e: Option<f64>,
    pub phi_re: Option<f64>,
    pub phi_im: Option<f64>,
    pub ell: Option<f64>,
    pub e0: Option<f64>,
    pub sigma: Option<f64>,
    pub units: Option<String>,
}

impl RawConfig {
    /// Parse a configuration document: either JSON (first non-blank byte is
    /// `{`) or `key = value` lines. `#`-prefixed lines are comments.
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        if text.trim_start().starts_with('{') {
            return serde_json::from_str(text).map_err(|e| ModelError::Syntax {
                reason: e.to_string(),
            });
        }
        let mut cfg = RawConfig::default();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ModelError::Syntax {
                reason: format!("expected `key = value`, got `{line}`"),
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    /// Assign one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ModelError> {
        if key == "units" {
            self.units = Some(value.to_string());
            return Ok(());
        }
        let slot = match key {
            "gamma_L" | "gamma_l" => &mut self.gamma_l,
            "gamma_C" | "gamma_c" => &mut self.gamma_c,
            "omega_e" => &mut self.omega_e,
            "phi_re" => &mut self.phi_re,
            "phi_im" => &mut self.phi_im,
            "ell" => &mut self.ell,
            "E0" | "e0" => &mut self.e0,
            "sigma" => &mut self.sigma,
            _ => {
                return Err(ModelError::UnknownKey {
                    key: key.to_string(),
                })
            }
        };
        let parsed: f64 = value.parse().map_err(|_| ModelError::Syntax {
            reason: format!("key `{key}`: `{value}` is not a number"),
        })?;
        *slot = Some(parsed);
        Ok(())
    }

    /// Overlay `other` on top of `self`: any key present in `other` wins.
    pub fn merge(mut self, other: &RawConfig) -> Self {
        macro_rules! take {
            ($f:ident) => {
                if other.$f.is_some() {
                    self.$f = other.$f.clone();
                }
            };
        }
        take!(gamma_l);
        take!(gamma_c);
        take!(omega_e);
        take!(phi_re);
        take!(phi_im);
        take!(ell);
        take!(e0);
        take!(sigma);
        take!(units);
        self
    }

    /// Check every invariant and produce the validated model, converting SI
    /// inputs to natural units first. Validation is total: either every
    /// field checks out or the offending field is named in the error.
    pub fn validate(&self) -> Result<Model, ModelError> {
        let units: UnitsMode = match &self.units {
            Some(s) => s.parse()?,
            None => UnitsMode::Natural,
        };

        let gamma_l = self.gamma_l.unwrap_or(1.0);
        let gamma_c = self.gamma_c.unwrap_or(1.0);
        let omega_e = self.omega_e.unwrap_or(1.0);
        let phi_re = self.phi_re.unwrap_or(1.0);
        let phi_im = self.phi_im.unwrap_or(0.0);
        let ell = self.ell.unwrap_or(1.0);
        let e0 = self.e0.unwrap_or(1.0);
        let sigma = self.sigma.unwrap_or(1.0);

        for (field, value) in [
            ("gamma_L", gamma_l),
            ("gamma_C", gamma_c),
            ("omega_e", omega_e),
            ("phi_re", phi_re),
            ("phi_im", phi_im),
            ("ell", ell),
            ("E0", e0),
            ("sigma", sigma),
        ] {
            if !value.is_finite() {
                return Err(ModelError::NonFinite { field });
            }
        }

        // SI densities convert jointly: scaling both by c_light keeps the
        // coupling gamma_C |phi|^2 consistent with the flux conversion while
        // sending the line speed to its dimensionless value c_line/c_light.
        let (gamma_l, gamma_c) = match units {
            UnitsMode::Natural => (gamma_l, gamma_c),
            UnitsMode::Si => (gamma_l * SPEED_OF_LIGHT, gamma_c * SPEED_OF_LIGHT),
        };

        let circuit = CircuitSpec::new(gamma_l, gamma_c)?;
        let mode = ExternalModeSpec::new(
            units.to_natural(omega_e, Dimension::Frequency),
            Complex64::new(
                units.to_natural(phi_re, Dimension::Flux),
                units.to_natural(phi_im, Dimension::Flux),
            ),
            units.to_natural(ell, Dimension::Length),
        )?;
        let pulse = GaussianPulseSpec::new(
            units.to_natural(e0, Dimension::Energy),
            units.to_natural(sigma, Dimension::Length),
        )?;

        Ok(Model {
            circuit,
            mode,
            pulse,
            units,
        })
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ModelError {
    #[error("{field} must be positive")]
    MustBePositive { field: &'static str },
    #[error("{field}: {reason}")]
    Invalid {
        field: &'static str,
        reason: &'static str,
    },
    #[error("{field} must be finite")]
    NonFinite { field: &'static str },
    #[error("unknown configuration key `{key}`")]
    UnknownKey { key: String },
    #[error("configuration syntax error: {reason}")]
    Syntax { reason: String },
}

fn require_positive(field: &'static str, value: f64) -> Result<(), ModelError> {
    if !value.is_finite() {
        return Err(ModelError::NonFinite { field });
    }
    if value <= 0.0 {
        return Err(ModelError::MustBePositive { field });
    }
    Ok(())
}
