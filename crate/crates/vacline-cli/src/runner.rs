//! Row evaluation for single points and sweeps: closed forms, quadrature
//! cross-checks, and (optionally) lattice transmission runs, with the
//! per-row discrepancy bookkeeping.

use crate::CliError;
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::HashMap;
use std::io::Write;
use vacline::analytic;
use vacline::functionals::Functionals;
use vacline::lattice::{run_transmission_experiment, TransmissionConfig};
use vacline::model::{ExternalModeSpec, GaussianPulseSpec, Model};
use vacline::quad::QuadConfig;

/// Relative-discrepancy floor: keeps the ratio meaningful when the closed
/// form is at an interference zero.
const DISCREPANCY_FLOOR: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Sigma,
    OmegaE,
    Ell,
    E0,
    Dx,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::Sigma => "sigma",
            Axis::OmegaE => "omega_e",
            Axis::Ell => "ell",
            Axis::E0 => "E0",
            Axis::Dx => "dx",
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sigma" => Ok(Axis::Sigma),
            "omega_e" => Ok(Axis::OmegaE),
            "ell" => Ok(Axis::Ell),
            "E0" | "e0" => Ok(Axis::E0),
            "dx" => Ok(Axis::Dx),
            other => Err(CliError::Config(format!(
                "unknown sweep axis `{other}` (expected sigma, omega_e, ell, E0, or dx)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Analytic,
    Quadrature,
    Lattice,
    All,
}

impl Scenario {
    fn wants_quadrature(&self) -> bool {
        matches!(self, Scenario::Quadrature | Scenario::All)
    }

    fn wants_lattice(&self) -> bool {
        matches!(self, Scenario::Lattice | Scenario::All)
    }
}

impl std::str::FromStr for Scenario {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "analytic" => Ok(Scenario::Analytic),
            "quadrature" => Ok(Scenario::Quadrature),
            "lattice" => Ok(Scenario::Lattice),
            "all" => Ok(Scenario::All),
            other => Err(CliError::Config(format!(
                "unknown scenario `{other}` (expected analytic, quadrature, lattice, or all)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepPlan {
    pub axis: Axis,
    pub values: Vec<f64>,
    pub scenario: Scenario,
    /// Cell spacing for lattice rows when the axis itself is not `dx`.
    pub lattice_dx: f64,
}

impl SweepPlan {
    pub fn from_range(
        axis: Axis,
        min: f64,
        max: f64,
        points: usize,
        scenario: Scenario,
        lattice_dx: f64,
    ) -> Result<Self, CliError> {
        if points < 2 {
            return Err(CliError::Config("sweep needs at least 2 points".into()));
        }
        if !(min.is_finite() && max.is_finite()) || min >= max {
            return Err(CliError::Config(format!(
                "invalid sweep range [{min}, {max}]"
            )));
        }
        let positive_required = true; // every sweepable quantity is positive
        if positive_required && min <= 0.0 {
            return Err(CliError::Config(format!(
                "axis {} requires positive values, got minimum {min}",
                axis.name()
            )));
        }
        let values = (0..points)
            .map(|i| min + (max - min) * i as f64 / (points - 1) as f64)
            .collect();
        Ok(Self {
            axis,
            values,
            scenario,
            lattice_dx,
        })
    }
}

/// One evaluated parameter point.
#[derive(Debug, Clone)]
pub struct ResultRow {
    pub axis: &'static str,
    pub value: f64,
    pub h_c: f64,
    pub p_c: f64,
    pub alpha: f64,
    pub var_analytic: f64,
    pub var_quadrature: Option<f64>,
    pub lattice_amp: Option<Complex64>,
    pub lattice_rel_err: Option<f64>,
    pub discrepancy: Option<f64>,
}

pub const CSV_HEADER: &str =
    "axis,value,H_c,P_c,alpha,var_analytic,var_quadrature,lattice_re,lattice_im,lattice_rel_err,discrepancy";

impl ResultRow {
    pub fn csv_line(&self) -> String {
        fn opt(v: Option<f64>) -> String {
            v.map(|x| x.to_string()).unwrap_or_default()
        }
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.axis,
            self.value,
            self.h_c,
            self.p_c,
            self.alpha,
            self.var_analytic,
            opt(self.var_quadrature),
            opt(self.lattice_amp.map(|a| a.re)),
            opt(self.lattice_amp.map(|a| a.im)),
            opt(self.lattice_rel_err),
            opt(self.discrepancy),
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        fn opt(v: Option<f64>) -> serde_json::Value {
            v.map_or(serde_json::Value::Null, |x| serde_json::json!(x))
        }
        serde_json::json!({
            "axis": self.axis,
            "value": self.value,
            "H_c": self.h_c,
            "P_c": self.p_c,
            "alpha": self.alpha,
            "var_analytic": self.var_analytic,
            "var_quadrature": opt(self.var_quadrature),
            "lattice_re": opt(self.lattice_amp.map(|a| a.re)),
            "lattice_im": opt(self.lattice_amp.map(|a| a.im)),
            "lattice_rel_err": opt(self.lattice_rel_err),
            "discrepancy": opt(self.discrepancy),
        })
    }

    fn assert_finite(&self) -> Result<(), CliError> {
        let cells = [
            Some(self.value),
            Some(self.h_c),
            Some(self.p_c),
            Some(self.alpha),
            Some(self.var_analytic),
            self.var_quadrature,
            self.lattice_amp.map(|a| a.re),
            self.lattice_amp.map(|a| a.im),
            self.lattice_rel_err,
            self.discrepancy,
        ];
        if cells.into_iter().flatten().any(|v| !v.is_finite()) {
            return Err(CliError::Numerical(format!(
                "non-finite cell in row {} = {}",
                self.axis, self.value
            )));
        }
        Ok(())
    }
}

/// Model with one axis value substituted.
fn model_at(base: &Model, axis: Axis, value: f64) -> Result<Model, CliError> {
    let mut m = *base;
    let bad = |field: &str| CliError::Config(format!("{field} must be positive, got {value}"));
    match axis {
        Axis::Sigma => {
            m.pulse = GaussianPulseSpec::new(m.pulse.e0(), value).map_err(|_| bad("sigma"))?;
        }
        Axis::E0 => {
            m.pulse = GaussianPulseSpec::new(value, m.pulse.sigma())
                .map_err(|_| CliError::Config(format!("E0 must be nonnegative, got {value}")))?;
        }
        Axis::OmegaE => {
            m.mode = ExternalModeSpec::new(value, m.mode.phi(), m.mode.ell())
                .map_err(|_| bad("omega_e"))?;
        }
        Axis::Ell => {
            m.mode = ExternalModeSpec::new(m.mode.omega_e(), m.mode.phi(), value)
                .map_err(|_| bad("ell"))?;
        }
        Axis::Dx => {
            if value <= 0.0 {
                return Err(bad("dx"));
            }
        }
    }
    Ok(m)
}

/// Lattice transfer functions depend only on `(omega_e, ell, dx)`; cache
/// them so sweeps along other axes run the experiment once.
type LatticeCache = HashMap<(u64, u64, u64), (Complex64, f64)>;

fn lattice_key(mode: &ExternalModeSpec, dx: f64) -> (u64, u64, u64) {
    (
        mode.omega_e().to_bits(),
        mode.ell().to_bits(),
        dx.to_bits(),
    )
}

fn run_lattice_point(model: &Model, dx: f64) -> Result<(Complex64, f64), CliError> {
    let cfg = TransmissionConfig::with_dx(dx);
    let result =
        run_transmission_experiment(&model.circuit, &model.mode, Complex64::ONE, &cfg)
            .map_err(|e| CliError::Numerical(e.to_string()))?;
    let expected = analytic::transmitted_coefficient(&model.mode, &model.circuit).g_amp;
    let rel_err = if expected.norm() > 0.0 {
        (result.amplitude - expected).norm() / expected.norm()
    } else {
        result.amplitude.norm()
    };
    Ok((result.amplitude, rel_err))
}

/// Evaluate one row; `lattice` carries the memoized transfer function when
/// the scenario asks for it.
fn evaluate_row(
    base: &Model,
    axis: Axis,
    value: f64,
    scenario: Scenario,
    quad_tol: Option<f64>,
    lattice: Option<&(Complex64, f64)>,
) -> Result<ResultRow, CliError> {
    let m = model_at(base, axis, value)?;
    let (h_c, p_c) = analytic::pulse_energy_momentum(&m.pulse, &m.circuit);
    let alpha = analytic::alpha(&m.mode, &m.circuit);
    let var_analytic = analytic::mixed_variance(&m.pulse, &m.mode, &m.circuit);

    let var_quadrature = if scenario.wants_quadrature() {
        let mut quad = QuadConfig::default();
        if let Some(tol) = quad_tol {
            quad = quad.with_rel_tol(tol);
        }
        let f = Functionals::new(&m.circuit).with_quad(quad);
        let t_eval =
            (0.5 * m.mode.ell() + 12.0 * m.pulse.sigma()) / m.circuit.wave_speed();
        let amp = f
            .mixed_overlap_amplitude(&m.pulse, &m.mode, t_eval)
            .map_err(|e| CliError::Numerical(e.to_string()))?;
        Some(amp.mu_h.norm_sqr())
    } else {
        None
    };

    let discrepancy = var_quadrature
        .map(|q| (var_analytic - q).abs() / var_analytic.max(DISCREPANCY_FLOOR));

    let row = ResultRow {
        axis: axis.name(),
        value,
        h_c,
        p_c,
        alpha,
        var_analytic,
        var_quadrature,
        lattice_amp: lattice.map(|(a, _)| *a),
        lattice_rel_err: lattice.map(|(_, e)| *e),
        discrepancy,
    };
    row.assert_finite()?;
    Ok(row)
}

pub fn evaluate_single(
    model: &Model,
    scenario: Scenario,
    quad_tol: Option<f64>,
    lattice_dx: f64,
) -> Result<ResultRow, CliError> {
    let lattice = if scenario.wants_lattice() {
        Some(run_lattice_point(model, lattice_dx)?)
    } else {
        None
    };
    evaluate_row(
        model,
        Axis::Sigma,
        model.pulse.sigma(),
        scenario,
        quad_tol,
        lattice.as_ref(),
    )
}

/// Run the whole plan. Rows come back ordered by axis value; the first
/// failure is returned together with the rows completed before it so the
/// caller can flush partial output.
pub fn run_sweep(
    model: &Model,
    plan: &SweepPlan,
    quad_tol: Option<f64>,
    jobs: Option<usize>,
) -> (Vec<ResultRow>, Option<CliError>) {
    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = jobs {
            builder = builder.num_threads(n.max(1));
        }
        match builder.build() {
            Ok(pool) => pool,
            Err(e) => return (Vec::new(), Some(CliError::Numerical(e.to_string()))),
        }
    };

    // Phase 1: unique lattice points, evaluated in parallel.
    let mut cache: LatticeCache = HashMap::new();
    if plan.scenario.wants_lattice() {
        let mut keyed: Vec<((u64, u64, u64), Model, f64)> = Vec::new();
        for &value in &plan.values {
            let m = match model_at(model, plan.axis, value) {
                Ok(m) => m,
                Err(e) => return (Vec::new(), Some(e)),
            };
            let dx = if plan.axis == Axis::Dx {
                value
            } else {
                plan.lattice_dx
            };
            let key = lattice_key(&m.mode, dx);
            if !cache.contains_key(&key) && !keyed.iter().any(|(k, _, _)| *k == key) {
                keyed.push((key, m, dx));
            }
        }
        let results: Vec<_> = pool.install(|| {
            keyed
                .par_iter()
                .map(|(key, m, dx)| (*key, run_lattice_point(m, *dx)))
                .collect()
        });
        for (key, res) in results {
            match res {
                Ok(v) => {
                    cache.insert(key, v);
                }
                Err(e) => return (Vec::new(), Some(e)),
            }
        }
    }

    // Phase 2: all rows in parallel, collected in axis order.
    let rows: Vec<Result<ResultRow, CliError>> = pool.install(|| {
        plan.values
            .par_iter()
            .map(|&value| {
                let lattice = if plan.scenario.wants_lattice() {
                    let m = model_at(model, plan.axis, value)?;
                    let dx = if plan.axis == Axis::Dx {
                        value
                    } else {
                        plan.lattice_dx
                    };
                    cache.get(&lattice_key(&m.mode, dx)).copied()
                } else {
                    None
                };
                evaluate_row(
                    model,
                    plan.axis,
                    value,
                    plan.scenario,
                    quad_tol,
                    lattice.as_ref(),
                )
            })
            .collect()
    });

    let mut completed = Vec::with_capacity(rows.len());
    for row in rows {
        match row {
            Ok(r) => completed.push(r),
            Err(e) => return (completed, Some(e)),
        }
    }
    (completed, None)
}

/// Location of the analytic-variance maximum in a sigma sweep.
pub struct SigmaPeakReport {
    pub argmax: f64,
    pub closed_form: f64,
    pub offset: f64,
    pub grid_step: f64,
}

pub fn sigma_peak_report(model: &Model, rows: &[ResultRow]) -> Option<SigmaPeakReport> {
    if rows.len() < 2 || rows[0].axis != "sigma" {
        return None;
    }
    let best = rows
        .iter()
        .max_by(|a, b| a.var_analytic.partial_cmp(&b.var_analytic).unwrap())?;
    let closed_form = analytic::peak_sigma(&model.mode, &model.circuit);
    Some(SigmaPeakReport {
        argmax: best.value,
        closed_form,
        offset: best.value - closed_form,
        grid_step: rows[1].value - rows[0].value,
    })
}

pub fn write_csv<W: Write>(
    mut out: W,
    rows: &[ResultRow],
    error: Option<&CliError>,
) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    if let Some(e) = error {
        writeln!(out, "# ERROR: {e}")?;
    }
    Ok(())
}
