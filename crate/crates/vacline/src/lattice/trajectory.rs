//! Recorded lattice runs: snapshot storage, CSV export, and a field-sampler
//! view that interpolates the stored frames for the continuum functionals.

use super::{LatticeSpec, LatticeState};
use crate::functionals::{FieldSample, FieldSampler};
use std::io::{self, Write};

/// Snapshots `(t, psi, psi_dot)` of one run at a fixed stride.
#[derive(Debug, Clone)]
pub struct LatticeTrajectory {
    n: usize,
    dx: f64,
    x_min: f64,
    charge_scale: f64,
    times: Vec<f64>,
    psi: Vec<Vec<f64>>,
    psi_dot: Vec<Vec<f64>>,
}

impl LatticeTrajectory {
    pub fn new(spec: &LatticeSpec) -> Self {
        Self {
            n: spec.n(),
            dx: spec.dx(),
            x_min: spec.x_min(),
            charge_scale: spec.circuit().gamma_c().sqrt(),
            times: Vec::new(),
            psi: Vec::new(),
            psi_dot: Vec::new(),
        }
    }

    pub fn record(&mut self, state: &LatticeState) {
        self.times.push(state.t);
        self.psi.push(state.psi.clone());
        self.psi_dot.push(state.psi_dot.clone());
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Write `t,x_n,psi_n,psi_dot_n` rows for every recorded frame, one row
    /// per cell, at the given cell stride.
    pub fn export_csv<W: Write>(&self, mut out: W, cell_stride: usize) -> io::Result<()> {
        let stride = cell_stride.max(1);
        writeln!(out, "t,x,psi,psi_dot")?;
        for (frame, t) in self.times.iter().enumerate() {
            for i in (0..self.n).step_by(stride) {
                let x = self.x_min + i as f64 * self.dx;
                writeln!(
                    out,
                    "{},{},{},{}",
                    t, x, self.psi[frame][i], self.psi_dot[frame][i]
                )?;
            }
        }
        Ok(())
    }

    /// Continuum-field view of the trajectory over the given spatial window
    /// (in field variables, i.e. charges divided by `sqrt(gamma_C)`).
    pub fn field_view(&self, x_lo: f64, x_hi: f64) -> TrajectoryField<'_> {
        TrajectoryField {
            traj: self,
            window: (x_lo, x_hi),
        }
    }

    /// Quadratic (three-point Lagrange) interpolation in both time and
    /// space of a stored per-cell quantity.
    fn interpolate(&self, data: &[Vec<f64>], t: f64, x: f64) -> f64 {
        let frame = self.bracket(t);
        let cell = self.cell_bracket(x);
        let mut in_time = [0.0; 3];
        for (j, slot) in in_time.iter_mut().enumerate() {
            let row = &data[frame + j];
            *slot = lagrange3(
                [
                    self.x_min + (cell as f64) * self.dx,
                    self.x_min + (cell as f64 + 1.0) * self.dx,
                    self.x_min + (cell as f64 + 2.0) * self.dx,
                ],
                [row[cell], row[cell + 1], row[cell + 2]],
                x,
            );
        }
        lagrange3(
            [
                self.times[frame],
                self.times[frame + 1],
                self.times[frame + 2],
            ],
            in_time,
            t,
        )
    }

    fn bracket(&self, t: f64) -> usize {
        let last = self.times.len().saturating_sub(3);
        let mut idx = self
            .times
            .partition_point(|&ti| ti <= t)
            .saturating_sub(1);
        // center the 3-point stencil when possible
        idx = idx.saturating_sub(1);
        idx.min(last)
    }

    fn cell_bracket(&self, x: f64) -> usize {
        let i = ((x - self.x_min) / self.dx).floor() as isize - 1;
        i.clamp(0, self.n as isize - 3) as usize
    }
}

fn lagrange3(xs: [f64; 3], ys: [f64; 3], x: f64) -> f64 {
    let l0 = (x - xs[1]) * (x - xs[2]) / ((xs[0] - xs[1]) * (xs[0] - xs[2]));
    let l1 = (x - xs[0]) * (x - xs[2]) / ((xs[1] - xs[0]) * (xs[1] - xs[2]));
    let l2 = (x - xs[0]) * (x - xs[1]) / ((xs[2] - xs[0]) * (xs[2] - xs[1]));
    ys[0] * l0 + ys[1] * l1 + ys[2] * l2
}

/// [`FieldSampler`] backed by a recorded trajectory. Valid for `(t, x)`
/// inside the recorded time range and the declared window.
pub struct TrajectoryField<'a> {
    traj: &'a LatticeTrajectory,
    window: (f64, f64),
}

impl FieldSampler for TrajectoryField<'_> {
    fn sample(&self, t: f64, x: f64) -> FieldSample {
        let traj = self.traj;
        let value = traj.interpolate(&traj.psi, t, x) / traj.charge_scale;
        let d_t = traj.interpolate(&traj.psi_dot, t, x) / traj.charge_scale;
        // spatial derivative from the interpolant's own central difference
        let h = traj.dx;
        let d_x = (traj.interpolate(&traj.psi, t, x + h) - traj.interpolate(&traj.psi, t, x - h))
            / (2.0 * h)
            / traj.charge_scale;
        FieldSample { value, d_t, d_x }
    }

    fn support(&self, _t: f64) -> (f64, f64) {
        self.window
    }
}
