use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use vacline::analytic;
use vacline::lattice::{run_transmission_experiment, TransmissionConfig};
use vacline::model::{Model, RawConfig};
use vacline_cli::runner::{
    self, Axis, ResultRow, Scenario, SigmaPeakReport, SweepPlan, CSV_HEADER,
};
use vacline_cli::{checks, svg, CliError};

/// Desk-scale solver for a driven LC transmission line: closed forms,
/// quadrature cross-checks, and time-domain lattice runs.
#[derive(Parser)]
#[command(name = "vacline", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate all derived quantities at a single parameter point.
    Eval(EvalArgs),
    /// Sweep one parameter, writing a CSV table and optional SVG curve.
    Sweep(SweepArgs),
    /// Convergence ladder of the lattice transmitted amplitude.
    Converge(ConvergeArgs),
    /// Run the full reproduction suite, one pass/fail line per criterion.
    Reproduce(ReproduceArgs),
}

/// Model parameters; flags override file values one key at a time.
#[derive(Args, Clone)]
struct ConfigArgs {
    /// Configuration file: `key = value` lines or a JSON document.
    #[arg(long, global = false)]
    config: Option<PathBuf>,
    #[arg(long)]
    gamma_l: Option<f64>,
    #[arg(long)]
    gamma_c: Option<f64>,
    #[arg(long)]
    omega_e: Option<f64>,
    #[arg(long)]
    phi_re: Option<f64>,
    #[arg(long)]
    phi_im: Option<f64>,
    #[arg(long)]
    ell: Option<f64>,
    #[arg(long)]
    e0: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    /// Unit convention of the inputs: natural or si.
    #[arg(long)]
    units: Option<String>,
}

impl ConfigArgs {
    fn load(&self) -> Result<Model, CliError> {
        let mut raw = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    CliError::Config(format!("cannot read {}: {e}", path.display()))
                })?;
                RawConfig::parse(&text).map_err(|e| CliError::Config(e.to_string()))?
            }
            None => RawConfig::default(),
        };
        let overrides = RawConfig {
            gamma_l: self.gamma_l,
            gamma_c: self.gamma_c,
            omega_e: self.omega_e,
            phi_re: self.phi_re,
            phi_im: self.phi_im,
            ell: self.ell,
            e0: self.e0,
            sigma: self.sigma,
            units: self.units.clone(),
        };
        raw = raw.merge(&overrides);
        raw.validate().map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Which routes to evaluate: analytic, quadrature, lattice, or all.
    #[arg(long, default_value = "quadrature")]
    scenario: String,
    /// Cell spacing for the lattice route.
    #[arg(long, default_value_t = 0.02)]
    dx: f64,
    /// Also write the row as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Parameter to sweep: sigma, omega_e, ell, E0, or dx.
    #[arg(long)]
    axis: String,
    #[arg(long)]
    min: f64,
    #[arg(long)]
    max: f64,
    #[arg(long, default_value_t = 50)]
    points: usize,
    /// Which routes to evaluate per row.
    #[arg(long, default_value = "analytic")]
    scenario: String,
    /// Worker threads for row evaluation.
    #[arg(long)]
    jobs: Option<usize>,
    /// Cell spacing for lattice rows (when axis is not dx).
    #[arg(long, default_value_t = 0.02)]
    dx: f64,
    /// Write the table here instead of standard output.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Render the analytic-variance curve.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Mirror the rows as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergeArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Comma-separated dx ladder, each rung halving the last.
    #[arg(long, default_value = "0.04,0.02,0.01")]
    dx: String,
    /// Courant ratio c dt / dx for every rung.
    #[arg(long, default_value_t = 0.4)]
    courant: f64,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Exit nonzero if any criterion fails.
    #[arg(long)]
    check: bool,
}

fn quad_tol_from_env() -> Result<Option<f64>, CliError> {
    match std::env::var("VACLINE_TOL") {
        Ok(text) => {
            let tol: f64 = text.parse().map_err(|_| {
                CliError::Config(format!("VACLINE_TOL must be a number, got `{text}`"))
            })?;
            if !(tol > 0.0 && tol < 1.0) {
                return Err(CliError::Config(format!(
                    "VACLINE_TOL must be in (0, 1), got {tol}"
                )));
            }
            Ok(Some(tol))
        }
        Err(_) => Ok(None),
    }
}

fn print_row(row: &ResultRow) {
    let line = |name: &str, value: String, provenance: &str| {
        println!("{name:<22} {value:<24} {provenance}");
    };
    line("quantity", "value".into(), "provenance");
    line("H_c", row.h_c.to_string(), "analytic");
    line("P_c", row.p_c.to_string(), "analytic");
    line("alpha", row.alpha.to_string(), "analytic");
    line("variance_shift", row.var_analytic.to_string(), "analytic");
    if let Some(q) = row.var_quadrature {
        line("variance_shift", q.to_string(), "quadrature");
    }
    if let Some(a) = row.lattice_amp {
        line("transmitted_amp", format!("{}{:+}i", a.re, a.im), "lattice");
    }
    if let Some(e) = row.lattice_rel_err {
        line("transmitted_err", format!("{e:.3e}"), "lattice vs analytic");
    }
    if let Some(d) = row.discrepancy {
        line(
            "discrepancy",
            format!("{d:.3e}"),
            "|analytic - quadrature| / analytic",
        );
    }
}

fn cmd_eval(args: EvalArgs) -> Result<(), CliError> {
    let model = args.config.load()?;
    let scenario: Scenario = args.scenario.parse()?;
    let quad_tol = quad_tol_from_env()?;
    let row = runner::evaluate_single(&model, scenario, quad_tol, args.dx)?;
    print_row(&row);
    if let Some(path) = args.json {
        fs::write(path, serde_json::to_string_pretty(&row.to_json()).unwrap())?;
    }
    Ok(())
}

fn write_sigma_report<W: Write>(mut out: W, report: &SigmaPeakReport) -> std::io::Result<()> {
    writeln!(
        out,
        "sigma argmax = {} (closed form {}, offset {:+.3e}, grid step {:.3e})",
        report.argmax, report.closed_form, report.offset, report.grid_step
    )
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let model = args.config.load()?;
    let axis: Axis = args.axis.parse()?;
    let scenario: Scenario = args.scenario.parse()?;
    let quad_tol = quad_tol_from_env()?;
    let plan = SweepPlan::from_range(axis, args.min, args.max, args.points, scenario, args.dx)?;

    let (rows, failure) = runner::run_sweep(&model, &plan, quad_tol, args.jobs);

    // Flush whatever completed, then the error trailer if any.
    match &args.csv {
        Some(path) => {
            let file = fs::File::create(path)?;
            runner::write_csv(std::io::BufWriter::new(file), &rows, failure.as_ref())?;
        }
        None => {
            let stdout = std::io::stdout();
            runner::write_csv(stdout.lock(), &rows, failure.as_ref())?;
        }
    }

    if let Some(e) = failure {
        return Err(e);
    }

    if let Some(path) = &args.json {
        let mut doc = serde_json::json!({
            "rows": rows.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        });
        if let Some(report) = runner::sigma_peak_report(&model, &rows) {
            doc["sigma_peak"] = serde_json::json!({
                "argmax": report.argmax,
                "closed_form": report.closed_form,
                "offset": report.offset,
            });
        }
        fs::write(path, serde_json::to_string_pretty(&doc).unwrap())?;
    }

    if let Some(path) = &args.svg {
        let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.value, r.var_analytic)).collect();
        let file = fs::File::create(path)?;
        svg::render_curve(
            std::io::BufWriter::new(file),
            &svg::Curve {
                points: &points,
                x_label: axis.name(),
                y_label: "variance shift (natural units)",
                title: "mixed variance vs parameter",
            },
        )?;
    }

    if let Some(report) = runner::sigma_peak_report(&model, &rows) {
        write_sigma_report(std::io::stderr(), &report)?;
    }
    Ok(())
}

fn cmd_converge(args: ConvergeArgs) -> Result<(), CliError> {
    let model = args.config.load()?;
    let ladder: Vec<f64> = args
        .dx
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("bad dx value `{s}`")))
        })
        .collect::<Result<_, _>>()?;
    if ladder.len() < 3 {
        return Err(CliError::Config(
            "convergence ladder needs at least 3 rungs".into(),
        ));
    }
    for pair in ladder.windows(2) {
        let ratio = pair[0] / pair[1];
        if !(1.99..2.01).contains(&ratio) {
            return Err(CliError::Config(format!(
                "ladder rungs must halve: {} -> {} (ratio {ratio:.3})",
                pair[0], pair[1]
            )));
        }
    }
    // The CFL bound is checked before any stepping.
    if args.courant > 0.9 {
        return Err(CliError::Config(format!(
            "requested Courant ratio {} violates the CFL bound 0.9",
            args.courant
        )));
    }

    let expected = analytic::transmitted_coefficient(&model.mode, &model.circuit).g_amp;
    println!("dx,amp_re,amp_im,rel_err,fit_residual");
    let mut errors = Vec::new();
    for &dx in &ladder {
        let mut cfg = TransmissionConfig::with_dx(dx);
        cfg.grid_unit = ladder[0];
        cfg.courant = args.courant;
        let r = run_transmission_experiment(&model.circuit, &model.mode, Complex64::ONE, &cfg)
            .map_err(|e| CliError::Numerical(e.to_string()))?;
        let err = (r.amplitude - expected).norm() / expected.norm().max(1e-300);
        println!(
            "{dx},{},{},{err},{}",
            r.amplitude.re, r.amplitude.im, r.residual
        );
        errors.push(err);
    }

    let monotone = errors.windows(2).all(|w| w[0] > w[1]);
    if !monotone {
        println!("order: NOT CONVERGED (error ladder not monotone: {errors:?})");
        return Err(CliError::Numerical("error ladder not monotone".into()));
    }
    let orders: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let order = orders.iter().sum::<f64>() / orders.len() as f64;
    println!("order: {order:.3}");
    if !(1.8..=2.2).contains(&order) {
        println!("order: NOT CONVERGED (expected within [1.8, 2.2])");
        return Err(CliError::Numerical(format!(
            "observed order {order:.3} outside [1.8, 2.2]"
        )));
    }
    Ok(())
}

fn cmd_reproduce(args: ReproduceArgs) -> Result<(), CliError> {
    let quad_tol = quad_tol_from_env()?;
    let outcomes = checks::run_all(quad_tol);
    for outcome in &outcomes {
        println!("{}", outcome.line());
    }
    let failures = outcomes.iter().filter(|o| !o.passed).count();
    if failures > 0 && args.check {
        return Err(CliError::ChecksFailed(failures));
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Converge(args) => cmd_converge(args),
        Command::Reproduce(args) => cmd_reproduce(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

// keep the header constant referenced so the docs and binary stay in sync
#[allow(dead_code)]
const _: &str = CSV_HEADER;
