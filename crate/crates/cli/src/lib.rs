//! Command-line front end: single cycles, parameter sweeps, stroke traces
//! and oracle validation, all written as CSV.
//!
//! Exit codes: 0 success, 1 validation or oracle failure, 2 usage error.

pub mod args;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{CommandFactory, Parser};
use larmor_otto::cycle::SweepGrid;
use larmor_otto::ensemble::{run_ensemble, EnsembleConfig, DEFAULT_DRAWS, DEFAULT_SEED};
use larmor_otto::thermo::{adiabaticity_bound, stroke_ledger, DEFAULT_TRACE_SAMPLES};
use larmor_otto::units::GHZ;
use larmor_otto::{run_cycle, sweep, Bath, Error, LambdaBinding, Params, Units};

use args::{Binding, Cli, Command, CycleArgs, PhysArgs, Stage, StrokeArgs, SweepArgs, UnitsMode, ValidateArgs};
use config::ConfigFile;
use output::{cycle_fields, num, CsvDoc, CYCLE_COLUMNS};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or config; exit 2.
    Usage(String),
    /// A required flag is absent; exit 2 with the subcommand's usage.
    Missing { flag: &'static str, command: &'static str },
    /// Physics validation, oracle or I/O failure; exit 1.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Missing { .. } => 2,
            Self::Failure(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::Failure(e.to_string())
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Validation(_) => "validation",
        Error::Integrator { .. } => "integrator",
        Error::Quadrature(_) => "quadrature",
        Error::Invariant(_) => "invariant",
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    match dispatch(&cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = match &e {
                CliError::Usage(msg) => writeln!(stderr, "error: usage: {msg}"),
                CliError::Missing { flag, command } => {
                    writeln!(
                        stderr,
                        "error: usage: missing required flag {flag}\n\n{}",
                        usage(command)
                    )
                }
                CliError::Failure(msg) => writeln!(stderr, "error: {msg}"),
            };
            e.exit_code()
        }
    }
}

fn usage(command: &str) -> String {
    let mut cmd = Cli::command();
    cmd.build();
    cmd.find_subcommand_mut(command)
        .map(|c| c.render_usage().to_string())
        .unwrap_or_default()
}

fn dispatch(command: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Cycle(a) => cmd_cycle(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout, stderr),
        Command::Stroke(a) => cmd_stroke(a, stdout),
        Command::Validate(a) => cmd_validate(a, stdout, stderr),
    }
}

/// Physical parameters after merging flags, config and defaults.
#[derive(Debug, Clone)]
struct Resolved {
    params: Params,
    /// rad/s per CLI frequency unit.
    freq_scale: f64,
    mode: UnitsMode,
    lambda: Option<f64>,
}

impl Resolved {
    fn echo(&self) -> String {
        let p = &self.params;
        let binding = match p.binding {
            LambdaBinding::Stage => "stage",
            LambdaBinding::Swapped => "swapped",
        };
        let lambda = self.lambda.map_or("unset".to_string(), |l| l.to_string());
        format!(
            "omega1_ghz={} omega2_ghz={} omega_ghz={} alpha_rad={} th_k={} tc_k={} lambda={lambda} lambda_binding={binding}",
            p.omega1 / self.freq_scale,
            p.omega2 / self.freq_scale,
            p.omega / self.freq_scale,
            p.alpha,
            p.hot.temperature,
            p.cold.temperature,
        )
    }

    fn units_line(&self) -> &'static str {
        match self.mode {
            UnitsMode::Si => "si (frequency GHz = 1e9 rad/s, angle rad, temperature K, time s, energy J, entropy J/K)",
            UnitsMode::Natural => "natural (hbar = k_B = 1, frequency flags unscaled)",
        }
    }
}

fn resolve(phys: &PhysArgs, cfg: &ConfigFile) -> Result<Resolved, CliError> {
    let mode = cfg.pick_enum(phys.units, "units")?.unwrap_or(UnitsMode::Si);
    let (units, freq_scale) = match mode {
        UnitsMode::Si => (Units::si(), GHZ),
        UnitsMode::Natural => (Units::natural(), 1.0),
    };
    let f = |flag, key, default: f64| -> Result<f64, CliError> { Ok(cfg.pick(flag, key)?.unwrap_or(default)) };
    let omega1 = f(phys.omega1_ghz, "omega1_ghz", 6.0)?;
    let omega2 = f(phys.omega2_ghz, "omega2_ghz", 1.0)?;
    let omega = f(phys.omega_ghz, "omega_ghz", -6.0)?;
    let alpha = f(phys.alpha_rad, "alpha_rad", std::f64::consts::FRAC_PI_4)?;
    let th = f(phys.th_k, "th_k", 1.0)?;
    let tc = f(phys.tc_k, "tc_k", 0.1)?;
    let lambda = cfg.pick(phys.lambda, "lambda")?;
    let binding = match cfg.pick_enum(phys.lambda_binding, "lambda_binding")? {
        Some(Binding::Swapped) => LambdaBinding::Swapped,
        _ => LambdaBinding::Stage,
    };
    let params = Params {
        omega1: omega1 * freq_scale,
        omega2: omega2 * freq_scale,
        alpha,
        omega: omega * freq_scale,
        lambda: lambda.unwrap_or(0.0),
        hot: Bath::with_units(th, units)?,
        cold: Bath::with_units(tc, units)?,
        binding,
        units,
    };
    Ok(Resolved {
        params,
        freq_scale,
        mode,
        lambda,
    })
}

fn emit(doc: CsvDoc, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let bytes = doc.finish()?;
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Failure(format!("io: cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(&bytes)
            .map_err(|e| CliError::Failure(format!("io: {e}"))),
    }
}

fn out_path(flag: &Option<std::path::PathBuf>, cfg: &ConfigFile) -> Result<Option<std::path::PathBuf>, CliError> {
    cfg.pick(flag.clone(), "out")
}

fn cmd_cycle(a: &CycleArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = ConfigFile::load(a.io.config.as_deref())?;
    let r = resolve(&a.phys, &cfg)?;
    if r.lambda.is_none() {
        return Err(CliError::Missing {
            flag: "--lambda",
            command: "cycle",
        });
    }
    let report = run_cycle(&r.params)?;
    let mut doc = CsvDoc::new();
    doc.comment(&format!("larmor-otto {} cycle", env!("CARGO_PKG_VERSION")));
    doc.comment(&format!("units: {}", r.units_line()));
    doc.comment(&format!("params: {}", r.echo()));
    doc.header(&CYCLE_COLUMNS)?;
    doc.row(cycle_fields(&r.params, r.freq_scale, &report))?;
    emit(doc, out_path(&a.io.out, &cfg)?.as_deref(), stdout)?;
    Ok(0)
}

/// `start:stop:count`, endpoints exact.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("grid '{text}' must be start:stop:count"));
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, n] = parts.as_slice() else { return Err(bad()) };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    Ok(match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    b
                } else {
                    a + (b - a) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    })
}

pub fn parse_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| CliError::Usage(format!("list entry '{s}' is not a number")))
        })
        .collect()
}

fn cmd_sweep(a: &SweepArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = ConfigFile::load(a.io.config.as_deref())?;
    let r = resolve(&a.phys, &cfg)?;
    let lambda_grid: Option<String> = cfg.pick(a.lambda_grid.clone(), "lambda_grid")?;
    let omega_grid: Option<String> = cfg.pick(a.omega_grid.clone(), "omega_grid")?;
    let alpha_list: Option<String> = cfg.pick(a.alpha_list.clone(), "alpha_list")?;
    if lambda_grid.is_none() && omega_grid.is_none() && alpha_list.is_none() {
        return Err(CliError::Usage(
            "sweep needs at least one of --lambda-grid, --omega-grid, --alpha-list".into(),
        ));
    }
    let lambdas = match &lambda_grid {
        Some(g) => parse_grid(g)?,
        None => vec![r.lambda.ok_or(CliError::Missing {
            flag: "--lambda",
            command: "sweep",
        })?],
    };
    let omegas = match &omega_grid {
        Some(g) => parse_grid(g)?.into_iter().map(|w| w * r.freq_scale).collect(),
        None => vec![r.params.omega],
    };
    let alphas = match &alpha_list {
        Some(l) => parse_list(l)?,
        None => vec![r.params.alpha],
    };
    let jobs = cfg.pick(a.jobs, "jobs")?;
    let seed = cfg.pick(a.seed, "seed")?.unwrap_or(DEFAULT_SEED);
    let grid = SweepGrid {
        base: r.params,
        alphas,
        omegas,
        lambdas,
    };
    let points = sweep(&grid, jobs)?;

    let mut doc = CsvDoc::new();
    doc.comment(&format!("larmor-otto {} sweep", env!("CARGO_PKG_VERSION")));
    doc.comment(&format!("seed: {seed}"));
    doc.comment(&format!("units: {}", r.units_line()));
    doc.comment(&format!("params: {}", r.echo()));
    doc.comment(&format!(
        "grid: lambda={} omega_ghz={} alpha_rad={} (rows: alpha slowest, lambda fastest)",
        lambda_grid.as_deref().unwrap_or("fixed"),
        omega_grid.as_deref().unwrap_or("fixed"),
        alpha_list.as_deref().unwrap_or("fixed"),
    ));
    let mut header = CYCLE_COLUMNS.to_vec();
    header.push("status");
    doc.header(&header)?;
    let mut failed = 0usize;
    for pt in &points {
        let mut fields = match &pt.outcome {
            Ok(rep) => cycle_fields(&pt.params, r.freq_scale, rep),
            Err(_) => {
                let mut f = vec![
                    num(pt.params.lambda),
                    num(pt.params.omega / r.freq_scale),
                    num(pt.params.alpha),
                ];
                f.resize(CYCLE_COLUMNS.len(), "NA".to_string());
                f
            }
        };
        fields.push(match &pt.outcome {
            Ok(_) => "ok".to_string(),
            Err(e) => {
                failed += 1;
                format!("error:{}", error_kind(e))
            }
        });
        doc.row(fields)?;
    }
    emit(doc, out_path(&a.io.out, &cfg)?.as_deref(), stdout)?;
    if failed > 0 {
        let _ = writeln!(stderr, "warning: {failed} of {} grid points failed", points.len());
    }
    Ok(0)
}

fn cmd_stroke(a: &StrokeArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = ConfigFile::load(a.io.config.as_deref())?;
    let r = resolve(&a.phys, &cfg)?;
    if r.lambda.is_none() {
        return Err(CliError::Missing {
            flag: "--lambda",
            command: "stroke",
        });
    }
    let stage = cfg.pick_enum(a.stage, "stage")?.unwrap_or(Stage::Compression);
    let samples = cfg.pick(a.samples, "samples")?.unwrap_or(DEFAULT_TRACE_SAMPLES);
    r.params.validate()?;
    let (p1, p3) = r.params.strokes()?;
    let (p, bath, omega_start, name) = match stage {
        Stage::Compression => (p1, r.params.hot, r.params.omega1, "compression"),
        Stage::Expansion => (p3, r.params.cold, r.params.omega2, "expansion"),
    };
    let ledger = stroke_ledger(&p, &bath, omega_start, samples)?;
    let w = &ledger.work;

    let mut doc = CsvDoc::new();
    doc.comment(&format!("larmor-otto {} stroke", env!("CARGO_PKG_VERSION")));
    doc.comment(&format!("units: {}", r.units_line()));
    doc.comment(&format!("params: {}", r.echo()));
    doc.comment(&format!(
        "stage: {name} tau={} w_coherence={} w_sudden={} switch_on={} switch_off={} adiabaticity_bound={}",
        num(p.duration),
        num(w.w_coherence),
        num(w.w_sudden),
        num(w.switch_on),
        num(w.switch_off),
        num(adiabaticity_bound(&p)),
    ));
    doc.header(&[
        "t",
        "q_dot_diag",
        "coherence_term",
        "w_dot",
        "w_l_cumulative",
        "adiabaticity_residual",
    ])?;
    for s in &ledger.trace {
        let pw = &s.power;
        doc.row(vec![
            num(pw.at_time),
            num(pw.q_dot_diag),
            num(pw.coherence_term),
            num(pw.w_dot),
            num(s.w_coherence),
            num(pw.q_dot),
        ])?;
    }
    emit(doc, out_path(&a.io.out, &cfg)?.as_deref(), stdout)?;
    Ok(0)
}

fn cmd_validate(a: &ValidateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = ConfigFile::load(a.io.config.as_deref())?;
    let ens = EnsembleConfig {
        seed: cfg.pick(a.seed, "seed")?.unwrap_or(DEFAULT_SEED),
        draws: cfg.pick(a.draws, "draws")?.unwrap_or(DEFAULT_DRAWS),
        inject_error: a.inject_error,
        jobs: cfg.pick(a.jobs, "jobs")?,
    };
    let rows = run_ensemble(&ens)?;

    let mut doc = CsvDoc::new();
    doc.comment(&format!("larmor-otto {} validate", env!("CARGO_PKG_VERSION")));
    doc.comment(&format!(
        "seed: {} draws: {} inject_error: {}",
        ens.seed, ens.draws, ens.inject_error
    ));
    doc.comment("units: si (frequency GHz = 1e9 rad/s, angle rad); observed and bound are normalized errors");
    doc.header(&[
        "check",
        "case",
        "alpha_rad",
        "lambda",
        "omega_ghz",
        "observed",
        "bound",
        "pass",
    ])?;
    let mut failures = 0usize;
    for row in &rows {
        let fields = vec![
            row.check.to_string(),
            row.draw.case.to_string(),
            num(row.draw.alpha),
            num(row.draw.lambda),
            num(row.draw.omega / GHZ),
            num(row.observed),
            num(row.bound),
            row.pass.to_string(),
        ];
        if !row.pass {
            failures += 1;
            let _ = writeln!(
                stderr,
                "FAIL {} case={} alpha_rad={} lambda={} omega_ghz={} observed={} bound={}",
                row.check,
                row.draw.case,
                row.draw.alpha,
                row.draw.lambda,
                row.draw.omega / GHZ,
                row.observed,
                row.bound
            );
        }
        doc.row(fields)?;
    }
    emit(doc, out_path(&a.io.out, &cfg)?.as_deref(), stdout)?;
    if failures > 0 {
        let _ = writeln!(stderr, "error: oracle: {failures} of {} checks failed", rows.len());
        return Ok(1);
    }
    Ok(0)
}
