//! Seeded random-parameter validation of every closed form against its
//! oracle. Drives the `validate` subcommand and the acceptance suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cycle::{run_cycle, with_jobs, CycleParams, CLOSURE_TOL};
use crate::dynamics::FieldProtocol;
use crate::error::Result;
use crate::oracle::{integrate_lvn, quad_coherence_work, IntegratorConfig};
use crate::state::{evolve_stroke, BathSpec, StrokeTrajectory};
use crate::thermo::{
    adiabaticity_bound, coherence_power_amplitude, coherence_power_thermal, coherence_work, power_split, stroke_work,
    DEFAULT_TRACE_SAMPLES,
};
use crate::units::{GHZ, HBAR};

pub const DEFAULT_SEED: u64 = 1729;
pub const DEFAULT_DRAWS: usize = 100;

pub const FIRST_LAW_TOL: f64 = 1e-10;
pub const QUADRATURE_TOL: f64 = 1e-8;
pub const CLOSED_FORM_RATE_TOL: f64 = 1e-8;
pub const PROPAGATOR_TOL: f64 = 1e-6;

/// Relative error planted in the closed-form W_L by the negative control.
pub const INJECTED_ERROR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleConfig {
    pub seed: u64,
    pub draws: usize,
    pub inject_error: bool,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            draws: DEFAULT_DRAWS,
            inject_error: false,
            jobs: None,
        }
    }
}

/// One random draw: α ∈ (0, π/2], λ ∈ (0, 2], ω ∈ [−20, 20] GHz around the
/// standard frequencies and baths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Draw {
    pub case: usize,
    pub alpha: f64,
    pub lambda: f64,
    pub omega: f64,
}

impl Draw {
    pub fn params(&self) -> CycleParams<f64> {
        CycleParams::standard()
            .with_alpha(self.alpha)
            .with_lambda(self.lambda)
            .with_omega(self.omega)
    }
}

pub fn draws(seed: u64, n: usize) -> Vec<Draw> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|case| {
            // gen::<f64>() lies in [0, 1); 1 − u lies in (0, 1].
            let alpha = std::f64::consts::FRAC_PI_2 * (1.0 - rng.gen::<f64>());
            let lambda = 2.0 * (1.0 - rng.gen::<f64>());
            let omega = rng.gen_range(-20.0..=20.0) * GHZ;
            Draw {
                case,
                alpha,
                lambda,
                omega,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub check: &'static str,
    pub draw: Draw,
    /// Normalized error; passes when `observed < bound`.
    pub observed: f64,
    pub bound: f64,
    pub pass: bool,
}

impl CheckRow {
    fn new(check: &'static str, draw: Draw, observed: f64, bound: f64) -> Self {
        Self {
            check,
            draw,
            observed,
            bound,
            pass: observed < bound,
        }
    }
}

/// The drive, its starting bath, starting frequency and stage name.
type StrokeInput = (FieldProtocol<f64>, BathSpec<f64>, f64, &'static str);

fn strokes(cp: &CycleParams<f64>) -> Result<[StrokeInput; 2]> {
    let (p1, p3) = cp.strokes()?;
    Ok([
        (p1, cp.hot, cp.omega1, "compression"),
        (p3, cp.cold, cp.omega2, "expansion"),
    ])
}

fn check_draw(draw: Draw, inject_error: bool) -> Result<Vec<CheckRow>> {
    let cp = draw.params();
    let mut rows = Vec::new();

    let report = run_cycle(&cp)?;
    let closure = report.compression.w_total + report.expansion.w_total + report.q_h + report.q_c;
    let scale = [
        report.compression.w_total,
        report.expansion.w_total,
        report.q_h,
        report.q_c,
    ]
    .iter()
    .fold(0.0f64, |m, x| m.max(x.abs()));
    rows.push(CheckRow::new("cycle_closure", draw, closure.abs() / scale, CLOSURE_TOL));

    for (p, bath, omega_start, stage) in strokes(&cp)? {
        let sw = stroke_work(&p, &bath, omega_start)?;
        let err = (sw.delta_u - (sw.w_coherence + sw.w_sudden)).abs() / sw.delta_u.abs().max(HBAR * cp.omega1);
        rows.push(CheckRow::new(first_law_name(stage), draw, err, FIRST_LAW_TOL));

        let factor = if inject_error { 1.0 + INJECTED_ERROR } else { 1.0 };
        let closed = coherence_work(&p, omega_start, &bath, p.duration) * factor;
        let quad = quad_coherence_work(&p, &bath, omega_start, p.duration)?;
        let wl_scale = closed.abs().max(work_amplitude(&p, omega_start, &bath));
        rows.push(CheckRow::new(
            quadrature_name(stage),
            draw,
            (quad - closed).abs() / wl_scale,
            QUADRATURE_TOL,
        ));

        let traj = StrokeTrajectory::new(p, sw.initial_state);
        let bound = adiabaticity_bound(&p);
        let amp = coherence_power_amplitude(&p, omega_start, &bath);
        let (mut worst_residual, mut worst_coh) = (0.0f64, 0.0f64);
        for k in 0..DEFAULT_TRACE_SAMPLES {
            let t = p.duration * k as f64 / (DEFAULT_TRACE_SAMPLES - 1) as f64;
            let split = power_split(&traj, t);
            let closed_rate = coherence_power_thermal(&p, omega_start, &bath, t);
            worst_residual = worst_residual.max(split.q_dot.abs() / bound);
            if amp > 0.0 {
                worst_coh = worst_coh.max((split.coherence_term - closed_rate).abs() / amp);
            }
        }
        rows.push(CheckRow::new(residual_name(stage), draw, worst_residual, 1.0));
        rows.push(CheckRow::new(
            coherence_rate_name(stage),
            draw,
            worst_coh,
            CLOSED_FORM_RATE_TOL,
        ));

        let horizon = p.duration.min(4.0 * std::f64::consts::PI / p.rabi_omega());
        let rk = integrate_lvn(&p, &sw.initial_state, horizon, &IntegratorConfig::default())?;
        let exact = evolve_stroke(&p, &sw.initial_state, horizon);
        rows.push(CheckRow::new(
            propagator_name(stage),
            draw,
            rk.trace_distance(&exact),
            PROPAGATOR_TOL,
        ));
    }
    Ok(rows)
}

/// Largest |W_L| over a stroke, ħ|ω| ω_j² sin²α tanh(·)/Ω².
fn work_amplitude(p: &FieldProtocol<f64>, omega_start: f64, bath: &BathSpec<f64>) -> f64 {
    // coherence_power_amplitude = |prefactor|/(2Ω); W_L peaks at |prefactor|/Ω².
    2.0 * coherence_power_amplitude(p, omega_start, bath) / p.rabi_omega()
}

macro_rules! stage_names {
    ($($f:ident => $c:literal, $e:literal;)*) => {
        $(fn $f(stage: &str) -> &'static str {
            if stage == "compression" { $c } else { $e }
        })*
    };
}

stage_names! {
    first_law_name => "first_law_compression", "first_law_expansion";
    quadrature_name => "wl_quadrature_compression", "wl_quadrature_expansion";
    residual_name => "adiabaticity_compression", "adiabaticity_expansion";
    coherence_rate_name => "coherence_rate_compression", "coherence_rate_expansion";
    propagator_name => "propagator_rk4_compression", "propagator_rk4_expansion";
}

/// Runs every check on every draw. Draws that fail to evaluate at all
/// yield an `evaluation` row with `pass = false`.
pub fn run_ensemble(cfg: &EnsembleConfig) -> Result<Vec<CheckRow>> {
    let draws = draws(cfg.seed, cfg.draws);
    let rows = with_jobs(cfg.jobs, || {
        draws
            .into_par_iter()
            .map(|d| match check_draw(d, cfg.inject_error) {
                Ok(rows) => rows,
                Err(_) => vec![CheckRow {
                    check: "evaluation",
                    draw: d,
                    observed: f64::NAN,
                    bound: 0.0,
                    pass: false,
                }],
            })
            .collect::<Vec<_>>()
    })?;
    Ok(rows.into_iter().flatten().collect())
}
