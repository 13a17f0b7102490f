//! Brute-force reference computations that share no code path with the
//! closed forms they check: RK4 on the Liouville-von Neumann equation,
//! adaptive Simpson quadrature, finite-difference population rates and a
//! scaling-and-squaring matrix exponential.

use num_complex::Complex;

use crate::algebra::{cr, ComplexMat2};
use crate::dynamics::{eigenframe, hamiltonian, propagator_lab, FieldProtocol};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::{thermal_state, BathSpec, DensityMatrix, StrokeTrajectory};
use crate::thermo::coherence_power;

pub const DEFAULT_STEPS_PER_RABI_PERIOD: usize = 2000;
pub const MIN_STEPS_PER_RABI_PERIOD: usize = 100;
pub const DEFAULT_TRACE_DRIFT: f64 = 1e-10;
pub const DEFAULT_QUAD_REL_TOL: f64 = 1e-10;
const MAX_SIMPSON_DEPTH: u32 = 48;

/// Fixed-step classic RK4 settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig<T> {
    /// Steps per period of the fastest rate max(Ω_j, |ω|, ω_j); ignored when
    /// `step` is set.
    pub steps_per_rabi_period: usize,
    /// Explicit step size, s.
    pub step: Option<T>,
    /// Largest tolerated |Tr ρ − 1| before the run is rejected.
    pub max_trace_drift: T,
}

impl<T: Real> Default for IntegratorConfig<T> {
    fn default() -> Self {
        Self {
            steps_per_rabi_period: DEFAULT_STEPS_PER_RABI_PERIOD,
            step: None,
            max_trace_drift: T::lit(DEFAULT_TRACE_DRIFT),
        }
    }
}

impl<T: Real> IntegratorConfig<T> {
    pub fn with_steps_per_period(steps: usize) -> Self {
        Self {
            steps_per_rabi_period: steps,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(h) = self.step {
            if !(h > T::zero()) || !h.is_finite() {
                return Err(Error::Validation(format!("integrator step must be > 0, got {h}")));
            }
        } else if self.steps_per_rabi_period < MIN_STEPS_PER_RABI_PERIOD {
            return Err(Error::Validation(format!(
                "steps_per_rabi_period must be >= {MIN_STEPS_PER_RABI_PERIOD}, got {}",
                self.steps_per_rabi_period
            )));
        }
        Ok(())
    }

    fn target_step(&self, p: &FieldProtocol<T>) -> T {
        self.step
            .unwrap_or_else(|| T::TAU() / (p.fastest_rate() * T::from_usize(self.steps_per_rabi_period).unwrap()))
    }
}

/// −i[H(t)/ħ, ρ]
fn lvn_rhs<T: Real>(p: &FieldProtocol<T>, t: T, rho: &ComplexMat2<T>) -> ComplexMat2<T> {
    let gen = hamiltonian(p, t).scale(T::one() / p.units.hbar);
    gen.commutator(rho).scale_c(Complex::new(T::zero(), -T::one()))
}

/// Integrates ρ̇ = −(i/ħ)[H(t), ρ] from 0 to `t` with classic RK4.
///
/// ρ is re-Hermitized after every step; the trace is monitored but never
/// renormalized.
pub fn integrate_lvn<T: Real>(
    p: &FieldProtocol<T>,
    rho0: &DensityMatrix<T>,
    t: T,
    cfg: &IntegratorConfig<T>,
) -> Result<DensityMatrix<T>> {
    cfg.validate()?;
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::Validation(format!("integration time must be >= 0, got {t}")));
    }
    let steps = (t / cfg.target_step(p)).ceil().to_usize().unwrap_or(0).max(1);
    let h = t / T::from_usize(steps).unwrap();
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    let mut rho = *rho0.mat();
    for n in 0..steps {
        let s = h * T::from_usize(n).unwrap();
        let k1 = lvn_rhs(p, s, &rho);
        let k2 = lvn_rhs(p, s + h * half, &(rho + k1.scale(h * half)));
        let k3 = lvn_rhs(p, s + h * half, &(rho + k2.scale(h * half)));
        let k4 = lvn_rhs(p, s + h, &(rho + k3.scale(h)));
        rho = rho + (k1 + k2.scale(T::lit(2.0)) + k3.scale(T::lit(2.0)) + k4).scale(h * sixth);
        rho = (rho + rho.adjoint()).scale(half);
    }
    let drift = (rho.trace() - cr(T::one())).norm();
    if drift > cfg.max_trace_drift {
        return Err(Error::Integrator {
            drift: drift.to_f64().unwrap_or(f64::NAN),
            limit: cfg.max_trace_drift.to_f64().unwrap_or(f64::NAN),
            steps,
        });
    }
    DensityMatrix::with_tolerance(rho, T::lit(1e3) * T::structural_tol())
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
///
/// The interval is first cut into `panels` equal pieces; the absolute
/// target is `rel_tol · ∫|f|` (coarse estimate), shared out by width.
pub fn adaptive_simpson<T: Real>(f: impl Fn(T) -> T, a: T, b: T, rel_tol: T, panels: usize) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    let panels = panels.max(1);
    let width = (b - a) / T::from_usize(panels).unwrap();
    let nodes: Vec<T> = (0..=2 * panels)
        .map(|k| a + width * T::lit(0.5) * T::from_usize(k).unwrap())
        .collect();
    let values: Vec<T> = nodes.iter().map(|&x| f(x)).collect();
    let abs_scale = (0..panels)
        .map(|i| {
            simpson(
                width,
                values[2 * i].abs(),
                values[2 * i + 1].abs(),
                values[2 * i + 2].abs(),
            )
        })
        .fold(T::zero(), |acc, v| acc + v);
    let eps_total = rel_tol * abs_scale;
    if eps_total == T::zero() {
        // ∫|f| vanishes on the sampled nodes.
        return Ok(T::zero());
    }
    let eps_panel = eps_total / T::from_usize(panels).unwrap();
    let mut total = T::zero();
    for i in 0..panels {
        let (l, m, r) = (nodes[2 * i], nodes[2 * i + 1], nodes[2 * i + 2]);
        let (fl, fm, fr) = (values[2 * i], values[2 * i + 1], values[2 * i + 2]);
        let whole = simpson(r - l, fl, fm, fr);
        total = total + simpson_step(&f, l, m, r, fl, fm, fr, whole, eps_panel, MAX_SIMPSON_DEPTH)?;
    }
    Ok(total)
}

#[inline]
fn simpson<T: Real>(width: T, fl: T, fm: T, fr: T) -> T {
    width / T::lit(6.0) * (fl + T::lit(4.0) * fm + fr)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<T: Real>(
    f: &impl Fn(T) -> T,
    l: T,
    m: T,
    r: T,
    fl: T,
    fm: T,
    fr: T,
    whole: T,
    eps: T,
    depth: u32,
) -> Result<T> {
    let (lm, rm) = ((l + m) * T::lit(0.5), (m + r) * T::lit(0.5));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(m - l, fl, flm, fm);
    let right = simpson(r - m, fm, frm, fr);
    let delta = left + right - whole;
    if delta.abs() <= T::lit(15.0) * eps {
        return Ok(left + right + delta / T::lit(15.0));
    }
    if depth == 0 {
        return Err(Error::Quadrature(format!(
            "adaptive Simpson did not converge on [{l}, {r}] (residual {delta})"
        )));
    }
    let half = eps * T::lit(0.5);
    Ok(simpson_step(f, l, lm, m, fl, flm, fm, left, half, depth - 1)?
        + simpson_step(f, m, rm, r, fm, frm, fr, right, half, depth - 1)?)
}

/// W_L from quadrature of the coherence power along the exact trajectory
/// started in the Gibbs state of `(ħω_start/2)σz`.
pub fn quad_coherence_work<T: Real>(p: &FieldProtocol<T>, bath: &BathSpec<T>, omega_start: T, t: T) -> Result<T> {
    quad_coherence_work_with_tol(p, bath, omega_start, t, T::lit(DEFAULT_QUAD_REL_TOL))
}

pub fn quad_coherence_work_with_tol<T: Real>(
    p: &FieldProtocol<T>,
    bath: &BathSpec<T>,
    omega_start: T,
    t: T,
    rel_tol: T,
) -> Result<T> {
    let rho0 = thermal_state(omega_start, bath)?;
    let traj = StrokeTrajectory::new(*p, rho0);
    // Eight panels per Rabi half-period keeps the first Simpson estimate
    // from sampling only the zeros of sin(Ωt).
    let half_periods = (p.rabi_omega() * t / T::PI()).ceil().to_usize().unwrap_or(1);
    let panels = 8 * half_periods.max(1);
    adaptive_simpson(
        |s| coherence_power(p, &traj.state_at(s), s),
        T::zero(),
        t,
        rel_tol,
        panels,
    )
}

/// Σ_n E_n (ρ_nn(t+h) − ρ_nn(t−h)) / 2h in the instantaneous eigenbasis.
///
/// Only the traceless part ρ − I/2 is propagated, so rounding scales with
/// the polarization rather than with the O(1) populations.
pub fn fd_population_rate<T: Real>(traj: &StrokeTrajectory<T>, t: T, h: T) -> T {
    let p = &traj.protocol;
    let e = p.units.hbar * p.omega_j * T::lit(0.5);
    (polarization(traj, t + h) - polarization(traj, t - h)) * e / (T::lit(2.0) * h)
}

/// ρ₊₊ − ρ₋₋ at time `t`.
fn polarization<T: Real>(traj: &StrokeTrajectory<T>, t: T) -> T {
    let p = &traj.protocol;
    let u = propagator_lab(p, t);
    let traceless = *traj.initial.mat() - ComplexMat2::identity().scale(T::lit(0.5));
    let moved = u * traceless * u.adjoint();
    let f = eigenframe(p, t);
    moved.sandwich(&f.chi_plus, &f.chi_plus).re - moved.sandwich(&f.chi_minus, &f.chi_minus).re
}

/// Matrix exponential by scaling and squaring with a truncated Taylor
/// series.
pub fn expm<T: Real>(m: &ComplexMat2<T>) -> ComplexMat2<T> {
    let norm = m.frobenius_norm();
    let mut squarings = 0u32;
    let mut scale = T::one();
    while norm * scale > T::lit(0.5) {
        scale = scale * T::lit(0.5);
        squarings += 1;
    }
    let a = m.scale(scale);
    let mut term = ComplexMat2::identity();
    let mut sum = term;
    for k in 1..=30 {
        term = (term * a).scale(T::one() / T::from_usize(k).unwrap());
        sum = sum + term;
        if term.frobenius_norm() <= T::epsilon() * T::lit(1e-3) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}
