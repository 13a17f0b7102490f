//! First-law bookkeeping for a driven stroke.
//!
//! Heat and work rates split into a diagonal part (populations of the
//! instantaneous eigenbasis) and a coherence part
//! `Σ_{n≠m} ρ_nm ⟨m|∂H/∂t|n⟩`. The eigenvalues ±ħω_j/2 do not move during a
//! rotating-field stroke, so the work rate is the coherence part alone and
//! the heat rate `Σ ρ̇_nn E_n − coherence` vanishes.
//!
//! Sign convention: work is positive when done on the spin.

use num_complex::Complex;

use crate::dynamics::{dh_dt, eigenframe, hamiltonian, FieldProtocol};
use crate::error::{Error, Result};
use crate::oracle::fd_population_rate;
use crate::scalar::Real;
use crate::state::{evolve_stroke, instantaneous_elements, thermal_state, BathSpec, DensityMatrix, StrokeTrajectory};

/// Default number of trace samples per stroke.
pub const DEFAULT_TRACE_SAMPLES: usize = 401;

/// Relative size of the finite-difference step against the fastest of
/// Ω_j and |ω|.
pub const FD_STEP_FACTOR: f64 = 1e-4;

/// Bound on |Q̇| relative to ħω_j·max(Ω_j, |ω|).
pub const ADIABATICITY_TOL: f64 = 1e-6;

/// Heat and work rates at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit<T> {
    /// Σ ρ̇_nn E_n, from finite differences of the populations.
    pub q_dot_diag: T,
    /// Real part of Σ_{n≠m} ρ_nm ⟨m|∂H/∂t|n⟩.
    pub coherence_term: T,
    /// Imaginary part of the same sum; zero up to rounding.
    pub coherence_imag: T,
    pub q_dot: T,
    pub w_dot: T,
    pub at_time: T,
}

/// Σ_{n≠m} ρ_nm ⟨m|∂H/∂t|n⟩ as a complex number.
pub fn coherence_sum<T: Real>(p: &FieldProtocol<T>, rho: &DensityMatrix<T>, t: T) -> Complex<T> {
    let f = eigenframe(p, t);
    let el = instantaneous_elements(p, rho, t);
    let dh = dh_dt(p, t);
    el.rho_pm * dh.sandwich(&f.chi_minus, &f.chi_plus) + el.rho_mp() * dh.sandwich(&f.chi_plus, &f.chi_minus)
}

/// The coherence power, i.e. the work rate of the stroke.
pub fn coherence_power<T: Real>(p: &FieldProtocol<T>, rho: &DensityMatrix<T>, t: T) -> T {
    coherence_sum(p, rho, t).re
}

/// Closed form of [`coherence_power`] for a stroke started from the Gibbs
/// state of `(ħω_start/2)σz`:
/// `ħ ω ω_j² sin(Ω_j t) sin²α tanh(βħω_start/2) / (2Ω_j)`.
pub fn coherence_power_thermal<T: Real>(p: &FieldProtocol<T>, omega_start: T, bath: &BathSpec<T>, t: T) -> T {
    // sin(Ωt)/(2Ω) = cos(Ωt/2) · sin(Ωt/2)/Ω
    let cos_half = if p.is_degenerate() {
        T::one()
    } else {
        (p.rabi_omega() * t * T::lit(0.5)).cos()
    };
    thermal_prefactor(p, omega_start, bath) * cos_half * p.half_sinc(t)
}

/// ħ ω ω_j² sin²α tanh(βħω_start/2).
fn thermal_prefactor<T: Real>(p: &FieldProtocol<T>, omega_start: T, bath: &BathSpec<T>) -> T {
    let s = p.alpha.sin();
    p.units.hbar * p.omega * p.omega_j * p.omega_j * s * s * bath.half_energy_ratio(omega_start).tanh()
}

/// Peak magnitude of [`coherence_power_thermal`] over a stroke; the scale
/// for relative comparisons near its zeros.
pub fn coherence_power_amplitude<T: Real>(p: &FieldProtocol<T>, omega_start: T, bath: &BathSpec<T>) -> T {
    let peak = if p.is_degenerate() {
        p.duration
    } else {
        T::one() / p.rabi_omega()
    };
    (thermal_prefactor(p, omega_start, bath) * peak * T::lit(0.5)).abs()
}

/// Coherence work W_L accumulated from 0 to `t`:
/// `ħ ω ω_j² sin²(Ω_j t/2) sin²α tanh(βħω_start/2) / Ω_j²`.
pub fn coherence_work<T: Real>(p: &FieldProtocol<T>, omega_start: T, bath: &BathSpec<T>, t: T) -> T {
    let k = p.half_sinc(t);
    thermal_prefactor(p, omega_start, bath) * k * k
}

/// Work of the two instantaneous field switches bracketing a stroke:
/// `(on, off)` with
/// `on  = Tr[(H(ω_end, α, 0) − H(ω_start, 0, 0)) ρ_th]` and
/// `off = Tr[(H(ω_end, 0, t) − H(ω_end, α, t)) ρ*(t)]`.
pub fn sudden_switches<T: Real>(p: &FieldProtocol<T>, omega_start: T, bath: &BathSpec<T>, t: T) -> Result<(T, T)> {
    let rho_th = thermal_state(omega_start, bath)?;
    let start = start_protocol(p, omega_start);
    let rho_t = evolve_stroke(p, &rho_th, t);
    let on = rho_th.expectation(&(hamiltonian(p, T::zero()) - hamiltonian(&start, T::zero())));
    let off = rho_t.expectation(&(hamiltonian(&p.untilted(), t) - hamiltonian(p, t)));
    Ok((on, off))
}

/// Sudden-switch work W_S: the sum of both switches.
pub fn sudden_work<T: Real>(p: &FieldProtocol<T>, omega_start: T, bath: &BathSpec<T>, t: T) -> Result<T> {
    let (on, off) = sudden_switches(p, omega_start, bath, t)?;
    Ok(on + off)
}

fn start_protocol<T: Real>(p: &FieldProtocol<T>, omega_start: T) -> FieldProtocol<T> {
    let mut s = p.untilted();
    s.omega_j = omega_start;
    s
}

/// Central-difference step for population derivatives:
/// `1e-4 / max(Ω_j, |ω|)`, falling back to ω_j when both vanish.
pub fn fd_step<T: Real>(p: &FieldProtocol<T>) -> T {
    let rate = p.rabi_omega().max(p.omega.abs());
    let rate = if rate > T::zero() { rate } else { p.omega_j };
    T::lit(FD_STEP_FACTOR) / rate
}

/// Largest admissible |Q̇| during a stroke.
pub fn adiabaticity_bound<T: Real>(p: &FieldProtocol<T>) -> T {
    T::lit(ADIABATICITY_TOL) * p.units.hbar * p.omega_j * p.rabi_omega().max(p.omega.abs())
}

/// Heat and work rates along a trajectory at time `t`.
pub fn power_split<T: Real>(traj: &StrokeTrajectory<T>, t: T) -> PowerSplit<T> {
    let p = &traj.protocol;
    let q_dot_diag = fd_population_rate(traj, t, fd_step(p));
    let coh = coherence_sum(p, &traj.state_at(t), t);
    PowerSplit {
        q_dot_diag,
        coherence_term: coh.re,
        coherence_imag: coh.im,
        q_dot: q_dot_diag - coh.re,
        // Σ ρ_nn Ė_n vanishes: the eigenvalues are fixed.
        w_dot: coh.re,
        at_time: t,
    }
}

/// Q̇ = Σ ρ̇_nn E_n − Σ_{n≠m} ρ_nm ⟨m|∂H/∂t|n⟩, zero for unitary strokes up to
/// the finite-difference error.
pub fn adiabaticity_residual<T: Real>(traj: &StrokeTrajectory<T>, t: T) -> T {
    power_split(traj, t).q_dot
}

/// Energy accounting of one adiabatic stroke from a Gibbs state, without a
/// time-resolved trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrokeWork<T> {
    /// W_L.
    pub w_coherence: T,
    /// W_S = switch_on + switch_off.
    pub w_sudden: T,
    /// Boundary entry: work of the switch onto the tilted rotating field.
    pub switch_on: T,
    /// Boundary entry: work of the flip back to the z axis.
    pub switch_off: T,
    /// W = W_L + W_S.
    pub w_total: T,
    /// Heat during the driven interval: trace-based energy change minus W_L.
    pub q: T,
    /// Tr[H(ω_end,0) ρ*(τ)] − Tr[H(ω_start,0) ρ_th].
    pub delta_u: T,
    pub initial_state: DensityMatrix<T>,
    pub final_state: DensityMatrix<T>,
}

pub fn stroke_work<T: Real>(p: &FieldProtocol<T>, bath: &BathSpec<T>, omega_start: T) -> Result<StrokeWork<T>> {
    p.validate()?;
    let tau = p.duration;
    let rho_th = thermal_state(omega_start, bath)?;
    let rho_tau = evolve_stroke(p, &rho_th, tau);
    let start = start_protocol(p, omega_start);

    let e_start = rho_th.expectation(&hamiltonian(&start, T::zero()));
    let e_end = rho_tau.expectation(&hamiltonian(&p.untilted(), tau));
    let driven_gain = rho_tau.expectation(&hamiltonian(p, tau)) - rho_th.expectation(&hamiltonian(p, T::zero()));

    let w_coherence = coherence_work(p, omega_start, bath, tau);
    let (switch_on, switch_off) = sudden_switches(p, omega_start, bath, tau)?;
    let w_sudden = switch_on + switch_off;
    Ok(StrokeWork {
        w_coherence,
        w_sudden,
        switch_on,
        switch_off,
        w_total: w_coherence + w_sudden,
        q: driven_gain - w_coherence,
        delta_u: e_end - e_start,
        initial_state: rho_th,
        final_state: rho_tau,
    })
}

/// One row of a stroke's time-resolved trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrokeSample<T> {
    pub power: PowerSplit<T>,
    /// W_L accumulated from 0 to `power.at_time`.
    pub w_coherence: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrokeLedger<T> {
    pub work: StrokeWork<T>,
    /// Uniform samples over [0, τ]; the instantaneous switches are not
    /// covered and appear only as `work.switch_on` / `work.switch_off`.
    pub trace: Vec<StrokeSample<T>>,
}

pub fn stroke_ledger<T: Real>(
    p: &FieldProtocol<T>,
    bath: &BathSpec<T>,
    omega_start: T,
    samples: usize,
) -> Result<StrokeLedger<T>> {
    if samples < 2 {
        return Err(Error::Validation(format!(
            "stroke trace needs >= 2 samples, got {samples}"
        )));
    }
    let work = stroke_work(p, bath, omega_start)?;
    let traj = StrokeTrajectory::new(*p, work.initial_state);
    let last = T::from_usize(samples - 1).expect("sample count fits the scalar");
    let trace = (0..samples)
        .map(|k| {
            let t = p.duration * T::from_usize(k).expect("index fits the scalar") / last;
            StrokeSample {
                power: power_split(&traj, t),
                w_coherence: coherence_work(p, omega_start, bath, t),
            }
        })
        .collect();
    Ok(StrokeLedger { work, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{GHZ, HBAR, K_B};
    use std::f64::consts::{FRAC_PI_4, PI};

    fn hot() -> BathSpec<f64> {
        BathSpec::new(1.0).unwrap()
    }

    fn stage_one(alpha: f64, omega_ghz: f64, tau: f64) -> FieldProtocol<f64> {
        FieldProtocol::new(GHZ, alpha, omega_ghz * GHZ, tau).unwrap()
    }

    #[test]
    fn coherence_power_examples() {
        let rho = thermal_state(6.0 * GHZ, &hot()).unwrap();
        let flat = stage_one(0.0, -6.0, 1e-9);
        let traj = StrokeTrajectory::new(flat, rho);
        for t in [0.0, 0.5e-9, 1e-9] {
            assert_eq!(coherence_power(&flat, &traj.state_at(t), t), 0.0);
        }

        let p = stage_one(FRAC_PI_4, -6.0, 1e-9);
        let t_half = PI / p.rabi_omega();
        let traj = StrokeTrajectory::new(p, rho);
        let amp = coherence_power_amplitude(&p, 6.0 * GHZ, &hot());
        assert!(coherence_power(&p, &traj.state_at(t_half), t_half).abs() < 1e-12 * amp);
    }

    #[test]
    fn coherence_power_matches_closed_form() {
        let bath = hot();
        let rho = thermal_state(6.0 * GHZ, &bath).unwrap();
        let p = stage_one(FRAC_PI_4, -6.0, 1e-9);
        let traj = StrokeTrajectory::new(p, rho);
        let amp = coherence_power_amplitude(&p, 6.0 * GHZ, &bath);
        for k in 0..50 {
            let t = k as f64 * 0.0413e-9;
            let sum = coherence_sum(&p, &traj.state_at(t), t);
            let closed = coherence_power_thermal(&p, 6.0 * GHZ, &bath, t);
            assert!((sum.re - closed).abs() <= 1e-10 * closed.abs().max(amp * 1e-2), "t={t}");
            assert!(sum.im.abs() <= 1e-10 * amp);
        }
    }

    #[test]
    fn coherence_work_examples() {
        let bath = hot();
        assert_eq!(coherence_work(&stage_one(0.0, -6.0, 1.0), 6.0 * GHZ, &bath, 1e-9), 0.0);

        let p = stage_one(FRAC_PI_4, -6.0, 1.0);
        let period = 2.0 * PI / p.rabi_omega();
        let peak = coherence_work(&p, 6.0 * GHZ, &bath, period / 2.0);
        assert!(coherence_work(&p, 6.0 * GHZ, &bath, period).abs() < 1e-15 * peak.abs());

        // At Ωt = π the sine factor is 1. Direct evaluation with the
        // declared constants.
        let big = p.rabi_omega();
        let x = HBAR * 6.0 * GHZ / (2.0 * K_B);
        let expect = HBAR * p.omega * GHZ * GHZ * 0.5 * x.tanh() / (big * big);
        assert!((peak / expect - 1.0).abs() < 1e-12);
        assert!((peak / -1.5935e-28 - 1.0).abs() < 1e-4, "{peak:e}");
    }

    #[test]
    fn sudden_work_untilted_is_level_shift() {
        let bath = hot();
        let (ws, we) = (6.0 * GHZ, GHZ);
        let expect = 0.5 * HBAR * (ws - we) * bath.half_energy_ratio(ws).tanh();
        let p = FieldProtocol::new(we, 0.0, -6.0 * GHZ, 1e-9).unwrap();
        let (on, off) = sudden_switches(&p, ws, &bath, 0.7e-9).unwrap();
        assert!((on / expect - 1.0).abs() < 1e-12);
        assert_eq!(off, 0.0);
        let same = FieldProtocol::new(ws, 0.0, -6.0 * GHZ, 1e-9).unwrap();
        assert_eq!(sudden_work(&same, ws, &bath, 0.7e-9).unwrap(), 0.0);
    }

    #[test]
    fn sudden_work_full_period_reduces_to_untilted() {
        let bath = hot();
        let (ws, we) = (6.0 * GHZ, GHZ);
        let flat = FieldProtocol::new(we, 0.0, -6.0 * GHZ, 0.0).unwrap();
        let reference = sudden_work(&flat, ws, &bath, 0.0).unwrap();
        for k in 1..=3 {
            let p = stage_one(0.9, -6.0, 0.0);
            let tau = 2.0 * PI * k as f64 / p.rabi_omega();
            let ws_k = sudden_work(&p, ws, &bath, tau).unwrap();
            assert!((ws_k / reference - 1.0).abs() < 1e-11, "k={k}");
            assert!(coherence_work(&p, ws, &bath, tau).abs() < 1e-12 * reference.abs());
        }
    }

    #[test]
    fn stroke_ledger_untilted() {
        let p = stage_one(0.0, -6.0, 2e-9);
        let l = stroke_ledger(&p, &hot(), 6.0 * GHZ, 11).unwrap();
        assert_eq!(l.work.w_coherence, 0.0);
        assert_eq!(l.work.w_total, l.work.w_sudden);
        assert_eq!(l.trace.len(), 11);
        let floor = 1e-12 * HBAR * p.omega_j * p.rabi_omega();
        for s in &l.trace {
            assert_eq!(s.power.coherence_term, 0.0);
            assert!(s.power.q_dot_diag.abs() < floor);
        }
        assert!(stroke_ledger(&p, &hot(), 6.0 * GHZ, 1).is_err());
    }

    #[test]
    fn stroke_first_law_closes() {
        let bath = hot();
        for (a, w, tau) in [(0.3, -6.0, 0.37e-9), (FRAC_PI_4, 4.0, 2.2e-9), (1.5, -17.0, 0.05e-9)] {
            let p = stage_one(a, w, tau);
            let sw = stroke_work(&p, &bath, 6.0 * GHZ).unwrap();
            let scale = sw.delta_u.abs().max(HBAR * 6.0 * GHZ);
            assert!((sw.delta_u - sw.w_total).abs() < 1e-10 * scale);
            assert!(sw.q.abs() < 1e-9 * sw.w_total.abs().max(HBAR * GHZ));
        }
    }

    #[test]
    fn trace_residual_within_contract() {
        let p = stage_one(FRAC_PI_4, -6.0, 4.0 * PI / 6.74e9);
        let l = stroke_ledger(&p, &hot(), 6.0 * GHZ, DEFAULT_TRACE_SAMPLES).unwrap();
        let bound = adiabaticity_bound(&p);
        for s in &l.trace {
            assert!(s.power.q_dot.abs() < bound);
            assert_eq!(s.power.w_dot, s.power.coherence_term);
        }
        let last = l.trace.last().unwrap();
        assert_eq!(last.w_coherence, l.work.w_coherence);
    }

    #[test]
    fn f32_stroke_runs_in_natural_units() {
        use crate::units::Units;
        let u = Units::<f32>::natural();
        let p = FieldProtocol::with_units(1.0f32, 0.5, -6.0, 0.8, u).unwrap();
        let b = BathSpec::with_units(0.5f32, u).unwrap();
        let sw = stroke_work(&p, &b, 6.0).unwrap();
        assert!((sw.delta_u - sw.w_total).abs() < 1e-5 * sw.delta_u.abs().max(1.0));
    }
}
