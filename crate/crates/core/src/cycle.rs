//! The four-stroke engine.
//!
//! 1. Gibbs state at T_h under ω₁σz/2, switch to the tilted field of
//!    magnitude ω₂ rotating for τ₁, flip back to z.
//! 2. Complete thermalization with the cold bath at ω₂.
//! 3. Gibbs state at T_c under ω₂σz/2, rotate at ω₁ for τ₂, flip back.
//! 4. Complete thermalization with the hot bath at ω₁.
//!
//! Q > 0 is heat absorbed by the spin, W > 0 is work done on it; the work
//! output is −W and η = −W/Q_h.

use rayon::prelude::*;

use crate::dynamics::FieldProtocol;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::{effective_temperature, thermal_energy, BathSpec, DensityMatrix, EffectiveTemperature};
use crate::thermo::{stroke_work, StrokeWork};
use crate::units::{Units, GHZ};

/// Relative tolerance of the cycle closure W₁ + W₂ + Q_h + Q_c = 0.
pub const CLOSURE_TOL: f64 = 1e-10;
/// Allowed negative entropy generation, relative to |Q_h|/T_h + |Q_c|/T_c.
pub const SECOND_LAW_TOL: f64 = 1e-12;

/// Which drive's Rabi frequency turns λ into each stroke duration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LambdaBinding {
    /// τ₁ = 2πλ/Ω(ω₂), τ₂ = 2πλ/Ω(ω₁): each stroke's own drive.
    #[default]
    Stage,
    /// τ₁ = 2πλ/Ω(ω₁), τ₂ = 2πλ/Ω(ω₂).
    Swapped,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleParams<T> {
    pub omega1: T,
    pub omega2: T,
    pub alpha: T,
    pub omega: T,
    /// Stroke duration in rotating-frame Rabi periods.
    pub lambda: T,
    pub hot: BathSpec<T>,
    pub cold: BathSpec<T>,
    pub binding: LambdaBinding,
    pub units: Units<T>,
}

impl<T: Real> CycleParams<T> {
    /// ω₁ = 6 GHz, ω₂ = 1 GHz, ω = −6 GHz, α = π/4, λ = 1/2, T_h = 1 K,
    /// T_c = 0.1 K (GHz meaning 1e9 rad/s).
    pub fn standard() -> Self {
        let units = Units::si();
        Self {
            omega1: T::lit(6.0 * GHZ),
            omega2: T::lit(GHZ),
            alpha: T::FRAC_PI_4(),
            omega: T::lit(-6.0 * GHZ),
            lambda: T::lit(0.5),
            hot: BathSpec::with_units(T::one(), units).expect("positive temperature"),
            cold: BathSpec::with_units(T::lit(0.1), units).expect("positive temperature"),
            binding: LambdaBinding::Stage,
            units,
        }
    }

    pub fn with_alpha(mut self, alpha: T) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_lambda(mut self, lambda: T) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_omega(mut self, omega: T) -> Self {
        self.omega = omega;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega1 > T::zero()) || !(self.omega2 > T::zero()) {
            return Err(Error::Validation(format!(
                "omega1 and omega2 must be > 0, got {} and {}",
                self.omega1, self.omega2
            )));
        }
        if !(self.lambda >= T::zero()) || !self.lambda.is_finite() {
            return Err(Error::Validation(format!(
                "lambda must be finite and >= 0, got {}",
                self.lambda
            )));
        }
        if !(self.hot.temperature > self.cold.temperature) {
            return Err(Error::Validation(format!(
                "hot bath ({}) must be hotter than cold bath ({})",
                self.hot.temperature, self.cold.temperature
            )));
        }
        if self.hot.units != self.units || self.cold.units != self.units {
            return Err(Error::Validation("bath and cycle units differ".into()));
        }
        self.compression_drive(T::zero())?;
        self.expansion_drive(T::zero())?;
        Ok(())
    }

    fn compression_drive(&self, duration: T) -> Result<FieldProtocol<T>> {
        FieldProtocol::with_units(self.omega2, self.alpha, self.omega, duration, self.units)
    }

    fn expansion_drive(&self, duration: T) -> Result<FieldProtocol<T>> {
        FieldProtocol::with_units(self.omega1, self.alpha, self.omega, duration, self.units)
    }

    /// (τ₁, τ₂) from λ under the configured binding.
    pub fn durations(&self) -> Result<(T, T)> {
        let stage_one = self.compression_drive(T::zero())?;
        let stage_three = self.expansion_drive(T::zero())?;
        let (d1, d3) = match self.binding {
            LambdaBinding::Stage => (stage_one, stage_three),
            LambdaBinding::Swapped => (stage_three, stage_one),
        };
        let tau = |d: &FieldProtocol<T>| {
            if self.lambda == T::zero() {
                Ok(T::zero())
            } else if d.is_degenerate() {
                Err(Error::Validation(format!(
                    "Rabi frequency vanishes (omega_j = {}, omega = {}); lambda does not fix a duration",
                    d.omega_j, d.omega
                )))
            } else {
                Ok(T::TAU() * self.lambda / d.rabi_omega())
            }
        };
        Ok((tau(&d1)?, tau(&d3)?))
    }

    /// The compression and expansion drives with their durations.
    pub fn strokes(&self) -> Result<(FieldProtocol<T>, FieldProtocol<T>)> {
        let (t1, t2) = self.durations()?;
        Ok((self.compression_drive(t1)?, self.expansion_drive(t2)?))
    }
}

/// Quantum-adiabatic (α = 0) reference values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OttoLimit<T> {
    pub q_h: T,
    pub w: T,
    pub eta_otto: T,
    /// ω₂/ω₁ > β_h/β_c.
    pub positive_work_condition: bool,
}

pub fn otto_limit<T: Real>(cp: &CycleParams<T>) -> OttoLimit<T> {
    let half_hbar = cp.units.hbar * T::lit(0.5);
    let th = cp.hot.half_energy_ratio(cp.omega1).tanh();
    let tc = cp.cold.half_energy_ratio(cp.omega2).tanh();
    OttoLimit {
        q_h: half_hbar * cp.omega1 * (tc - th),
        w: half_hbar * (cp.omega1 - cp.omega2) * (th - tc),
        eta_otto: T::one() - cp.omega2 / cp.omega1,
        positive_work_condition: cp.omega2 / cp.omega1 > cp.hot.beta / cp.cold.beta,
    }
}

/// S = −Q_h/T_h − Q_c/T_c.
pub fn entropy_generation<T: Real>(q_h: T, q_c: T, hot: &BathSpec<T>, cold: &BathSpec<T>) -> T {
    -q_h / hot.temperature - q_c / cold.temperature
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleReport<T> {
    pub w_net: T,
    pub w_l: T,
    pub w_s: T,
    /// W₁ (stage I).
    pub compression: StrokeWork<T>,
    /// W₂ (stage III).
    pub expansion: StrokeWork<T>,
    pub q_h: T,
    pub q_c: T,
    /// −W/Q_h, `None` when Q_h ≤ 0.
    pub eta: Option<T>,
    pub eta_otto: T,
    /// Effective temperature of state 2 from its σz populations at gap ħω₂.
    pub t2_eff: EffectiveTemperature<T>,
    /// Effective temperature of state 4 from its σz populations at gap ħω₁.
    pub t4_eff: EffectiveTemperature<T>,
    pub entropy_gen: T,
    /// Net work output −W is positive.
    pub positive_work: bool,
    /// Q_h > 0 and W < 0.
    pub is_engine: bool,
    pub tau1: T,
    pub tau2: T,
    pub otto: OttoLimit<T>,
}

/// `tol`, widened to a few hundred ulps for `f32`.
fn precision_floor<T: Real>(tol: f64) -> T {
    T::lit(tol).max(T::epsilon() * T::lit(1e3))
}

fn z_temperature<T: Real>(rho: &DensityMatrix<T>, gap: T, units: &Units<T>) -> Result<EffectiveTemperature<T>> {
    let (up, down) = rho.z_populations();
    effective_temperature(gap, up / down, units)
}

pub fn run_cycle<T: Real>(cp: &CycleParams<T>) -> Result<CycleReport<T>> {
    cp.validate()?;
    let (p1, p3) = cp.strokes()?;

    let compression = stroke_work(&p1, &cp.hot, cp.omega1)?;
    let e_after_one = compression
        .final_state
        .expectation(&crate::dynamics::hamiltonian(&p1.untilted(), p1.duration));
    let q_c = thermal_energy(cp.omega2, &cp.cold) - e_after_one;

    let expansion = stroke_work(&p3, &cp.cold, cp.omega2)?;
    let e_after_three = expansion
        .final_state
        .expectation(&crate::dynamics::hamiltonian(&p3.untilted(), p3.duration));
    let q_h = thermal_energy(cp.omega1, &cp.hot) - e_after_three;

    let w_net = compression.w_total + expansion.w_total;
    let closure = w_net + q_h + q_c;
    let scale = [compression.w_total, expansion.w_total, q_h, q_c]
        .iter()
        .fold(T::zero(), |m, x| m.max(x.abs()));
    if closure.abs() > precision_floor::<T>(CLOSURE_TOL) * scale {
        return Err(Error::Invariant(format!(
            "cycle does not close: W + Q_h + Q_c = {closure} (scale {scale})"
        )));
    }

    let entropy_gen = entropy_generation(q_h, q_c, &cp.hot, &cp.cold);
    let entropy_scale = q_h.abs() / cp.hot.temperature + q_c.abs() / cp.cold.temperature;
    if entropy_gen < -precision_floor::<T>(SECOND_LAW_TOL) * entropy_scale {
        return Err(Error::Invariant(format!("negative entropy generation {entropy_gen}")));
    }

    let hbar = cp.units.hbar;
    let t2_eff = z_temperature(&compression.final_state, hbar * cp.omega2, &cp.units)?;
    let t4_eff = z_temperature(&expansion.final_state, hbar * cp.omega1, &cp.units)?;
    let eta = (q_h > T::zero()).then(|| -w_net / q_h);
    Ok(CycleReport {
        w_net,
        w_l: compression.w_coherence + expansion.w_coherence,
        w_s: compression.w_sudden + expansion.w_sudden,
        q_h,
        q_c,
        eta,
        eta_otto: T::one() - cp.omega2 / cp.omega1,
        t2_eff,
        t4_eff,
        entropy_gen,
        positive_work: w_net < T::zero(),
        is_engine: q_h > T::zero() && w_net < T::zero(),
        tau1: p1.duration,
        tau2: p3.duration,
        otto: otto_limit(cp),
        compression,
        expansion,
    })
}

/// A product grid over α, ω and λ around a base parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid<T> {
    pub base: CycleParams<T>,
    pub alphas: Vec<T>,
    pub omegas: Vec<T>,
    pub lambdas: Vec<T>,
}

impl<T: Real> SweepGrid<T> {
    /// Grid points in row-major order: α slowest, λ fastest.
    pub fn points(&self) -> Result<Vec<CycleParams<T>>> {
        for (name, axis) in [
            ("alpha", &self.alphas),
            ("omega", &self.omegas),
            ("lambda", &self.lambdas),
        ] {
            if axis.is_empty() {
                return Err(Error::Validation(format!("sweep axis {name} is empty")));
            }
            if axis.iter().any(|v| !v.is_finite()) {
                return Err(Error::Validation(format!("sweep axis {name} has non-finite values")));
            }
        }
        let mut out = Vec::with_capacity(self.alphas.len() * self.omegas.len() * self.lambdas.len());
        for &a in &self.alphas {
            for &w in &self.omegas {
                for &l in &self.lambdas {
                    out.push(self.base.with_alpha(a).with_omega(w).with_lambda(l));
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint<T> {
    pub params: CycleParams<T>,
    pub outcome: Result<CycleReport<T>>,
}

/// Runs every grid point, in parallel when `jobs` allows, keeping grid
/// order. Failing points are kept with their error.
pub fn sweep<T: Real>(grid: &SweepGrid<T>, jobs: Option<usize>) -> Result<Vec<SweepPoint<T>>> {
    let points = grid.points()?;
    with_jobs(jobs, || {
        points
            .par_iter()
            .map(|cp| SweepPoint {
                params: *cp,
                outcome: run_cycle(cp),
            })
            .collect()
    })
}

/// Runs `f` on a pool of `jobs` threads, or on the global pool for `None`.
pub fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match jobs {
        Some(0) => Err(Error::Validation("jobs must be >= 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Validation(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}
