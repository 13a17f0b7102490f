//! Density matrices: Gibbs states, unitary evolution through a stroke,
//! matrix elements in the instantaneous eigenbasis and effective
//! temperatures from population ratios.

use num_complex::Complex;

use crate::algebra::{cr, ComplexMat2};
use crate::dynamics::{eigenframe, propagator_lab, FieldProtocol};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::units::Units;

/// A Hermitian, unit-trace, positive semidefinite 2×2 operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix<T> {
    mat: ComplexMat2<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates at the precision's structural tolerance.
    pub fn new(mat: ComplexMat2<T>) -> Result<Self> {
        Self::with_tolerance(mat, T::structural_tol())
    }

    pub fn with_tolerance(mat: ComplexMat2<T>, tol: T) -> Result<Self> {
        if !mat.is_finite() {
            return Err(Error::Validation("density matrix has non-finite entries".into()));
        }
        if (mat - mat.adjoint()).frobenius_norm() > tol {
            return Err(Error::Validation("density matrix is not Hermitian".into()));
        }
        let tr = mat.trace();
        if (tr - cr(T::one())).norm() > tol {
            return Err(Error::Validation(format!("density matrix trace {tr} != 1")));
        }
        let [lo, _] = mat.hermitian_eigenvalues();
        if lo < -tol {
            return Err(Error::Validation(format!(
                "density matrix has negative eigenvalue {lo}"
            )));
        }
        Ok(Self { mat })
    }

    /// Pure state |ψ⟩⟨ψ| of a normalized ket.
    pub fn pure(up: Complex<T>, down: Complex<T>) -> Result<Self> {
        Self::new(ComplexMat2::new(
            up * up.conj(),
            up * down.conj(),
            down * up.conj(),
            down * down.conj(),
        ))
    }

    /// Bloch-ball parametrization `(I + r·σ)/2`, valid for |r| ≤ 1.
    pub fn from_bloch(r: [T; 3]) -> Result<Self> {
        Self::new(ComplexMat2::from_pauli(T::one(), r).scale(T::lit(0.5)))
    }

    pub fn maximally_mixed() -> Self {
        Self {
            mat: ComplexMat2::identity().scale(T::lit(0.5)),
        }
    }

    pub fn mat(&self) -> &ComplexMat2<T> {
        &self.mat
    }

    /// `U ρ U†`; the result is trusted to stay a state.
    pub fn conjugate_by(&self, u: &ComplexMat2<T>) -> Self {
        Self {
            mat: *u * self.mat * u.adjoint(),
        }
    }

    /// Populations (ρ↑↑, ρ↓↓) in the σz basis.
    pub fn z_populations(&self) -> (T, T) {
        (self.mat.a11.re, self.mat.a22.re)
    }

    pub fn spectrum(&self) -> [T; 2] {
        self.mat.hermitian_eigenvalues()
    }

    pub fn purity(&self) -> T {
        (self.mat * self.mat).trace().re
    }

    /// ⟨H⟩ = Re Tr(H ρ).
    pub fn expectation(&self, h: &ComplexMat2<T>) -> T {
        (*h * self.mat).trace().re
    }

    /// Trace distance ½‖ρ − σ‖₁.
    pub fn trace_distance(&self, other: &Self) -> T {
        let [a, b] = (self.mat - other.mat).hermitian_eigenvalues();
        (a.abs() + b.abs()) * T::lit(0.5)
    }
}

/// A heat bath at positive temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec<T> {
    pub temperature: T,
    /// 1/(k_B T).
    pub beta: T,
    pub units: Units<T>,
}

impl<T: Real> BathSpec<T> {
    pub fn new(temperature: T) -> Result<Self> {
        Self::with_units(temperature, Units::si())
    }

    pub fn with_units(temperature: T, units: Units<T>) -> Result<Self> {
        if !(temperature > T::zero()) || !temperature.is_finite() {
            return Err(Error::Validation(format!(
                "bath temperature must be finite and > 0, got {temperature}"
            )));
        }
        Ok(Self {
            temperature,
            beta: T::one() / (units.k_b * temperature),
            units,
        })
    }

    /// βħω/2, the argument of every tanh in the thermal bookkeeping.
    pub fn half_energy_ratio(&self, omega_j: T) -> T {
        self.beta * self.units.hbar * omega_j * T::lit(0.5)
    }
}

/// Gibbs state of `H = (ħω_j/2) σz` at the bath temperature.
pub fn thermal_state<T: Real>(omega_j: T, bath: &BathSpec<T>) -> Result<DensityMatrix<T>> {
    if !(omega_j > T::zero()) || !omega_j.is_finite() {
        return Err(Error::Validation(format!("omega_j must be > 0, got {omega_j}")));
    }
    let two_x = T::lit(2.0) * bath.half_energy_ratio(omega_j);
    // e^{∓x}/Z written as logistic functions of 2x; exact limits at x → 0, ∞.
    let up = T::one() / (T::one() + two_x.exp());
    let down = T::one() / (T::one() + (-two_x).exp());
    Ok(DensityMatrix {
        mat: ComplexMat2::diag(cr(up), cr(down)),
    })
}

/// ⟨E⟩ of the Gibbs state, −(ħω_j/2) tanh(βħω_j/2).
pub fn thermal_energy<T: Real>(omega_j: T, bath: &BathSpec<T>) -> T {
    -bath.units.hbar * omega_j * T::lit(0.5) * bath.half_energy_ratio(omega_j).tanh()
}

/// The state during a stroke: `ρ*(t) = U(t) ρ₀ U†(t)` in the lab frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrokeTrajectory<T> {
    pub protocol: FieldProtocol<T>,
    pub initial: DensityMatrix<T>,
}

impl<T: Real> StrokeTrajectory<T> {
    pub fn new(protocol: FieldProtocol<T>, initial: DensityMatrix<T>) -> Self {
        Self { protocol, initial }
    }

    /// Valid for any real `t`; finite differences step slightly outside
    /// [0, duration].
    pub fn state_at(&self, t: T) -> DensityMatrix<T> {
        self.initial.conjugate_by(&propagator_lab(&self.protocol, t))
    }
}

/// `U(t) ρ₀ U†(t)` for `0 ≤ t ≤ p.duration`.
pub fn evolve_stroke<T: Real>(p: &FieldProtocol<T>, rho0: &DensityMatrix<T>, t: T) -> DensityMatrix<T> {
    debug_assert!(t >= T::zero(), "evolve_stroke: negative time");
    rho0.conjugate_by(&propagator_lab(p, t))
}

/// ρ_nm = ⟨χ_n(t)|ρ|χ_m(t)⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstantaneousElements<T> {
    pub rho_pp: T,
    pub rho_mm: T,
    pub rho_pm: Complex<T>,
    pub at_time: T,
}

impl<T: Real> InstantaneousElements<T> {
    pub fn rho_mp(&self) -> Complex<T> {
        self.rho_pm.conj()
    }
}

pub fn instantaneous_elements<T: Real>(p: &FieldProtocol<T>, rho: &DensityMatrix<T>, t: T) -> InstantaneousElements<T> {
    let f = eigenframe(p, t);
    let m = rho.mat();
    InstantaneousElements {
        rho_pp: m.sandwich(&f.chi_plus, &f.chi_plus).re,
        rho_mm: m.sandwich(&f.chi_minus, &f.chi_minus).re,
        rho_pm: m.sandwich(&f.chi_plus, &f.chi_minus),
        at_time: t,
    }
}

/// Temperature assigned to a two-level population ratio by the Boltzmann
/// relation. May be negative (inversion) or infinite (equal populations).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EffectiveTemperature<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> EffectiveTemperature<T> {
    pub fn kelvin(&self) -> T {
        match self {
            Self::Finite(t) => *t,
            Self::Infinite => T::infinity(),
        }
    }
}

/// Inverts `pop_ratio = ρ₊₊/ρ₋₋ = exp(−gap/(k_B T))`.
pub fn effective_temperature<T: Real>(gap: T, pop_ratio: T, units: &Units<T>) -> Result<EffectiveTemperature<T>> {
    if !(gap > T::zero()) || !gap.is_finite() {
        return Err(Error::Domain(format!("energy gap must be > 0, got {gap}")));
    }
    if !(pop_ratio > T::zero()) || !pop_ratio.is_finite() {
        return Err(Error::Domain(format!("population ratio must be > 0, got {pop_ratio}")));
    }
    if pop_ratio == T::one() {
        return Ok(EffectiveTemperature::Infinite);
    }
    Ok(EffectiveTemperature::Finite(
        gap / (units.k_b * (T::one() / pop_ratio).ln()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::pauli_expi;
    use crate::dynamics::hamiltonian;
    use crate::units::{GHZ, HBAR, K_B};
    use std::f64::consts::{FRAC_PI_4, PI};

    type M = ComplexMat2<f64>;

    fn bath(t: f64) -> BathSpec<f64> {
        BathSpec::new(t).unwrap()
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::new(M::identity()).is_err());
        assert!(DensityMatrix::new(M::sigma_x()).is_err());
        assert!(DensityMatrix::new(M::diag(cr(1.5), cr(-0.5))).is_err());
        assert!(DensityMatrix::from_bloch([0.0, 0.0, 1.0]).is_ok());
        assert!(DensityMatrix::from_bloch([0.0, 0.8, 0.8]).is_err());
        let mut m = M::identity().scale(0.5);
        m.a12 = Complex::new(0.1, 0.0);
        assert!(DensityMatrix::new(m).is_err());
    }

    #[test]
    fn bath_rejects_nonpositive_temperature() {
        assert!(BathSpec::new(0.0).is_err());
        assert!(BathSpec::new(-1.0).is_err());
        assert!(BathSpec::new(f64::NAN).is_err());
        let b = bath(0.37);
        assert!((b.beta * K_B * b.temperature - 1.0).abs() < 1e-15);
    }

    #[test]
    fn thermal_limits() {
        let hot = thermal_state(6.0 * GHZ, &bath(1e9)).unwrap();
        assert!(hot.mat().distance(&M::identity().scale(0.5)) < 1e-9);
        let cold = thermal_state(6.0 * GHZ, &bath(1e-6)).unwrap();
        assert!(cold.mat().distance(&M::diag(cr(0.0), cr(1.0))) < 1e-9);
        assert!(thermal_state(-1.0, &bath(1.0)).is_err());
    }

    #[test]
    fn thermal_polarization_at_hot_bath() {
        // βħω/2 for ω = 6 GHz at 1 K, evaluated with the declared constants.
        let x = HBAR * 6e9 / (2.0 * K_B * 1.0);
        assert!((x - 0.022_914_6).abs() < 1e-7);
        let rho = thermal_state(6.0 * GHZ, &bath(1.0)).unwrap();
        let (up, down) = rho.z_populations();
        assert!((up - down + x.tanh()).abs() < 1e-15);
        assert!((up - down + 0.0229).abs() < 1e-4);
        assert!((up + down - 1.0).abs() < 1e-15);
    }

    #[test]
    fn thermal_commutes_with_untilted_hamiltonian() {
        let rho = thermal_state(6.0 * GHZ, &bath(1.0)).unwrap();
        let p = FieldProtocol::new(6.0 * GHZ, 0.0, -6.0 * GHZ, 1e-9).unwrap();
        for t in [0.0, 0.4e-9, 3.0e-9] {
            let h = hamiltonian(&p, t);
            let comm = h.commutator(rho.mat());
            assert!(comm.frobenius_norm() <= 1e-12 * h.frobenius_norm());
        }
    }

    #[test]
    fn evolve_stroke_examples() {
        let rho0 = thermal_state(6.0 * GHZ, &bath(1.0)).unwrap();
        let p = FieldProtocol::new(GHZ, FRAC_PI_4, -6.0 * GHZ, 2e-9).unwrap();
        assert!(evolve_stroke(&p, &rho0, 0.0).mat().distance(rho0.mat()) < 1e-15);

        let flat = p.untilted();
        for t in [0.3e-9, 1.9e-9] {
            assert!(evolve_stroke(&flat, &rho0, t).mat().distance(rho0.mat()) < 1e-15);
            let r = evolve_stroke(&p, &rho0, t);
            let (s0, s1) = (rho0.spectrum(), r.spectrum());
            assert!((s0[0] - s1[0]).abs() < 1e-12 && (s0[1] - s1[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn instantaneous_elements_untilted() {
        let rho = thermal_state(6.0 * GHZ, &bath(1.0)).unwrap();
        let p = FieldProtocol::new(GHZ, 0.0, -6.0 * GHZ, 1e-9).unwrap();
        let el = instantaneous_elements(&p, &rho, 0.3e-9);
        assert_eq!(el.rho_pp, rho.z_populations().0);
        assert_eq!(el.rho_pm.norm(), 0.0);
    }

    #[test]
    fn instantaneous_elements_after_full_rabi_period() {
        // U_R = −I after one period, so ρ* is the initial thermal state again
        // and its tilted-basis elements follow from the rotation of the basis.
        let rho0 = thermal_state(6.0 * GHZ, &bath(1.0)).unwrap();
        let a = FRAC_PI_4;
        let p = FieldProtocol::new(GHZ, a, -6.0 * GHZ, 0.0).unwrap();
        let tau = 2.0 * PI / p.rabi_omega();
        let rho_star = evolve_stroke(&p, &rho0, tau);
        assert!(rho_star.mat().distance(rho0.mat()) < 1e-13);

        let (up, down) = rho0.z_populations();
        let el = instantaneous_elements(&p, &rho_star, tau);
        let (s, c) = (a / 2.0).sin_cos();
        assert!((el.rho_pp - (c * c * up + s * s * down)).abs() < 1e-13);
        assert!((el.rho_mm - (s * s * up + c * c * down)).abs() < 1e-13);
        let phase = Complex::from_polar(1.0, -p.omega * tau);
        let expect_pm = phase * (s * c * (up - down));
        assert!((el.rho_pm - expect_pm).norm() < 1e-13);
    }

    #[test]
    fn effective_temperature_examples() {
        let si = Units::si();
        let t = effective_temperature(K_B, (-1.0f64).exp(), &si).unwrap();
        assert!((t.kelvin() - 1.0).abs() < 1e-14);

        let tc = bath(0.1);
        let w2 = GHZ;
        let rho = thermal_state(w2, &tc).unwrap();
        let (up, down) = rho.z_populations();
        let back = effective_temperature(HBAR * w2, up / down, &si).unwrap().kelvin();
        assert!((back / 0.1 - 1.0).abs() < 1e-12);

        assert_eq!(
            effective_temperature(1.0, 1.0, &si).unwrap(),
            EffectiveTemperature::Infinite
        );
        assert!(effective_temperature(1.0, 2.0, &si).unwrap().kelvin() < 0.0);
        assert!(effective_temperature(1.0, 0.0, &si).is_err());
        assert!(effective_temperature(1.0, -0.5, &si).is_err());
        assert!(effective_temperature(0.0, 0.5, &si).is_err());
    }

    #[test]
    fn trace_distance_of_orthogonal_pure_states() {
        let up = DensityMatrix::<f64>::from_bloch([0.0, 0.0, 1.0]).unwrap();
        let down = DensityMatrix::<f64>::from_bloch([0.0, 0.0, -1.0]).unwrap();
        assert!((up.trace_distance(&down) - 1.0).abs() < 1e-15);
        let u = pauli_expi([0.2, 0.3, -0.1]).unwrap();
        assert!((up.conjugate_by(&u).purity() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn f32_thermal_state_is_valid() {
        let b = BathSpec::<f32>::new(0.1).unwrap();
        let rho = thermal_state(1e9f32, &b).unwrap();
        assert!(DensityMatrix::new(*rho.mat()).is_ok());
    }
}
