//! The rotating-field drive: lab-frame Hamiltonian, its instantaneous
//! eigenbasis, the rotating-frame Hamiltonian and the exact propagators.
//!
//! The field of magnitude ω_j (as a Larmor frequency) is tilted by `alpha`
//! from the z axis and rotates about z at signed angular velocity `omega`:
//!
//! ```text
//! H(t) = (ħω_j/2) [sinα cos ωt σx + sinα sin ωt σy + cosα σz]
//! ```
//!
//! Removing the rotation with `R_z(t) = exp(iωt σz/2)` leaves the static
//! Hamiltonian `H_R = (ħ/2)[ω_j sinα σx + (ω_j cosα − ω) σz]`, whose gap is
//! ħΩ_j with `Ω_j = sqrt((ω_j cosα − ω)² + ω_j² sin²α)`.

use num_complex::Complex;

use crate::algebra::{c, cr, ComplexMat2, Ket2};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::units::Units;

/// Relative threshold below which Ω_j is treated as zero and
/// sin(Ω_j t/2)/Ω_j is replaced by t/2.
pub const DEGENERATE_RABI: f64 = 1e-8;

/// Drive parameters for one rotating-field stroke.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldProtocol<T> {
    /// Larmor angular frequency of the field magnitude, rad/s.
    pub omega_j: T,
    /// Tilt of the field from the z axis, rad, in [0, π/2].
    pub alpha: T,
    /// Signed rotation angular velocity about z, rad/s.
    pub omega: T,
    /// Stroke duration, s.
    pub duration: T,
    pub units: Units<T>,
}

/// Instantaneous eigenvectors and energies of `H(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenFrame<T> {
    pub chi_plus: Ket2<T>,
    pub chi_minus: Ket2<T>,
    pub e_plus: T,
    pub e_minus: T,
    pub at_time: T,
}

impl<T: Real> FieldProtocol<T> {
    /// A protocol in SI units.
    pub fn new(omega_j: T, alpha: T, omega: T, duration: T) -> Result<Self> {
        Self::with_units(omega_j, alpha, omega, duration, Units::si())
    }

    pub fn with_units(omega_j: T, alpha: T, omega: T, duration: T, units: Units<T>) -> Result<Self> {
        let p = Self {
            omega_j,
            alpha,
            omega,
            duration,
            units,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.omega_j, self.alpha, self.omega, self.duration]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::Validation(format!("non-finite protocol parameter: {self:?}")));
        }
        if self.omega_j <= T::zero() {
            return Err(Error::Validation(format!("omega_j must be > 0, got {}", self.omega_j)));
        }
        if self.alpha < T::zero() || self.alpha > T::FRAC_PI_2() {
            return Err(Error::Validation(format!(
                "alpha must lie in [0, pi/2], got {}",
                self.alpha
            )));
        }
        if self.duration < T::zero() {
            return Err(Error::Validation(format!(
                "duration must be >= 0, got {}",
                self.duration
            )));
        }
        Ok(())
    }

    /// Same drive, different duration.
    pub fn with_duration(&self, duration: T) -> Result<Self> {
        let mut p = *self;
        p.duration = duration;
        p.validate()?;
        Ok(p)
    }

    /// Same field magnitude with the tilt removed: the static z field the
    /// stroke switches back to.
    pub fn untilted(&self) -> Self {
        let mut p = *self;
        p.alpha = T::zero();
        p
    }

    /// Ω_j, the precession rate in the rotating frame.
    pub fn rabi_omega(&self) -> T {
        let (s, co) = self.alpha.sin_cos();
        (self.omega_j * co - self.omega).hypot(self.omega_j * s)
    }

    /// Largest angular frequency in the problem: max(Ω_j, |ω|, ω_j).
    pub fn fastest_rate(&self) -> T {
        self.rabi_omega().max(self.omega.abs()).max(self.omega_j)
    }

    pub(crate) fn is_degenerate(&self) -> bool {
        self.rabi_omega() < T::lit(DEGENERATE_RABI) * self.omega.abs().max(self.omega_j)
    }

    /// sin(Ω_j t/2)/Ω_j with its t/2 limit at degenerate Ω_j.
    pub(crate) fn half_sinc(&self, t: T) -> T {
        if self.is_degenerate() {
            t * T::lit(0.5)
        } else {
            let w = self.rabi_omega();
            (w * t * T::lit(0.5)).sin() / w
        }
    }

    /// The vector (ω_j sinα, 0, ω_j cosα − ω) with H_R = (ħ/2) v·σ.
    pub fn rotating_axis(&self) -> [T; 3] {
        let (s, co) = self.alpha.sin_cos();
        [self.omega_j * s, T::zero(), self.omega_j * co - self.omega]
    }
}

/// Lab-frame Hamiltonian at time `t`.
pub fn hamiltonian<T: Real>(p: &FieldProtocol<T>, t: T) -> ComplexMat2<T> {
    let (s, co) = p.alpha.sin_cos();
    let (swt, cwt) = (p.omega * t).sin_cos();
    ComplexMat2::from_pauli(T::zero(), [s * cwt, s * swt, co]).scale(p.units.hbar * p.omega_j * T::lit(0.5))
}

/// Analytic ∂H/∂t.
pub fn dh_dt<T: Real>(p: &FieldProtocol<T>, t: T) -> ComplexMat2<T> {
    let (swt, cwt) = (p.omega * t).sin_cos();
    let amp = p.units.hbar * p.omega_j * p.omega * p.alpha.sin() * T::lit(0.5);
    ComplexMat2::from_pauli(T::zero(), [-swt, cwt, T::zero()]).scale(amp)
}

/// χ± of a field tilted by `alpha` at azimuth `omega * t`. Defined for any
/// real tilt; the validated protocol restricts it to [0, π/2].
pub fn instantaneous_eigenstates<T: Real>(alpha: T, omega: T, t: T) -> (Ket2<T>, Ket2<T>) {
    let (s, co) = (alpha * T::lit(0.5)).sin_cos();
    let phase: Complex<T> = Complex::from_polar(T::one(), omega * t);
    let plus = Ket2::new(cr(co), phase.scale(s));
    let minus = Ket2::new(phase.conj().scale(s), cr(-co));
    (plus, minus)
}

pub fn eigenframe<T: Real>(p: &FieldProtocol<T>, t: T) -> EigenFrame<T> {
    let (chi_plus, chi_minus) = instantaneous_eigenstates(p.alpha, p.omega, t);
    let e = p.units.hbar * p.omega_j * T::lit(0.5);
    EigenFrame {
        chi_plus,
        chi_minus,
        e_plus: e,
        e_minus: -e,
        at_time: t,
    }
}

pub fn rotating_hamiltonian<T: Real>(p: &FieldProtocol<T>) -> ComplexMat2<T> {
    ComplexMat2::from_pauli(T::zero(), p.rotating_axis()).scale(p.units.hbar * T::lit(0.5))
}

/// `U_R(t) = exp(−i H_R t/ħ)`.
pub fn propagator_rotating<T: Real>(p: &FieldProtocol<T>, t: T) -> ComplexMat2<T> {
    let cos = if p.is_degenerate() {
        T::one()
    } else {
        (p.rabi_omega() * t * T::lit(0.5)).cos()
    };
    let k = p.half_sinc(t);
    let [vx, _, vz] = p.rotating_axis();
    // cos I − i k (vx σx + vz σz)
    ComplexMat2::new(
        c(cos, -k * vz),
        c(T::zero(), -k * vx),
        c(T::zero(), -k * vx),
        c(cos, k * vz),
    )
}

/// `U(t) = R_z†(t) U_R(t)`, the lab-frame propagator from 0 to `t`.
pub fn propagator_lab<T: Real>(p: &FieldProtocol<T>, t: T) -> ComplexMat2<T> {
    let ph: Complex<T> = Complex::from_polar(T::one(), -p.omega * t * T::lit(0.5));
    ComplexMat2::diag(ph, ph.conj()) * propagator_rotating(p, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::pauli_expi;
    use crate::units::{GHZ, HBAR};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    type M = ComplexMat2<f64>;

    fn proto(wj: f64, a: f64, w: f64) -> FieldProtocol<f64> {
        FieldProtocol::new(wj * GHZ, a, w * GHZ, 1e-9).unwrap()
    }

    #[test]
    fn validation() {
        assert!(FieldProtocol::new(0.0, 0.1, 1.0, 1.0).is_err());
        assert!(FieldProtocol::new(1.0, -0.1, 1.0, 1.0).is_err());
        assert!(FieldProtocol::new(1.0, 1.6, 1.0, 1.0).is_err());
        assert!(FieldProtocol::new(1.0, 0.1, 1.0, -1.0).is_err());
        assert!(FieldProtocol::new(1.0, f64::NAN, 1.0, 1.0).is_err());
        assert!(FieldProtocol::new(1.0, FRAC_PI_2, -3.0, 0.0).is_ok());
    }

    #[test]
    fn hamiltonian_special_cases() {
        let p = proto(6.0, 0.0, -6.0);
        let e = HBAR * 6.0 * GHZ / 2.0;
        for t in [0.0, 0.3e-9, 2.0e-9] {
            assert!(hamiltonian(&p, t).distance(&M::sigma_z().scale(e)) <= 1e-15 * e);
        }
        let q = proto(6.0, FRAC_PI_2, 2.0);
        assert!(hamiltonian(&q, 0.0).distance(&M::sigma_x().scale(e)) <= 1e-15 * e);
    }

    #[test]
    fn hamiltonian_gap_is_constant() {
        let p = proto(1.0, FRAC_PI_4, -6.0);
        for k in 0..20 {
            let t = k as f64 * 0.137e-9;
            let h = hamiltonian(&p, t);
            assert!(h.is_hermitian(1e-14));
            assert!(h.trace().norm() < 1e-40);
            let [lo, hi] = h.hermitian_eigenvalues();
            assert!(((hi - lo) / (HBAR * GHZ) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dh_dt_vanishes_without_tilt_or_rotation() {
        assert_eq!(dh_dt(&proto(6.0, 0.0, -6.0), 0.4e-9).max_abs(), 0.0);
        assert_eq!(dh_dt(&proto(6.0, 0.5, 0.0), 0.4e-9).max_abs(), 0.0);
    }

    #[test]
    fn dh_dt_matches_central_differences_at_second_order() {
        let p = proto(1.0, 0.9, -6.0);
        let t = 0.77e-9;
        let exact = dh_dt(&p, t);
        let err = |h: f64| {
            let fd = (hamiltonian(&p, t + h) - hamiltonian(&p, t - h)).scale(0.5 / h);
            fd.distance(&exact) / exact.frobenius_norm()
        };
        let h0 = 1e-3 / p.omega.abs();
        let (e1, e2) = (err(h0), err(h0 / 2.0));
        assert!(err(1e-6 / p.omega.abs()) < 1e-9);
        let order = (e1 / e2).log2();
        assert!((order - 2.0).abs() < 0.05, "order {order}");
    }

    #[test]
    fn eigenframe_examples() {
        let f = eigenframe(&proto(6.0, 0.0, 3.0), 0.2e-9);
        assert_eq!(f.chi_plus, Ket2::up());
        assert_eq!(f.chi_minus, Ket2::down().scale_c(cr(-1.0)));

        // inverted field: χ₊ ∝ |↓⟩
        let (plus, _) = instantaneous_eigenstates(PI, 1.0, 0.0);
        assert!(plus.c_up.norm() < 1e-15);
        assert!((plus.c_down.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigenframe_residuals_on_grid() {
        for ia in 0..=8 {
            let a = FRAC_PI_2 * ia as f64 / 8.0;
            let p = proto(6.0, a, -6.0);
            for it in 0..10 {
                let t = it as f64 * 0.091e-9;
                let f = eigenframe(&p, t);
                let h = hamiltonian(&p, t);
                assert!(f.chi_plus.is_normalized(1e-12) && f.chi_minus.is_normalized(1e-12));
                assert!(f.chi_plus.inner(&f.chi_minus).norm() < 1e-12);
                let scale = f.e_plus.abs();
                let rp = h.apply(&f.chi_plus).sub(&f.chi_plus.scale_c(cr(f.e_plus)));
                let rm = h.apply(&f.chi_minus).sub(&f.chi_minus.scale_c(cr(f.e_minus)));
                assert!(rp.norm_sqr().sqrt() < 1e-12 * scale);
                assert!(rm.norm_sqr().sqrt() < 1e-12 * scale);
                assert_eq!(f.e_plus, HBAR * 6.0 * GHZ / 2.0);
                assert_eq!(f.e_minus, -f.e_plus);
            }
        }
    }

    #[test]
    fn rotating_hamiltonian_examples() {
        let e = HBAR * GHZ / 2.0;
        let p = proto(6.0, 0.0, 2.0);
        assert!(rotating_hamiltonian(&p).distance(&M::sigma_z().scale(4.0 * e)) < 1e-14 * e);

        let a = 0.6f64;
        let res = proto(6.0, a, 6.0 * a.cos());
        let expect = M::sigma_x().scale(6.0 * a.sin() * e);
        assert!(rotating_hamiltonian(&res).distance(&expect) < 1e-14 * e);
    }

    #[test]
    fn rotating_gap_at_paper_point() {
        // Ω for ω_j = 6, α = π/4, ω = −6 (GHz): frozen from the eigenvalues
        // of the assembled matrix.
        let p = proto(6.0, FRAC_PI_4, -6.0);
        let [lo, hi] = rotating_hamiltonian(&p).hermitian_eigenvalues();
        let gap = (hi - lo) / HBAR;
        assert!((gap / (p.rabi_omega()) - 1.0).abs() < 1e-12);
        let expect = ((6.0 * FRAC_PI_4.cos() + 6.0f64).powi(2) + 18.0).sqrt();
        assert!((p.rabi_omega() / GHZ - expect).abs() < 1e-12);
        assert!((expect - 11.0866).abs() < 1e-4);
    }

    #[test]
    fn rotating_propagator_examples() {
        let p = proto(6.0, 0.7, -6.0);
        assert!(propagator_rotating(&p, 0.0).distance(&M::identity()) < 1e-15);
        let period = 2.0 * PI / p.rabi_omega();
        assert!(propagator_rotating(&p, period).distance(&(-M::identity())) < 1e-14);
    }

    #[test]
    fn rotating_propagator_equals_closed_form_exponential() {
        for (wj, a, w) in [(1.0, 0.3, -6.0), (6.0, 1.2, 4.0), (2.5, FRAC_PI_2, 0.0)] {
            let p = proto(wj, a, w);
            for t in [0.0, 0.3e-9, 1.7e-9, 9.1e-9] {
                let v = p.rotating_axis();
                let arg = [-v[0] * t / 2.0, -v[1] * t / 2.0, -v[2] * t / 2.0];
                let via_expi = pauli_expi(arg).unwrap();
                assert!(propagator_rotating(&p, t).distance(&via_expi) < 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_rabi_uses_limit() {
        // α = 0 at exact resonance: H_R = 0.
        let p = proto(6.0, 0.0, 6.0);
        assert!(p.is_degenerate());
        let u = propagator_rotating(&p, 3e-9);
        assert!(u.is_finite());
        assert!(u.distance(&M::identity()) < 1e-15);
        assert!(propagator_lab(&p, 3e-9).is_unitary(1e-12));
    }

    #[test]
    fn lab_propagator_examples() {
        let p = proto(1.0, 0.0, -6.0);
        assert!(propagator_lab(&p, 0.0).distance(&M::identity()) < 1e-15);
        let u = propagator_lab(&p, 1.3e-9);
        assert!(u.a12.norm() < 1e-15 && u.a21.norm() < 1e-15);
    }

    #[test]
    fn lab_propagator_matches_printed_entries() {
        let p = proto(1.0, FRAC_PI_4, -6.0);
        let t = 0.81e-9;
        let (w, wj, a) = (p.omega, p.omega_j, p.alpha);
        let big = p.rabi_omega();
        let (s, co) = (big * t / 2.0).sin_cos();
        let i = Complex::new(0.0, 1.0);
        let r11 = cr(co) - i * ((wj * a.cos() - w) / big * s);
        let r12 = -i * (wj * a.sin() / big * s);
        let r22 = cr(co) + i * ((wj * a.cos() - w) / big * s);
        let d1 = (-i * (w * t / 2.0)).exp();
        let d2 = (i * (w * t / 2.0)).exp();
        let expect = M::new(d1 * r11, d1 * r12, d2 * r12, d2 * r22);
        assert!(propagator_lab(&p, t).distance(&expect) < 1e-14);
    }

    #[test]
    fn f32_propagator_is_unitary() {
        let p = FieldProtocol::<f32>::new(1e9, 0.5, -6e9, 1e-9).unwrap();
        assert!(propagator_lab(&p, 0.7e-9).is_unitary(f32::structural_tol()));
        let h = hamiltonian(&p, 0.2e-9);
        assert!(h.is_hermitian(f32::structural_tol()));
    }
}
