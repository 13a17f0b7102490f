//! Dense complex 2×2 linear algebra.
//!
//! Everything the spin-1/2 model needs: Pauli constants and decomposition,
//! products, adjoints, traces, commutators, and the closed-form exponential
//! `exp(i a·σ) = cos|a| I + i sin|a|/|a| (a·σ)`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Below this |a| the factor sin|a|/|a| is replaced by its series 1 − |a|²/6.
pub const SMALL_ANGLE: f64 = 1e-8;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn cr<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// A 2×2 complex matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMat2<T> {
    pub a11: Complex<T>,
    pub a12: Complex<T>,
    pub a21: Complex<T>,
    pub a22: Complex<T>,
}

/// A two-component spinor in the (|↑⟩, |↓⟩) basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ket2<T> {
    pub c_up: Complex<T>,
    pub c_down: Complex<T>,
}

impl<T: Real> ComplexMat2<T> {
    pub fn new(a11: Complex<T>, a12: Complex<T>, a21: Complex<T>, a22: Complex<T>) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn zero() -> Self {
        let z = cr(T::zero());
        Self::new(z, z, z, z)
    }

    pub fn identity() -> Self {
        Self::diag(cr(T::one()), cr(T::one()))
    }

    pub fn diag(d1: Complex<T>, d2: Complex<T>) -> Self {
        let z = cr(T::zero());
        Self::new(d1, z, z, d2)
    }

    pub fn sigma_x() -> Self {
        let (z, o) = (cr(T::zero()), cr(T::one()));
        Self::new(z, o, o, z)
    }

    pub fn sigma_y() -> Self {
        let z = cr(T::zero());
        Self::new(z, c(T::zero(), -T::one()), c(T::zero(), T::one()), z)
    }

    pub fn sigma_z() -> Self {
        Self::diag(cr(T::one()), cr(-T::one()))
    }

    /// `c0 I + cx σx + cy σy + cz σz` for real coefficients.
    pub fn from_pauli(c0: T, v: [T; 3]) -> Self {
        Self::new(cr(c0 + v[2]), c(v[0], -v[1]), c(v[0], v[1]), cr(c0 - v[2]))
    }

    /// Coefficients `(c0, [cx, cy, cz])` with `m = c0 I + Σ ck σk`.
    ///
    /// All four are real exactly when `m` is Hermitian.
    pub fn pauli_components(&self) -> (Complex<T>, [Complex<T>; 3]) {
        let half = T::lit(0.5);
        let c0 = (self.a11 + self.a22).scale(half);
        let cx = (self.a12 + self.a21).scale(half);
        // a21 − a12 = 2i cy
        let cy = (self.a21 - self.a12) * c(T::zero(), -half);
        let cz = (self.a11 - self.a22).scale(half);
        (c0, [cx, cy, cz])
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|z| z.scale(s))
    }

    pub fn scale_c(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self::new(f(self.a11), f(self.a12), f(self.a21), f(self.a22))
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.a11.conj(), self.a21.conj(), self.a12.conj(), self.a22.conj())
    }

    pub fn trace(&self) -> Complex<T> {
        self.a11 + self.a22
    }

    pub fn det(&self) -> Complex<T> {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn apply(&self, k: &Ket2<T>) -> Ket2<T> {
        Ket2 {
            c_up: self.a11 * k.c_up + self.a12 * k.c_down,
            c_down: self.a21 * k.c_up + self.a22 * k.c_down,
        }
    }

    /// `⟨bra| self |ket⟩`.
    pub fn sandwich(&self, bra: &Ket2<T>, ket: &Ket2<T>) -> Complex<T> {
        bra.inner(&self.apply(ket))
    }

    pub fn entries(&self) -> [Complex<T>; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn max_abs(&self) -> T {
        self.entries().iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// Frobenius norm, rescaled by the largest entry so that SI-sized
    /// operators (~1e-25) do not underflow when squared in `f32`.
    pub fn frobenius_norm(&self) -> T {
        let m = self.max_abs();
        if m == T::zero() || !m.is_finite() {
            return m;
        }
        let s = self
            .entries()
            .iter()
            .map(|z| (*z / m).norm_sqr())
            .fold(T::zero(), |a, b| a + b);
        m * s.sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `‖m − m†‖_F ≤ tol · ‖m‖_F` (relative, so it applies to SI-scaled
    /// Hamiltonians as well as to density matrices).
    pub fn is_hermitian(&self, tol: T) -> bool {
        (*self - self.adjoint()).frobenius_norm() <= tol * self.frobenius_norm()
    }

    /// `‖m m† − I‖_F ≤ tol`.
    pub fn is_unitary(&self, tol: T) -> bool {
        (*self * self.adjoint() - Self::identity()).frobenius_norm() <= tol
    }

    /// Eigenvalues of a Hermitian matrix, ascending. Uses only the Hermitian
    /// part of `self`.
    pub fn hermitian_eigenvalues(&self) -> [T; 2] {
        let half = T::lit(0.5);
        let a = self.a11.re;
        let d = self.a22.re;
        let b = (self.a12 + self.a21.conj()).scale(half);
        let mean = (a + d) * half;
        let r = ((a - d) * half).hypot(b.norm());
        [mean - r, mean + r]
    }

    pub fn distance(&self, other: &Self) -> T {
        (*self - *other).frobenius_norm()
    }
}

impl<T: Real> Add for ComplexMat2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a11 + o.a11, self.a12 + o.a12, self.a21 + o.a21, self.a22 + o.a22)
    }
}

impl<T: Real> Sub for ComplexMat2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a11 - o.a11, self.a12 - o.a12, self.a21 - o.a21, self.a22 - o.a22)
    }
}

impl<T: Real> Neg for ComplexMat2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|z| -z)
    }
}

impl<T: Real> Mul for ComplexMat2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}

impl<T: Real> Ket2<T> {
    pub fn new(c_up: Complex<T>, c_down: Complex<T>) -> Self {
        Self { c_up, c_down }
    }

    pub fn up() -> Self {
        Self::new(cr(T::one()), cr(T::zero()))
    }

    pub fn down() -> Self {
        Self::new(cr(T::zero()), cr(T::one()))
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.c_up.conj() * other.c_up + self.c_down.conj() * other.c_down
    }

    pub fn norm_sqr(&self) -> T {
        self.c_up.norm_sqr() + self.c_down.norm_sqr()
    }

    pub fn scale_c(&self, s: Complex<T>) -> Self {
        Self::new(self.c_up * s, self.c_down * s)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.c_up - o.c_up, self.c_down - o.c_down)
    }

    pub fn is_normalized(&self, tol: T) -> bool {
        (self.norm_sqr() - T::one()).abs() <= tol
    }
}

/// `exp(i a·σ)` in closed form.
pub fn pauli_expi<T: Real>(a: [T; 3]) -> Result<ComplexMat2<T>> {
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain(format!("pauli_expi: non-finite vector {a:?}")));
    }
    let norm = a[0].hypot(a[1]).hypot(a[2]);
    let sinc = if norm < T::lit(SMALL_ANGLE) {
        T::one() - norm * norm / T::lit(6.0)
    } else {
        norm.sin() / norm
    };
    let (cos, s) = (norm.cos(), sinc);
    // cos I + i s (a·σ)
    Ok(ComplexMat2::new(
        c(cos, s * a[2]),
        c(s * a[1], s * a[0]),
        c(-s * a[1], s * a[0]),
        c(cos, -s * a[2]),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type M = ComplexMat2<f64>;

    fn i() -> Complex<f64> {
        Complex::new(0.0, 1.0)
    }

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = (M::sigma_x(), M::sigma_y(), M::sigma_z());
        for s in [x, y, z] {
            assert_eq!(s * s, M::identity());
            assert_eq!(s.adjoint(), s);
            assert_eq!(s.trace(), cr(0.0));
        }
        assert_eq!(x.commutator(&y), z.scale_c(i() * 2.0));
        assert_eq!(y.commutator(&z), x.scale_c(i() * 2.0));
        assert_eq!(z.commutator(&x), y.scale_c(i() * 2.0));
    }

    #[test]
    fn expi_examples() {
        let id = pauli_expi([0.0, 0.0, 0.0]).unwrap();
        assert_eq!(id, M::identity());

        let d = pauli_expi([0.0, 0.0, PI / 2.0]).unwrap();
        assert!(d.distance(&M::diag(i(), -i())) < 1e-15);

        let m = pauli_expi([PI, 0.0, 0.0]).unwrap();
        assert!(m.distance(&(-M::identity())) < 1e-15);

        assert!(pauli_expi([f64::NAN, 0.0, 0.0]).is_err());
        assert!(pauli_expi([0.0, f64::INFINITY, 0.0]).is_err());
    }

    #[test]
    fn expi_small_angle_branch_is_continuous() {
        let below = pauli_expi([0.0, 0.0, 0.99e-8]).unwrap();
        let above = pauli_expi([0.0, 0.0, 1.01e-8]).unwrap();
        assert!(below.distance(&above) < 1e-9);
        assert!(below.is_unitary(1e-15));
    }

    #[test]
    fn pauli_components_roundtrip() {
        let m = M::from_pauli(0.3, [1.0, -2.0, 0.5]);
        let (c0, v) = m.pauli_components();
        assert!((c0 - cr(0.3)).norm() < 1e-15);
        assert!((v[0] - cr(1.0)).norm() < 1e-15);
        assert!((v[1] - cr(-2.0)).norm() < 1e-15);
        assert!((v[2] - cr(0.5)).norm() < 1e-15);
        assert!(m.is_hermitian(1e-15));
    }

    #[test]
    fn hermitian_eigenvalues_of_pauli_vector() {
        let m = M::from_pauli(1.0, [0.0, 3.0, 4.0]);
        let [lo, hi] = m.hermitian_eigenvalues();
        assert!((lo + 4.0).abs() < 1e-14 && (hi - 6.0).abs() < 1e-14);
    }

    #[test]
    fn frobenius_norm_survives_si_scale_in_f32() {
        let m = ComplexMat2::<f32>::sigma_x().scale(3e-25);
        let n = m.frobenius_norm();
        assert!((n / (3e-25 * 2f32.sqrt()) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn f32_expi_is_unitary() {
        let u = pauli_expi([0.3f32, -1.2, 2.0]).unwrap();
        assert!(u.is_unitary(f32::structural_tol()));
    }
}
