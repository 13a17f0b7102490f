//! Physical constants and the unit system carried by protocols and baths.

use crate::scalar::Real;

/// Reduced Planck constant, J·s (CODATA 2018).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K (CODATA 2018).
pub const K_B: f64 = 1.380_649e-23;
/// The command-line "GHz": 1e9 rad/s.
pub const GHZ: f64 = 1e9;

/// Values of ħ and k_B used to turn frequencies into energies and
/// temperatures into inverse energies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units<T> {
    pub hbar: T,
    pub k_b: T,
}

impl<T: Real> Units<T> {
    /// SI units with the CODATA constants.
    pub fn si() -> Self {
        Self {
            hbar: T::lit(HBAR),
            k_b: T::lit(K_B),
        }
    }

    /// ħ = k_B = 1.
    pub fn natural() -> Self {
        Self {
            hbar: T::one(),
            k_b: T::one(),
        }
    }

    pub fn is_natural(&self) -> bool {
        self.hbar == T::one() && self.k_b == T::one()
    }
}

impl<T: Real> Default for Units<T> {
    fn default() -> Self {
        Self::si()
    }
}
