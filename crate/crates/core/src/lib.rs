//! Exactly solvable spin-1/2 quantum Otto engine driven by a rotating
//! magnetic field.
//!
//! The field keeps a fixed magnitude, so the instantaneous energy levels
//! never move; all the work a rotating stroke does comes from coherences
//! between the instantaneous eigenstates. The crate evaluates that
//! decomposition in closed form ([`thermo`]), assembles the four-stroke
//! cycle ([`cycle`]) and checks every closed form against independent
//! numerics ([`oracle`], [`ensemble`]).
//!
//! All physics is generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix the common `f64` instantiations.

// `!(x > 0)` is the NaN-rejecting form used by every validator.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod cycle;
pub mod dynamics;
pub mod ensemble;
pub mod error;
pub mod oracle;
pub mod scalar;
pub mod state;
pub mod thermo;
pub mod units;

pub use algebra::{pauli_expi, ComplexMat2, Ket2};
pub use cycle::{
    entropy_generation, otto_limit, run_cycle, sweep, CycleParams, CycleReport, LambdaBinding, OttoLimit, SweepGrid,
    SweepPoint,
};
pub use dynamics::{EigenFrame, FieldProtocol};
pub use error::{Error, Result};
pub use scalar::Real;
pub use state::{BathSpec, DensityMatrix, EffectiveTemperature, InstantaneousElements};
pub use thermo::{PowerSplit, StrokeLedger, StrokeWork};
pub use units::Units;

pub use num_complex::Complex;

pub type Complex64 = Complex<f64>;
pub type Mat2 = ComplexMat2<f64>;
pub type Mat2F32 = ComplexMat2<f32>;
pub type Ket = Ket2<f64>;
pub type Protocol = FieldProtocol<f64>;
pub type Protocol32 = FieldProtocol<f32>;
pub type Density = DensityMatrix<f64>;
pub type Density32 = DensityMatrix<f32>;
pub type Bath = BathSpec<f64>;
pub type Params = CycleParams<f64>;
pub type Params32 = CycleParams<f32>;
pub type Report = CycleReport<f64>;
pub type Ledger = StrokeLedger<f64>;
