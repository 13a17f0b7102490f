use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A physical parameter or state fails its invariants.
    #[error("validation error: {0}")]
    Validation(String),
    /// The Runge-Kutta reference integrator lost trace beyond its budget.
    #[error("integrator error: trace drift {drift:e} exceeds {limit:e} after {steps} steps")]
    Integrator { drift: f64, limit: f64, steps: usize },
    #[error("quadrature error: {0}")]
    Quadrature(String),
    /// A bookkeeping identity (closure, second law) failed on a computed report.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
