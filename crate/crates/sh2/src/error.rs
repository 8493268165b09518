//! Error type shared by all modules of the crate.

/// Errors reported by the numerical kernels and flows.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error in {context}: got {value}")]
    Domain {
        /// Which operation/argument rejected the value.
        context: &'static str,
        /// The offending value.
        value: f64,
    },

    /// A covector was required to lie on the unit cylinder h1^2 + h2^2 = 1.
    #[error("covector off the cylinder h1^2+h2^2=1: h1={h1}, h2={h2}")]
    OffCylinder {
        /// Horizontal component h1.
        h1: f64,
        /// Horizontal component h2.
        h2: f64,
    },

    /// Two tangent vectors passed to a pointwise operation have different base points.
    #[error("tangent vectors are based at different points")]
    BasePointMismatch,

    /// The state became non-finite during time integration.
    #[error("integration failed: state non-finite after t={last_good_time}")]
    Integration {
        /// Last time at which the state was still finite.
        last_good_time: f64,
    },

    /// An iterative kernel did not converge within its iteration budget.
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
