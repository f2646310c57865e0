use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while evaluating densities and their building blocks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function (non-finite input, NaN integrand).
    #[error("domain error: {0}")]
    Domain(String),

    /// The momentum triangle is degenerate (zero area) where a finite value was required.
    #[error("singular geometry: {0}")]
    SingularGeometry(String),

    /// A quantity that must be consistent by construction was not.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    /// Damping extrapolation did not settle.
    #[error("extrapolation did not converge: {0}")]
    Convergence(String),

    /// The plane-wave emission peak lies outside the physical angular range.
    #[error("no emission peak: cos(theta) = {cosine} is outside [-1, 1]")]
    NoPeak { cosine: f64 },

    /// Adaptive quadrature ran out of subdivisions; carries the best estimate.
    #[error("quadrature failed to reach tolerance after {subdivisions} subdivisions (value {value:e}, error estimate {error:e})")]
    Accuracy {
        value: f64,
        error: f64,
        subdivisions: usize,
    },

    /// A kinematic energy denominator vanished or became negative.
    #[error("singular kinematics: {0}")]
    SingularKinematics(String),

    /// Every point of a scan evaluated to zero.
    #[error("scan produced an all-zero channel")]
    EmptyChannel,

    /// The beam carries no transverse momentum where one is required.
    #[error("degenerate beam: {0}")]
    DegenerateBeam(String),

    /// Invalid parameters or configuration.
    #[error("invalid configuration: {0}")]
    Config(String),
}
