use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no convergence within {terms} terms (reached error {err:e}, wanted {target:e})")]
    NonConvergence { terms: usize, err: f64, target: f64 },
    #[error("value overflows f64 (log value {log_value}); use the log-domain routine")]
    Overflow { log_value: f64 },
    #[error("argument outside domain: {0}")]
    DomainError(String),
    #[error("could not bracket a sign change: {0}")]
    BracketFailure(String),
    #[error("J_{n}({x}) is within {threshold:e} of zero")]
    PoleProximity { n: u32, x: f64, threshold: f64 },
    #[error("quadrature did not converge: last change {change:e} with {points} points")]
    QuadratureUnconverged { change: f64, points: usize },
    #[error("envelope diverges: geometric ratio {q} >= 1")]
    DivergentEnvelope { q: f64 },
    #[error("a passed nondegeneracy certificate for N = {0} is required")]
    NondegeneracyRequired(u32),
    #[error("ramp exceeds derivative budget: {0}")]
    RampViolation(String),
    #[error("K_N = {kn} too large for N = {n}: slack {slack:e} exceeds N^(-2/3) = {limit:e}")]
    KnTooLarge { n: u32, kn: f64, slack: f64, limit: f64 },
    #[error("certification failed: {0}")]
    CertificationFailed(String),
}

impl Error {
    /// True for failures of a certificate or audit, as opposed to numerical breakdowns.
    pub fn is_certification(&self) -> bool {
        matches!(
            self,
            Error::CertificationFailed(_) | Error::RampViolation(_) | Error::NondegeneracyRequired(_)
        )
    }
}
