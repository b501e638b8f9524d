use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("closed form requires phi = pi, theta = 0 and real gamma; use quadrature for {0}")]
    PhaseNotSpecialized(&'static str),
    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e}")]
    NonConvergence { estimate: f64, error: f64 },
    #[error("numerical degeneracy: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}
