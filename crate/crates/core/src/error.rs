use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain where the object is defined.
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// A caller violated a documented precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The majorant series does not converge at the requested radius.
    #[error("series diverges at rho = {rho}")]
    Divergence { rho: f64 },

    /// The stored coefficients are too few to meet the requested tolerance.
    #[error("order {order} is insufficient: tail {tail:e} exceeds tolerance {tol:e}")]
    InsufficientOrder { order: usize, tail: f64, tol: f64 },

    /// The residual does not change sign over the bracket.
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {flo}, f(hi) = {fhi}")]
    Bracket {
        lo: f64,
        hi: f64,
        flo: f64,
        fhi: f64,
    },

    /// A non-finite value or an undecidable sign appeared during evaluation.
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            expected,
        }
    }
}
