use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("r = {r} lies outside the function domain [{lo}, {hi}]")]
    OutOfDomain { r: f64, lo: f64, hi: f64 },

    #[error("sampled function lives on a different grid than the one requested")]
    GridMismatch,

    /// The wavefunction vanishes or changes sign, so `-κ χ'/χ` is singular.
    #[error("wavefunction has a node near r = {r}; superpotential is singular")]
    NodefulWavefunction { r: f64 },

    #[error("no bound state: {0}")]
    NoBoundState(String),

    /// The log argument of the general Riccati solution vanishes on a node.
    #[error("general Riccati solution is singular at r = {r}")]
    SingularSolution { r: f64 },

    /// The supplied first- or second-order energy does not make the order-k
    /// integrand vanish on average.
    #[error("order-{order} energy {eps} is inconsistent (relative mismatch {mismatch:.3e})")]
    InconsistentEps1 { order: u32, eps: f64, mismatch: f64 },

    #[error("integrand not negligible at r_max = {r_max} (relative tail weight {weight:.3e})")]
    Truncation { r_max: f64, weight: f64 },

    #[error("eigenvalue index {k} out of range for matrix of size {n}")]
    IndexOutOfRange { k: usize, n: usize },

    #[error("non-finite value `{what}` at r = {r}")]
    NonFinite { what: &'static str, r: f64 },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
