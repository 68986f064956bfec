use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty compact set")]
    EmptyCompactSet,
    #[error("gap undefined: need at least two points")]
    GapUndefined,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("overlap: {0}")]
    Overlap(String),
    #[error("anchor mismatch: {0}")]
    AnchorMismatch(String),
    #[error("inconsistent limit_perm: {0}")]
    InconsistentPerm(String),
    #[error("not isolated: {0}")]
    NotIsolated(String),
    #[error("not periodic: {0}")]
    NotPeriodic(String),
    #[error("point not in X: {0}")]
    NotInSpace(String),
    #[error("point not in orbit: {0}")]
    NotInOrbit(String),
    #[error("system is not hyper-expansive: {0}")]
    NotHyperExpansive(String),
    #[error("invariant-set cap exceeded: at least {lower_bound} sets (cap {cap})")]
    CapExceeded { lower_bound: u128, cap: usize },
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

impl Error {
    /// True for errors caused by a size/resource limit rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::ResourceBound(_) | Error::CapExceeded { .. })
    }
}
