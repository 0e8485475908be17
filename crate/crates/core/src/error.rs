use thiserror::Error;

/// Errors raised by map construction, topology enumeration and the oracle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a self-map needs at least one point")]
    EmptyDomain,
    #[error("successor entry {value} at index {index} is outside 0..{n}")]
    IndexOutOfRange { index: usize, value: usize, n: usize },
    #[error("domain size {n} exceeds the enumeration cap {cap}")]
    DomainTooLarge { n: usize, cap: usize },
    #[error("preorbit enumeration exceeded the cap of {max_count} paths")]
    LimitExceeded { max_count: usize },
    #[error("stability certificate failed at point {point}, step {step}")]
    CertificateFailure { point: usize, step: usize },
    #[error("oracle budget exceeded: n = {n}, cap = {cap}")]
    BudgetExceeded { n: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
