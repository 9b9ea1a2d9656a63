use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("N = {n} is not congruent to 1 mod p = {p}")]
    CongruenceFailure { p: u64, n: u64 },
    #[error("{x} is not a unit mod {modulus}")]
    NotAUnit { x: u64, modulus: u64 },
    #[error("argument out of range: {0}")]
    Range(String),
    #[error("character omega^{i} is excluded here (p = {p})")]
    ExcludedCharacter { i: u64, p: u64 },
    #[error("no norm-{n} element with coefficients in [-{bound}, {bound}]")]
    NotFound { n: u64, bound: i64 },
    #[error("Jacobi sum J(chi^{i}, chi^{j}) is degenerate")]
    DegenerateCharacters { i: u64, j: u64 },
    #[error("element does not have N-adic valuation {expected}")]
    ValuationMismatch { expected: u32 },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("this check requires p = {expected}, got p = {got}")]
    WrongP { expected: u64, got: u64 },
    #[error("internal error: {0}")]
    Internal(String),
}
