//! Explicit discrete-log invariants attached to primes N ≡ 1 (mod p):
//! half-sums and S_i sums, twisted Stickelberger elements, Morita's N-adic
//! Gamma function mod N, Jacobi sums and Gauss-sum p-th powers in Z[ζ_p],
//! and checkers that test the resulting congruences over ranges of N.

pub mod error;
pub mod modarith;
pub mod padic;
pub mod cyclotomic;
pub mod gamma;
pub mod stickelberger;
pub mod gauss;
pub mod report;
pub mod criteria;
pub mod scan;

pub use error::{Error, Result};
pub use modarith::{DLog, ModCtx};
pub use padic::{CharOmegaPower, PadicResidue};
pub use report::{CheckKind, CheckReport, Verdict};
pub use criteria::{CheckOptions, Prepared};
pub use scan::ScanConfig;
