//! Exact arithmetic substrate: finite fields, truncated u-polynomials,
//! precision-tracked p-adic residues, and dense `F_p` linear algebra.

mod fq;
mod linalg;
mod padic;
mod upoly;

pub use fq::{fq_make, FqElem, FqField};
pub use linalg::{intersect_column_spans, FpMat, SpanBuilder};
pub use padic::{modinv_u128, modpow_u128, PadicApprox};
pub use upoly::UPoly;

use thiserror::Error;

/// Errors raised by the arithmetic substrate.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {0} is even; an odd prime is required")]
    EvenPrime(u64),
    #[error("extension degree {0} out of range (1..=8)")]
    DegreeOutOfRange(usize),
    #[error("no irreducible polynomial found within the search bound (internal error)")]
    NoIrreducible,
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("ramification degree e = {e} must be positive and coprime to p = {p}")]
    BadRamification { e: usize, p: u64 },
    #[error("operands belong to different fields or rings")]
    MixedStructures,
    #[error("polynomial does not lie in the ideal (u^{0})")]
    NotInIdeal(usize),
    #[error("precision {0} out of range (must be >= 1)")]
    BadPrecision(u32),
    #[error("p^N = {p}^{n} does not fit the working integer width")]
    PrecisionOverflow { p: u64, n: u32 },
    #[error("residue is not divisible by p; cannot divide by p")]
    NotDivisibleByP,
    #[error("division by a multiple of p is not a unit division")]
    UnitDivisorDivisibleByP,
    #[error("precision exhausted: dividing by p would drop precision below 1")]
    PrecisionExhausted,
}
