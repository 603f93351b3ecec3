//! Level-one modular forms mod `p`, Hecke operators on q-expansions, and
//! the structure of the cuspidal Hecke algebra localized at a
//! `(p, k)`-Eisenstein maximal ideal.

mod hecke;
mod qseries;

pub use hecke::{
    apply_t_ell, default_generator_primes, eisenstein_congruence_exists,
    eisenstein_local_structure, hecke_matrix, hecke_matrix_on_basis, sturm_primes,
    EisensteinLocalReport, HeckeMatrix,
};
pub use qseries::{basis_forms, victor_miller_basis, QSeries, VictorMillerBasis};

use crate::bernoulli::BernoulliError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModformsError {
    #[error("weight k = {0} must be even and >= 4")]
    BadWeight(u64),
    #[error("p = {0} must be a prime >= 5 here")]
    BadPrime(u64),
    #[error("precision {given} insufficient (need >= {needed})")]
    InsufficientPrecision { given: usize, needed: usize },
    #[error("echelonization failure: the monomial matrix is singular (internal error)")]
    EchelonizationFailure,
    #[error("the Hecke operator T_p is excluded at this level (l = p = {0})")]
    EllEqualsP(u64),
    #[error("l = {0} is not prime")]
    EllNotPrime(u64),
    #[error("generator list must avoid p = {0} and contain only primes")]
    BadGeneratorList(u64),
    #[error("B_{k} is not p-integral at p = {p} (von Staudt-Clausen pole)")]
    VonStaudtPole { p: u64, k: u64 },
    #[error(transparent)]
    Bernoulli(#[from] BernoulliError),
}

/// Dimension of the full space of level-one modular forms of even weight
/// `k >= 0`: `floor(k/12) + 1`, minus one exactly when `k = 2 mod 12`.
pub fn dim_modular_forms(k: u64) -> usize {
    assert!(k % 2 == 0, "odd weights have no level-one forms");
    let base = (k / 12) as usize;
    if k % 12 == 2 {
        base
    } else {
        base + 1
    }
}

/// Dimension of the cusp subspace for even `k >= 4`.
pub fn dim_cusp_forms(k: u64) -> usize {
    dim_modular_forms(k).saturating_sub(1)
}
