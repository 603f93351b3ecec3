//! Exact arithmetic for Eisenstein-ideal computations.
//!
//! The crate has four mathematical layers and a reporting layer:
//!
//! * [`algebra`] — prime fields `F_p`, small extensions `F_q = F_{p^f}`,
//!   truncated polynomial rings `F_q[u]/u^{ep}`, precision-tracked p-adic
//!   residues, and dense linear algebra over `F_p`.
//! * [`bernoulli`] — classical and generalized Bernoulli numbers, the
//!   Teichmüller character, and the divisibility predicates that drive
//!   irregular-pair scans.
//! * [`breuil`] — rank-one Breuil modules killed by `p` over a tamely
//!   ramified base, the Oort–Tate dictionary, Hom spaces, order-`p^2`
//!   extension witnesses, and descent predicates at `e = p + 1`.
//! * [`modforms`] — level-one modular forms mod `p` on the Victor Miller
//!   basis, Hecke operators on q-expansions, and the structure of the
//!   cuspidal Hecke algebra localized at an Eisenstein maximal ideal.
//! * [`report`] — JSON/CSV report types shared by the CLI and the browser
//!   demo.
//!
//! Everything is exact: no floating point is used anywhere in the crate.

pub mod algebra;
pub mod bernoulli;
pub mod breuil;
pub mod modforms;
pub mod primes;
pub mod report;
