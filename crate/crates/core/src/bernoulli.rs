//! Classical and generalized Bernoulli numbers, the Teichmüller character,
//! and the divisibility predicates behind irregular-pair scans.
//!
//! Conventions. Classical Bernoulli numbers use the generating series
//! `t e^t / (e^t - 1)`, so `B_1 = +1/2`; all even-index values agree with
//! the other common convention, and only even indices feed the predicates.
//! Generalized values `B_{n,omega^j}` are computed for the conductor-p
//! Teichmüller powers through the finite sum
//!
//! ```text
//!   B_{n,chi} = sum_{a=1}^{p-1} chi(a) sum_{i=0}^{n} C(n,i) B_i a^{n-i} p^{i-1}
//! ```
//!
//! (the Bernoulli-polynomial expansion of the twisted generating series;
//! here the inner `B_i` are the `B_1 = -1/2` variant, which only affects
//! the explicit `i = 1` term). The sum over `a` runs over `1..p-1`: the
//! omitted `a = 0` term vanishes since `chi(0) = 0`. The `i = 0` term is
//! the only one with negative p-valuation; it is handled by explicit
//! valuation bookkeeping at guard precision `N + 2`, so results carry a
//! justified precision `N`.

use crate::algebra::{modinv_u128, modpow_u128, AlgebraError, PadicApprox};
use crate::primes::is_prime;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BernoulliError {
    #[error("index {0} exceeds the desk-scale bound {1}")]
    IndexTooLarge(usize, usize),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("residue {a} is not invertible mod {p}")]
    BadResidue { a: u64, p: u64 },
    #[error("k = {k} out of range for p = {p}")]
    KOutOfRange { p: u64, k: u64 },
    #[error("n must be >= 1")]
    BadIndex,
    #[error("B_{{{n},omega^{j}}} mod {p} is not p-integral (the i = 0 term has valuation -1)")]
    NotPIntegral { p: u64, n: usize, j: u64 },
    #[error("B_{index} has p = {p} in its denominator (von Staudt-Clausen pole)")]
    VonStaudtPole { p: u64, index: u64 },
    #[error("value has p = {p} in its denominator; no residue mod p^{n} exists")]
    DenominatorPole { p: u64, n: u32 },
    #[error("requested precision {requested} unobtainable; achievable precision is {achievable}")]
    PrecisionUnobtainable { requested: u32, achievable: u32 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

const BERNOULLI_BOUND: usize = 5000;

/// Incrementally extended table of exact Bernoulli numbers.
///
/// Callers that scan many indices should hold one table; `bernoulli_exact`
/// builds a fresh per-call table, so concurrent use never shares state.
#[derive(Debug, Clone, Default)]
pub struct BernoulliTable {
    values: Vec<BigRational>,
}

impl BernoulliTable {
    pub fn new() -> Self {
        BernoulliTable {
            values: vec![BigRational::one()],
        }
    }

    /// `B_n`, extending the table as needed via the recurrence
    /// `sum_{j=0}^{n} C(n+1, j) B_j = n + 1`.
    pub fn get(&mut self, n: usize) -> &BigRational {
        while self.values.len() <= n {
            let m = self.values.len();
            let mut acc = BigRational::zero();
            // C(m+1, j) built incrementally
            let mut binom = BigInt::one();
            for (j, bj) in self.values.iter().enumerate() {
                acc += bj * BigRational::from_integer(binom.clone());
                binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
            }
            let numer = BigRational::from_integer(BigInt::from(m + 1)) - acc;
            self.values
                .push(numer / BigRational::from_integer(BigInt::from(m + 1)));
        }
        &self.values[n]
    }
}

/// Exact `B_n` under the `t e^t/(e^t - 1)` convention (`B_1 = +1/2`).
pub fn bernoulli_exact(n: usize) -> Result<BigRational, BernoulliError> {
    if n > BERNOULLI_BOUND {
        return Err(BernoulliError::IndexTooLarge(n, BERNOULLI_BOUND));
    }
    let mut table = BernoulliTable::new();
    Ok(table.get(n).clone())
}

/// p-adic valuation of a nonzero integer.
fn int_valuation(x: &BigInt, p: u64) -> u64 {
    debug_assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut v = 0;
    let mut x = x.clone();
    while (&x % &p).is_zero() {
        x /= &p;
        v += 1;
    }
    v
}

/// p-adic valuation of a rational; `None` for zero.
pub fn rational_valuation(r: &BigRational, p: u64) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    Some(int_valuation(r.numer(), p) as i64 - int_valuation(r.denom(), p) as i64)
}

/// Reduce a p-integral rational mod `p^n`.
pub fn rational_mod_pn(r: &BigRational, p: u64, n: u32) -> Result<u128, BernoulliError> {
    let modulus = BigInt::from(p).pow(n);
    if (r.denom() % BigInt::from(p)).is_zero() {
        return Err(BernoulliError::DenominatorPole { p, n });
    }
    let num = r.numer().mod_floor(&modulus);
    let den = r.denom().mod_floor(&modulus);
    let m = modulus.to_u128().expect("p^n fits u128 by construction");
    let num = num.to_u128().expect("reduced residue fits");
    let den = den.to_u128().expect("reduced residue fits");
    Ok(num * modinv_u128(den, m) % m)
}

/// Teichmüller lift `omega(a) mod p^N`, computed as `a^(p^(N-1)) mod p^N`;
/// satisfies `omega(a) = a mod p` and `omega(a)^(p-1) = 1 mod p^N`.
pub fn teichmuller(a: u64, p: u64, precision: u32) -> Result<PadicApprox, BernoulliError> {
    if p < 3 || !is_prime(p) {
        return Err(BernoulliError::NotOddPrime(p));
    }
    if a == 0 || a % p == 0 {
        return Err(BernoulliError::BadResidue { a, p });
    }
    let probe = PadicApprox::new(p, precision, 0)?; // validates p^N bound
    let m = probe.modulus();
    let exponent = (p as u128).pow(precision - 1);
    let w = modpow_u128(a as u128, exponent, m);
    Ok(PadicApprox::new(p, precision, w)?)
}

/// `sum_{a=1}^{p-1} omega(a)^j a^m mod p^M`.
fn char_power_sum(omega: &[u128], j: u64, m: u64, modulus: u128) -> u128 {
    let mut acc = 0u128;
    for (idx, &w) in omega.iter().enumerate() {
        let a = idx as u128 + 1;
        let t = modpow_u128(w, j as u128, modulus) * modpow_u128(a, m as u128, modulus) % modulus;
        acc = (acc + t) % modulus;
    }
    acc
}

/// `B_{n, omega^j} mod p^N` for the conductor-p character `omega^j`
/// (the principal character for `j = 0`).
///
/// Errors with `NotPIntegral` exactly when `(p-1) | (j+n)`, the case where
/// the value has p-valuation `-1`.
pub fn gen_bernoulli_omega(
    n: usize,
    j: u64,
    p: u64,
    precision: u32,
) -> Result<PadicApprox, BernoulliError> {
    if p < 3 || !is_prime(p) {
        return Err(BernoulliError::NotOddPrime(p));
    }
    if n == 0 {
        return Err(BernoulliError::BadIndex);
    }
    if precision == 0 || precision > 4 {
        return Err(BernoulliError::PrecisionUnobtainable {
            requested: precision,
            achievable: 4,
        });
    }
    let j = j % (p - 1);
    if (j + n as u64) % (p - 1) == 0 {
        return Err(BernoulliError::NotPIntegral { p, n, j });
    }

    let guard = precision + 2;
    let modulus = PadicApprox::new(p, guard, 0)?.modulus();
    let big_modulus = BigInt::from(p).pow(guard);

    // omega(a) at guard precision, a = 1..p-1
    let omega: Vec<u128> = (1..p)
        .map(|a| teichmuller(a, p, guard).map(|w| w.residue()))
        .collect::<Result<_, _>>()?;

    // i = 0 term: (1/p) * sum omega^j(a) a^n; the character sum is
    // divisible by p because (p-1) does not divide j + n.
    let s0 = char_power_sum(&omega, j, n as u64, modulus);
    let mut total = PadicApprox::new(p, guard, s0)?.div_p()?; // precision guard - 1

    // i = 1 term: C(n,1) * (-1/2) * sum omega^j(a) a^{n-1}
    let s1 = char_power_sum(&omega, j, n as u64 - 1, modulus);
    let t1 = PadicApprox::new(p, guard, s1)?
        .mul_i128(n as i128)
        .div_unit(2)?
        .mul_i128(-1);
    total = total.add(&t1)?;

    // i >= 2 even: C(n,i) B_i p^{i-1} * sum omega^j(a) a^{n-i}; von Staudt
    // puts at most one p in the denominator of B_i, absorbed into p^{i-1}.
    let mut table = BernoulliTable::new();
    let mut binom = BigInt::from(n) * BigInt::from(n - 1) / BigInt::from(2); // C(n,2)
    for i in 2..=n {
        if i % 2 == 0 {
            let bi = table.get(i).clone();
            let den_val = int_valuation(bi.denom(), p);
            debug_assert!(den_val <= 1, "von Staudt-Clausen bounds the p-valuation");
            let power = i as u64 - 1 - den_val;
            if (power as u32) < guard {
                let num_red = bi.numer().mod_floor(&big_modulus).to_u128().unwrap();
                let den_unit = (bi.denom() / BigInt::from(p).pow(den_val as u32))
                    .mod_floor(&big_modulus)
                    .to_u128()
                    .unwrap();
                let c = binom.mod_floor(&big_modulus).to_u128().unwrap();
                let s = char_power_sum(&omega, j, (n - i) as u64, modulus);
                let mut term = c * num_red % modulus;
                term = term * modinv_u128(den_unit, modulus) % modulus;
                term = term * modpow_u128(p as u128, power as u128, modulus) % modulus;
                term = term * s % modulus;
                total = total.add(&PadicApprox::new(p, guard, term)?)?;
            }
        }
        // C(n, i+1) from C(n, i)
        binom = binom * BigInt::from(n - i) / BigInt::from(i + 1);
    }

    debug_assert!(total.precision() == guard - 1);
    Ok(total.truncate(precision)?)
}

/// Check `(1/n) B_{n, omega^{k-n}} = (1/k) B_k mod p` at the achievable
/// precision (>= 1). Requires `2 <= k < p-1`, `k` even, `n >= 1`.
pub fn gen_bernoulli_congruence(p: u64, k: u64, n: u64) -> Result<bool, BernoulliError> {
    if p < 3 || !is_prime(p) {
        return Err(BernoulliError::NotOddPrime(p));
    }
    if k < 2 || k + 1 >= p || k % 2 != 0 {
        return Err(BernoulliError::KOutOfRange { p, k });
    }
    if n == 0 {
        return Err(BernoulliError::BadIndex);
    }

    // left side: B_{n, omega^{k-n}} divided by n, tracking the p-part of n
    let mut v = 0u32;
    let mut unit = n;
    while unit % p == 0 {
        unit /= p;
        v += 1;
    }
    let j = (k as i64 - n as i64).rem_euclid(p as i64 - 1) as u64;
    let mut lhs = gen_bernoulli_omega(n as usize, j, p, 1 + v)?;
    for _ in 0..v {
        lhs = match lhs.div_p() {
            Ok(x) => x,
            // the generalized value lacks the p-divisibility that 1/n
            // demands, so the two sides cannot be congruent in Z_p
            Err(AlgebraError::NotDivisibleByP) => return Ok(false),
            Err(e) => return Err(e.into()),
        };
    }
    let lhs = lhs.div_unit(unit as i128)?;

    // right side: exact B_k / k reduced mod p
    let bk = bernoulli_exact(k as usize)?;
    let rhs = rational_mod_pn(&(bk / BigRational::from_integer(BigInt::from(k))), p, 1)?;

    Ok(lhs.truncate(1)?.residue() == rhs)
}

/// Which deformation setting a hypothesis report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HypothesisKind {
    /// Weight-2 level Gamma_1(p) setting, keyed by an even k.
    Gamma1,
    /// Level Gamma_0(p^2) setting, keyed by 0 < k < p-1.
    Gamma0PSquared,
}

/// Divisibility flags hypothesized by the main classification statements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum HypothesisFlags {
    Gamma1 {
        divides_bk: bool,
        exactly_divides_bk: bool,
        divides_b2_omega: bool,
        exactly_divides_b2_omega: bool,
    },
    Gamma0PSquared {
        k_prime: u64,
        k_admissible: bool,
        coprime_b_2k: bool,
        b_2k_note: Option<String>,
        coprime_b_p1_minus_2k: bool,
        /// Even representative of `p+1-2k mod (p-1)` actually tested.
        b_p1_minus_2k_index: u64,
        b_p1_minus_2k_note: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub p: u64,
    pub k: u64,
    pub flags: HypothesisFlags,
}

/// Divisibility of a p-integral `B_m` by `p` and `p^2`, on the exact
/// rational. Returns `(divides, exactly_divides, note)`; a von
/// Staudt-Clausen pole reports not-divisible with a note.
fn bk_divisibility(table: &mut BernoulliTable, m: u64, p: u64) -> (bool, bool, Option<String>) {
    if m % (p - 1) == 0 {
        return (
            false,
            false,
            Some(format!(
                "B_{m} is not p-integral at p = {p} (von Staudt-Clausen)"
            )),
        );
    }
    let b = table.get(m as usize);
    match rational_valuation(b, p) {
        None => (false, false, Some(format!("B_{m} = 0"))),
        Some(v) => (v >= 1, v == 1, None),
    }
}

/// Populate the hypothesis flags for a pair `(p, k)`.
///
/// `Gamma1` requires even `2 <= k < p-1`; `Gamma0PSquared` requires
/// `0 < k < p-1`. Divisibility of classical values is always decided on
/// exact rationals; the `B_{2,omega^{k-2}}` flags come from the exact
/// residue mod `p^2`.
pub fn hypothesis_report(
    p: u64,
    k: u64,
    kind: HypothesisKind,
) -> Result<HypothesisReport, BernoulliError> {
    if p < 3 || !is_prime(p) {
        return Err(BernoulliError::NotOddPrime(p));
    }
    let mut table = BernoulliTable::new();
    match kind {
        HypothesisKind::Gamma1 => {
            if k < 2 || k % 2 != 0 || k + 1 >= p {
                return Err(BernoulliError::KOutOfRange { p, k });
            }
            let (divides_bk, exactly_divides_bk, note) = bk_divisibility(&mut table, k, p);
            debug_assert!(note.is_none(), "k < p-1 rules out the pole");
            let j = (k - 2) % (p - 1);
            let x = gen_bernoulli_omega(2, j, p, 2)?;
            let divides = x.residue() % p as u128 == 0;
            let exactly = divides && !x.is_zero();
            Ok(HypothesisReport {
                p,
                k,
                flags: HypothesisFlags::Gamma1 {
                    divides_bk,
                    exactly_divides_bk,
                    divides_b2_omega: divides,
                    exactly_divides_b2_omega: exactly,
                },
            })
        }
        HypothesisKind::Gamma0PSquared => {
            if k == 0 || k + 1 >= p {
                return Err(BernoulliError::KOutOfRange { p, k });
            }
            let half = (p + 1) / 2;
            let rem = (half as i64 - k as i64).rem_euclid(p as i64 - 1) as u64;
            let k_prime = if rem == 0 { p - 1 } else { rem };
            let k_admissible = k != 1 && k != (p - 1) / 2 && k != (p + 1) / 2;
            let (c2k, _, b_2k_note) = bk_divisibility(&mut table, 2 * k, p);
            // normalize p+1-2k to an even representative >= 2 of its class
            // mod p-1 (Kummer congruence keeps the divisibility flag)
            let mut idx = (p as i64 + 1 - 2 * k as i64).rem_euclid(p as i64 - 1) as u64;
            if idx < 2 {
                idx += p - 1;
            }
            let (cp12k, _, b_p1_note) = bk_divisibility(&mut table, idx, p);
            Ok(HypothesisReport {
                p,
                k,
                flags: HypothesisFlags::Gamma0PSquared {
                    k_prime,
                    k_admissible,
                    coprime_b_2k: !c2k,
                    b_2k_note,
                    coprime_b_p1_minus_2k: !cp12k,
                    b_p1_minus_2k_index: idx,
                    b_p1_minus_2k_note: b_p1_note,
                },
            })
        }
    }
}

/// An irregular pair: even `2 <= k <= p-3` with `p` dividing the numerator
/// of `B_k`.
pub fn irregular_pairs(p: u64, table: &mut BernoulliTable) -> Vec<u64> {
    let mut out = Vec::new();
    if p < 5 {
        return out;
    }
    let mut k = 2;
    while k <= p - 3 {
        let b = table.get(k as usize);
        if rational_valuation(b, p).map(|v| v >= 1).unwrap_or(false) {
            out.push(k);
        }
        k += 2;
    }
    out
}
