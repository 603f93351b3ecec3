//! q-expansions mod `p` and the Victor Miller echelon basis.
//!
//! A `QSeries` is a truncated q-expansion `a_0 + a_1 q + .. + a_{P-1}
//! q^{P-1}` over `F_p` with a weight tag; products add weights and
//! truncate to the shorter precision. The Victor Miller basis of `M_k`
//! is built from the monomials `E4^alpha E6^beta Delta^gamma` with
//! `4 alpha + 6 beta + 12 gamma = k` (one per leading q-power) and
//! row-reduced to `a_i(f_j) = delta_{ij}`.

use super::{dim_cusp_forms, dim_modular_forms, ModformsError};
use crate::algebra::FpMat;
use crate::primes::is_prime;

/// A truncated q-expansion over `F_p` with weight bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    p: u64,
    weight: u64,
    coeffs: Vec<u64>,
}

impl QSeries {
    pub fn zero(p: u64, weight: u64, precision: usize) -> Self {
        assert!(precision >= 1, "precision must be positive");
        QSeries {
            p,
            weight,
            coeffs: vec![0; precision],
        }
    }

    pub fn from_coeffs(p: u64, weight: u64, coeffs: &[u64]) -> Self {
        assert!(!coeffs.is_empty());
        QSeries {
            p,
            weight,
            coeffs: coeffs.iter().map(|&c| c % p).collect(),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, n: usize) -> u64 {
        self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Addition of equal-weight series at the shorter precision.
    pub fn add(&self, other: &QSeries) -> QSeries {
        assert_eq!(self.p, other.p);
        assert_eq!(self.weight, other.weight, "weights must match to add");
        let n = self.coeffs.len().min(other.coeffs.len());
        QSeries {
            p: self.p,
            weight: self.weight,
            coeffs: (0..n)
                .map(|i| (self.coeffs[i] + other.coeffs[i]) % self.p)
                .collect(),
        }
    }

    pub fn scale(&self, c: u64) -> QSeries {
        let c = c % self.p;
        QSeries {
            p: self.p,
            weight: self.weight,
            coeffs: self.coeffs.iter().map(|&a| a * c % self.p).collect(),
        }
    }

    /// Product; weights add, precision truncates to the shorter input.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        assert_eq!(self.p, other.p);
        let n = self.coeffs.len().min(other.coeffs.len());
        let p = self.p;
        debug_assert!((n as u128) * (p as u128) * (p as u128) < (1 << 62));
        let mut out = vec![0u64; n];
        for i in 0..n {
            let a = self.coeffs[i];
            if a == 0 {
                continue;
            }
            for j in 0..n - i {
                out[i + j] += a * other.coeffs[j];
            }
        }
        for v in &mut out {
            *v %= p;
        }
        QSeries {
            p,
            weight: self.weight + other.weight,
            coeffs: out,
        }
    }

    pub fn pow(&self, mut n: usize) -> QSeries {
        let mut acc = one_series(self.p, self.precision());
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Multiply by `q` (degree shift), dropping the top coefficient.
    pub fn shift_by_q(&self) -> QSeries {
        let mut coeffs = vec![0u64; self.coeffs.len()];
        for i in 0..self.coeffs.len() - 1 {
            coeffs[i + 1] = self.coeffs[i];
        }
        QSeries {
            p: self.p,
            weight: self.weight,
            coeffs,
        }
    }

    pub fn with_weight(mut self, weight: u64) -> QSeries {
        self.weight = weight;
        self
    }
}

/// The weight-0 constant series 1.
fn one_series(p: u64, precision: usize) -> QSeries {
    let mut s = QSeries::zero(p, 0, precision);
    s.coeffs[0] = 1;
    s
}

/// `sum_{n>=1} sigma_r(n) q^n mod p` to the given precision.
fn sigma_series(p: u64, r: u32, precision: usize) -> Vec<u64> {
    let mut out = vec![0u64; precision];
    for d in 1..precision as u64 {
        let dr = crate::algebra::modpow_u128(d as u128, r as u128, p as u128) as u64;
        let mut m = d as usize;
        while m < precision {
            out[m] = (out[m] + dr) % p;
            m += d as usize;
        }
    }
    out
}

/// Euler's function `prod (1 - q^n)` via the pentagonal number theorem.
fn euler_function(p: u64, precision: usize) -> QSeries {
    let mut coeffs = vec![0u64; precision];
    coeffs[0] = 1;
    let mut k: i64 = 1;
    loop {
        let idx1 = k * (3 * k - 1) / 2;
        let idx2 = k * (3 * k + 1) / 2;
        if idx1 as usize >= precision && idx2 as usize >= precision {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { p - 1 };
        for idx in [idx1, idx2] {
            if (idx as usize) < precision {
                coeffs[idx as usize] = (coeffs[idx as usize] + sign) % p;
            }
        }
        k += 1;
    }
    QSeries::from_coeffs(p, 0, &coeffs)
}

/// The generators `E4`, `E6`, `Delta` mod `p` to the given precision.
///
/// `E4 = 1 + 240 sum sigma_3(n) q^n`, `E6 = 1 - 504 sum sigma_5(n) q^n`,
/// `Delta = q prod (1 - q^n)^24`.
pub fn basis_forms(p: u64, precision: usize) -> Result<(QSeries, QSeries, QSeries), ModformsError> {
    if precision < 2 {
        return Err(ModformsError::InsufficientPrecision {
            given: precision,
            needed: 2,
        });
    }
    let mut e4 = sigma_series(p, 3, precision);
    for v in e4.iter_mut() {
        *v = *v * (240 % p) % p;
    }
    e4[0] = 1;
    let mut e6 = sigma_series(p, 5, precision);
    for v in e6.iter_mut() {
        *v = *v * ((p - 504 % p) % p) % p;
    }
    e6[0] = 1;
    let delta = euler_function(p, precision)
        .pow(24)
        .shift_by_q()
        .with_weight(12);
    Ok((
        QSeries::from_coeffs(p, 4, &e4),
        QSeries::from_coeffs(p, 6, &e6),
        delta,
    ))
}

/// The echelonized basis of `M_k` mod `p` with its cuspidal tail.
#[derive(Debug, Clone)]
pub struct VictorMillerBasis {
    pub p: u64,
    pub k: u64,
    pub dim_m: usize,
    pub dim_s: usize,
    /// `forms[j]` has `a_i = delta_{ij}` for `i, j < dim_m`; the cusp
    /// forms are `forms[1..]`.
    pub forms: Vec<QSeries>,
}

impl VictorMillerBasis {
    pub fn cuspidal(&self) -> &[QSeries] {
        &self.forms[1..]
    }

    pub fn precision(&self) -> usize {
        self.forms.first().map_or(0, |f| f.precision())
    }
}

/// Exponents `(alpha, beta)` with `4 alpha + 6 beta = m`, preferring the
/// smallest `beta` in {0, 1}; defined for even `m >= 0`, `m != 2`.
fn e4_e6_exponents(m: u64) -> (u64, u64) {
    debug_assert!(m % 2 == 0 && m != 2);
    if m % 4 == 0 {
        (m / 4, 0)
    } else {
        ((m - 6) / 4, 1)
    }
}

/// Victor Miller basis of `M_k(F_p)`: one monomial `E4^a E6^b Delta^j`
/// per leading power `j`, row-reduced to the echelon normalization
/// `a_i(f_j) = delta_{ij}`.
pub fn victor_miller_basis(
    p: u64,
    k: u64,
    precision: usize,
) -> Result<VictorMillerBasis, ModformsError> {
    if p < 5 || !is_prime(p) {
        return Err(ModformsError::BadPrime(p));
    }
    if k % 2 != 0 || k < 4 {
        return Err(ModformsError::BadWeight(k));
    }
    let dim_m = dim_modular_forms(k);
    let dim_s = dim_cusp_forms(k);
    if precision < dim_m + 1 {
        return Err(ModformsError::InsufficientPrecision {
            given: precision,
            needed: dim_m + 1,
        });
    }

    let (e4, e6, delta) = basis_forms(p, precision)?;
    // cache E4 powers up to the largest exponent (at j = 0)
    let (a_max, _) = e4_e6_exponents(if k % 4 == 0 { k } else { k - 6 });
    let mut e4_powers = Vec::with_capacity(a_max as usize + 1);
    let mut acc = one_series(p, precision);
    for _ in 0..=a_max {
        e4_powers.push(acc.clone());
        acc = acc.mul(&e4);
    }

    let mut rows = Vec::with_capacity(dim_m);
    let mut delta_power = one_series(p, precision);
    for j in 0..dim_m as u64 {
        if j > 0 {
            delta_power = delta_power.mul(&delta);
        }
        let m = k - 12 * j;
        let (a, b) = e4_e6_exponents(m);
        let mut form = e4_powers[a as usize].mul(&delta_power);
        for _ in 0..b {
            form = form.mul(&e6);
        }
        rows.push(form.coeffs().to_vec());
    }

    let mut mat = FpMat::from_rows(p, &rows);
    let pivots = mat.rref();
    // the monomials are unitriangular in their leading q-powers, so the
    // pivots must be the first dim_m columns; anything else is a bug
    if pivots != (0..dim_m).collect::<Vec<_>>() {
        return Err(ModformsError::EchelonizationFailure);
    }
    let forms = (0..dim_m)
        .map(|i| QSeries::from_coeffs(p, k, &mat.row(i)))
        .collect();
    Ok(VictorMillerBasis {
        p,
        k,
        dim_m,
        dim_s,
        forms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact integer expansion of `q prod_{n>=1} (1 - q^n)^24` to a few
    /// terms, as an independent oracle for Delta.
    fn delta_exact(terms: usize) -> Vec<i128> {
        let n = terms + 1;
        let mut prod = vec![0i128; n];
        prod[0] = 1;
        for m in 1..n {
            for _ in 0..24 {
                // multiply by (1 - q^m)
                let mut next = prod.clone();
                for i in 0..n.saturating_sub(m) {
                    next[i + m] -= prod[i];
                }
                prod = next;
            }
        }
        let mut out = vec![0i128; n];
        for i in 0..n - 1 {
            out[i + 1] = prod[i];
        }
        out
    }

    #[test]
    fn delta_leading_coefficients() {
        let exact = delta_exact(4);
        assert_eq!(&exact[..4], &[0, 1, -24, 252]);
        for p in [5u64, 7, 691] {
            let (_, _, delta) = basis_forms(p, 5).unwrap();
            for (n, &c) in exact.iter().enumerate().take(5) {
                assert_eq!(
                    delta.coeff(n) as i128,
                    c.rem_euclid(p as i128),
                    "p={p} n={n}"
                );
            }
        }
    }

    #[test]
    fn eisenstein_constant_terms() {
        let (e4, e6, _) = basis_forms(13, 8).unwrap();
        assert_eq!(e4.coeff(0), 1);
        assert_eq!(e6.coeff(0), 1);
        assert_eq!(e4.coeff(1), 240 % 13);
        assert_eq!(e6.coeff(1), (13 - 504 % 13) % 13);
        assert_eq!(e4.weight(), 4);
        assert_eq!(e6.weight(), 6);
    }

    #[test]
    fn discriminant_identity() {
        // E4^3 - E6^2 = 1728 Delta, termwise to the available precision
        for p in [5u64, 7, 37] {
            let prec = 24;
            let (e4, e6, delta) = basis_forms(p, prec).unwrap();
            let lhs = e4.pow(3).add(&e6.pow(2).scale(p - 1).with_weight(12));
            let rhs = delta.scale(1728 % p);
            assert_eq!(lhs.coeffs(), rhs.coeffs(), "p = {p}");
        }
    }

    #[test]
    fn weight_bookkeeping_on_products() {
        let (e4, e6, delta) = basis_forms(7, 6).unwrap();
        assert_eq!(e4.mul(&e6).weight(), 10);
        assert_eq!(delta.mul(&delta).weight(), 24);
    }

    #[test]
    fn victor_miller_dimensions_and_echelon() {
        for k in [12u64, 16, 24, 36, 48, 60] {
            let dim = dim_modular_forms(k);
            let basis = victor_miller_basis(37, k, dim + 5).unwrap();
            assert_eq!(basis.forms.len(), dim);
            assert_eq!(basis.cuspidal().len(), dim_cusp_forms(k));
            for (j, f) in basis.forms.iter().enumerate() {
                for i in 0..dim {
                    assert_eq!(f.coeff(i), u64::from(i == j), "k={k} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn weight_twelve_cusp_space_is_delta() {
        let basis = victor_miller_basis(37, 12, 8).unwrap();
        assert_eq!(basis.dim_s, 1);
        let (_, _, delta) = basis_forms(37, 8).unwrap();
        assert_eq!(basis.cuspidal()[0].coeffs(), delta.coeffs());
    }

    #[test]
    fn no_cusp_forms_below_weight_twelve() {
        let basis = victor_miller_basis(37, 4, 6).unwrap();
        assert_eq!((basis.dim_m, basis.dim_s), (1, 0));
        assert!(basis.cuspidal().is_empty());
    }

    #[test]
    fn input_validation() {
        assert!(matches!(
            victor_miller_basis(3, 12, 8),
            Err(ModformsError::BadPrime(3))
        ));
        assert!(matches!(
            victor_miller_basis(37, 13, 8),
            Err(ModformsError::BadWeight(13))
        ));
        assert!(matches!(
            victor_miller_basis(37, 12, 2),
            Err(ModformsError::InsufficientPrecision { .. })
        ));
    }
}
