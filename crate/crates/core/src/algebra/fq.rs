//! Prime fields and small extension fields `F_q = F_{p^f}`.
//!
//! Elements are dense coefficient vectors over `F_p`, reduced modulo a
//! deterministically chosen monic irreducible: the lexicographically least
//! one under the ordering on `(c_0, .., c_{f-1})`. That makes every field
//! reproducible without external tables.
//!
//! `FqField` is an explicit context object; element operations take it as
//! a receiver (`field.mul(&a, &b)`), keeping `FqElem` a plain value.

use super::AlgebraError;
use crate::primes::is_prime;

/// An element of `F_{p^f}`: coefficients `c_0 + c_1 g + .. + c_{f-1} g^{f-1}`
/// with every `c_i` in `[0, p)`. Representation is canonical, so equality
/// is coefficientwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(Vec<u64>);

impl FqElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// A field `F_q = F_{p^f}`, `p` an odd prime, with a fixed monic irreducible
/// modulus of degree `f` over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqField {
    p: u64,
    f: usize,
    /// Monic modulus, length `f + 1`, `modulus[f] == 1`.
    modulus: Vec<u64>,
}

/// Build `F_{p^f}` with the deterministic modulus choice.
pub fn fq_make(p: u64, f: usize) -> Result<FqField, AlgebraError> {
    if p % 2 == 0 {
        return Err(AlgebraError::EvenPrime(p));
    }
    if !is_prime(p) {
        return Err(AlgebraError::NotPrime(p));
    }
    if f == 0 || f > 8 {
        return Err(AlgebraError::DegreeOutOfRange(f));
    }
    // Enumerate lower-coefficient tuples (c_0, .., c_{f-1}) in lexicographic
    // order with c_0 most significant.
    let total = (p as u128).pow(f as u32);
    let mut idx: u128 = 0;
    while idx < total {
        let mut coeffs = vec![0u64; f + 1];
        coeffs[f] = 1;
        let mut rest = idx;
        for i in (0..f).rev() {
            // least significant digit of idx is c_{f-1}
            coeffs[i] = (rest % p as u128) as u64;
            rest /= p as u128;
        }
        if poly_is_irreducible(&coeffs, p) {
            return Ok(FqField {
                p,
                f,
                modulus: coeffs,
            });
        }
        idx += 1;
    }
    Err(AlgebraError::NoIrreducible)
}

impl FqField {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> usize {
        self.f
    }

    /// Field size `q = p^f`.
    pub fn q(&self) -> u128 {
        (self.p as u128).pow(self.f as u32)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FqElem {
        FqElem(vec![0; self.f])
    }

    pub fn one(&self) -> FqElem {
        self.from_u64(1)
    }

    /// Embed an integer into the prime subfield.
    pub fn from_u64(&self, n: u64) -> FqElem {
        let mut c = vec![0; self.f];
        c[0] = n % self.p;
        FqElem(c)
    }

    /// Element from coefficients (reduced mod p, padded/truncated to f must fit).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FqElem {
        assert!(coeffs.len() <= self.f, "too many coefficients");
        let mut c = vec![0; self.f];
        for (i, &v) in coeffs.iter().enumerate() {
            c[i] = v % self.p;
        }
        FqElem(c)
    }

    /// The generator `g` (image of the variable); equals the residue
    /// class of x, so for f = 1 this is 0 (x is the modulus).
    pub fn gen(&self) -> FqElem {
        if self.f == 1 {
            // x reduces to -c_0 = 0 for the modulus x
            let mut c = vec![0; 1];
            c[0] = (self.p - self.modulus[0] % self.p) % self.p;
            FqElem(c)
        } else {
            let mut c = vec![0; self.f];
            c[1] = 1;
            FqElem(c)
        }
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| (x + y) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| (x + self.p - y) % self.p)
                .collect(),
        )
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        FqElem(a.0.iter().map(|&x| (self.p - x) % self.p).collect())
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        // schoolbook product then reduction by the monic modulus
        let f = self.f;
        let mut prod = vec![0u64; 2 * f - 1];
        for i in 0..f {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..f {
                prod[i + j] = (prod[i + j] + a.0[i] * b.0[j]) % self.p;
            }
        }
        self.reduce(&mut prod);
        prod.truncate(f);
        prod.resize(f, 0);
        FqElem(prod)
    }

    fn reduce(&self, poly: &mut Vec<u64>) {
        let f = self.f;
        let mut deg = poly.len();
        while deg > f {
            deg -= 1;
            let lead = poly[deg] % self.p;
            if lead != 0 {
                // subtract lead * x^(deg-f) * modulus
                for i in 0..=f {
                    let t = (lead * self.modulus[i]) % self.p;
                    poly[deg - f + i] = (poly[deg - f + i] + self.p - t) % self.p;
                }
            }
            poly.pop();
        }
    }

    pub fn pow(&self, a: &FqElem, mut n: u128) -> FqElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by extended Euclid in `F_p[x]`.
    pub fn inv(&self, a: &FqElem) -> Result<FqElem, AlgebraError> {
        if a.is_zero() {
            return Err(AlgebraError::ZeroArgument);
        }
        if self.f == 1 {
            return Ok(FqElem(vec![modinv(a.0[0], self.p)]));
        }
        // (r0, s0) = (modulus, 0), (r1, s1) = (a, 1); invariant s_i * a = r_i mod modulus.
        // The modulus is irreducible and deg a < f, so the remainder sequence
        // terminates at a nonzero constant.
        let mut r0 = self.modulus.clone();
        let mut r1 = trim(a.0.clone());
        let mut s0: Vec<u64> = vec![];
        let mut s1: Vec<u64> = vec![1];
        while poly_deg(&r1) > 0 {
            let (q, rem) = poly_divmod(&r0, &r1, self.p);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1, self.p), self.p);
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        debug_assert!(!r1.is_empty() && s1.len() <= self.f);
        let c = r1[0];
        let cinv = modinv(c, self.p);
        let mut out = vec![0u64; self.f];
        for (i, &v) in s1.iter().enumerate() {
            out[i] = (v * cinv) % self.p;
        }
        Ok(FqElem(out))
    }

    pub fn div(&self, a: &FqElem, b: &FqElem) -> Result<FqElem, AlgebraError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Coefficient Frobenius `x -> x^p`; a field automorphism fixing `F_p`.
    pub fn frobenius(&self, a: &FqElem) -> FqElem {
        if self.f == 1 {
            a.clone()
        } else {
            self.pow(a, self.p as u128)
        }
    }

    /// True iff `x` lies in the prime subfield `F_p` (i.e. `x^p = x`).
    pub fn in_prime_subfield(&self, x: &FqElem) -> bool {
        self.frobenius(x) == *x
    }

    /// For `x` in the prime subfield, its value as an integer in `[0, p)`.
    pub fn prime_subfield_value(&self, x: &FqElem) -> Option<u64> {
        if x.0[1..].iter().all(|&c| c == 0) {
            Some(x.0[0])
        } else {
            None
        }
    }

    /// True iff `x = c^{p-1}` for some `c` in `F_q^x`; equivalently
    /// `x^{(q-1)/g} = 1` with `g = gcd(p-1, q-1)`.
    pub fn is_pm1_power(&self, x: &FqElem) -> Result<bool, AlgebraError> {
        if x.is_zero() {
            return Err(AlgebraError::ZeroArgument);
        }
        let q1 = self.q() - 1;
        let g = gcd_u128(self.p as u128 - 1, q1);
        Ok(self.pow(x, q1 / g) == self.one())
    }

    /// All q elements, in lexicographic coefficient order.
    pub fn elements(&self) -> Vec<FqElem> {
        let q = self.q() as usize;
        let mut out = Vec::with_capacity(q);
        for n in 0..q {
            let mut c = vec![0u64; self.f];
            let mut rest = n as u64;
            for item in c.iter_mut() {
                *item = rest % self.p;
                rest /= self.p;
            }
            out.push(FqElem(c));
        }
        out
    }

    /// All nonzero elements.
    pub fn units(&self) -> Vec<FqElem> {
        self.elements()
            .into_iter()
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn elem_to_string(&self, x: &FqElem) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in x.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let term = match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "g".to_string(),
                (1, c) => format!("{c}*g"),
                (i, 1) => format!("g^{i}"),
                (i, c) => format!("{c}*g^{i}"),
            };
            parts.push(term);
        }
        parts.join("+")
    }
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd_u128(b, a % b)
    }
}

fn modinv(a: u64, p: u64) -> u64 {
    // Fermat; p prime and a nonzero mod p
    debug_assert!(a % p != 0);
    let mut acc = 1u64;
    let mut base = a % p;
    let mut n = p - 2;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        n >>= 1;
    }
    acc
}

// ---- dense polynomial helpers over F_p (for modulus search and inversion) ----

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_deg(v: &[u64]) -> usize {
    v.len().saturating_sub(1)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y % p) % p;
    }
    trim(out)
}

/// Division with remainder; divisor need not be monic.
fn poly_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = trim(a.to_vec());
    let db = poly_deg(&b);
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut quo = vec![0u64; rem.len() - b.len() + 1];
    let lead_inv = modinv(b[db], p);
    while rem.len() >= b.len() && !rem.is_empty() {
        let dr = poly_deg(&rem);
        let coef = rem[dr] * lead_inv % p;
        quo[dr - db] = coef;
        for i in 0..=db {
            let t = coef * b[i] % p;
            rem[dr - db + i] = (rem[dr - db + i] + p - t) % p;
        }
        rem = trim(rem);
    }
    (trim(quo), rem)
}

fn poly_mod(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    poly_divmod(a, m, p).1
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_mod(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `t^p mod m` by binary exponentiation in `F_p[x]/m`.
fn poly_pow_p(t: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = t.to_vec();
    let mut n = p;
    while n > 0 {
        if n & 1 == 1 {
            acc = poly_mod(&poly_mul(&acc, &base, p), m, p);
        }
        base = poly_mod(&poly_mul(&base, &base, p), m, p);
        n >>= 1;
    }
    acc
}

/// Irreducibility of a monic polynomial of degree f over F_p.
///
/// f <= 3: a reducible polynomial must have a root, so a root scan
/// suffices. General f: m is irreducible iff gcd(x^{p^i} - x, m) = 1 for
/// i = 1..=f/2 (any nontrivial factor would have degree <= f/2 and divide
/// one of those).
fn poly_is_irreducible(m: &[u64], p: u64) -> bool {
    let f = poly_deg(m);
    if f == 1 {
        return true;
    }
    if f <= 3 {
        for a in 0..p {
            let mut acc = 0u64;
            for &c in m.iter().rev() {
                acc = (acc * a + c) % p;
            }
            if acc == 0 {
                return false;
            }
        }
        return true;
    }
    let x = vec![0u64, 1];
    let mut t = x.clone();
    for _ in 1..=f / 2 {
        t = poly_pow_p(&t, m, p); // t = x^{p^i} mod m
        let diff = poly_sub(&t, &x, p);
        let g = poly_gcd(m, &diff, p);
        if poly_deg(&g) > 0 || g.is_empty() {
            return false;
        }
    }
    true
}
