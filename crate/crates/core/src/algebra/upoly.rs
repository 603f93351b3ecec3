//! Truncated u-polynomials: the coefficient ring `F_q[u]/u^{ep}` of the
//! killed-by-p Breuil calculus.
//!
//! Every value carries its field and ramification degree; arithmetic
//! truncates at `u^{ep}`. Division by `u^r` is defined only on the ideal
//! `(u^r)` and returns the truncation of the canonical lift; this is
//! well-defined because `p (ep - r) >= ep` whenever `r <= e` (see the
//! `div_ur_well_defined` test, which carries that proof obligation).

use super::{AlgebraError, FqElem, FqField};
use std::fmt;

/// A polynomial `sum c_k u^k`, `k < ep`, coefficients in `F_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly {
    field: FqField,
    e: usize,
    coeffs: Vec<FqElem>, // length exactly e*p
}

impl UPoly {
    pub fn zero(field: &FqField, e: usize) -> Result<Self, AlgebraError> {
        let p = field.p();
        if e == 0 || e as u64 % p == 0 {
            return Err(AlgebraError::BadRamification { e, p });
        }
        let len = e * p as usize;
        Ok(UPoly {
            field: field.clone(),
            e,
            coeffs: vec![field.zero(); len],
        })
    }

    /// `c * u^k`; monomials with `k >= ep` truncate to zero.
    pub fn monomial(field: &FqField, e: usize, c: &FqElem, k: usize) -> Result<Self, AlgebraError> {
        let mut out = Self::zero(field, e)?;
        if k < out.coeffs.len() {
            out.coeffs[k] = c.clone();
        }
        Ok(out)
    }

    pub fn from_coeffs(field: &FqField, e: usize, coeffs: &[FqElem]) -> Result<Self, AlgebraError> {
        let mut out = Self::zero(field, e)?;
        assert!(coeffs.len() <= out.coeffs.len(), "too many coefficients");
        for (i, c) in coeffs.iter().enumerate() {
            out.coeffs[i] = c.clone();
        }
        Ok(out)
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn e(&self) -> usize {
        self.e
    }

    /// Truncation length `e * p`.
    pub fn ep(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> FqElem {
        if k < self.coeffs.len() {
            self.coeffs[k].clone()
        } else {
            self.field.zero()
        }
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn assert_compatible(&self, other: &UPoly) {
        assert!(
            self.field == other.field && self.e == other.e,
            "mixed coefficient rings"
        );
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        self.assert_compatible(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.field.add(a, b))
            .collect();
        UPoly {
            field: self.field.clone(),
            e: self.e,
            coeffs,
        }
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.assert_compatible(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.field.sub(a, b))
            .collect();
        UPoly {
            field: self.field.clone(),
            e: self.e,
            coeffs,
        }
    }

    pub fn neg(&self) -> UPoly {
        UPoly {
            field: self.field.clone(),
            e: self.e,
            coeffs: self.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        }
    }

    /// Product truncated at `u^{ep}`.
    pub fn mul(&self, other: &UPoly) -> UPoly {
        self.assert_compatible(other);
        let len = self.coeffs.len();
        let mut out = UPoly::zero(&self.field, self.e).expect("ring already validated");
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                let t = self.field.mul(a, b);
                out.coeffs[i + j] = self.field.add(&out.coeffs[i + j], &t);
            }
        }
        out
    }

    pub fn scalar_mul(&self, c: &FqElem) -> UPoly {
        UPoly {
            field: self.field.clone(),
            e: self.e,
            coeffs: self.coeffs.iter().map(|a| self.field.mul(a, c)).collect(),
        }
    }

    /// Multiply by `u^k` (shift up, truncating).
    pub fn shift_up(&self, k: usize) -> UPoly {
        let len = self.coeffs.len();
        let mut out = UPoly::zero(&self.field, self.e).expect("ring already validated");
        for i in 0..len.saturating_sub(k) {
            out.coeffs[i + k] = self.coeffs[i].clone();
        }
        out
    }

    /// True iff the polynomial lies in the ideal `(u^r)`, i.e. its first
    /// `r` coefficients vanish.
    pub fn in_ideal(&self, r: usize) -> bool {
        self.coeffs.iter().take(r).all(|c| c.is_zero())
    }

    /// Division by `u^r` on `(u^r)`: shifts down, leaving zeros on top.
    pub fn div_ur(&self, r: usize) -> Result<UPoly, AlgebraError> {
        if !self.in_ideal(r) {
            return Err(AlgebraError::NotInIdeal(r));
        }
        let len = self.coeffs.len();
        let mut out = UPoly::zero(&self.field, self.e)?;
        for i in r..len {
            out.coeffs[i - r] = self.coeffs[i].clone();
        }
        Ok(out)
    }

    /// The semilinear twist `sum c_k u^k -> sum phi(c_k) u^{pk}`, truncated
    /// at `u^{ep}` (so terms with `pk >= ep`, i.e. `k >= e`, drop).
    pub fn frobenius_twist(&self) -> UPoly {
        let p = self.field.p() as usize;
        let mut out = UPoly::zero(&self.field, self.e).expect("ring already validated");
        for k in 0..self.e.min(self.coeffs.len()) {
            if !self.coeffs[k].is_zero() {
                out.coeffs[p * k] = self.field.frobenius(&self.coeffs[k]);
            }
        }
        out
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = self.field.elem_to_string(c);
            let needs_parens = cs.contains('+');
            let cs = if needs_parens { format!("({cs})") } else { cs };
            let term = match k {
                0 => cs,
                1 if cs == "1" => "u".to_string(),
                1 => format!("{cs}*u"),
                k if cs == "1" => format!("u^{k}"),
                k => format!("{cs}*u^{k}"),
            };
            parts.push(term);
        }
        write!(out, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fq_make;
    use proptest::prelude::*;

    fn upoly_u(field: &FqField, e: usize) -> UPoly {
        UPoly::monomial(field, e, &field.one(), 1).unwrap()
    }

    #[test]
    fn twist_of_u_is_u_cubed() {
        let f3 = fq_make(3, 1).unwrap();
        let u = upoly_u(&f3, 2);
        let expected = UPoly::monomial(&f3, 2, &f3.one(), 3).unwrap();
        assert_eq!(u.frobenius_twist(), expected);
    }

    #[test]
    fn twist_truncates_at_ep() {
        // u^2 with p = 3, e = 2: p*2 = 6 >= ep = 6, so the image is 0
        let f3 = fq_make(3, 1).unwrap();
        let u2 = UPoly::monomial(&f3, 2, &f3.one(), 2).unwrap();
        assert!(u2.frobenius_twist().is_zero());
    }

    #[test]
    fn twist_applies_coefficient_frobenius() {
        // (c*u) over F_9 maps to c^3 * u^3
        let f9 = fq_make(3, 2).unwrap();
        let c = f9.gen();
        let cu = UPoly::monomial(&f9, 2, &c, 1).unwrap();
        let expected = UPoly::monomial(&f9, 2, &f9.pow(&c, 3), 3).unwrap();
        assert_eq!(cu.frobenius_twist(), expected);
    }

    #[test]
    fn div_ur_requires_ideal_membership() {
        let f3 = fq_make(3, 1).unwrap();
        let u2 = UPoly::monomial(&f3, 2, &f3.one(), 2).unwrap();
        assert_eq!(
            u2.div_ur(2).unwrap(),
            UPoly::monomial(&f3, 2, &f3.one(), 0).unwrap()
        );
        assert_eq!(u2.div_ur(3).unwrap_err(), AlgebraError::NotInIdeal(3));
    }

    /// Proof obligation for the design of `div_ur`: for r <= e, any two lifts
    /// of an element of (u^r) differ by ker(.u^r) = (u^{ep-r}), and the twist
    /// of that kernel vanishes because p(ep - r) >= ep.
    #[test]
    fn div_ur_well_defined() {
        for (p, e) in [(3u64, 2usize), (3, 7), (5, 4), (7, 6)] {
            let ep = e * p as usize;
            for r in 0..=e {
                assert!(p as usize * (ep - r) >= ep, "p={p} e={e} r={r}");
            }
        }
    }

    #[test]
    fn rejects_wild_ramification() {
        let f3 = fq_make(3, 1).unwrap();
        assert_eq!(
            UPoly::zero(&f3, 6).unwrap_err(),
            AlgebraError::BadRamification { e: 6, p: 3 }
        );
    }

    #[test]
    fn display_names_monomials() {
        let f3 = fq_make(3, 1).unwrap();
        let two = f3.from_u64(2);
        let t = UPoly::monomial(&f3, 2, &two, 3).unwrap();
        assert_eq!(t.to_string(), "2*u^3");
        let one = UPoly::monomial(&f3, 2, &f3.one(), 3).unwrap();
        assert_eq!(one.to_string(), "u^3");
        assert_eq!(UPoly::zero(&f3, 2).unwrap().to_string(), "0");
    }

    prop_compose! {
        /// random coefficient vector over F_9 with support below degree e
        fn low_degree_poly(e: usize)(coeffs in prop::collection::vec(0..9usize, 1..=4)) -> (UPoly, Vec<usize>) {
            let f9 = fq_make(3, 2).unwrap();
            let els = f9.elements();
            let mut poly = UPoly::zero(&f9, e).unwrap();
            for (k, &ci) in coeffs.iter().enumerate().take(e) {
                let m = UPoly::monomial(&f9, e, &els[ci], k).unwrap();
                poly = poly.add(&m);
            }
            (poly, coeffs)
        }
    }

    proptest! {
        /// The twist is a ring map on the full polynomial ring followed by
        /// truncation; on inputs of degree < e no product term truncates
        /// spuriously, so multiplicativity and additivity are exact.
        #[test]
        fn twist_is_ring_map(a in low_degree_poly(7), b in low_degree_poly(7)) {
            let (fa, _) = a;
            let (fb, _) = b;
            prop_assert_eq!(
                fa.mul(&fb).frobenius_twist(),
                fa.frobenius_twist().mul(&fb.frobenius_twist())
            );
            prop_assert_eq!(
                fa.add(&fb).frobenius_twist(),
                fa.frobenius_twist().add(&fb.frobenius_twist())
            );
        }

        #[test]
        fn mul_commutes_and_associates(a in low_degree_poly(4), b in low_degree_poly(4), c in low_degree_poly(4)) {
            let (fa, _) = a;
            let (fb, _) = b;
            let (fc, _) = c;
            prop_assert_eq!(fa.mul(&fb), fb.mul(&fa));
            prop_assert_eq!(fa.mul(&fb).mul(&fc), fa.mul(&fb.mul(&fc)));
        }
    }
}
