//! Precision-tracked p-adic residues.
//!
//! A `PadicApprox` is a residue mod `p^N` together with the precision `N`
//! it is known to. It is not a full p-adic number type: operations never
//! report more precision than their inputs justify (add/mul take the
//! minimum, division by `p` costs one digit), and comparisons are only
//! meaningful at the minimum common precision.

use super::AlgebraError;

/// Exponentiation `b^e mod m` for `m < 2^63` (products then fit in `u128`).
pub fn modpow_u128(mut b: u128, mut e: u128, m: u128) -> u128 {
    debug_assert!(m < 1 << 63);
    let mut acc = 1u128 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Inverse of `a` mod `m` for `a` coprime to `m` (extended Euclid).
pub fn modinv_u128(a: u128, m: u128) -> u128 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert!(r0 == 1, "argument not invertible");
    t0.rem_euclid(m as i128) as u128
}

/// A residue mod `p^N` with explicitly tracked precision `N >= 1`.
#[derive(Debug, Clone)]
pub struct PadicApprox {
    p: u64,
    precision: u32,
    residue: u128,
}

impl PadicApprox {
    /// `p^n`, guarded so that products of residues stay inside `u128`.
    fn power_checked(p: u64, n: u32) -> Result<u128, AlgebraError> {
        let mut acc: u128 = 1;
        for _ in 0..n {
            acc = acc
                .checked_mul(p as u128)
                .ok_or(AlgebraError::PrecisionOverflow { p, n })?;
            if acc >= 1 << 63 {
                return Err(AlgebraError::PrecisionOverflow { p, n });
            }
        }
        Ok(acc)
    }

    pub fn new(p: u64, precision: u32, residue: u128) -> Result<Self, AlgebraError> {
        if precision == 0 {
            return Err(AlgebraError::BadPrecision(precision));
        }
        let m = Self::power_checked(p, precision)?;
        Ok(PadicApprox {
            p,
            precision,
            residue: residue % m,
        })
    }

    /// Residue of a signed integer.
    pub fn from_i128(p: u64, precision: u32, value: i128) -> Result<Self, AlgebraError> {
        if precision == 0 {
            return Err(AlgebraError::BadPrecision(precision));
        }
        let m = Self::power_checked(p, precision)? as i128;
        Ok(PadicApprox {
            p,
            precision,
            residue: value.rem_euclid(m) as u128,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> u128 {
        self.residue
    }

    pub fn modulus(&self) -> u128 {
        Self::power_checked(self.p, self.precision).expect("validated at construction")
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    /// Drop to a lower precision `n <= N`.
    pub fn truncate(&self, n: u32) -> Result<Self, AlgebraError> {
        if n == 0 || n > self.precision {
            return Err(AlgebraError::BadPrecision(n));
        }
        let m = Self::power_checked(self.p, n)?;
        Ok(PadicApprox {
            p: self.p,
            precision: n,
            residue: self.residue % m,
        })
    }

    fn align(&self, other: &Self) -> Result<(u128, u32), AlgebraError> {
        if self.p != other.p {
            return Err(AlgebraError::MixedStructures);
        }
        let n = self.precision.min(other.precision);
        Ok((Self::power_checked(self.p, n)?, n))
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        let (m, n) = self.align(other)?;
        Ok(PadicApprox {
            p: self.p,
            precision: n,
            residue: (self.residue % m + other.residue % m) % m,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        let (m, n) = self.align(other)?;
        Ok(PadicApprox {
            p: self.p,
            precision: n,
            residue: (self.residue % m + m - other.residue % m) % m,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        let (m, n) = self.align(other)?;
        Ok(PadicApprox {
            p: self.p,
            precision: n,
            residue: (self.residue % m) * (other.residue % m) % m,
        })
    }

    /// Multiply by an integer (precision unchanged).
    pub fn mul_i128(&self, k: i128) -> Self {
        let m = self.modulus();
        PadicApprox {
            p: self.p,
            precision: self.precision,
            residue: self.residue * (k.rem_euclid(m as i128) as u128) % m,
        }
    }

    /// Division by a unit `d` (`p` does not divide `d`); precision kept.
    pub fn div_unit(&self, d: i128) -> Result<Self, AlgebraError> {
        let m = self.modulus();
        let dm = d.rem_euclid(m as i128) as u128;
        if dm % self.p as u128 == 0 {
            return Err(AlgebraError::UnitDivisorDivisibleByP);
        }
        Ok(PadicApprox {
            p: self.p,
            precision: self.precision,
            residue: self.residue * modinv_u128(dm, m) % m,
        })
    }

    /// Division by `p`: requires the residue to be divisible by `p` and
    /// costs one digit of precision.
    pub fn div_p(&self) -> Result<Self, AlgebraError> {
        if self.precision < 2 {
            return Err(AlgebraError::PrecisionExhausted);
        }
        if self.residue % self.p as u128 != 0 {
            return Err(AlgebraError::NotDivisibleByP);
        }
        PadicApprox::new(self.p, self.precision - 1, self.residue / self.p as u128)
    }

    /// Congruence at the minimum common precision.
    pub fn congruent(&self, other: &Self) -> Result<bool, AlgebraError> {
        let (m, _) = self.align(other)?;
        Ok(self.residue % m == other.residue % m)
    }
}
