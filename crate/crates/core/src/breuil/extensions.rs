//! Order-`p^2` extension witnesses and their classification.
//!
//! An extension datum describes a module `M = (S_1 e_1 + S_2 e_2)/(p e_2 -
//! eta e_1)` sitting in a Breuil-side exact sequence
//! `0 -> A(r,a) -> M -> A(s,b) -> 0`, normalized so that
//! `phi_1(u^s e_2 + x e_1) = b e_2` exactly (the gauge with `z = 0`).
//! Writing `y = eta - u^{e-s} x`, well-definedness of `phi_1` forces
//!
//! ```text
//!   y in (u^r)   and   b eta = u^{ps} a phi(y/u^r) + a phi(x) u^{p(e-r)}
//! ```
//!
//! in `F[u]/u^{ep}`. Coefficientwise, with `x = sum alpha_k u^k`,
//! `y = sum beta_k u^k`, `eta = sum gamma_k u^k`, this is equivalent to
//!
//! ```text
//!   beta_k = 0 for k < r,
//!   gamma_k = beta_k + alpha_{k+s-e},
//!   gamma_k = 0 unless p | k,
//!   b gamma_{pk} = a phi(beta_{k+r-s} + alpha_{k+r-e})   (0 <= k < e),
//! ```
//!
//! out-of-range indices reading as zero. `validate_extension` evaluates
//! both forms independently and insists they agree. The nonzero `eta`
//! admissible for given `(e, r, s, a, b)` have the closed form
//! `c u^{pk}` with `r - s = k (p-1)`, `k >= min(s, e-r)` and
//! `c^{p-1} = b/a`; `solve_extensions_oracle` re-derives the same set by
//! brute-force linear algebra over `F_p` with no knowledge of the closed
//! form.

use super::{frobenius_eigenvector, hom_space, BreuilError, RankOneModule};
use crate::algebra::{FpMat, FqElem, FqField, SpanBuilder, UPoly};
use crate::primes::is_prime;

/// Witness for an order-`p^2` extension.
///
/// Breuil side: `0 -> sub -> M -> quot -> 0`; group-scheme side the
/// arrows reverse, so the scheme subobject is `G_{s,b}` (from `quot`) and
/// the scheme quotient is `G_{r,a}` (from `sub`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionWitness {
    sub: RankOneModule,
    quot: RankOneModule,
    x: UPoly,
    eta: UPoly,
}

impl ExtensionWitness {
    pub fn new(
        sub: RankOneModule,
        quot: RankOneModule,
        x: UPoly,
        eta: UPoly,
    ) -> Result<Self, BreuilError> {
        if !sub.same_base(&quot) {
            return Err(BreuilError::MixedBases);
        }
        if x.field() != sub.field()
            || x.e() != sub.e()
            || eta.field() != sub.field()
            || eta.e() != sub.e()
        {
            return Err(BreuilError::MixedBases);
        }
        Ok(ExtensionWitness { sub, quot, x, eta })
    }

    /// Breuil-side submodule `A(r,a)`.
    pub fn breuil_sub(&self) -> &RankOneModule {
        &self.sub
    }

    /// Breuil-side quotient `A(s,b)`.
    pub fn breuil_quot(&self) -> &RankOneModule {
        &self.quot
    }

    /// Oort–Tate parameters of the group-scheme subobject (`G_{s,b}`).
    pub fn scheme_sub_params(&self) -> super::OortTateParams {
        super::oort_tate_of(&self.quot)
    }

    /// Oort–Tate parameters of the group-scheme quotient (`G_{r,a}`).
    pub fn scheme_quot_params(&self) -> super::OortTateParams {
        super::oort_tate_of(&self.sub)
    }

    pub fn x(&self) -> &UPoly {
        &self.x
    }

    pub fn eta(&self) -> &UPoly {
        &self.eta
    }

    /// `y = eta - u^{e-s} x`.
    pub fn y(&self) -> UPoly {
        let e = self.sub.e();
        let s = self.quot.r();
        self.eta.sub(&self.x.shift_up(e - s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionDiagnostic {
    Valid,
    /// `y = eta - u^{e-s} x` fails to lie in `(u^r)`.
    YNotInIdeal,
    /// The filtration condition holds but the master equation fails.
    MasterEquationFailure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtensionCheck {
    pub valid: bool,
    pub diagnostic: ExtensionDiagnostic,
}

/// Check a witness against both the master-equation form and the
/// coefficientwise relations; the two are computed independently and an
/// internal assertion requires their agreement.
pub fn validate_extension(w: &ExtensionWitness) -> ExtensionCheck {
    let field = w.sub.field().clone();
    let p = field.p() as usize;
    let e = w.sub.e();
    let ep = e * p;
    let (r, a) = (w.sub.r(), w.sub.a().clone());
    let (s, b) = (w.quot.r(), w.quot.a().clone());

    let y = w.y();
    if !y.in_ideal(r) {
        return ExtensionCheck {
            valid: false,
            diagnostic: ExtensionDiagnostic::YNotInIdeal,
        };
    }

    // master-equation form, via the ring operations
    let master_ok = {
        let lhs = w.eta.scalar_mul(&b);
        let term_y = y
            .div_ur(r)
            .expect("ideal membership just checked")
            .frobenius_twist()
            .shift_up(p * s)
            .scalar_mul(&a);
        let term_x = w.x.frobenius_twist().shift_up(p * (e - r)).scalar_mul(&a);
        lhs == term_y.add(&term_x)
    };

    // coefficientwise form, straight off the index arithmetic
    let coeff_ok = {
        let alpha = |k: i64| -> FqElem {
            if k >= 0 && (k as usize) < ep {
                w.x.coeff(k as usize)
            } else {
                field.zero()
            }
        };
        let beta = |k: i64| -> FqElem {
            if k >= 0 && (k as usize) < ep {
                field.sub(&w.eta.coeff(k as usize), &alpha(k - (e - s) as i64))
            } else {
                field.zero()
            }
        };
        let mut ok = true;
        // gamma_k vanishes away from p-divisible degrees
        for k in 0..ep {
            if k % p != 0 && !w.eta.coeff(k).is_zero() {
                ok = false;
            }
        }
        // b gamma_{pk} = a phi(beta_{k+r-s} + alpha_{k+r-e})
        for k in 0..e {
            let inner = field.add(
                &beta(k as i64 + r as i64 - s as i64),
                &alpha(k as i64 + r as i64 - e as i64),
            );
            let rhs = field.mul(&a, &field.frobenius(&inner));
            let lhs = field.mul(&b, &w.eta.coeff(p * k));
            if lhs != rhs {
                ok = false;
            }
        }
        ok
    };

    assert_eq!(
        master_ok, coeff_ok,
        "master equation and coefficient relations must agree"
    );

    ExtensionCheck {
        valid: master_ok,
        diagnostic: if master_ok {
            ExtensionDiagnostic::Valid
        } else {
            ExtensionDiagnostic::MasterEquationFailure
        },
    }
}

fn check_params(
    field: &FqField,
    e: usize,
    r: usize,
    s: usize,
    a: &FqElem,
    b: &FqElem,
) -> Result<(), BreuilError> {
    let p = field.p();
    if e == 0 || e as u64 % p == 0 {
        return Err(BreuilError::BadRamification { e, p });
    }
    if r > e {
        return Err(BreuilError::ROutOfRange { r, e });
    }
    if s > e {
        return Err(BreuilError::ROutOfRange { r: s, e });
    }
    if a.is_zero() || b.is_zero() {
        return Err(BreuilError::ZeroUnit);
    }
    Ok(())
}

/// Closed-form set of admissible nonzero `eta` for the Breuil-side
/// sequence `0 -> A(r,a) -> M -> A(s,b) -> 0`:
/// `{c u^{pk} : c^{p-1} = b/a}` when `r - s = k (p-1)` with
/// `k >= min(s, e-r)`, empty otherwise. (For `r = s` the rule
/// "`eta = 0` unless `s = 0` or `r = e`" is the `k = 0` instance.)
pub fn classify_eta(
    field: &FqField,
    e: usize,
    r: usize,
    s: usize,
    a: &FqElem,
    b: &FqElem,
) -> Result<Vec<UPoly>, BreuilError> {
    check_params(field, e, r, s, a, b)?;
    let p = field.p() as usize;
    if r < s || (r - s) % (p - 1) != 0 {
        return Ok(Vec::new());
    }
    let k = (r - s) / (p - 1);
    if k < s.min(e - r) {
        return Ok(Vec::new());
    }
    let Some(c0) = frobenius_eigenvector(field, a, b) else {
        return Ok(Vec::new());
    };
    debug_assert!(p * k < e * p, "nonzero eta cannot truncate away");
    // the solution set of b c = a c^p is the F_p-line through c0
    let mut out = Vec::new();
    for lam in 1..field.p() {
        let c = field.mul(&c0, &field.from_u64(lam));
        out.push(UPoly::monomial(field, e, &c, p * k)?);
    }
    out.sort_by(|x, y| x.coeffs().cmp(y.coeffs()));
    Ok(out)
}

/// Outcome of the brute-force extension solver.
#[derive(Debug, Clone)]
pub struct OracleOutcome {
    /// `F_p`-dimension of the solution space in the `(alpha, beta)`
    /// unknowns.
    pub solution_dim: usize,
    /// Every `eta` realized by some solution, zero included, sorted.
    pub eta_set: Vec<UPoly>,
}

/// Independent verifier for the eta classification: set up the unknowns
/// `alpha_0..alpha_{ep-1}`, `beta_0..beta_{ep-1}` (each an `F_q` element,
/// i.e. `f` coordinates over `F_p`), impose `beta_k = 0` for `k < r` and
/// the coefficient relations as an `F_p`-linear system (the coefficient
/// Frobenius is `F_p`-linear), solve by Gaussian elimination, and read off
/// the set of achieved `eta = y + u^{e-s} x`.
pub fn solve_extensions_oracle(
    field: &FqField,
    e: usize,
    r: usize,
    s: usize,
    a: &FqElem,
    b: &FqElem,
) -> Result<OracleOutcome, BreuilError> {
    check_params(field, e, r, s, a, b)?;
    let p = field.p();
    let f = field.f();
    let ep = e * p as usize;
    let unknowns = 2 * ep * f;
    if unknowns > 10_000 {
        return Err(BreuilError::SystemTooLarge { unknowns });
    }
    let alpha_col = |k: usize, t: usize| k * f + t;
    let beta_col = |k: usize, t: usize| (ep + k) * f + t;

    // F_p-matrices of the maps c -> b c and c -> a phi(c) on F_q
    let linear_map_matrix = |map: &dyn Fn(&FqElem) -> FqElem| -> Vec<Vec<u64>> {
        (0..f)
            .map(|col| {
                let mut coeffs = vec![0u64; f];
                coeffs[col] = 1;
                map(&field.from_coeffs(&coeffs)).coeffs().to_vec()
            })
            .collect()
    };
    let mul_b = linear_map_matrix(&|c| field.mul(b, c));
    let aphi = linear_map_matrix(&|c| field.mul(a, &field.frobenius(c)));

    let mut rows: Vec<Vec<u64>> = Vec::new();
    // beta_k = 0 for k < r
    for k in 0..r {
        for t in 0..f {
            let mut row = vec![0u64; unknowns];
            row[beta_col(k, t)] = 1;
            rows.push(row);
        }
    }
    // gamma_k = beta_k + alpha_{k+s-e} = 0 when p does not divide k
    for k in 0..ep {
        if k % p as usize == 0 {
            continue;
        }
        for t in 0..f {
            let mut row = vec![0u64; unknowns];
            row[beta_col(k, t)] = 1;
            if k + s >= e {
                row[alpha_col(k + s - e, t)] += 1;
            }
            rows.push(row);
        }
    }
    // b gamma_{pk} - a phi(beta_{k+r-s} + alpha_{k+r-e}) = 0 for k < e
    for k in 0..e {
        let mut row_block = vec![vec![0u64; unknowns]; f];
        let mut add_map = |mat: &[Vec<u64>], col_of: &dyn Fn(usize) -> usize, negate: bool| {
            for t_src in 0..f {
                let col = col_of(t_src);
                for t_row in 0..f {
                    let v = mat[t_src][t_row] % p;
                    let v = if negate { (p - v) % p } else { v };
                    row_block[t_row][col] = (row_block[t_row][col] + v) % p;
                }
            }
        };
        // gamma_{pk} = beta_{pk} + alpha_{pk+s-e}
        add_map(&mul_b, &|t| beta_col(p as usize * k, t), false);
        if p as usize * k + s >= e {
            add_map(&mul_b, &|t| alpha_col(p as usize * k + s - e, t), false);
        }
        if k + r >= s && k + r - s < ep {
            add_map(&aphi, &|t| beta_col(k + r - s, t), true);
        }
        if k + r >= e {
            // k + r - e <= k < e <= ep, always in range
            add_map(&aphi, &|t| alpha_col(k + r - e, t), true);
        }
        rows.extend(row_block);
    }

    let mat = FpMat::from_rows(p, &rows);
    let kernel = mat.nullspace();
    let solution_dim = kernel.len();

    // image of the solution space under (alpha, beta) -> gamma
    let mut eta_span = SpanBuilder::new(p, ep * f);
    for v in &kernel {
        let mut gamma = vec![0u64; ep * f];
        for k in 0..ep {
            for t in 0..f {
                let mut val = v[beta_col(k, t)] % p;
                if k + s >= e {
                    val = (val + v[alpha_col(k + s - e, t)]) % p;
                }
                gamma[k * f + t] = val;
            }
        }
        if gamma.iter().any(|&x| x != 0) {
            eta_span.add(&gamma);
        }
    }
    let dim = eta_span.rank();
    assert!(
        dim <= 2,
        "eta space dimension {dim} exceeds the theoretical bound"
    );

    // enumerate the span and convert to polynomials
    let basis = eta_span.basis();
    let mut eta_set = Vec::new();
    let mut combos = vec![vec![0u64; ep * f]];
    for bvec in &basis {
        let mut next = Vec::new();
        for existing in &combos {
            for lam in 0..p {
                let mut v = existing.clone();
                for (vi, bi) in v.iter_mut().zip(bvec) {
                    *vi = (*vi + lam * bi) % p;
                }
                next.push(v);
            }
        }
        combos = next;
    }
    for v in combos {
        let coeffs: Vec<FqElem> = (0..ep)
            .map(|k| field.from_coeffs(&v[k * f..(k + 1) * f]))
            .collect();
        eta_set.push(UPoly::from_coeffs(field, e, &coeffs)?);
    }
    eta_set.sort_by(|x, y| x.coeffs().cmp(y.coeffs()));
    eta_set.dedup();

    Ok(OracleOutcome {
        solution_dim,
        eta_set,
    })
}

/// Whether an extension of group schemes `0 -> G_{s,b} -> G -> G_{r,a} -> 0`
/// exists with `G` not killed by `p`: true iff there is a nonzero module
/// map `A(s,b) -> A(r,a)` and `r >= ps` or `(e-s) >= p(e-r)`.
///
/// `scheme_quot` carries `(r, a)`, `scheme_sub` carries `(s, b)`.
pub fn p2_extension_exists(
    scheme_quot: &RankOneModule,
    scheme_sub: &RankOneModule,
) -> Result<bool, BreuilError> {
    if !scheme_quot.same_base(scheme_sub) {
        return Err(BreuilError::MixedBases);
    }
    let p = scheme_quot.field().p() as usize;
    let e = scheme_quot.e();
    let (r, s) = (scheme_quot.r(), scheme_sub.r());

    let hom = hom_space(scheme_sub, scheme_quot)?;
    if hom.dimension == 0 {
        return Ok(false);
    }
    // hom existence gives r >= s and (p-1) | (r-s)
    let k = (r - s) / (p - 1);
    debug_assert_eq!((r >= p * s), (k >= s), "inequality normalization");
    debug_assert_eq!(
        ((e - s) >= p * (e - r)),
        (k >= e - r),
        "inequality normalization"
    );
    let exists = r >= p * s || (e - s) >= p * (e - r);

    // must agree with the closed-form classifier
    debug_assert_eq!(
        exists,
        !classify_eta(
            scheme_quot.field(),
            e,
            r,
            s,
            scheme_quot.a(),
            scheme_sub.a()
        )?
        .is_empty()
    );
    Ok(exists)
}

/// A labeled extension witness from the explicit construction.
#[derive(Debug, Clone)]
pub struct NamedWitness {
    pub label: String,
    pub witness: ExtensionWitness,
}

/// Explicit non-split witnesses over `F_p` for every admissible
/// `(r, s, a, b, k)` at this `(p, e)`: the case `k >= s` takes
/// `(x, eta) = (0, c u^{pk})` and the case `k >= e - r` takes
/// `(x, eta) = (c u^{k-e+r}, c u^{pk})`, where `b = a c^{p-1}`.
/// Every emitted witness passes `validate_extension`.
pub fn canonical_examples(p: u64, e: usize) -> Result<Vec<NamedWitness>, BreuilError> {
    if p < 3 || !is_prime(p) {
        return Err(BreuilError::NotOddPrime(p));
    }
    let field = crate::algebra::fq_make(p, 1)?;
    if e == 0 || e as u64 % p == 0 {
        return Err(BreuilError::BadRamification { e, p });
    }
    let mut out = Vec::new();
    for r in 0..=e {
        for s in 0..=r {
            if (r - s) % (p as usize - 1) != 0 {
                continue;
            }
            let k = (r - s) / (p as usize - 1);
            if k < s.min(e - r) {
                continue;
            }
            for a_val in 1..p {
                for c_val in 1..p {
                    let a = field.from_u64(a_val);
                    let c = field.from_u64(c_val);
                    // b = a c^{p-1}; over F_p this is just a
                    let b = field.mul(&a, &field.pow(&c, p as u128 - 1));
                    let sub = RankOneModule::new(&field, e, r, a.clone())?;
                    let quot = RankOneModule::new(&field, e, s, b.clone())?;
                    let eta = UPoly::monomial(&field, e, &c, p as usize * k)?;
                    if k >= s {
                        let witness = ExtensionWitness::new(
                            sub.clone(),
                            quot.clone(),
                            UPoly::zero(&field, e)?,
                            eta.clone(),
                        )?;
                        assert!(validate_extension(&witness).valid);
                        out.push(NamedWitness {
                            label: format!(
                                "case1 r={r} s={s} a={a_val} b={b_val} c={c_val}",
                                b_val = field.prime_subfield_value(&b).unwrap()
                            ),
                            witness,
                        });
                    }
                    if k >= e - r {
                        let x = UPoly::monomial(&field, e, &c, k + r - e)?;
                        let witness = ExtensionWitness::new(sub, quot, x, eta)?;
                        assert!(validate_extension(&witness).valid);
                        out.push(NamedWitness {
                            label: format!(
                                "case2 r={r} s={s} a={a_val} b={b_val} c={c_val}",
                                b_val = field.prime_subfield_value(&b).unwrap()
                            ),
                            witness,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Confirm that over the `e = p + 1` base, the unique rank-one module
/// realizing `omega^k` admits no self-extension that fails to be killed
/// by `p`. Errors on the exceptional `k` where uniqueness fails.
pub fn self_extensions_killed_by_p(p: u64, k: u64) -> Result<bool, BreuilError> {
    let character = super::modules_for_character(p, k)?;
    if !character.unique {
        return Err(BreuilError::ExceptionalK { p, k });
    }
    let field = crate::algebra::fq_make(p, 1)?;
    let e = (p + 1) as usize;
    let m = RankOneModule::new(&field, e, character.rs[0], field.one())?;
    Ok(!p2_extension_exists(&m, &m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fq_make;

    fn module(field: &FqField, e: usize, r: usize, a: u64) -> RankOneModule {
        RankOneModule::new(field, e, r, field.from_u64(a)).unwrap()
    }

    /// The mu_p-by-(Z/pZ) witness at e = p - 1: sub A(e,1), quot A(0,1),
    /// x = 0, eta = u^p.
    fn connected_etale_witness(p: u64) -> ExtensionWitness {
        let field = fq_make(p, 1).unwrap();
        let e = (p - 1) as usize;
        let sub = module(&field, e, e, 1);
        let quot = module(&field, e, 0, 1);
        let x = UPoly::zero(&field, e).unwrap();
        let eta = UPoly::monomial(&field, e, &field.one(), p as usize).unwrap();
        ExtensionWitness::new(sub, quot, x, eta).unwrap()
    }

    #[test]
    fn example_witness_validates() {
        for p in [3, 5, 7] {
            let w = connected_etale_witness(p);
            let check = validate_extension(&w);
            assert!(check.valid, "p = {p}");
            // the group-scheme sequence is mu_p by Z/pZ
            let field = w.breuil_sub().field().clone();
            assert!(w.scheme_sub_params().is_mu_p(&field));
            assert!(w.scheme_quot_params().is_constant_zp(&field));
        }
    }

    #[test]
    fn split_witness_validates() {
        let field = fq_make(3, 1).unwrap();
        for (r, s, a, b) in [(2, 1, 1, 2), (0, 2, 2, 2), (1, 1, 2, 1)] {
            let w = ExtensionWitness::new(
                module(&field, 2, r, a),
                module(&field, 2, s, b),
                UPoly::zero(&field, 2).unwrap(),
                UPoly::zero(&field, 2).unwrap(),
            )
            .unwrap();
            assert!(validate_extension(&w).valid);
        }
    }

    #[test]
    fn fil_violation_is_a_distinct_diagnostic() {
        // p=3, e=7, sub A(4,1), quot A(2,1), x = 0, eta = u^3
        let field = fq_make(3, 1).unwrap();
        let w = ExtensionWitness::new(
            module(&field, 7, 4, 1),
            module(&field, 7, 2, 1),
            UPoly::zero(&field, 7).unwrap(),
            UPoly::monomial(&field, 7, &field.one(), 3).unwrap(),
        )
        .unwrap();
        let check = validate_extension(&w);
        assert!(!check.valid);
        assert_eq!(check.diagnostic, ExtensionDiagnostic::YNotInIdeal);
    }

    #[test]
    fn master_equation_failure_diagnostic() {
        // eta = u^4 lies in (u^4) but solves nothing at these parameters
        let field = fq_make(3, 1).unwrap();
        let w = ExtensionWitness::new(
            module(&field, 7, 4, 1),
            module(&field, 7, 2, 1),
            UPoly::zero(&field, 7).unwrap(),
            UPoly::monomial(&field, 7, &field.one(), 4).unwrap(),
        )
        .unwrap();
        let check = validate_extension(&w);
        assert!(!check.valid);
        assert_eq!(check.diagnostic, ExtensionDiagnostic::MasterEquationFailure);
    }

    #[test]
    fn classify_eta_worked_examples() {
        let f3 = fq_make(3, 1).unwrap();
        let one = f3.one();
        // (e, r, s) = (p-1, p-1, 0): eta = c u^p
        let etas = classify_eta(&f3, 2, 2, 0, &one, &one).unwrap();
        let strings: Vec<String> = etas.iter().map(|x| x.to_string()).collect();
        assert_eq!(strings, vec!["u^3", "2*u^3"]);
        // r = s strictly inside (0, e): empty
        assert!(classify_eta(&f3, 2, 1, 1, &one, &one).unwrap().is_empty());
        // p=3, e=7, r=4, s=2: k = 1 < min(2, 3)
        assert!(classify_eta(&f3, 7, 4, 2, &one, &one).unwrap().is_empty());
        // mu_{p^2} / Z_{p^2} style corners admit constants
        assert_eq!(classify_eta(&f3, 2, 0, 0, &one, &one).unwrap().len(), 2);
        assert_eq!(classify_eta(&f3, 2, 2, 2, &one, &one).unwrap().len(), 2);
    }

    #[test]
    fn oracle_worked_examples() {
        let f3 = fq_make(3, 1).unwrap();
        let one = f3.one();
        let outcome = solve_extensions_oracle(&f3, 2, 2, 0, &one, &one).unwrap();
        let strings: Vec<String> = outcome.eta_set.iter().map(|x| x.to_string()).collect();
        assert_eq!(strings, vec!["0", "u^3", "2*u^3"]);

        let outcome = solve_extensions_oracle(&f3, 7, 4, 2, &one, &one).unwrap();
        assert_eq!(outcome.eta_set.len(), 1);
        assert!(outcome.eta_set[0].is_zero());

        // b/a outside the (p-1)-th powers: only eta = 0
        let two = f3.from_u64(2);
        let outcome = solve_extensions_oracle(&f3, 2, 2, 0, &one, &two).unwrap();
        assert_eq!(outcome.eta_set.len(), 1);
        assert!(outcome.eta_set[0].is_zero());
    }

    #[test]
    fn oracle_agrees_with_closed_form_smoke() {
        // small grid here; the exhaustive grid lives in the acceptance suite
        let f3 = fq_make(3, 1).unwrap();
        for e in [1usize, 2, 4] {
            for r in 0..=e {
                for s in 0..=e {
                    for a in f3.units() {
                        for b in f3.units() {
                            let oracle = solve_extensions_oracle(&f3, e, r, s, &a, &b).unwrap();
                            let mut expected = classify_eta(&f3, e, r, s, &a, &b).unwrap();
                            expected.push(UPoly::zero(&f3, e).unwrap());
                            expected.sort_by(|x, y| x.coeffs().cmp(y.coeffs()));
                            assert_eq!(oracle.eta_set, expected, "e={e} r={r} s={s}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn p2_existence_examples() {
        let f3 = fq_make(3, 1).unwrap();
        // (r,s) = (0,0): mu_{p^2}
        assert!(p2_extension_exists(&module(&f3, 2, 0, 1), &module(&f3, 2, 0, 1)).unwrap());
        // e = p-1, (r,s) = (e,0): the connected-etale example
        assert!(p2_extension_exists(&module(&f3, 2, 2, 1), &module(&f3, 2, 0, 1)).unwrap());
        // p=3, e=7, (r,s) = (4,2): hom exists but both inequalities fail
        assert!(!p2_extension_exists(&module(&f3, 7, 4, 1), &module(&f3, 7, 2, 1)).unwrap());
    }

    #[test]
    fn canonical_examples_cover_connected_etale_case() {
        // the e = p-1 list reproduces the mu_p-by-Z/pZ witness up to scalar
        let witnesses = canonical_examples(3, 2).unwrap();
        assert!(!witnesses.is_empty());
        let target = connected_etale_witness(3);
        assert!(witnesses.iter().any(|n| {
            n.witness.breuil_sub() == target.breuil_sub()
                && n.witness.breuil_quot() == target.breuil_quot()
                && n.witness.eta() == target.eta()
                && n.witness.x().is_zero()
        }));
    }

    #[test]
    fn canonical_case2_has_vanishing_y() {
        for (p, e) in [(3u64, 2usize), (3, 4), (5, 4)] {
            for n in canonical_examples(p, e).unwrap() {
                if n.label.starts_with("case2") {
                    assert!(n.witness.y().is_zero(), "{}", n.label);
                }
            }
        }
    }

    #[test]
    fn oracle_size_guard() {
        // 2 * ep * f = 2 * 196 * 13 * 2 unknowns is past the desk bound
        let f169 = fq_make(13, 2).unwrap();
        let one = f169.one();
        assert!(matches!(
            solve_extensions_oracle(&f169, 196, 0, 0, &one, &one),
            Err(BreuilError::SystemTooLarge { .. })
        ));
    }

    #[test]
    fn killed_by_p_confirmations() {
        assert!(self_extensions_killed_by_p(7, 2).unwrap());
        assert!(self_extensions_killed_by_p(11, 3).unwrap());
        assert!(matches!(
            self_extensions_killed_by_p(7, 0).unwrap_err(),
            BreuilError::ExceptionalK { .. }
        ));
    }

    #[test]
    fn random_witnesses_keep_both_forms_in_agreement() {
        // validate_extension asserts internally that the master equation
        // and the coefficient relations agree; drive it over a pseudo-random
        // population of Fil-compatible witnesses, valid and invalid.
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        let mut valid = 0u32;
        for trial in 0..1000 {
            let (p, f) = if trial % 3 == 0 {
                (5u64, 1usize)
            } else {
                (3, (trial as usize % 2) + 1)
            };
            let field = fq_make(p, f).unwrap();
            let es: &[usize] = if p == 3 { &[2, 4, 5] } else { &[2, 3, 4] };
            let e = es[(next() % es.len() as u64) as usize];
            let ep = e * p as usize;
            let r = (next() % (e as u64 + 1)) as usize;
            let s = (next() % (e as u64 + 1)) as usize;
            let units = field.units();
            let a = units[(next() % units.len() as u64) as usize].clone();
            let b = units[(next() % units.len() as u64) as usize].clone();
            // random x, and random y supported in (u^r) so Fil holds
            let els = field.elements();
            let mut x = UPoly::zero(&field, e).unwrap();
            let mut y = UPoly::zero(&field, e).unwrap();
            for _ in 0..3 {
                let c = els[(next() % els.len() as u64) as usize].clone();
                let k = (next() % ep as u64) as usize;
                x = x.add(&UPoly::monomial(&field, e, &c, k).unwrap());
                let c = els[(next() % els.len() as u64) as usize].clone();
                let k = r + (next() % (ep - r).max(1) as u64) as usize;
                y = y.add(&UPoly::monomial(&field, e, &c, k.min(ep - 1)).unwrap());
            }
            let eta = y.add(&x.shift_up(e - s));
            let w = ExtensionWitness::new(
                RankOneModule::new(&field, e, r, a).unwrap(),
                RankOneModule::new(&field, e, s, b).unwrap(),
                x,
                eta,
            )
            .unwrap();
            // the call both exercises and asserts the two-form agreement
            if validate_extension(&w).valid {
                valid += 1;
            }
        }
        // mostly invalid, but the population is not degenerate
        assert!(valid > 0);
    }
}
