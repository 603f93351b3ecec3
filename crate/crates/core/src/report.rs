//! Report types and emission helpers shared by the CLI and the browser
//! demo.
//!
//! Every JSON document has the shape `{"tool", "version", "params",
//! "results"}` with a fixed key order and no floats; quantities that can
//! exceed 53-bit integers (exact rationals, residues) are emitted as
//! decimal strings. CSV output carries one fixed header row per mode and
//! one row per parameter tuple, in deterministic order (primes ascending,
//! k ascending, `(r,s,a,b)` lexicographic).

use crate::algebra::fq_make;
use crate::bernoulli::{
    bernoulli_exact, hypothesis_report, irregular_pairs, rational_mod_pn, BernoulliError,
    BernoulliTable, HypothesisKind, HypothesisReport,
};
use crate::breuil::{
    classify_eta, hom_space, modules_for_character, p2_extension_exists,
    self_extensions_killed_by_p, BreuilError, CharacterModules, RankOneModule,
};
use crate::modforms::{
    eisenstein_local_structure, sturm_primes, EisensteinLocalReport, ModformsError,
};
use crate::primes::primes_up_to;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("pmax = {0} exceeds the default bound 1000 (pass --allow-large to override)")]
    PmaxTooLarge(u64),
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
    #[error(transparent)]
    Bernoulli(#[from] BernoulliError),
    #[error(transparent)]
    Breuil(#[from] BreuilError),
    #[error(transparent)]
    Modforms(#[from] ModformsError),
}

/// Fixed top-level JSON wrapper.
#[derive(Debug, Clone, Serialize)]
pub struct Report<P: Serialize, R: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub params: P,
    pub results: R,
}

fn wrap<P: Serialize, R: Serialize>(params: P, results: R) -> Report<P, R> {
    Report {
        tool: "eisenstein",
        version: env!("CARGO_PKG_VERSION"),
        params,
        results,
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

// ---------------------------------------------------------------- scan

#[derive(Debug, Clone, Serialize)]
pub struct ScanParams {
    pub pmax: u64,
    pub with_hecke: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IrregularPair {
    pub p: u64,
    pub k: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanResults {
    /// One hypothesis report per scanned `(p, k)`.
    pub rows: Vec<HypothesisReport>,
    pub irregular_pairs: Vec<IrregularPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hecke: Option<Vec<EisensteinLocalReport>>,
}

pub type ScanReport = Report<ScanParams, ScanResults>;

/// Scan all primes `p <= pmax` and even `2 <= k < p-1`: hypothesis flags
/// for every pair, the irregular pairs, and (optionally) an Eisenstein
/// structure report per irregular pair.
pub fn build_scan(
    pmax: u64,
    with_hecke: bool,
    allow_large: bool,
) -> Result<ScanReport, ReportError> {
    if pmax > 1000 && !allow_large {
        return Err(ReportError::PmaxTooLarge(pmax));
    }
    let mut rows = Vec::new();
    let mut irregular = Vec::new();
    let mut table = BernoulliTable::new();
    for p in primes_up_to(pmax).into_iter().filter(|&p| p > 2) {
        let mut k = 2;
        while k + 1 < p {
            rows.push(hypothesis_report(p, k, HypothesisKind::Gamma1)?);
            k += 2;
        }
        for k in irregular_pairs(p, &mut table) {
            irregular.push(IrregularPair { p, k });
        }
    }
    let hecke = if with_hecke {
        let mut reports = Vec::new();
        for pair in &irregular {
            reports.push(eisenstein_local_structure(pair.p, pair.k, None)?);
        }
        Some(reports)
    } else {
        None
    };
    Ok(wrap(
        ScanParams { pmax, with_hecke },
        ScanResults {
            rows,
            irregular_pairs: irregular,
            hecke,
        },
    ))
}

pub fn scan_to_csv(report: &ScanReport) -> String {
    use crate::bernoulli::HypothesisFlags;
    let mut out = String::from(
        "p,k,divides_bk,exactly_divides_bk,divides_b2_omega,exactly_divides_b2_omega,irregular,eisenstein_dim,structure\n",
    );
    for row in &report.results.rows {
        let HypothesisFlags::Gamma1 {
            divides_bk,
            exactly_divides_bk,
            divides_b2_omega,
            exactly_divides_b2_omega,
        } = &row.flags
        else {
            continue;
        };
        let irregular = report
            .results
            .irregular_pairs
            .iter()
            .any(|pr| pr.p == row.p && pr.k == row.k);
        let (dm, structure) = report
            .results
            .hecke
            .as_ref()
            .and_then(|hs| hs.iter().find(|h| h.p == row.p && h.k == row.k))
            .map(|h| {
                (
                    h.localized_dimension.to_string(),
                    h.structure_descriptor.clone(),
                )
            })
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            row.p,
            row.k,
            divides_bk,
            exactly_divides_bk,
            divides_b2_omega,
            exactly_divides_b2_omega,
            irregular,
            dm,
            structure
        ));
    }
    out
}

// ---------------------------------------------------------------- breuil

#[derive(Debug, Clone, Serialize)]
pub struct BreuilTableParams {
    pub p: u64,
    pub e: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BreuilTableRow {
    pub r: usize,
    pub s: usize,
    pub a: u64,
    pub b: u64,
    /// F_p-dimension of Hom(A(s,b), A(r,a)) (module side).
    pub hom_dimension: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hom_witness: Option<String>,
    /// Admissible nonzero eta, rendered as polynomials in u.
    pub eta_set: Vec<String>,
    /// Whether an extension of G_{r,a} by G_{s,b} not killed by p exists.
    pub not_killed_by_p: bool,
}

pub type BreuilTableReport = Report<BreuilTableParams, Vec<BreuilTableRow>>;

/// The full `(r, s, a, b)` classification table over `F_p`.
pub fn build_breuil_table(p: u64, e: usize) -> Result<BreuilTableReport, ReportError> {
    let field = fq_make(p, 1)?;
    let mut rows = Vec::new();
    for r in 0..=e {
        for s in 0..=e {
            for a in 1..p {
                for b in 1..p {
                    let av = field.from_u64(a);
                    let bv = field.from_u64(b);
                    let quot_module = RankOneModule::new(&field, e, r, av.clone())?;
                    let sub_module = RankOneModule::new(&field, e, s, bv.clone())?;
                    let hom = hom_space(&sub_module, &quot_module)?;
                    let etas = classify_eta(&field, e, r, s, &av, &bv)?;
                    let not_killed = p2_extension_exists(&quot_module, &sub_module)?;
                    rows.push(BreuilTableRow {
                        r,
                        s,
                        a,
                        b,
                        hom_dimension: hom.dimension,
                        hom_witness: hom.witness.map(|w| {
                            format!(
                                "e2 -> {}",
                                crate::algebra::UPoly::monomial(&field, e, &w.c, w.m)
                                    .expect("validated")
                            )
                        }),
                        eta_set: etas.iter().map(|x| x.to_string()).collect(),
                        not_killed_by_p: not_killed,
                    });
                }
            }
        }
    }
    Ok(wrap(BreuilTableParams { p, e }, rows))
}

pub fn breuil_table_to_csv(report: &BreuilTableReport) -> String {
    let mut out = String::from("r,s,a,b,hom_dimension,eta_set,not_killed_by_p\n");
    for row in &report.results {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.r,
            row.s,
            row.a,
            row.b,
            row.hom_dimension,
            row.eta_set.join(";"),
            row.not_killed_by_p
        ));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct DescentParams {
    pub p: u64,
    pub e: u64,
}

pub type DescentReport = Report<DescentParams, Vec<CharacterModules>>;

/// Rank-one modules with descent data for every character exponent `k`.
pub fn build_descent(p: u64) -> Result<DescentReport, ReportError> {
    let mut rows = Vec::new();
    for k in 0..p - 1 {
        rows.push(modules_for_character(p, k)?);
    }
    Ok(wrap(DescentParams { p, e: p + 1 }, rows))
}

pub fn descent_to_csv(report: &DescentReport) -> String {
    let mut out = String::from("k,rs,unique\n");
    for row in &report.results {
        let rs: Vec<String> = row.rs.iter().map(|r| r.to_string()).collect();
        out.push_str(&format!("{},{},{}\n", row.k, rs.join(";"), row.unique));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckKParams {
    pub p: u64,
    pub k: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckKResults {
    /// The unique `r` with `a = 1` realizing `omega^k` at `e = p + 1`.
    pub r: usize,
    /// True when every self-extension is killed by `p`.
    pub confirmed: bool,
}

pub type CheckKReport = Report<CheckKParams, CheckKResults>;

pub fn build_check_k(p: u64, k: u64) -> Result<CheckKReport, ReportError> {
    let modules = modules_for_character(p, k)?;
    let confirmed = self_extensions_killed_by_p(p, k)?;
    Ok(wrap(
        CheckKParams { p, k },
        CheckKResults {
            r: modules.rs[0],
            confirmed,
        },
    ))
}

// ---------------------------------------------------------------- hecke

#[derive(Debug, Clone, Serialize)]
pub struct HeckeParams {
    pub p: u64,
    pub k: u64,
    pub sturm: bool,
}

pub type HeckeReport = Report<HeckeParams, EisensteinLocalReport>;

pub fn build_hecke(p: u64, k: u64, sturm: bool) -> Result<HeckeReport, ReportError> {
    let report = if sturm {
        let primes = sturm_primes(p, k);
        eisenstein_local_structure(p, k, Some(&primes))?
    } else {
        eisenstein_local_structure(p, k, None)?
    };
    Ok(wrap(HeckeParams { p, k, sturm }, report))
}

// ------------------------------------------------------------- bernoulli

#[derive(Debug, Clone, Serialize)]
pub struct BernoulliParams {
    pub n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus_prime: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BernoulliResults {
    /// Exact value as `numerator/denominator`.
    pub exact: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue: Option<String>,
}

pub type BernoulliReport = Report<BernoulliParams, BernoulliResults>;

pub fn build_bernoulli(
    n: u64,
    modulus: Option<(u64, u32)>,
) -> Result<BernoulliReport, ReportError> {
    let b = bernoulli_exact(n as usize)?;
    let exact = format!("{}/{}", b.numer(), b.denom());
    let residue = match modulus {
        None => None,
        Some((p, prec)) => Some(rational_mod_pn(&b, p, prec)?.to_string()),
    };
    Ok(wrap(
        BernoulliParams {
            n,
            modulus_prime: modulus.map(|m| m.0),
            precision: modulus.map(|m| m.1),
        },
        BernoulliResults { exact, residue },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_finds_the_first_irregular_pair() {
        let report = build_scan(40, false, false).unwrap();
        let pairs: Vec<(u64, u64)> = report
            .results
            .irregular_pairs
            .iter()
            .map(|pr| (pr.p, pr.k))
            .collect();
        assert_eq!(pairs, vec![(37, 32)]);
    }

    #[test]
    fn scan_below_37_is_regular() {
        let report = build_scan(30, false, false).unwrap();
        assert!(report.results.irregular_pairs.is_empty());
    }

    #[test]
    fn scan_rows_cover_every_pair_once() {
        let report = build_scan(30, false, false).unwrap();
        let mut seen = std::collections::HashSet::new();
        for row in &report.results.rows {
            assert!(
                seen.insert((row.p, row.k)),
                "duplicate ({}, {})",
                row.p,
                row.k
            );
            assert!(row.k >= 2 && row.k % 2 == 0 && row.k < row.p - 1);
        }
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29] {
            let mut k = 2;
            while k + 1 < p {
                assert!(seen.contains(&(p, k)), "missing ({p}, {k})");
                k += 2;
            }
        }
    }

    #[test]
    fn scan_json_round_trips_byte_identically() {
        let report = build_scan(40, false, false).unwrap();
        let text = to_json(&report);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string_pretty(&value).unwrap() + "\n";
        assert_eq!(text, again);
    }

    #[test]
    fn scan_pmax_guard() {
        assert!(matches!(
            build_scan(2000, false, false),
            Err(ReportError::PmaxTooLarge(2000))
        ));
        assert!(build_scan(5, false, true).is_ok());
    }

    #[test]
    fn breuil_table_worked_row() {
        let report = build_breuil_table(3, 2).unwrap();
        let row = report
            .results
            .iter()
            .find(|row| (row.r, row.s, row.a, row.b) == (2, 0, 1, 1))
            .unwrap();
        assert_eq!(row.hom_dimension, 1);
        assert_eq!(row.eta_set, vec!["u^3", "2*u^3"]);
        assert!(row.not_killed_by_p);
    }

    #[test]
    fn descent_rows_for_seven() {
        let report = build_descent(7).unwrap();
        let row = &report.results[2];
        assert_eq!(row.k, 2);
        assert_eq!(row.rs, vec![4]);
        assert!(row.unique);
    }

    #[test]
    fn check_k_confirms() {
        let report = build_check_k(7, 2).unwrap();
        assert_eq!(report.results.r, 4);
        assert!(report.results.confirmed);
    }

    #[test]
    fn bernoulli_report_values() {
        let report = build_bernoulli(12, Some((11, 2))).unwrap();
        assert_eq!(report.results.exact, "-691/2730");
        assert!(report.results.residue.is_some());
        // 5 divides the denominator 2730, so mod-5 reduction is a pole
        assert!(build_bernoulli(12, Some((5, 2))).is_err());
    }

    #[test]
    fn csv_has_fixed_headers() {
        let scan = build_scan(10, false, false).unwrap();
        assert!(scan_to_csv(&scan).starts_with("p,k,divides_bk"));
        let table = build_breuil_table(3, 2).unwrap();
        assert!(breuil_table_to_csv(&table).starts_with("r,s,a,b,"));
        let descent = build_descent(5).unwrap();
        assert!(descent_to_csv(&descent).starts_with("k,rs,unique"));
    }
}
