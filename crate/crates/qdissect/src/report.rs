//! JSON report shapes.
//!
//! Everything here mirrors a core type into the stable wire format: series
//! as `[[exponent, "coefficient"], ...]` with exact decimal strings,
//! cancellation reports with their pairing lists, and the run report with a
//! status summary. Field layout is part of the CLI contract, so these
//! structs change only deliberately.

use serde::Serialize;

use qdissect_core::lattice::{CancelMode, CancelStatus, CancellationReport};
use qdissect_core::series::Series;
use qdissect_core::verify::{Finding, ProofReport};

#[derive(Serialize)]
pub struct SeriesJson {
    pub lo: i64,
    pub order: i64,
    /// Nonzero terms in increasing exponent order.
    pub coeffs: Vec<(i64, String)>,
}

impl From<&Series> for SeriesJson {
    fn from(s: &Series) -> Self {
        SeriesJson {
            lo: s.lo(),
            order: s.order(),
            coeffs: s
                .nonzero_terms()
                .iter()
                .map(|(e, c)| (*e, c.to_string()))
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct CancellationJson {
    pub t: i64,
    pub r: i64,
    pub mode: &'static str,
    pub status: &'static str,
    pub pairing: Vec<(usize, usize)>,
    pub residual_first_exponent: Option<i64>,
}

impl From<&CancellationReport> for CancellationJson {
    fn from(c: &CancellationReport) -> Self {
        CancellationJson {
            t: c.t,
            r: c.r,
            mode: match c.mode {
                CancelMode::Certified => "certified",
                CancelMode::Truncated => "truncated",
            },
            status: match c.status {
                CancelStatus::Cancelled => "cancelled",
                CancelStatus::Residual => "residual",
            },
            pairing: c.pairing.clone(),
            residual_first_exponent: c.residual_first_exponent,
        }
    }
}

#[derive(Serialize)]
pub struct CounterexampleJson {
    pub n: i64,
    pub coeff: String,
}

#[derive(Serialize)]
pub struct ClaimJson {
    pub id: String,
    pub status: &'static str,
    pub order: i64,
    pub first_counterexample: Option<CounterexampleJson>,
    pub groups: Option<Vec<CancellationJson>>,
    /// Set to "inapplicable" when the certifying prover declined and the
    /// status came from the brute-force verifier instead.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prover: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl ClaimJson {
    pub fn from_report(r: &ProofReport) -> Self {
        ClaimJson {
            id: r.claim_id.clone(),
            status: r.status.as_str(),
            order: r.order,
            first_counterexample: r.first_counterexample.as_ref().map(|c| CounterexampleJson {
                n: c.n,
                coeff: c.coeff.to_string(),
            }),
            groups: r
                .groups
                .as_ref()
                .map(|gs| gs.iter().map(CancellationJson::from).collect()),
            prover: None,
            reason: r.reason.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct SummaryJson {
    pub certified: usize,
    pub verified: usize,
    pub refuted: usize,
    pub inapplicable: usize,
}

#[derive(Serialize)]
pub struct RunReportJson {
    pub claims: Vec<ClaimJson>,
    pub summary: SummaryJson,
}

impl RunReportJson {
    pub fn new(claims: Vec<ClaimJson>) -> Self {
        let count = |s: &str| claims.iter().filter(|c| c.status == s).count();
        let summary = SummaryJson {
            certified: count("certified"),
            verified: count("verified"),
            refuted: count("refuted"),
            inapplicable: count("inapplicable"),
        };
        RunReportJson { claims, summary }
    }
}

#[derive(Serialize)]
pub struct FindingJson {
    pub family: String,
    pub spec: String,
    pub t: i64,
    pub r: i64,
    pub order: i64,
    /// "certified" when the prover closed the finding, "empirical" when only
    /// the truncated expansion vouches for it.
    pub status: &'static str,
    /// "known" for catalog rows, "new-empirical" for discoveries.
    pub novelty: &'static str,
}

impl From<&Finding> for FindingJson {
    fn from(f: &Finding) -> Self {
        FindingJson {
            family: f.family.clone(),
            spec: f.spec.to_string(),
            t: f.t,
            r: f.r,
            order: f.order,
            status: if f.certified { "certified" } else { "empirical" },
            novelty: if f.known { "known" } else { "new-empirical" },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qdissect_core::series::{product_expand, PochFactor, ProductSpec};
    use qdissect_core::verify::{verify_claim, Claim};

    fn pentagonal_spec() -> ProductSpec {
        ProductSpec::new(vec![PochFactor::pair(1, 1, 2, 5, 1).unwrap()])
    }

    #[test]
    fn series_json_keeps_exact_decimal_strings() {
        let s = product_expand(&pentagonal_spec(), 9).unwrap();
        let j = SeriesJson::from(&s);
        assert_eq!(j.lo, 0);
        assert_eq!(j.order, 9);
        assert_eq!(j.coeffs[0], (0, "1".to_string()));
        assert_eq!(j.coeffs[1], (2, "-1".to_string()));
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("[2,\"-1\"]"));
    }

    #[test]
    fn claim_json_skips_absent_optional_fields() {
        let claim = qdissect_core::verify::builtin_catalog().remove(0);
        let report = verify_claim(&claim, 60);
        assert_eq!(report.status.as_str(), "verified");
        let j = ClaimJson::from_report(&report);
        let text = serde_json::to_string(&j).unwrap();
        assert!(!text.contains("prover"));
        assert!(!text.contains("reason"));
        assert!(text.contains("\"first_counterexample\":null"));
    }

    #[test]
    fn run_report_counts_statuses() {
        let claim = Claim {
            id: "t".into(),
            spec: pentagonal_spec(),
            t: 5,
            r: 2,
            source: String::new(),
        };
        let ok = ClaimJson::from_report(&verify_claim(&claim, 60));
        let report = RunReportJson::new(vec![ok]);
        assert_eq!(report.summary.refuted, 1);
        assert_eq!(report.summary.verified, 0);
    }
}
