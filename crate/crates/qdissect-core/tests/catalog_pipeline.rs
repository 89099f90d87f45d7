//! End-to-end runs of the built-in catalog through both the brute-force
//! verifier and the certifying prover at a moderate order.

use qdissect_core::series::product_expand;
use qdissect_core::verify::{builtin_catalog, prove_claim, verify_claim, ProofStatus};

#[test]
fn whole_catalog_verifies() {
    for claim in builtin_catalog() {
        let report = verify_claim(&claim, 400);
        assert_eq!(
            report.status,
            ProofStatus::Verified,
            "{} at {:?}",
            claim.id,
            report.first_counterexample
        );
    }
}

#[test]
fn prover_statuses_split_as_expected() {
    let mut certified = Vec::new();
    let mut inapplicable = Vec::new();
    for claim in builtin_catalog() {
        let report = prove_claim(&claim, 400);
        match report.status {
            ProofStatus::Certified => certified.push(claim.id.clone()),
            ProofStatus::Inapplicable => {
                // Outside the rewrite rules, but the coefficients themselves
                // must still check out.
                let v = verify_claim(&claim, 400);
                assert_eq!(v.status, ProofStatus::Verified, "{}", claim.id);
                inapplicable.push(claim.id.clone());
            }
            other => panic!("{}: unexpected status {:?}", claim.id, other),
        }
    }
    assert_eq!(certified.len(), 59);
    assert_eq!(inapplicable.len(), 6);
    assert!(inapplicable.iter().all(|id| id.starts_with("sec1")));
}

#[test]
fn certified_groups_carry_exact_pairings() {
    // Every certified claim's evidence must be exact pairings, never the
    // truncated fallback.
    for claim in builtin_catalog() {
        let report = prove_claim(&claim, 300);
        if report.status != ProofStatus::Certified {
            continue;
        }
        let groups = report.groups.expect("certified claims carry groups");
        assert!(!groups.is_empty(), "{}", claim.id);
        for g in &groups {
            assert_eq!(g.mode, qdissect_core::lattice::CancelMode::Certified);
            assert_eq!(g.status, qdissect_core::lattice::CancelStatus::Cancelled);
            assert!(g.residual_first_exponent.is_none());
        }
    }
}

#[test]
fn progressions_really_sit_in_expansions() {
    // Cross-evaluator sanity on one claim per group: the expansion itself,
    // not just the verifier, shows zeros along the progression and nonzeros
    // elsewhere.
    let cat = builtin_catalog();
    for prefix in ["thm3.1-a-plus", "thm3.2-e2", "thm3.3-h3", "thm3.4-k", "sec1-tang-b1"] {
        let claim = cat
            .iter()
            .find(|c| c.id.starts_with(prefix))
            .unwrap_or_else(|| panic!("{prefix} in catalog"));
        let h = product_expand(&claim.spec, 300).unwrap();
        let mut hit_nonzero = false;
        for e in 0..=300 {
            if e % claim.t == claim.r {
                assert_eq!(h.coeff(e), 0i64.into(), "{} at {}", claim.id, e);
            } else if h.coeff(e) != 0i64.into() {
                hit_nonzero = true;
            }
        }
        assert!(hit_nonzero, "{}: expansion is not trivially zero", claim.id);
    }
}

#[test]
fn scan_family_rediscovers_catalog_rows() {
    use qdissect_core::verify::{builtin_templates, scan};

    let tmpl = builtin_templates()
        .into_iter()
        .find(|t| t.name == "e")
        .unwrap();
    let findings = scan(&tmpl);
    // Three known progressions, each in two sign variants, plus exactly one
    // progression outside the catalog; everything the scan reports certifies.
    assert_eq!(findings.len(), 7, "{findings:?}");
    assert_eq!(findings.iter().filter(|f| f.known).count(), 6);
    assert!(findings.iter().all(|f| f.certified));
    let novel: Vec<_> = findings.iter().filter(|f| !f.known).collect();
    assert_eq!(novel.len(), 1);
    assert_eq!((novel[0].t, novel[0].r), (7, 4));
}
