//! Claims, the brute-force verifier, the certifying prover, the built-in
//! claim catalog, and the vanishing-progression scanner.
//!
//! A [`Claim`] says: the expansion of a [`ProductSpec`] has coefficient zero
//! at every exponent congruent to `r` mod `t`. [`verify_claim`] checks this
//! to a truncation order. [`prove_claim`] tries to certify it for all orders:
//! it rewrites each product factor as a theta quotient, splits the
//! non-supported thetas, converts the resulting two-theta terms to lattice
//! sums, restricts to the residue class, and pairs the parts by canonical
//! form. A perfect pairing in every group is a proof.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::lattice::{
    components_cancel, residue_component, theta_pair_to_lattice, CancelMode, CancelStatus,
    CancellationReport, QuadLatticeSum, ResidueClassDecomp,
};
use crate::series::{
    poch_expand, product_expand, support_modulus_check, PochFactor, ProductSpec,
};
use crate::theta::{split3, square_split, Monomial, ThetaSpec, ThetaTerm};

/// A vanishing-progression claim about a product expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub id: String,
    pub spec: ProductSpec,
    pub t: i64,
    pub r: i64,
    /// Free-form catalog note (family, offset, cross-references).
    pub source: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProofStatus {
    /// Vanishing certified for every order by exact part pairing.
    Certified,
    /// Vanishing checked coefficientwise up to the truncation order.
    Verified,
    /// A nonzero coefficient sits in the progression.
    Refuted,
    /// The claim is outside the prover's rewrite rules.
    Inapplicable,
}

impl ProofStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ProofStatus::Certified => "certified",
            ProofStatus::Verified => "verified",
            ProofStatus::Refuted => "refuted",
            ProofStatus::Inapplicable => "inapplicable",
        }
    }
}

/// First refuting coefficient: exponent `n` and its value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub n: i64,
    pub coeff: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofReport {
    pub claim_id: String,
    pub status: ProofStatus,
    pub order: i64,
    pub first_counterexample: Option<Counterexample>,
    /// One cancellation report per term group, in group-key order; `None`
    /// when the prover never reached the grouping stage.
    pub groups: Option<Vec<CancellationReport>>,
    /// Why the prover does not apply, when it does not.
    pub reason: Option<String>,
}

/// Checks every coefficient of the progression up to order `n`.
pub fn verify_claim(claim: &Claim, n: i64) -> ProofReport {
    assert!(claim.t >= 1 && claim.r >= 0 && claim.r < claim.t);
    let series = product_expand(&claim.spec, n).expect("catalog specs are valid");
    let mut e = claim.r;
    let mut counterexample = None;
    while e <= n {
        let c = series.coeff(e);
        if !num_traits::Zero::is_zero(&c) {
            counterexample = Some(Counterexample { n: e, coeff: c });
            break;
        }
        e += claim.t;
    }
    ProofReport {
        claim_id: claim.id.clone(),
        status: if counterexample.is_some() {
            ProofStatus::Refuted
        } else {
            ProofStatus::Verified
        },
        order: n,
        first_counterexample: counterexample,
        groups: None,
        reason: None,
    }
}

/// A distributed term awaiting lattice conversion: `coeff * q^c * thetas`.
struct Term {
    coeff: i64,
    c: i64,
    factors: Vec<ThetaSpec>,
}

/// True when the theta's support lies in `tZ` (both exponents do).
fn is_supported(f: &ThetaSpec, t: i64) -> bool {
    f.a.exp.rem_euclid(t) == 0 && f.b.exp.rem_euclid(t) == 0
}

fn apply_term(base: &Term, piece: &ThetaTerm) -> Term {
    let mut factors = base.factors.clone();
    factors.extend(piece.factors.iter().copied());
    Term {
        coeff: base.coeff * piece.coeff * piece.shift.sign as i64,
        c: base.c + piece.shift.exp,
        factors,
    }
}

/// Attempts an all-orders certificate for the claim; falls back to the
/// truncated verifier when group pairing fails, and reports
/// [`ProofStatus::Inapplicable`] when the claim is outside the rewrite rules.
pub fn prove_claim(claim: &Claim, n: i64) -> ProofReport {
    assert!(claim.t >= 1 && claim.r >= 0 && claim.r < claim.t);
    match prove_inner(claim, n) {
        Ok(report) => report,
        Err(reason) => ProofReport {
            claim_id: claim.id.clone(),
            status: ProofStatus::Inapplicable,
            order: n,
            first_counterexample: None,
            groups: None,
            reason: Some(reason),
        },
    }
}

/// One multiplier group of the prover's decomposition: `coeff` times the
/// product of the supported `multipliers` times the signed sum of the
/// `lattices`. Summing the groups reproduces the claim's product with its
/// `tZ`-supported factors divided out, so a residue class of the product
/// vanishes exactly when the same class of every group does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompGroup {
    pub coeff: i64,
    pub multipliers: Vec<ThetaSpec>,
    pub lattices: Vec<QuadLatticeSum>,
}

/// Runs the prover's rewrite pipeline on the claim's product and returns the
/// resulting multiplier groups in deterministic key order. Errs when the
/// claim is outside the rewrite rules, with the reason.
pub fn decompose(claim: &Claim) -> Result<Vec<DecompGroup>, String> {
    let t = claim.t;
    assert!(t >= 1);
    // Step 1: rewrite each factor as a theta numerator over an Euler-factor
    // denominator, recording supported thetas as multipliers and queueing the
    // rest for splitting.
    let mut shared_multipliers: Vec<ThetaSpec> = Vec::new();
    let mut active: Vec<(ThetaSpec, u32)> = Vec::new();
    for f in &claim.spec.factors {
        if f.single {
            // (q^m; q^m) is a plain multiplier; it must not leak exponents
            // across residue classes.
            if f.m % t != 0 {
                return Err(format!(
                    "factor (q^{0};q^{0}) is not supported on multiples of {1}",
                    f.m, t
                ));
            }
            continue;
        }
        if f.sign1 * f.sign2 != 1 {
            return Err("mismatched signs".to_string());
        }
        // Triple-product rewrite divides by (q^m; q^m); the quotient keeps
        // the progression intact only when that denominator's support lies in
        // tZ. (Structural condition: t | m; the series check is the contract.)
        let denom = poch_expand(1, f.m, f.m, 8 * f.m.max(t)).expect("m >= 1");
        if f.m % t != 0 || !support_modulus_check(&denom, t) {
            return Err(format!(
                "denominator (q^{0};q^{0}) is not supported on multiples of {1}",
                f.m, t
            ));
        }
        let theta = ThetaSpec::new(
            Monomial::new(-f.sign1, f.a),
            Monomial::new(-f.sign2, f.m - f.a),
        )
        .expect("pair exponents sum to m > 0");
        if is_supported(&theta, t) {
            for _ in 0..f.power {
                shared_multipliers.push(theta);
            }
        } else {
            active.push((theta, f.power));
        }
    }

    // Step 2: split each active theta; powers above two have no split rule.
    let mut term_lists: Vec<[ThetaTerm; 2]> = Vec::new();
    for (theta, power) in &active {
        match power {
            1 => term_lists.push(split3(theta)),
            2 => term_lists.push(square_split(theta)),
            p => return Err(format!("unsupported theta power {}", p)),
        }
    }

    // Step 3: distribute into 2^k terms, dropping vanished ones.
    let mut terms = vec![Term {
        coeff: 1,
        c: 0,
        factors: shared_multipliers.clone(),
    }];
    for pair in &term_lists {
        let mut next = Vec::new();
        for base in &terms {
            for piece in pair {
                let t2 = apply_term(base, piece);
                if t2.coeff != 0 {
                    next.push(t2);
                }
            }
        }
        terms = next;
    }

    // Step 4: per term, partition factors into supported multipliers and
    // active thetas; exactly two active thetas form a lattice sum.
    let mut groups: BTreeMap<(i64, Vec<ThetaSpec>), Vec<QuadLatticeSum>> = BTreeMap::new();
    for term in &terms {
        let (multipliers, actives): (Vec<ThetaSpec>, Vec<ThetaSpec>) = term
            .factors
            .iter()
            .copied()
            .partition(|f| is_supported(f, t));
        if actives.len() != 2 {
            return Err(format!(
                "a distributed term has {} active theta factors; the lattice step needs exactly 2",
                actives.len()
            ));
        }
        let sgn = if term.coeff > 0 { 1 } else { -1 };
        let lattice = theta_pair_to_lattice(term.c, sgn, &actives[0], &actives[1])
            .map_err(|e| e.to_string())?;
        let mut key_mult = multipliers;
        key_mult.sort();
        groups
            .entry((term.coeff.abs(), key_mult))
            .or_default()
            .push(lattice);
    }
    Ok(groups
        .into_iter()
        .map(|((coeff, multipliers), lattices)| DecompGroup {
            coeff,
            multipliers,
            lattices,
        })
        .collect())
}

fn prove_inner(claim: &Claim, n: i64) -> Result<ProofReport, String> {
    let groups = decompose(claim)?;

    // Step 5: restrict each group to the residue class and pair parts by
    // canonical form.
    let mut reports = Vec::new();
    for group in &groups {
        let xs: Vec<(i8, ResidueClassDecomp)> = group
            .lattices
            .iter()
            .map(|l| {
                (
                    1,
                    residue_component(l, claim.t, claim.r).expect("validated residue"),
                )
            })
            .collect();
        reports.push(components_cancel(&xs, n, CancelMode::Certified));
    }

    // Step 6: aggregate. Any truncated residual defers to the brute-force
    // verifier on the full product: grouping is sufficient, not necessary.
    let all_certified = reports
        .iter()
        .all(|r| r.mode == CancelMode::Certified && r.status == CancelStatus::Cancelled);
    let all_cancelled = reports.iter().all(|r| r.status == CancelStatus::Cancelled);
    let (status, counterexample) = if all_certified {
        (ProofStatus::Certified, None)
    } else if all_cancelled {
        (ProofStatus::Verified, None)
    } else {
        let check = verify_claim(claim, n);
        (check.status, check.first_counterexample)
    };
    Ok(ProofReport {
        claim_id: claim.id.clone(),
        status,
        order: n,
        first_counterexample: counterexample,
        groups: Some(reports),
        reason: None,
    })
}

fn claim(
    id: &str,
    source: &str,
    factors: &[(i8, i8, i64, i64, u32)],
    t: i64,
    r: i64,
) -> Claim {
    let fs = factors
        .iter()
        .map(|&(s1, s2, a, m, p)| PochFactor::pair(s1, s2, a, m, p).expect("valid catalog factor"))
        .collect();
    Claim {
        id: id.to_string(),
        spec: ProductSpec::new(fs),
        t,
        r,
        source: source.to_string(),
    }
}

/// The built-in catalog: 65 vanishing-progression claims over moduli 5 and 7.
///
/// Ids follow `<group>-<family><offset>-<sign>`; `source` carries the family
/// description and, where one exists, a cross-reference to a previously
/// tabulated parametric family.
pub fn builtin_catalog() -> Vec<Claim> {
    let mut out = Vec::new();
    let sign_tag = |s: i8| if s == 1 { "plus" } else { "minus" };

    // Group thm3.1: modulus 5, pair (5, 15), powers (1, 2) and (2, 1).
    for s in [1i8, -1] {
        let tag = sign_tag(s);
        out.push(claim(
            &format!("thm3.1-a-{}", tag),
            "group thm3.1, family a: (q,q^4;q^5)(s q^6, s q^9; q^15)^2 at 5n+3",
            &[(1, 1, 1, 5, 1), (s, s, 6, 15, 2)],
            5,
            3,
        ));
        for (al, r, xref) in [
            (2, 2, "; l=1, t=1 case of the tabulated family X(t,2t,5l,15l,2,1)"),
            (3, 4, ""),
            (7, 3, "; l=1, t=4 case of the tabulated family X(t,2t,5l,15l,2,1)"),
        ] {
            out.push(claim(
                &format!("thm3.1-b{}-{}", al, tag),
                &format!(
                    "group thm3.1, family b, offset {}: (s q, s q^4; q^5)^2 (q^{0}, q^{1}; q^15){2}",
                    al,
                    15 - al,
                    xref
                ),
                &[(s, s, 1, 5, 2), (1, 1, al, 15, 1)],
                5,
                r,
            ));
        }
        for (be, r, xref) in [
            (1, 3, ""),
            (4, 4, "; l=1, t=2 case of the tabulated family Z(t,2t,5l,15l,2,1)"),
            (6, 1, "; l=1, t=3 case of the tabulated family Z(t,2t,5l,15l,2,1)"),
        ] {
            out.push(claim(
                &format!("thm3.1-c{}-{}", be, tag),
                &format!(
                    "group thm3.1, family c, offset {}: (s q^2, s q^3; q^5)^2 (q^{0}, q^{1}; q^15){2}",
                    be,
                    15 - be,
                    xref
                ),
                &[(s, s, 2, 5, 2), (1, 1, be, 15, 1)],
                5,
                r,
            ));
        }
    }

    // Group thm3.2: modulus 7, pair (7, 21), powers (1, 1).
    for s in [1i8, -1] {
        let tag = sign_tag(s);
        for (fam, a0, table) in [
            ("e", 1, [(2i64, 5i64), (5, 6), (9, 2)]),
            ("f", 2, [(3, 5), (4, 3), (10, 4)]),
            ("g", 3, [(1, 4), (6, 1), (8, 6)]),
        ] {
            for (al, r) in table {
                out.push(claim(
                    &format!("thm3.2-{}{}-{}", fam, al, tag),
                    &format!(
                        "group thm3.2, family {}, offset {}: (s q^{}, s q^{}; q^7)(q^{}, q^{}; q^21) at 7n+{}",
                        fam,
                        al,
                        a0,
                        7 - a0,
                        al,
                        21 - al,
                        r
                    ),
                    &[(s, s, a0, 7, 1), (1, 1, al, 21, 1)],
                    7,
                    r,
                ));
            }
        }
    }

    // Group thm3.3: modulus 7, pair (7, 21), powers (1, 2).
    for s in [1i8, -1] {
        let tag = sign_tag(s);
        for (fam, a0, table, xref) in [
            ("h", 1i64, [(3i64, 6i64), (4, 2), (10, 4)], Some((3, "t=3"))),
            ("i", 2, [(1, 2), (6, 3), (8, 6)], Some((1, "t=1"))),
            ("j", 3, [(2, 4), (5, 6), (9, 5)], None),
        ] {
            for (u, r) in table {
                let mut src = format!(
                    "group thm3.3, family {}, offset {}: (q^{}, q^{}; q^7)(s q^{}, s q^{}; q^21)^2 at 7n+{}",
                    fam,
                    u,
                    a0,
                    7 - a0,
                    u,
                    21 - u,
                    r
                );
                if let Some((off, tcase)) = xref {
                    if off == u {
                        src.push_str(&format!(
                            "; l=1, {} case of the tabulated family X(2t,t,7l,21l,1,2)",
                            tcase
                        ));
                    }
                }
                out.push(claim(
                    &format!("thm3.3-{}{}-{}", fam, u, tag),
                    &src,
                    &[(1, 1, a0, 7, 1), (s, s, u, 21, 2)],
                    7,
                    r,
                ));
            }
        }
    }

    // Group thm3.4: modulus 7; three fixed-sign claims and three two-sign
    // square families.
    for (fam, a0, al, r) in [("k", 1i64, 9i64, 4i64), ("l", 2, 3, 6), ("t", 3, 6, 5)] {
        out.push(claim(
            &format!("thm3.4-{}", fam),
            &format!(
                "group thm3.4, family {}: (q^{}, q^{}; q^7)(-q^{}, -q^{}; q^21) at 7n+{}",
                fam,
                a0,
                7 - a0,
                al,
                21 - al,
                r
            ),
            &[(1, 1, a0, 7, 1), (-1, -1, al, 21, 1)],
            7,
            r,
        ));
    }
    for s in [1i8, -1] {
        let tag = sign_tag(s);
        for (fam, a0, al, r, tcase) in [
            ("o", 1i64, 6i64, 4i64, "t=1"),
            ("p", 2, 9, 1, "t=2"),
            ("z", 3, 3, 5, "t=3"),
        ] {
            out.push(claim(
                &format!("thm3.4-{}-{}", fam, tag),
                &format!(
                    "group thm3.4, family {}: (s q^{}, s q^{}; q^7)^2 (q^{}, q^{}; q^21) at 7n+{}; l=1, {} case of the tabulated family X(t,6t,7l,21l,2,1)",
                    fam,
                    a0,
                    7 - a0,
                    al,
                    21 - al,
                    r,
                    tcase
                ),
                &[(s, s, a0, 7, 2), (1, 1, al, 21, 1)],
                7,
                r,
            ));
        }
    }

    // Group sec1: two classical cubic-power families per modulus-5 pair.
    // Power 3 has no split rule, so these are verification-only.
    for (id, factors, t, r) in [
        (
            "sec1-hirschhorn-a-5n+2",
            vec![(-1i8, -1i8, 1i64, 5i64, 1u32), (1, 1, 1, 10, 3)],
            5i64,
            2i64,
        ),
        (
            "sec1-hirschhorn-a-5n+4",
            vec![(-1, -1, 1, 5, 1), (1, 1, 1, 10, 3)],
            5,
            4,
        ),
        (
            "sec1-hirschhorn-b-5n+1",
            vec![(-1, -1, 2, 5, 1), (1, 1, 3, 10, 3)],
            5,
            1,
        ),
        (
            "sec1-hirschhorn-b-5n+4",
            vec![(-1, -1, 2, 5, 1), (1, 1, 3, 10, 3)],
            5,
            4,
        ),
        (
            "sec1-tang-a1-5n+3",
            vec![(-1, -1, 1, 5, 3), (1, 1, 3, 10, 1)],
            5,
            3,
        ),
        (
            "sec1-tang-b1-5n+4",
            vec![(-1, -1, 2, 5, 3), (1, 1, 1, 10, 1)],
            5,
            4,
        ),
    ] {
        out.push(claim(
            id,
            "group sec1: classical cubic-power product, brute-force verified",
            &factors,
            t,
            r,
        ));
    }

    assert_eq!(out.len(), 65);
    out
}

/// Which sign variants a scan instantiates for one factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignChoice {
    Plus,
    Minus,
    Both,
}

impl SignChoice {
    fn signs(self) -> &'static [i8] {
        match self {
            SignChoice::Plus => &[1],
            SignChoice::Minus => &[-1],
            SignChoice::Both => &[1, -1],
        }
    }
}

/// One factor slot of a scan family: `(s q^a, s q^(m-a); q^m)^power` with `a`
/// ranging over an offset interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorTemplate {
    pub signs: SignChoice,
    pub modulus: i64,
    pub offset_min: i64,
    pub offset_max: i64,
    pub power: u32,
}

/// A two-factor scan family with its progression modulus and scan order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyTemplate {
    pub name: String,
    pub first: FactorTemplate,
    pub second: FactorTemplate,
    pub t: i64,
    pub order: i64,
}

/// A progression found to vanish through the scan order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub family: String,
    pub spec: ProductSpec,
    pub t: i64,
    pub r: i64,
    pub order: i64,
    /// The prover certified the finding for all orders.
    pub certified: bool,
    /// The (spec, t, r) triple already appears in the built-in catalog.
    pub known: bool,
}

fn sorted_factors(spec: &ProductSpec) -> Vec<PochFactor> {
    let mut fs = spec.factors.clone();
    fs.sort();
    fs
}

/// Scans a family template: expands every instantiation once, records each
/// residue class that vanishes through the scan order, then asks the prover
/// to certify each finding. Mirrored offsets normalize to the same spec and
/// are scanned once.
pub fn scan(tmpl: &FamilyTemplate) -> Vec<Finding> {
    assert!(tmpl.second.modulus % tmpl.first.modulus == 0, "moduli must nest");
    assert!(tmpl.t >= 1 && tmpl.order > 0);
    let catalog = builtin_catalog();
    let known: BTreeSet<(Vec<PochFactor>, i64, i64)> = catalog
        .iter()
        .map(|c| (sorted_factors(&c.spec), c.t, c.r))
        .collect();

    let mut seen: BTreeSet<ProductSpec> = BTreeSet::new();
    let mut out = Vec::new();
    for off1 in tmpl.first.offset_min..=tmpl.first.offset_max {
        for &s1 in tmpl.first.signs.signs() {
            for off2 in tmpl.second.offset_min..=tmpl.second.offset_max {
                for &s2 in tmpl.second.signs.signs() {
                    let f1 = PochFactor::pair(s1, s1, off1, tmpl.first.modulus, tmpl.first.power);
                    let f2 =
                        PochFactor::pair(s2, s2, off2, tmpl.second.modulus, tmpl.second.power);
                    let (f1, f2) = match (f1, f2) {
                        (Ok(a), Ok(b)) => (a, b),
                        _ => continue,
                    };
                    let spec = ProductSpec::new(vec![f1, f2]);
                    if !seen.insert(spec.clone()) {
                        continue;
                    }
                    let series = product_expand(&spec, tmpl.order).expect("valid factors");
                    for r in 0..tmpl.t {
                        let vanishes = (0..=tmpl.order)
                            .filter(|e| e % tmpl.t == r)
                            .all(|e| num_traits::Zero::is_zero(&series.coeff(e)));
                        if !vanishes {
                            continue;
                        }
                        let sgn = |s: i8| if s == 1 { "p" } else { "m" };
                        let c = Claim {
                            id: format!(
                                "scan-{}-{}{}-{}{}-r{}",
                                tmpl.name,
                                sgn(s1),
                                off1,
                                sgn(s2),
                                off2,
                                r
                            ),
                            spec: spec.clone(),
                            t: tmpl.t,
                            r,
                            source: String::new(),
                        };
                        let proof = prove_claim(&c, tmpl.order);
                        out.push(Finding {
                            family: tmpl.name.clone(),
                            spec: spec.clone(),
                            t: tmpl.t,
                            r,
                            order: tmpl.order,
                            certified: proof.status == ProofStatus::Certified,
                            known: known.contains(&(sorted_factors(&spec), tmpl.t, r)),
                        });
                    }
                }
            }
        }
    }
    out
}

/// The eight built-in scan families matching the catalog's product shapes.
pub fn builtin_templates() -> Vec<FamilyTemplate> {
    let fixed = |signs, modulus, offset, power| FactorTemplate {
        signs,
        modulus,
        offset_min: offset,
        offset_max: offset,
        power,
    };
    let ranged = |signs, modulus: i64, power| FactorTemplate {
        signs,
        modulus,
        offset_min: 1,
        offset_max: modulus - 1,
        power,
    };
    let mut out = Vec::new();
    for (name, a0) in [("b", 1i64), ("c", 2)] {
        out.push(FamilyTemplate {
            name: name.to_string(),
            first: fixed(SignChoice::Both, 5, a0, 2),
            second: ranged(SignChoice::Plus, 15, 1),
            t: 5,
            order: 500,
        });
    }
    for (name, a0) in [("e", 1i64), ("f", 2), ("g", 3)] {
        out.push(FamilyTemplate {
            name: name.to_string(),
            first: fixed(SignChoice::Both, 7, a0, 1),
            second: ranged(SignChoice::Plus, 21, 1),
            t: 7,
            order: 500,
        });
    }
    for (name, a0) in [("h", 1i64), ("i", 2), ("j", 3)] {
        out.push(FamilyTemplate {
            name: name.to_string(),
            first: fixed(SignChoice::Plus, 7, a0, 1),
            second: ranged(SignChoice::Both, 21, 2),
            t: 7,
            order: 500,
        });
    }
    out
}
