//! Deterministic randomized identity suites.
//!
//! Every algebraic identity the library leans on (the triple-product bridge,
//! theta symmetry, the split rewrites, dissection, lattice evaluation,
//! residue decomposition, inverse support closure) has a suite here that
//! hammers it with seeded random instances. The suites are plain functions
//! returning `Err(description)` on the first failing case, so the crate's own
//! test targets and downstream acceptance tests can run the exact same checks
//! with the exact same seeds.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::lattice::{
    lattice_series, residue_component, signed_parts_series, theta_pair_to_lattice, QuadLatticeSum,
};
use crate::series::{dissect, product_expand, support_modulus_check, PochFactor, ProductSpec, Series};
use crate::theta::{
    product_split, split3, square_split, theta_product, theta_series, theta_term_series, Monomial,
    ThetaSpec,
};

/// Default case count used by the test targets.
pub const CASES: usize = 200;
/// Default truncation order used by the test targets.
pub const ORDER: i64 = 300;
/// Base seed; each suite in [`SUITES`] gets a fixed offset from it.
pub const SEED: u64 = 0x51D1_5EC7_0000;

pub type Suite = fn(usize, i64, u64) -> Result<(), String>;

/// Every suite with its canonical seed, so independent test targets run
/// byte-identical case streams.
pub const SUITES: &[(&str, Suite, u64)] = &[
    ("jtp", suite_jtp as Suite, SEED),
    ("symmetry", suite_symmetry as Suite, SEED + 1),
    ("unit-argument", suite_unit_argument as Suite, SEED + 2),
    ("split3", suite_split3 as Suite, SEED + 3),
    ("square-split", suite_square_split as Suite, SEED + 4),
    ("product-split", suite_product_split as Suite, SEED + 5),
    ("dissection", suite_dissection as Suite, SEED + 6),
    ("lattice-theta", suite_lattice_theta as Suite, SEED + 7),
    ("residue-soundness", suite_residue_soundness as Suite, SEED + 8),
    ("canonical", suite_canonical_invariance as Suite, SEED + 9),
    ("inverse-support", suite_inverse_support as Suite, SEED + 10),
];

/// Runs every suite at the default size; first failure wins.
pub fn run_all() -> Result<(), String> {
    for (name, f, seed) in SUITES {
        f(CASES, ORDER, *seed).map_err(|e| format!("suite {name}: {e}"))?;
    }
    Ok(())
}

/// SplitMix64: tiny, portable, and plenty random for identity fuzzing.
/// Keeping the generator in-crate pins the case sequence to the seed alone,
/// independent of any external crate's stream details.
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish draw from `lo..=hi`. Modulo bias is irrelevant here.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }

    pub fn sign(&mut self) -> i8 {
        if self.next_u64() & 1 == 0 {
            1
        } else {
            -1
        }
    }
}

fn mono(rng: &mut SplitMix64, lo: i64, hi: i64) -> Monomial {
    Monomial::new(rng.sign(), rng.range(lo, hi))
}

/// A random valid theta spec with first exponent in `[alo, ahi]` and second
/// in `[blo, bhi]`, redrawn until the exponent sum is positive.
fn random_spec(rng: &mut SplitMix64, alo: i64, ahi: i64, blo: i64, bhi: i64) -> ThetaSpec {
    loop {
        let a = mono(rng, alo, ahi);
        let b = mono(rng, blo, bhi);
        if let Ok(s) = ThetaSpec::new(a, b) {
            return s;
        }
    }
}

fn fail(suite: &str, case: usize, detail: &str) -> Result<(), String> {
    Err(format!("{suite} case {case}: {detail}"))
}

/// Sum form vs product form of `f(a, b)` for nonnegative exponents, all four
/// sign combinations.
pub fn suite_jtp(cases: usize, order: i64, seed: u64) -> Result<(), String> {
    let mut rng = SplitMix64::new(seed);
    for case in 0..cases {
        let s = random_spec(&mut rng, 0, 8, 1, 9);
        let sum = theta_series(&s, order);
        let prod = theta_product(&s, order).expect("nonnegative exponents");
        if sum != prod {
            return fail("jtp", case, &format!("sum and product differ for {s:?}"));
        }
    }
    Ok(())
}

/// `f(a, b) = f(b, a)`, Laurent arguments included.
pub fn suite_symmetry(cases: usize, order: i64, seed: u64) -> Result<(), String> {
    let mut rng = SplitMix64::new(seed);
    for case in 0..cases {
        let s = random_spec(&mut rng, -6, 10, -6, 10);
        let swapped = ThetaSpec::new(s.b, s.a).expect("same exponent sum");
        if theta_series(&s, order) != theta_series(&swapped, order) {
            return fail("symmetry", case, &format!("f(a,b) != f(b,a) for {s:?}"));
        }
    }
    Ok(())
}

/// The unit-argument rewrites: `f(1, x) = 2 f(x, x^3)` and `f(-1, x) = 0`.
pub fn suite_unit_argument(cases: usize, order: i64, seed: u64) -> Result<(), String> {
    let mut rng = SplitMix64::new(seed);
    for case in 0..cases {
        let x = mono(&mut rng, 1, 10);
        let plus = ThetaSpec::new(Monomial::new(1, 0), x).expect("positive sum");
        let rewritten = ThetaSpec::new(x, x.pow(3)).expect("positive sum");
        let lhs = theta_series(&plus, order);
        let rhs = theta_series(&rewritten, order).scale(&BigInt::from(2));
        if lhs != rhs {
            return fail("unit-argument", case, &format!("f(1,x) != 2 f(x,x^3) for x={x:?}"));
        }
        let minus = ThetaSpec::new(Monomial::new(-1, 0), x).expect("positive sum");
        if !theta_series(&minus, order).is_zero() {
            return fail("unit-argument", case, &format!("f(-1,x) != 0 for x={x:?}"));
        }
    }
    Ok(())
}

fn term_sum(terms: &[crate::theta::ThetaTerm], order: i64) -> Series {
    let mut acc = Series::zero(order);
    for t in terms {
        acc = acc.add(&theta_term_series(t, order));
    }
    acc
}

/// The index-3 subsample `f(a,b) = f(a^3 b, a b^3) + a f(b/a, a^5 b^3)`.
pub fn suite_split3(cases: usize, order: i64, seed: u64) -> Result<(), String> {
    let mut rng = SplitMix64::new(seed);
    for case in 0..cases {
        let s = random_spec(&mut rng, -5, 10, 1, 12);
        let lhs = theta_series(&s, order);
        let rhs = term_sum(&split3(&s), order);
        if lhs != rhs {
            return fail("split3", case, &format!("split3 mismatch for {s:?}"));
        }
    }
    Ok(())
}

/// The square split `f(a,b)^2 = f(a^2,b^2) f(ab,ab) + 2a f(b/a,a^3 b) f((ab)^2,(ab)^6)`.
pub fn suite_square_split(cases: usize, order: i64, seed: u64) -> Result<(), String> {
    let mut rng = SplitMix64::new(seed);
    for case in 0..cases {
        let s = random_spec(&mut rng, -4, 8, 1, 10);
        let one = theta_series(&s, order);
        let lhs = one.mul(&one);
        let rhs = term_sum(&square_split(&s), order);
        if lhs != rhs {
            return fail("square-split", case, &format!("square_split mismatch for {s:?}"));
        }
    }
    Ok(())
}

/// The product split for `f(a,b) f(c,d)` under the precondition `ab = cd`.
pub fn suite_product_split(cases: usize, order: i64, seed: u64) -> Result<(), String> {
    let mut rng = SplitMix64::new(seed);
    for case in 0..cases {
        let s1 = random_spec(&mut rng, -4, 8, 1, 10);
        // Force cd = ab: pick c freely, derive d. The pair is always a valid
        // spec because the exponent sum equals s1's.
        let ab = s1.ab();
        let c = mono(&mut rng, -4, 8);
        let s2 = ThetaSpec::new(c, ab / c).expect("same exponent sum as s1");
        let lhs = theta_series(&s1, order).mul(&theta_series(&s2, order));
        let terms = product_split(&s1, &s2).expect("bases match by construction");
        let rhs = term_sum(&terms, order);
        if lhs != rhs {
            return fail(
                "product-split",
                case,
                &format!("product_split mismatch for {s1:?} * {s2:?}"),
            );
        }
    }
    Ok(())
}

fn random_product(rng: &mut SplitMix64) -> ProductSpec {
    let mut factors = Vec::new();
    for _ in 0..rng.range(1, 3) {
        let m = rng.range(2, 10);
        let a = rng.range(1, m - 1);
        let power = rng.range(1, 2) as u32;
        factors.push(PochFactor::pair(rng.sign(), rng.sign(), a, m, power).expect("0 < a < m"));
    }
    ProductSpec { factors }
}

/// Dissection is a partition of the identity operator: the classes of any
/// series sum back to it, each class projector is idempotent, and distinct
/// classes are orthogonal.
pub fn suite_dissection(cases: usize, order: i64, seed: u64) -> Result<(), String> {
    let mut rng = SplitMix64::new(seed);
    for case in 0..cases {
        let h = product_expand(&random_product(&mut rng), order).expect("valid spec");
        let t = rng.range(1, 8);
        let mut sum = Series::zero(order);
        for r in 0..t {
            sum = sum.add(&dissect(&h, t, r).expect("r < t"));
        }
        if sum != h {
            return fail("dissection", case, &format!("classes do not sum back, t={t}"));
        }
        let r = rng.range(0, t - 1);
        let part = dissect(&h, t, r).expect("r < t");
        if dissect(&part, t, r).expect("r < t") != part {
            return fail("dissection", case, &format!("not idempotent, t={t} r={r}"));
        }
        if t > 1 {
            let other = (r + 1 + rng.range(0, t - 2)).rem_euclid(t);
            if !dissect(&part, t, other).expect("r < t").is_zero() {
                return fail(
                    "dissection",
                    case,
                    &format!("classes not orthogonal, t={t} r={r} other={other}"),
                );
            }
        }
    }
    Ok(())
}

/// Lattice enumeration agrees with the one-variable theta evaluator on
/// products of two unsigned thetas.
pub fn suite_lattice_theta(cases: usize, order: i64, seed: u64) -> Result<(), String> {
    let mut rng = SplitMix64::new(seed);
    for case in 0..cases {
        let f1 = unsigned_spec(&mut rng);
        let f2 = unsigned_spec(&mut rng);
        let c = rng.range(0, 6);
        let sg = rng.sign();
        let l = theta_pair_to_lattice(c, sg, &f1, &f2).expect("unsigned");
        let direct = lattice_series(&l, order);
        let via_theta = theta_series(&f1, order)
            .mul(&theta_series(&f2, order))
            .shift(c)
            .scale(&BigInt::from(sg))
            .truncate(order);
        if direct != via_theta {
            return fail(
                "lattice-theta",
                case,
                &format!("evaluators disagree for {f1:?} * {f2:?} shift {c}"),
            );
        }
    }
    Ok(())
}

fn unsigned_spec(rng: &mut SplitMix64) -> ThetaSpec {
    let a = Monomial::new(1, rng.range(1, 12));
    let b = Monomial::new(1, rng.range(1, 12));
    ThetaSpec::new(a, b).expect("positive sum")
}

fn random_lattice(rng: &mut SplitMix64, t: i64) -> QuadLatticeSum {
    // Half the cases land on the aligned fast path (quadratic part divisible
    // by 2t), the rest exercise the class-by-class route.
    let aligned = rng.next_u64() & 1 == 0;
    loop {
        let (a2, c2, e2) = if aligned {
            (
                2 * t * rng.range(1, 3),
                2 * t * rng.range(1, 3),
                t * rng.range(-1, 1),
            )
        } else {
            (rng.range(1, 14), rng.range(1, 14), rng.range(-3, 3))
        };
        if a2 * c2 - e2 * e2 <= 0 {
            continue;
        }
        let b2 = 2 * rng.range(-8, 8) + (a2 & 1);
        let d2 = 2 * rng.range(-8, 8) + (c2 & 1);
        let c = rng.range(0, 5);
        return QuadLatticeSum::new(rng.sign(), c, a2, b2, c2, d2, e2);
    }
}

/// Residue decomposition is sound: the parts of `T_{t,r}(L)` sum to the
/// dissection of the enumerated series, and the classes partition `L`.
pub fn suite_residue_soundness(cases: usize, order: i64, seed: u64) -> Result<(), String> {
    let mut rng = SplitMix64::new(seed);
    for case in 0..cases {
        let t = rng.range(1, 7);
        let l = random_lattice(&mut rng, t);
        let full = lattice_series(&l, order);
        let mut sum = Series::zero(order);
        for r in 0..t {
            let d = residue_component(&l, t, r).expect("r < t");
            let part = signed_parts_series(&[(1, d)], order);
            if part != dissect(&full, t, r).expect("r < t") {
                return fail(
                    "residue-soundness",
                    case,
                    &format!("component t={t} r={r} drifts from dissection for {l:?}"),
                );
            }
            sum = sum.add(&part);
        }
        if sum != full {
            return fail(
                "residue-soundness",
                case,
                &format!("components do not sum back for {l:?}"),
            );
        }
    }
    Ok(())
}

/// Canonicalization preserves the series and is idempotent.
pub fn suite_canonical_invariance(cases: usize, order: i64, seed: u64) -> Result<(), String> {
    let mut rng = SplitMix64::new(seed);
    for case in 0..cases {
        let t = rng.range(1, 7);
        let l = random_lattice(&mut rng, t);
        let k = crate::lattice::canonicalize(&l);
        if crate::lattice::canonicalize(&k) != k {
            return fail("canonical", case, &format!("not idempotent for {l:?}"));
        }
        if lattice_series(&l, order) != lattice_series(&k, order) {
            return fail("canonical", case, &format!("series changed for {l:?}"));
        }
    }
    Ok(())
}

/// Inverting a unit supported on multiples of `m` stays supported on
/// multiples of `m`, and the product with the inverse is 1.
pub fn suite_inverse_support(cases: usize, order: i64, seed: u64) -> Result<(), String> {
    let mut rng = SplitMix64::new(seed);
    for case in 0..cases {
        let m = rng.range(1, 9);
        let mut terms = alloc::vec![(0i64, if rng.sign() == 1 { 1i64 } else { -1 })];
        for k in 1..=rng.range(1, 6) {
            if k * m > order {
                break;
            }
            terms.push((k * m, rng.range(-5, 5)));
        }
        let u = Series::from_terms(&terms, order);
        let inv = u.inverse(order).expect("unit constant term");
        if !support_modulus_check(&inv, m) {
            return fail(
                "inverse-support",
                case,
                &format!("inverse left the support lattice, m={m} terms={terms:?}"),
            );
        }
        let prod = u.mul(&inv);
        if prod != Series::one(order) {
            return fail(
                "inverse-support",
                case,
                &format!("u * u^-1 != 1, m={m} terms={terms:?}"),
            );
        }
    }
    Ok(())
}
