//! Two-variable theta functions and their splitting identities.
//!
//! A [`ThetaSpec`] names `f(a, b) = sum_k a^(k(k+1)/2) * b^(k(k-1)/2)` where
//! `a`, `b` are signed monomials in `q` with `a.exp + b.exp > 0`. The three
//! split identities each rewrite a theta expression as a two-term sum of
//! theta products, which is what lets residue classes of a product be
//! isolated symbolically.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::series::Series;

/// A signed monomial `sign * q^exp` with `sign` in `{-1, +1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub sign: i8,
    pub exp: i64,
}

impl Monomial {
    pub fn new(sign: i8, exp: i64) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        Monomial { sign, exp }
    }

    /// `q^exp` with positive sign.
    pub fn q(exp: i64) -> Self {
        Monomial { sign: 1, exp }
    }

    pub fn one() -> Self {
        Monomial { sign: 1, exp: 0 }
    }

    pub fn pow(self, k: u32) -> Monomial {
        Monomial {
            sign: if self.sign == 1 || k.is_multiple_of(2) { 1 } else { -1 },
            exp: self.exp * k as i64,
        }
    }

    pub fn is_one(self) -> bool {
        self.sign == 1 && self.exp == 0
    }

    pub fn is_minus_one(self) -> bool {
        self.sign == -1 && self.exp == 0
    }
}

impl core::ops::Mul for Monomial {
    type Output = Monomial;

    fn mul(self, other: Monomial) -> Monomial {
        Monomial {
            sign: self.sign * other.sign,
            exp: self.exp + other.exp,
        }
    }
}

impl core::ops::Div for Monomial {
    type Output = Monomial;

    fn div(self, other: Monomial) -> Monomial {
        Monomial {
            sign: self.sign * other.sign,
            exp: self.exp - other.exp,
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == -1 {
            write!(f, "-")?;
        }
        match self.exp {
            0 => write!(f, "1"),
            1 => write!(f, "q"),
            e => write!(f, "q^{}", e),
        }
    }
}

/// The theta function `f(a, b)`; requires `a.exp + b.exp > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThetaSpec {
    pub a: Monomial,
    pub b: Monomial,
}

impl ThetaSpec {
    pub fn new(a: Monomial, b: Monomial) -> Result<Self> {
        if a.exp + b.exp <= 0 {
            return Err(Error::DivergentThetaSpec);
        }
        Ok(ThetaSpec { a, b })
    }

    /// `phi(q^m) = f(q^m, q^m)`.
    pub fn phi(m: i64) -> Self {
        ThetaSpec::new(Monomial::q(m), Monomial::q(m)).expect("m > 0")
    }

    /// `psi(q^m) = f(q^m, q^3m)`.
    pub fn psi(m: i64) -> Self {
        ThetaSpec::new(Monomial::q(m), Monomial::q(3 * m)).expect("m > 0")
    }

    /// The base `a*b` of the associated triple product.
    pub fn ab(self) -> Monomial {
        self.a * self.b
    }
}

impl fmt::Display for ThetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f({}, {})", self.a, self.b)
    }
}

/// Parity of the triangular number `k(k+1)/2`.
fn triangular_odd(k: i64) -> bool {
    matches!(k.rem_euclid(4), 1 | 2)
}

/// Sign contribution of `s` raised to the `k`-th triangular number.
fn sign_tri_pow(s: i8, k: i64) -> i8 {
    if s == 1 || !triangular_odd(k) {
        1
    } else {
        -1
    }
}

/// Exponent of the `k`-th theta term: `a.exp*T(k) + b.exp*T(k-1)`.
fn theta_exponent(s: &ThetaSpec, k: i64) -> i64 {
    let (ea, eb) = (s.a.exp, s.b.exp);
    ((ea + eb) * k * k + (ea - eb) * k) / 2
}

/// Expands `f(a, b)` to order `n` by direct summation over `k`.
///
/// The `k` window solves the exponent quadratic with an extra integer of
/// margin on each side; the margin integers are asserted to overshoot `n`,
/// so every exponent `<= n` is enumerated and the window is exact.
pub fn theta_series(s: &ThetaSpec, n: i64) -> Series {
    assert!(n >= 0, "window must be nonempty");
    let a2 = (s.a.exp + s.b.exp) as i128; // positive by construction
    let b1 = (s.a.exp - s.b.exp) as i128;
    let disc = b1 * b1 + 8 * a2 * n as i128;
    let sq = disc.isqrt();
    let k_min = (-b1 - sq).div_euclid(2 * a2) as i64 - 1;
    let k_max = (-b1 + sq).div_euclid(2 * a2) as i64 + 1;
    assert!(theta_exponent(s, k_min) > n && theta_exponent(s, k_max) > n);

    let mut terms: Vec<(i64, i64)> = Vec::new();
    for k in (k_min + 1)..k_max {
        let e = theta_exponent(s, k);
        if e > n {
            continue;
        }
        let sign = sign_tri_pow(s.a.sign, k) * sign_tri_pow(s.b.sign, k - 1);
        terms.push((e, sign as i64));
    }
    Series::from_terms(&terms, n)
}

/// Expands `f(a, b)` through its infinite-product form
/// `(-a, -b, ab; ab)_infinity`.
///
/// Only nonnegative exponents have a product form here; Laurent-shifted specs
/// must go through [`theta_series`].
pub fn theta_product(s: &ThetaSpec, n: i64) -> Result<Series> {
    if s.a.exp < 0 || s.b.exp < 0 {
        return Err(Error::UseSeriesForm);
    }
    let m = s.a.exp + s.b.exp;
    let base_sign = s.a.sign * s.b.sign;
    let jtp = [(-s.a.sign, s.a.exp), (-s.b.sign, s.b.exp), (base_sign, m)];
    let mut acc = Series::one(n);
    for (sg, e) in jtp {
        if base_sign == 1 {
            acc = acc.mul(&mono_poch(sg, e, m, n));
        } else {
            // Alternating base: (x; -Q) = (x; Q^2) * (-xQ; Q^2).
            acc = acc.mul(&mono_poch(sg, e, 2 * m, n));
            acc = acc.mul(&mono_poch(-sg, e + m, 2 * m, n));
        }
    }
    Ok(acc)
}

/// `(s*q^e; q^m)_infinity` for `e >= 0`, peeling the exponent-0 binomial
/// `1 - s` off into a constant when it appears.
fn mono_poch(sign: i8, exp: i64, m: i64, n: i64) -> Series {
    if exp == 0 {
        if sign == 1 {
            return Series::zero(n);
        }
        crate::series::poch_expand(-1, m, m, n)
            .expect("m >= 1")
            .scale(&BigInt::from(2))
    } else {
        crate::series::poch_expand(sign, exp, m, n).expect("validated exponents")
    }
}

/// One term of a split: `coeff * shift * product(factors)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaTerm {
    pub coeff: i64,
    pub shift: Monomial,
    pub factors: Vec<ThetaSpec>,
}

impl ThetaTerm {
    fn new(coeff: i64, shift: Monomial, factors: Vec<ThetaSpec>) -> Self {
        let mut t = ThetaTerm {
            coeff,
            shift,
            factors,
        };
        t.normalize();
        t
    }

    /// Eliminates unit arguments: `f(1, x) = 2 f(x, x^3)` and `f(-1, x) = 0`.
    /// Outputs of the split constructors never carry `f(1, .)`.
    fn normalize(&mut self) {
        for f in &mut self.factors {
            if f.b.exp == 0 {
                core::mem::swap(&mut f.a, &mut f.b);
            }
            if f.a.is_one() {
                self.coeff *= 2;
                let x = f.b;
                *f = ThetaSpec::new(x, x.pow(3)).expect("positive exponent sum");
            } else if f.a.is_minus_one() {
                self.coeff = 0;
            }
        }
        if self.coeff == 0 {
            self.factors.clear();
            self.shift = Monomial::one();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff == 0
    }
}

impl fmt::Display for ThetaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * {}", self.coeff, self.shift)?;
        for spec in &self.factors {
            write!(f, " * {}", spec)?;
        }
        Ok(())
    }
}

/// The cubic dissection `f(a, b) = f(a^3 b, a b^3) + a * f(b/a, a^5 b^3)`.
pub fn split3(s: &ThetaSpec) -> [ThetaTerm; 2] {
    let (a, b) = (s.a, s.b);
    let t0 = ThetaTerm::new(
        1,
        Monomial::one(),
        vec![
            ThetaSpec::new(a.pow(3) * b, a * b.pow(3)).expect("4(a+b) > 0"),
        ],
    );
    let t1 = ThetaTerm::new(
        1,
        a,
        vec![
            ThetaSpec::new(b / a, a.pow(5) * b.pow(3)).expect("4(a+b) > 0"),
        ],
    );
    [t0, t1]
}

/// The square dissection
/// `f(a, b)^2 = f(a^2, b^2) f(ab, ab) + 2a * f(b/a, a^3 b) f((ab)^2, (ab)^6)`.
pub fn square_split(s: &ThetaSpec) -> [ThetaTerm; 2] {
    let (a, b) = (s.a, s.b);
    let ab = a * b;
    let t0 = ThetaTerm::new(
        1,
        Monomial::one(),
        vec![
            ThetaSpec::new(a.pow(2), b.pow(2)).expect("2(a+b) > 0"),
            ThetaSpec::new(ab, ab).expect("2(a+b) > 0"),
        ],
    );
    let t1 = ThetaTerm::new(
        2,
        a,
        vec![
            ThetaSpec::new(b / a, a.pow(3) * b).expect("2(a+b) > 0"),
            ThetaSpec::new(ab.pow(2), ab.pow(6)).expect("8(a+b) > 0"),
        ],
    );
    [t0, t1]
}

/// The product dissection for `ab = cd`:
/// `f(a, b) f(c, d) = f(ac, bd) f(ad, bc)
///                  + a * f(b/c, (c/b) abcd) f(b/d, (d/b) abcd)`.
pub fn product_split(s1: &ThetaSpec, s2: &ThetaSpec) -> Result<[ThetaTerm; 2]> {
    let (a, b) = (s1.a, s1.b);
    let (c, d) = (s2.a, s2.b);
    if a * b != c * d {
        return Err(Error::ProductIdentityPreconditionViolated);
    }
    let abcd = a * b * c * d;
    let t0 = ThetaTerm::new(
        1,
        Monomial::one(),
        vec![
            ThetaSpec::new(a * c, b * d).expect("sum 2(a+b) > 0"),
            ThetaSpec::new(a * d, b * c).expect("sum 2(a+b) > 0"),
        ],
    );
    let t1 = ThetaTerm::new(
        1,
        a,
        vec![
            ThetaSpec::new(b / c, c / b * abcd).expect("sum 2(a+b) > 0"),
            ThetaSpec::new(b / d, d / b * abcd).expect("sum 2(a+b) > 0"),
        ],
    );
    Ok([t0, t1])
}

/// Evaluates a [`ThetaTerm`] to an exact series of order at least `n`
/// (window `[lo, n]`).
///
/// Laurent factors shrink a product's exact window, so factor series are
/// expanded with enough slack to land the final window back at `n`.
pub fn theta_term_series(t: &ThetaTerm, n: i64) -> Series {
    if t.coeff == 0 {
        return Series::zero(n);
    }
    // First pass at order n just to learn each factor's lowest exponent.
    let slack: i64 = t
        .factors
        .iter()
        .map(|f| {
            let lo = theta_series(f, n).lo();
            (-lo).max(0)
        })
        .sum::<i64>()
        + (-t.shift.exp).max(0);
    let boosted = n + slack;
    let mut acc = Series::monomial(
        BigInt::from(t.coeff * t.shift.sign as i64),
        0,
        boosted,
    );
    for f in &t.factors {
        acc = acc.mul(&theta_series(f, boosted));
    }
    let acc = acc.shift(t.shift.exp);
    debug_assert!(acc.order() >= n);
    acc.truncate(n)
}
