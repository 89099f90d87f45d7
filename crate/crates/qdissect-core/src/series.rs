//! Truncated Laurent series over arbitrary-precision integers.
//!
//! A [`Series`] stores exact coefficients on a dense window `[lo, order]`.
//! Coefficients below `lo` are exactly zero; coefficients above `order` are
//! unknown. Every operation propagates the largest window on which the result
//! is still exact, so precision loss is explicit rather than silent.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An exact Laurent series truncated at `order`.
#[derive(Debug, Clone)]
pub struct Series {
    lo: i64,
    order: i64,
    /// Dense coefficients for exponents `lo..=order`.
    coeffs: Vec<BigInt>,
}

impl Series {
    /// The zero series, exact on `[0, order]`.
    pub fn zero(order: i64) -> Self {
        assert!(order >= 0, "window must be nonempty");
        Series {
            lo: 0,
            order,
            coeffs: vec![BigInt::zero(); (order + 1) as usize],
        }
    }

    /// The constant series 1, exact on `[0, order]`.
    pub fn one(order: i64) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// `coeff * q^exp`, exact on `[exp, order]`. Everything below the
    /// monomial itself is an exact zero, so the window starts right at `exp`;
    /// this keeps products with shifted monomials maximally precise.
    pub fn monomial(coeff: BigInt, exp: i64, order: i64) -> Self {
        assert!(exp <= order, "monomial exponent beyond window");
        let mut coeffs = vec![BigInt::zero(); (order - exp + 1) as usize];
        coeffs[0] = coeff;
        Series {
            lo: exp,
            order,
            coeffs,
        }
    }

    /// Builds a series from `(exponent, coefficient)` pairs; unlisted
    /// exponents in the window are zero.
    pub fn from_terms(terms: &[(i64, i64)], order: i64) -> Self {
        let lo = terms.iter().map(|&(e, _)| e).min().unwrap_or(0).min(0);
        let mut coeffs = vec![BigInt::zero(); (order - lo + 1) as usize];
        for &(e, c) in terms {
            assert!(e <= order, "term exponent beyond window");
            coeffs[(e - lo) as usize] += BigInt::from(c);
        }
        Series { lo, order, coeffs }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// Exact coefficient of `q^exp`. Exponents below `lo` are zero; asking
    /// above `order` is a caller bug.
    pub fn coeff(&self, exp: i64) -> BigInt {
        assert!(exp <= self.order, "coefficient beyond truncation window");
        if exp < self.lo {
            BigInt::zero()
        } else {
            self.coeffs[(exp - self.lo) as usize].clone()
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn nonzero_terms(&self) -> Vec<(i64, BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.lo + i as i64, c.clone()))
            .collect()
    }

    /// Smallest exponent with a nonzero coefficient, if any.
    pub fn first_nonzero(&self) -> Option<(i64, BigInt)> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| (self.lo + i as i64, self.coeffs[i].clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn neg(&self) -> Series {
        Series {
            lo: self.lo,
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Series {
        Series {
            lo: self.lo,
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Multiplies by `q^j` (shifts the window).
    pub fn shift(&self, j: i64) -> Series {
        Series {
            lo: self.lo + j,
            order: self.order + j,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Drops precision: restricts the window to `[lo, new_order]`.
    pub fn truncate(&self, new_order: i64) -> Series {
        assert!(new_order <= self.order && new_order >= self.lo);
        Series {
            lo: self.lo,
            order: new_order,
            coeffs: self.coeffs[..(new_order - self.lo + 1) as usize].to_vec(),
        }
    }

    /// Exact sum; the result window is where both summands are known.
    pub fn add(&self, other: &Series) -> Series {
        let lo = self.lo.min(other.lo);
        let order = self.order.min(other.order);
        assert!(order >= lo, "windows do not overlap");
        let mut coeffs = vec![BigInt::zero(); (order - lo + 1) as usize];
        for (out, e) in coeffs.iter_mut().zip(lo..=order) {
            if e >= self.lo {
                *out += &self.coeffs[(e - self.lo) as usize];
            }
            if e >= other.lo {
                *out += &other.coeffs[(e - other.lo) as usize];
            }
        }
        Series { lo, order, coeffs }
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    /// Exact product. The result is exact up to
    /// `min(self.order + other.lo, other.order + self.lo)`: beyond that,
    /// unknown coefficients of one factor would contribute.
    pub fn mul(&self, other: &Series) -> Series {
        let lo = self.lo + other.lo;
        let order = (self.order + other.lo).min(other.order + self.lo);
        assert!(order >= lo, "empty product window");
        let mut coeffs = vec![BigInt::zero(); (order - lo + 1) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ea = self.lo + i as i64;
            let max_eb = (order - ea).min(other.order);
            for (j, b) in other.coeffs[..(max_eb - other.lo + 1).max(0) as usize]
                .iter()
                .enumerate()
            {
                if b.is_zero() {
                    continue;
                }
                let e = ea + other.lo + j as i64;
                coeffs[(e - lo) as usize] += a * b;
            }
        }
        Series { lo, order, coeffs }
    }

    /// Multiplies in place by the binomial `1 + c*q^j` (`j > 0`), keeping the
    /// window fixed. This is the workhorse of Pochhammer expansion: applying
    /// one binomial is O(window).
    fn mul_binomial(&mut self, c: i8, j: i64) {
        debug_assert!(j > 0);
        let n = self.coeffs.len();
        let j = j as usize;
        if j >= n {
            return;
        }
        // Descending so each source coefficient is read before it is updated.
        for e in (0..n - j).rev() {
            if self.coeffs[e].is_zero() {
                continue;
            }
            let add = &self.coeffs[e] * c;
            self.coeffs[e + j] += add;
        }
    }

    /// Multiplicative inverse to order `n`.
    ///
    /// Requires the lowest-order coefficient to be +1 or -1 (all series this
    /// library inverts are unit infinite products). The result window is
    /// `[-lo, min(n, order - 2*lo)]`: relative precision is inherited from
    /// the input.
    pub fn inverse(&self, n: i64) -> Result<Series> {
        let unit_pos = match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(p) => p,
            None => return Err(Error::NonInvertibleSeries),
        };
        let l = self.lo + unit_pos as i64;
        let u = &self.coeffs[unit_pos];
        if !(u.magnitude().is_one()) {
            return Err(Error::NonInvertibleSeries);
        }
        let usign: i8 = if u.is_negative() { -1 } else { 1 };
        let out_lo = -l;
        let out_order = n.min(self.order - 2 * l);
        assert!(
            out_order >= out_lo,
            "requested inverse order below its leading exponent"
        );
        let rel = (out_order - out_lo) as usize;
        // x = u*q^l * (1 + z), z_k = u * x[l+k]; w = u * (1 - z + z^2 - ...)
        let z: Vec<BigInt> = (0..=rel)
            .map(|k| {
                let e = l + k as i64;
                if e <= self.order {
                    self.coeff(e) * usign
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        let mut w = vec![BigInt::zero(); rel + 1];
        w[0] = BigInt::one();
        for k in 1..=rel {
            let mut acc = BigInt::zero();
            for j in 1..=k {
                if !z[j].is_zero() && !w[k - j].is_zero() {
                    acc += &z[j] * &w[k - j];
                }
            }
            w[k] = -acc;
        }
        if usign == -1 {
            for c in &mut w {
                *c = -core::mem::take(c);
            }
        }
        Ok(Series {
            lo: out_lo,
            order: out_order,
            coeffs: w,
        })
    }
}

/// Equality is coefficientwise agreement up to the smaller truncation order,
/// treating positions below a window as zero. Two series that agree wherever
/// both are known are the same mathematical object for every purpose here.
impl PartialEq for Series {
    fn eq(&self, other: &Series) -> bool {
        let order = self.order.min(other.order);
        let lo = self.lo.min(other.lo);
        (lo..=order).all(|e| {
            let a = if e < self.lo {
                BigInt::zero()
            } else {
                self.coeffs[(e - self.lo) as usize].clone()
            };
            let b = if e < other.lo {
                BigInt::zero()
            } else {
                other.coeffs[(e - other.lo) as usize].clone()
            };
            a == b
        })
    }
}

impl Eq for Series {}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.nonzero_terms();
        if terms.is_empty() {
            return write!(f, "0 + O(q^{})", self.order + 1);
        }
        for (i, (e, c)) in terms.iter().enumerate() {
            let mag = c.magnitude();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (*e, mag.is_one()) {
                (0, _) => write!(f, "{}", mag)?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{}q", mag)?,
                (_, true) => write!(f, "q^{}", e)?,
                (_, false) => write!(f, "{}q^{}", mag, e)?,
            }
        }
        write!(f, " + O(q^{})", self.order + 1)
    }
}

/// One factor of an infinite product: either the symmetric pair
/// `(s1*q^a, s2*q^(m-a); q^m)^power` or the single Euler factor
/// `(q^m; q^m)^power` (marked `single`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PochFactor {
    pub sign1: i8,
    pub sign2: i8,
    pub a: i64,
    pub m: i64,
    pub power: u32,
    pub single: bool,
}

impl PochFactor {
    /// A symmetric pair factor. Normalizes to `a <= m - a` (the pair is
    /// symmetric under swapping its two monomials), so mirrored inputs build
    /// identical values.
    pub fn pair(sign1: i8, sign2: i8, a: i64, m: i64, power: u32) -> Result<Self> {
        if !(1..=if m >= 1 { m - 1 } else { 0 }).contains(&a)
            || power == 0
            || sign1.abs() != 1
            || sign2.abs() != 1
        {
            return Err(Error::InvalidPochhammerParameters);
        }
        let (sign1, sign2, a) = if a > m - a {
            (sign2, sign1, m - a)
        } else {
            (sign1, sign2, a)
        };
        Ok(PochFactor {
            sign1,
            sign2,
            a,
            m,
            power,
            single: false,
        })
    }

    /// The Euler factor `(q^m; q^m)^power`.
    pub fn euler(m: i64, power: u32) -> Result<Self> {
        if m < 1 || power == 0 {
            return Err(Error::InvalidPochhammerParameters);
        }
        Ok(PochFactor {
            sign1: 1,
            sign2: 1,
            a: m,
            m,
            power,
            single: true,
        })
    }
}

/// A finite product of [`PochFactor`]s, the library's claim subject.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductSpec {
    pub factors: Vec<PochFactor>,
}

impl ProductSpec {
    pub fn new(factors: Vec<PochFactor>) -> Self {
        ProductSpec { factors }
    }
}

fn fmt_term(f: &mut fmt::Formatter<'_>, sign: i8, e: i64) -> fmt::Result {
    if sign == -1 {
        write!(f, "-")?;
    }
    if e == 1 {
        write!(f, "q")
    } else {
        write!(f, "q^{}", e)
    }
}

impl fmt::Display for PochFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        if self.single {
            write!(f, "q^{};", self.m)?;
        } else {
            fmt_term(f, self.sign1, self.a)?;
            write!(f, ",")?;
            fmt_term(f, self.sign2, self.m - self.a)?;
            write!(f, ";")?;
        }
        write!(f, "q^{})", self.m)?;
        if self.power > 1 {
            write!(f, "^{}", self.power)?;
        }
        Ok(())
    }
}

impl fmt::Display for ProductSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", p)?;
        }
        Ok(())
    }
}

/// Expands the single Pochhammer symbol `(sign * q^a; q^m)_infinity` to
/// order `n` by applying its binomials in place.
pub fn poch_expand(sign: i8, a: i64, m: i64, n: i64) -> Result<Series> {
    if a < 1 || m < 1 || sign.abs() != 1 {
        return Err(Error::InvalidPochhammerParameters);
    }
    let mut s = Series::one(n);
    apply_poch(&mut s, sign, a, m);
    Ok(s)
}

/// Multiplies `acc` in place by `(sign * q^a; q^m)_infinity`.
fn apply_poch(acc: &mut Series, sign: i8, a: i64, m: i64) {
    let mut j = a;
    while j <= acc.order() {
        acc.mul_binomial(-sign, j);
        j += m;
    }
}

/// Expands a [`ProductSpec`] to order `n`. Binomials are applied directly to
/// one accumulator, so the cost is linear in the window per binomial.
pub fn product_expand(spec: &ProductSpec, n: i64) -> Result<Series> {
    let mut acc = Series::one(n);
    for f in &spec.factors {
        if f.a < 1 || f.m < 1 {
            return Err(Error::InvalidPochhammerParameters);
        }
        for _ in 0..f.power {
            if f.single {
                apply_poch(&mut acc, 1, f.m, f.m);
            } else {
                apply_poch(&mut acc, f.sign1, f.a, f.m);
                apply_poch(&mut acc, f.sign2, f.m - f.a, f.m);
            }
        }
    }
    Ok(acc)
}

/// Keeps only the coefficients at exponents congruent to `r` mod `t`
/// (Euclidean residue, so negative exponents classify correctly).
pub fn dissect(h: &Series, t: i64, r: i64) -> Result<Series> {
    if t < 1 || r < 0 || r >= t {
        return Err(Error::ResidueOutOfRange);
    }
    let mut out = h.clone();
    for e in out.lo..=out.order {
        if e.rem_euclid(t) != r {
            out.coeffs[(e - out.lo) as usize] = BigInt::zero();
        }
    }
    Ok(out)
}

/// True when every nonzero coefficient sits at an exponent divisible by `t`.
pub fn support_modulus_check(h: &Series, t: i64) -> bool {
    assert!(t >= 1);
    h.nonzero_terms().iter().all(|(e, _)| e.rem_euclid(t) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_product_has_pentagonal_support() {
        let s = poch_expand(1, 1, 1, 12).unwrap();
        assert_eq!(
            s.nonzero_terms(),
            vec![
                (0, BigInt::from(1)),
                (1, BigInt::from(-1)),
                (2, BigInt::from(-1)),
                (5, BigInt::from(1)),
                (7, BigInt::from(1)),
                (12, BigInt::from(-1)),
            ]
        );
    }

    #[test]
    fn laurent_product_window() {
        // (q^-1 + 1) * q = 1 + q
        let x = Series::from_terms(&[(-1, 1), (0, 1)], 5);
        let y = Series::monomial(BigInt::one(), 1, 5);
        let p = x.mul(&y);
        assert_eq!(p, Series::from_terms(&[(0, 1), (1, 1)], 4));
        assert_eq!(p.lo(), -1 + 1);
        // exactness: min(5 + 1, 5 + (-1)) = 4
        assert_eq!(p.order(), 4);
    }

    #[test]
    fn inverse_of_geometric_unit() {
        let x = Series::from_terms(&[(0, 1), (1, -1)], 10);
        let inv = x.inverse(10).unwrap();
        for e in 0..=10 {
            assert_eq!(inv.coeff(e), BigInt::one());
        }
        assert_eq!(x.mul(&inv), Series::one(10));
    }

    #[test]
    fn inverse_rejects_non_unit() {
        let x = Series::from_terms(&[(0, 2), (1, 1)], 5);
        assert_eq!(x.inverse(5), Err(Error::NonInvertibleSeries));
        assert_eq!(Series::zero(5).inverse(5), Err(Error::NonInvertibleSeries));
    }

    #[test]
    fn pair_factor_normalizes_mirror() {
        let a = PochFactor::pair(1, -1, 4, 15, 2).unwrap();
        let b = PochFactor::pair(-1, 1, 11, 15, 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.a, 4);
    }

    #[test]
    fn dissect_partitions() {
        let s = poch_expand(1, 1, 1, 40).unwrap();
        let parts: Vec<Series> = (0..5).map(|r| dissect(&s, 5, r).unwrap()).collect();
        let mut sum = parts[0].clone();
        for p in &parts[1..] {
            sum = sum.add(p);
        }
        assert_eq!(sum, s);
        // idempotent + orthogonal
        assert_eq!(dissect(&parts[2], 5, 2).unwrap(), parts[2]);
        assert!(dissect(&parts[2], 5, 3).unwrap().is_zero());
    }

    #[test]
    fn dissect_rejects_bad_residue() {
        let s = Series::one(3);
        assert_eq!(dissect(&s, 5, 5), Err(Error::ResidueOutOfRange));
        assert_eq!(dissect(&s, 0, 0), Err(Error::ResidueOutOfRange));
    }
}
