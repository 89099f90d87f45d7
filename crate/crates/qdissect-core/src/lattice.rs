//! Quadratic lattice sums and exact cancellation certificates.
//!
//! A [`QuadLatticeSum`] is `sgn * q^c * sum_{(m,n) in Z^2} q^E(m,n)` with
//! `E(m,n) = (A2 m^2 + 2 e2 m n + C2 n^2 + B2 m + D2 n)/2`, positive definite
//! in its quadratic part. Products of two unsigned theta functions are sums
//! of this shape, residue classes of them are again of this shape (after a
//! change of variables), and two such sums are equal as series whenever they
//! differ by a unimodular change of variables plus an integer translation.
//! That last fact is what [`canonicalize`] makes checkable: equal canonical
//! forms imply equal series, so cancellation can be certified for all `n`
//! without expanding anything.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::series::{dissect, Series};
use crate::theta::ThetaSpec;

type Mat = [[i64; 2]; 2];
type Vec2 = [i64; 2];

/// `sgn * q^c * sum q^((A2 m^2 + 2 e2 m n + C2 n^2 + B2 m + D2 n)/2)`.
///
/// Invariants: `a2 > 0`, `c2 > 0`, `a2*c2 - e2^2 > 0` (positive definite),
/// `a2 = b2` and `c2 = d2` modulo 2 (integral exponents). `e2` is the cross
/// coefficient; sums built directly from theta pairs have `e2 = 0`, but
/// residue-class substitutions mix the variables and populate it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadLatticeSum {
    pub sgn: i8,
    pub c: i64,
    pub a2: i64,
    pub b2: i64,
    pub c2: i64,
    pub d2: i64,
    pub e2: i64,
}

impl QuadLatticeSum {
    pub fn new(sgn: i8, c: i64, a2: i64, b2: i64, c2: i64, d2: i64, e2: i64) -> Self {
        assert!(sgn == 1 || sgn == -1);
        assert!(a2 > 0 && c2 > 0, "quadratic part must be positive definite");
        assert!(a2 * c2 - e2 * e2 > 0, "quadratic part must be positive definite");
        assert!(
            (a2 - b2) % 2 == 0 && (c2 - d2) % 2 == 0,
            "exponents must be integral"
        );
        QuadLatticeSum {
            sgn,
            c,
            a2,
            b2,
            c2,
            d2,
            e2,
        }
    }

    /// Exponent at the lattice point `(m, n)`.
    pub fn exponent(&self, m: i64, n: i64) -> i64 {
        let num =
            self.a2 * m * m + 2 * self.e2 * m * n + self.c2 * n * n + self.b2 * m + self.d2 * n;
        debug_assert!(num % 2 == 0);
        num / 2 + self.c
    }

    fn gram(&self) -> Mat {
        [[self.a2, self.e2], [self.e2, self.c2]]
    }

    fn linear(&self) -> Vec2 {
        [self.b2, self.d2]
    }
}

/// Converts `sgn * q^c * f(q^x1, q^y1) * f(q^x2, q^y2)` to its lattice sum:
/// `A2 = x1+y1`, `B2 = x1-y1`, `C2 = x2+y2`, `D2 = x2-y2`, no cross term.
///
/// Only unsigned theta pairs are quadratic lattice sums; any negative
/// monomial sign is refused.
pub fn theta_pair_to_lattice(
    c: i64,
    sgn: i8,
    f1: &ThetaSpec,
    f2: &ThetaSpec,
) -> Result<QuadLatticeSum> {
    if f1.a.sign != 1 || f1.b.sign != 1 || f2.a.sign != 1 || f2.b.sign != 1 {
        return Err(Error::SignedLatticeSumsUnsupported);
    }
    Ok(QuadLatticeSum::new(
        sgn,
        c,
        f1.a.exp + f1.b.exp,
        f1.a.exp - f1.b.exp,
        f2.a.exp + f2.b.exp,
        f2.a.exp - f2.b.exp,
        0,
    ))
}

/// Expands a lattice sum to an exact series of order `n`.
///
/// Ranges come from solving the exponent quadratics exactly with integer
/// square roots, extended by one on each side; the extension points are
/// asserted to overshoot, so every exponent `<= n` is enumerated.
pub fn lattice_series(l: &QuadLatticeSum, n: i64) -> Series {
    assert!(n >= 0, "window must be nonempty");
    let (a2, b2, c2, d2, e2, c) = (
        l.a2 as i128,
        l.b2 as i128,
        l.c2 as i128,
        l.d2 as i128,
        l.e2 as i128,
        l.c as i128,
    );
    let det = a2 * c2 - e2 * e2;
    // For fixed m, some n satisfies E(m,n) <= n iff disc_n(m) >= 0 where
    // disc_n(m) = -4 det m^2 + 4 (e2 d2 - c2 b2) m + d2^2 - 8 c2 (c - N).
    let disc_n = |m: i128| -> i128 {
        -4 * det * m * m + 4 * (e2 * d2 - c2 * b2) * m + d2 * d2 - 8 * c2 * (c - n as i128)
    };
    let am = 4 * det;
    let bm = 4 * (c2 * b2 - e2 * d2);
    let cm = 8 * c2 * (c - n as i128) - d2 * d2;
    let disc_m = bm * bm - 4 * am * cm;
    if disc_m < 0 {
        return Series::zero(n);
    }
    let sm = disc_m.isqrt();
    let m_lo = (-bm - sm).div_euclid(2 * am) - 1;
    let m_hi = (-bm + sm).div_euclid(2 * am) + 1;
    assert!(disc_n(m_lo) < 0 && disc_n(m_hi) < 0);

    let mut terms: Vec<(i64, i64)> = Vec::new();
    for m in (m_lo + 1)..m_hi {
        let d = disc_n(m);
        if d < 0 {
            continue;
        }
        let beta = 2 * e2 * m + d2;
        let sn = d.isqrt();
        let n_lo = (-beta - sn).div_euclid(2 * c2) - 1;
        let n_hi = (-beta + sn).div_euclid(2 * c2) + 1;
        assert!(
            l.exponent(m as i64, n_lo as i64) > n && l.exponent(m as i64, n_hi as i64) > n
        );
        for k in (n_lo + 1)..n_hi {
            let e = l.exponent(m as i64, k as i64);
            if e <= n {
                terms.push((e, l.sgn as i64));
            }
        }
    }
    Series::from_terms(&terms, n)
}

/// The residue class `r` mod `t` of a lattice sum, expressed as a sum of
/// lattice sums again.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueClassDecomp {
    pub t: i64,
    pub r: i64,
    pub parts: Vec<QuadLatticeSum>,
}

/// Lattice points `(m0, n0)` in `[0,t)^2` whose exponent lies in class `r`
/// mod `t`, in lexicographic order.
///
/// For odd `t` (every catalog case) the class depends only on `(m0, n0)`
/// mod `t`, so these are exactly the solution classes. For even `t` with an
/// odd linear coefficient the class is only `2t`-periodic and
/// [`residue_component`] enumerates the finer grid itself.
pub fn residue_solutions(l: &QuadLatticeSum, t: i64, r: i64) -> Result<Vec<(i64, i64)>> {
    if t < 1 || r < 0 || r >= t {
        return Err(Error::ResidueOutOfRange);
    }
    let mut out = Vec::new();
    for m0 in 0..t {
        for n0 in 0..t {
            if l.exponent(m0, n0).rem_euclid(t) == r {
                out.push((m0, n0));
            }
        }
    }
    Ok(out)
}

/// Extended gcd: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = egcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    egcd(a, b).0
}

/// Decomposes the residue class `r` mod `t` of `l` into lattice-sum parts.
///
/// When the quadratic part is invisible mod `t` (i.e. `a2`, `c2` divisible by
/// `2t` and `e2` by `t`), class membership is a linear congruence on `(m,n)`;
/// its solution set is empty or a single coset of a sublattice, so the class
/// is one lattice sum in new coordinates. Otherwise each solution `(m0, n0)`
/// in `[0,t)^2` contributes the part with `(m, n) = (m0 + t x, n0 + t y)`.
pub fn residue_component(l: &QuadLatticeSum, t: i64, r: i64) -> Result<ResidueClassDecomp> {
    if t < 1 || r < 0 || r >= t {
        return Err(Error::ResidueOutOfRange);
    }
    if l.a2 % (2 * t) == 0 && l.c2 % (2 * t) == 0 && l.e2 % t == 0 {
        return Ok(ResidueClassDecomp {
            t,
            r,
            parts: linear_class_part(l, t, r).into_iter().collect(),
        });
    }
    // Period of the exponent's class mod t in each variable. Stepping m by p
    // changes the exponent by p*(a2*p + b2)/2 plus multiples of t; for odd t
    // this is always a multiple of t, but for even t an odd b2 shifts the
    // class by t/2, so the coset period doubles.
    let pm = if t % 2 == 1 || l.b2 % 2 == 0 { t } else { 2 * t };
    let pn = if t % 2 == 1 || l.d2 % 2 == 0 { t } else { 2 * t };
    let mut parts = Vec::new();
    for m0 in 0..pm {
        for n0 in 0..pn {
            if l.exponent(m0, n0).rem_euclid(t) == r {
                parts.push(substitute(l, [m0, n0], [[pm, 0], [0, pn]]));
            }
        }
    }
    Ok(ResidueClassDecomp { t, r, parts })
}

/// Solves `b2 m + d2 n = 2(r - c) (mod 2t)` and substitutes the solution
/// coset. Returns `None` when the congruence has no solutions (the class is
/// empty).
fn linear_class_part(l: &QuadLatticeSum, t: i64, r: i64) -> Option<QuadLatticeSum> {
    let tt = 2 * t;
    let rho = (2 * (r - l.c)).rem_euclid(tt);
    let g = gcd(gcd(l.b2.rem_euclid(tt), l.d2.rem_euclid(tt)), tt);
    if rho % g != 0 {
        return None;
    }
    let (bp, dp, tp, rp) = (l.b2 / g, l.d2 / g, tt / g, rho / g);
    // Particular solution from Bezout: alpha*bp + beta*dp = 1 (mod tp).
    let (g1, u, v) = egcd(bp.rem_euclid(tp), dp.rem_euclid(tp));
    let (g2, w, _) = egcd(g1, tp);
    debug_assert!(g2 == 1, "gcd(b', d', t') must be 1");
    let p0 = [
        (w * u % tp * (rp % tp)).rem_euclid(tp),
        (w * v % tp * (rp % tp)).rem_euclid(tp),
    ];
    debug_assert!((l.b2 * p0[0] + l.d2 * p0[1] - 2 * (r - l.c)).rem_euclid(tt) == 0);
    // Hermite basis of the homogeneous solution lattice, index tp in Z^2:
    // v1 = (tp/d, 0) and v2 = (x, d) with d = gcd(bp, tp) and
    // (bp/d) x = -dp (mod tp/d).
    let d = gcd(bp.rem_euclid(tp), tp);
    let (_, inv, _) = egcd((bp / d).rem_euclid(tp / d), tp / d);
    let x = (-dp % (tp / d) * (inv % (tp / d))).rem_euclid(tp / d);
    let basis = [[tp / d, x], [0, d]]; // columns v1, v2
    debug_assert!(basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0] == tp);
    debug_assert!((bp * basis[0][0] + dp * basis[1][0]).rem_euclid(tp) == 0);
    debug_assert!((bp * basis[0][1] + dp * basis[1][1]).rem_euclid(tp) == 0);
    Some(substitute(l, p0, basis))
}

/// Applies the affine substitution `(m, n) = p0 + M y` to a lattice sum.
fn substitute(l: &QuadLatticeSum, p0: Vec2, m: Mat) -> QuadLatticeSum {
    let g = l.gram();
    let gp = congruent(&g, &m);
    // New linear part: M^T (2 G p0 + L).
    let shifted = [
        2 * (g[0][0] * p0[0] + g[0][1] * p0[1]) + l.b2,
        2 * (g[1][0] * p0[0] + g[1][1] * p0[1]) + l.d2,
    ];
    let lp = mat_t_vec(&m, &shifted);
    QuadLatticeSum::new(
        l.sgn,
        l.exponent(p0[0], p0[1]),
        gp[0][0],
        lp[0],
        gp[1][1],
        lp[1],
        gp[0][1],
    )
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let mut out = [[0i64; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn transpose(a: &Mat) -> Mat {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

/// `M^T S M`.
fn congruent(s: &Mat, m: &Mat) -> Mat {
    mat_mul(&transpose(m), &mat_mul(s, m))
}

/// `M^T v`.
fn mat_t_vec(m: &Mat, v: &Vec2) -> Vec2 {
    [
        m[0][0] * v[0] + m[1][0] * v[1],
        m[0][1] * v[0] + m[1][1] * v[1],
    ]
}

/// Lagrange-Gauss reduction of a positive definite symmetric matrix to
/// `0 <= 2e <= a <= c`; returns the reduced matrix and the change of basis
/// `U` with `U^T S U` reduced.
fn gauss_reduce(s: &Mat) -> (Mat, Mat) {
    let mut s = *s;
    let mut u = [[1i64, 0], [0, 1]];
    loop {
        // Shear e into [-a/2, a/2].
        let r = (2 * s[0][1] + s[0][0]).div_euclid(2 * s[0][0]);
        if r != 0 {
            let step = [[1, -r], [0, 1]];
            s = congruent(&s, &step);
            u = mat_mul(&u, &step);
        }
        if s[0][0] > s[1][1] {
            let step = [[0, 1], [1, 0]];
            s = congruent(&s, &step);
            u = mat_mul(&u, &step);
        } else {
            break;
        }
    }
    if s[0][1] < 0 {
        let step = [[1, 0], [0, -1]];
        s = congruent(&s, &step);
        u = mat_mul(&u, &step);
    }
    assert!(0 <= 2 * s[0][1] && 2 * s[0][1] <= s[0][0] && s[0][0] <= s[1][1]);
    (s, u)
}

/// All integer vectors `u` with `u^T S u = val` (finite: `S` positive
/// definite).
fn form_vectors(s: &Mat, val: i64) -> Vec<Vec2> {
    let (a, e, c) = (s[0][0] as i128, s[0][1] as i128, s[1][1] as i128);
    let det = a * c - e * e;
    let val = val as i128;
    let mut out = Vec::new();
    if val < 0 {
        return out;
    }
    // a x^2 + 2 e x y + c y^2 = val  =>  (a x + e y)^2 = a*val - det*y^2.
    let ymax = (a * val / det).isqrt() + 1;
    for y in -ymax..=ymax {
        let d = a * val - det * y * y;
        if d < 0 {
            continue;
        }
        let sq = d.isqrt();
        if sq * sq != d {
            continue;
        }
        for sign in [1i128, -1] {
            let num = sign * sq - e * y;
            if num.rem_euclid(a) == 0 {
                let x = num.div_euclid(a);
                let cand = [x as i64, y as i64];
                if !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
    }
    out
}

/// The full (finite) automorphism group `{W : W^T S W = S, det W = +-1}` of a
/// reduced positive definite `S`.
fn automorphisms(s: &Mat) -> Vec<Mat> {
    let us = form_vectors(s, s[0][0]);
    let vs = form_vectors(s, s[1][1]);
    let mut out = Vec::new();
    for u in &us {
        for v in &vs {
            let det = u[0] * v[1] - u[1] * v[0];
            if det.abs() != 1 {
                continue;
            }
            let cross = u[0] * (s[0][0] * v[0] + s[0][1] * v[1])
                + u[1] * (s[0][1] * v[0] + s[1][1] * v[1]);
            if cross == s[0][1] {
                out.push([[u[0], v[0]], [u[1], v[1]]]);
            }
        }
    }
    debug_assert!(out.contains(&[[1, 0], [0, 1]]));
    out
}

/// Translation-reduces the linear part into the fundamental box of the
/// `2S Z^2` action, returning the new linear part and constant.
fn translate_reduce(s: &Mat, l: Vec2, c: i64) -> (Vec2, i64) {
    let (a, e, cc) = (s[0][0], s[0][1], s[1][1]);
    let det2 = 4 * (a * cc - e * e);
    let adj = |v: Vec2| -> Vec2 {
        [2 * cc * v[0] - 2 * e * v[1], -2 * e * v[0] + 2 * a * v[1]]
    };
    let u = adj(l);
    let w = [-u[0].div_euclid(det2), -u[1].div_euclid(det2)];
    let lp = [
        l[0] + 2 * (a * w[0] + e * w[1]),
        l[1] + 2 * (e * w[0] + cc * w[1]),
    ];
    let q2 = a * w[0] * w[0] + 2 * e * w[0] * w[1] + cc * w[1] * w[1];
    let lin = l[0] * w[0] + l[1] * w[1];
    debug_assert!((q2 + lin) % 2 == 0);
    let cp = c + (q2 + lin) / 2;
    let check = adj(lp);
    debug_assert!((0..2).all(|i| 0 <= check[i] && check[i] < det2));
    (lp, cp)
}

/// Canonical form of a lattice sum under unimodular changes of variable and
/// integer translations.
///
/// Every step (basis change, translation) preserves the series, so equal
/// canonical forms imply equal series. The canonical representative is the
/// lexicographically least `(a2, e2, c2, b2, d2, c)` over the reduced Gram
/// form's automorphism group with the linear part translation-reduced.
pub fn canonicalize(l: &QuadLatticeSum) -> QuadLatticeSum {
    let (sred, u) = gauss_reduce(&l.gram());
    let l0 = mat_t_vec(&u, &l.linear());
    let mut best: Option<(i64, i64, i64, i64, i64, i64)> = None;
    for w in automorphisms(&sred) {
        let lw = mat_t_vec(&w, &l0);
        let (lt, ct) = translate_reduce(&sred, lw, l.c);
        let key = (sred[0][0], sred[0][1], sred[1][1], lt[0], lt[1], ct);
        if best.is_none() || key < best.unwrap() {
            best = Some(key);
        }
    }
    let (a2, e2, c2, b2, d2, c) = best.expect("automorphism group is nonempty");
    QuadLatticeSum::new(l.sgn, c, a2, b2, c2, d2, e2)
}

/// How a cancellation was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CancelMode {
    /// Signed canonical parts paired off: vanishing holds for every order.
    Certified,
    /// Only a truncated expansion was checked.
    Truncated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CancelStatus {
    Cancelled,
    Residual,
}

/// Outcome of [`components_cancel`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CancellationReport {
    pub t: i64,
    pub r: i64,
    pub mode: CancelMode,
    pub status: CancelStatus,
    /// Certified mode: index pairs (positive part, negative part) into the
    /// flattened part list, matched by canonical form.
    pub pairing: Vec<(usize, usize)>,
    /// First exponent with a nonzero coefficient when a truncated check
    /// leaves a residue.
    pub residual_first_exponent: Option<i64>,
}

/// Tests whether a signed combination of residue-class decompositions
/// cancels.
///
/// In [`CancelMode::Certified`] the flattened signed parts are canonicalized
/// and paired: a perfect pairing proves the combination is zero at every
/// order. If pairing fails (or truncated mode is requested) the parts are
/// expanded to order `n` and summed; the report then carries
/// `CancelMode::Truncated` and, when nonzero, the first residual exponent.
pub fn components_cancel(
    xs: &[(i8, ResidueClassDecomp)],
    n: i64,
    mode: CancelMode,
) -> CancellationReport {
    assert!(!xs.is_empty(), "nothing to cancel");
    let (t, r) = (xs[0].1.t, xs[0].1.r);
    assert!(
        xs.iter().all(|(_, d)| d.t == t && d.r == r),
        "decompositions must target one residue class"
    );
    let flat: Vec<(i8, &QuadLatticeSum)> = xs
        .iter()
        .flat_map(|(sg, d)| d.parts.iter().map(move |p| (sg * p.sgn, p)))
        .collect();

    if mode == CancelMode::Certified {
        // Coefficient tuple of the canonical form; the sign lives outside.
        type CanonicalKey = (i64, i64, i64, i64, i64, i64);
        let mut pos: Vec<(CanonicalKey, usize)> = Vec::new();
        let mut neg: Vec<(CanonicalKey, usize)> = Vec::new();
        for (i, (sg, part)) in flat.iter().enumerate() {
            let k = canonicalize(part);
            let key = (k.a2, k.e2, k.c2, k.b2, k.d2, k.c);
            if *sg == 1 {
                pos.push((key, i));
            } else {
                neg.push((key, i));
            }
        }
        pos.sort();
        neg.sort();
        if pos.len() == neg.len() && pos.iter().zip(&neg).all(|(p, q)| p.0 == q.0) {
            let mut pairing: Vec<(usize, usize)> =
                pos.iter().zip(&neg).map(|(p, q)| (p.1, q.1)).collect();
            pairing.sort();
            return CancellationReport {
                t,
                r,
                mode: CancelMode::Certified,
                status: CancelStatus::Cancelled,
                pairing,
                residual_first_exponent: None,
            };
        }
    }

    // Truncated check: expand and sum.
    let mut sum = Series::zero(n);
    for (sg, part) in &flat {
        // lattice_series already carries part.sgn; `sg` also includes it, so
        // multiplying by sg * part.sgn leaves exactly the outer sign.
        let s = lattice_series(part, n);
        let signed = if *sg * part.sgn == 1 { s } else { s.neg() };
        sum = sum.add(&signed);
    }
    match sum.first_nonzero() {
        None => CancellationReport {
            t,
            r,
            mode: CancelMode::Truncated,
            status: CancelStatus::Cancelled,
            pairing: Vec::new(),
            residual_first_exponent: None,
        },
        Some((e, _)) => CancellationReport {
            t,
            r,
            mode: CancelMode::Truncated,
            status: CancelStatus::Residual,
            pairing: Vec::new(),
            residual_first_exponent: Some(e),
        },
    }
}

/// Truncated sum of the signed decompositions, for cross-checks.
pub fn signed_parts_series(xs: &[(i8, ResidueClassDecomp)], n: i64) -> Series {
    let mut sum = Series::zero(n);
    for (sg, d) in xs {
        for part in &d.parts {
            let s = lattice_series(part, n);
            sum = sum.add(&if *sg == 1 { s } else { s.neg() });
        }
    }
    sum
}

/// Soundness helper used by tests: a decomposition's parts must reproduce the
/// dissection of the parent series.
pub fn decomp_matches_dissection(
    l: &QuadLatticeSum,
    d: &ResidueClassDecomp,
    n: i64,
) -> bool {
    let whole = lattice_series(l, n);
    let class = dissect(&whole, d.t, d.r).expect("validated residue");
    let mut sum = Series::zero(n);
    for part in &d.parts {
        sum = sum.add(&lattice_series(part, n));
    }
    sum == class
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::Monomial;

    fn spec(e1: i64, e2: i64) -> ThetaSpec {
        ThetaSpec::new(Monomial::q(e1), Monomial::q(e2)).unwrap()
    }

    #[test]
    fn signed_pairs_rejected() {
        let f1 = ThetaSpec::new(Monomial::new(-1, 1), Monomial::q(4)).unwrap();
        let f2 = spec(2, 3);
        assert_eq!(
            theta_pair_to_lattice(0, 1, &f1, &f2),
            Err(Error::SignedLatticeSumsUnsupported)
        );
    }

    #[test]
    fn lattice_matches_theta_product() {
        use crate::theta::theta_series;
        let (f1, f2) = (spec(3, 17), spec(6, 24));
        let l = theta_pair_to_lattice(2, 1, &f1, &f2).unwrap();
        assert_eq!(l.b2, 3 - 17);
        let n = 120;
        let direct = theta_series(&f1, n)
            .mul(&theta_series(&f2, n))
            .shift(2)
            .truncate(n);
        assert_eq!(lattice_series(&l, n), direct);
    }

    #[test]
    fn residue_solution_set_frozen() {
        // f(q^7, q^13) * f(q^12, q^18): exponent 10m^2-3m+15n^2-3n, so the
        // class-3 condition mod 5 reduces to m + n = 4.
        let l = theta_pair_to_lattice(0, 1, &spec(7, 13), &spec(12, 18)).unwrap();
        let sols = residue_solutions(&l, 5, 3).unwrap();
        assert_eq!(sols, vec![(0, 4), (1, 3), (2, 2), (3, 1), (4, 0)]);
    }

    #[test]
    fn residue_decomp_is_sound_both_paths() {
        let l = theta_pair_to_lattice(1, 1, &spec(3, 17), &spec(6, 24)).unwrap();
        // Quadratic part is 0 mod 2t for t = 5: linear path, single part.
        let lin = residue_component(&l, 5, 3).unwrap();
        assert_eq!(lin.parts.len(), 1);
        assert!(decomp_matches_dissection(&l, &lin, 220));
        // t = 3 does not divide the moduli: per-class path.
        let generic = residue_component(&l, 3, 1).unwrap();
        assert!(generic.parts.len() > 1);
        assert!(decomp_matches_dissection(&l, &generic, 220));
    }

    #[test]
    fn canonicalize_is_idempotent_and_series_preserving() {
        let l = QuadLatticeSum::new(1, 7, 50, 40, 300, 150, 0);
        let k = canonicalize(&l);
        assert_eq!(canonicalize(&k), k);
        assert_eq!(lattice_series(&l, 300), lattice_series(&k, 300));
    }

    #[test]
    fn canonicalize_identifies_negated_variables() {
        // (m, n) -> (-m, -n) flips the linear part but not the series.
        let l1 = QuadLatticeSum::new(1, 1, 20, -14, 30, -18, 0);
        let l2 = QuadLatticeSum::new(1, 1, 20, 14, 30, 18, 0);
        assert_eq!(canonicalize(&l1), canonicalize(&l2));
        assert_eq!(lattice_series(&l1, 160), lattice_series(&l2, 160));
    }

    #[test]
    fn components_cancel_detects_perturbation() {
        // A pair whose class-3 components agree exactly: f(q^7,q^13)f(q^12,q^18)
        // against q * f(q^3,q^17) * f(q^12,q^18).
        let l1 = theta_pair_to_lattice(0, 1, &spec(7, 13), &spec(12, 18)).unwrap();
        let good = theta_pair_to_lattice(1, 1, &spec(3, 17), &spec(12, 18)).unwrap();
        let d1 = residue_component(&l1, 5, 3).unwrap();
        let d2 = residue_component(&good, 5, 3).unwrap();
        let report = components_cancel(&[(1, d1.clone()), (-1, d2)], 400, CancelMode::Certified);
        assert_eq!(report.status, CancelStatus::Cancelled);
        assert_eq!(report.mode, CancelMode::Certified);
        assert_eq!(report.pairing.len(), 1);

        // Perturb B2 by 2: pairing must fail and the truncated fallback must
        // expose a residual in the right class.
        let bad = QuadLatticeSum::new(1, good.c, good.a2, good.b2 + 2, good.c2, good.d2, 0);
        let d2b = residue_component(&bad, 5, 3).unwrap();
        let report = components_cancel(&[(1, d1), (-1, d2b)], 400, CancelMode::Certified);
        assert_eq!(report.mode, CancelMode::Truncated);
        assert_eq!(report.status, CancelStatus::Residual);
        let e = report.residual_first_exponent.unwrap();
        assert_eq!(e.rem_euclid(5), 3);
    }
}
