//! Closed-form product formulas.
//!
//! Products are collected as multisets of `q^2`-integers, identical factors
//! cancelled, and the remaining quotient divided exactly over `Z[q, q^-1]`.
//! The `2^-a q^-b` prefactor is applied last.

use std::collections::BTreeMap;

use num::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::qlaurent::{pow2_inv, LaurentError, LaurentQ, LaurentZ};
use crate::regions::{Family, RegionError, RegionSpec};
use crate::weights::symmetric_weight;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("q-integer with negative argument {0}")]
    NegativeArgument(i64),
    #[error("non-integral f({0},{1},{2})")]
    NonIntegralF(i64, i64, i64),
    #[error("quotient is not a Laurent polynomial: {0}")]
    Division(#[from] LaurentError),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error("{0}")]
    Unsupported(String),
}

/// `[n]_{q^2} = 1 + q^2 + ... + q^{2(n-1)}`.
pub fn q2_integer(n: i64) -> Result<LaurentQ, FormulaError> {
    Ok(to_q(&z_q2_integer(n)?))
}

/// `[1]_{q^2} [2]_{q^2} ... [n]_{q^2}`.
pub fn q2_factorial(n: i64) -> Result<LaurentQ, FormulaError> {
    if n < 0 {
        return Err(FormulaError::NegativeArgument(n));
    }
    let mut acc = LaurentZ::one();
    for k in 1..=n {
        acc = &acc * &z_q2_integer(k)?;
    }
    Ok(to_q(&acc))
}

fn z_q2_integer(n: i64) -> Result<LaurentZ, FormulaError> {
    if n < 0 {
        return Err(FormulaError::NegativeArgument(n));
    }
    Ok(LaurentZ::from_terms((0..n).map(|k| (2 * k, BigInt::one()))))
}

fn to_q(z: &LaurentZ) -> LaurentQ {
    z.map_coeffs(|c| num::BigRational::from_integer(c.clone()))
}

/// `a + (a+1) + ... + b`, and 0 when `a > b`.
pub fn angle_sum(b: i64, a: i64) -> i64 {
    if a > b {
        0
    } else {
        (a + b) * (b - a + 1) / 2
    }
}

/// `xy(2t+x-y)/2`.
pub fn f_weight(t: i64, x: i64, y: i64) -> Result<i64, FormulaError> {
    let v = x * y * (2 * t + x - y);
    if v % 2 != 0 {
        return Err(FormulaError::NonIntegralF(t, x, y));
    }
    Ok(v / 2)
}

/// Quotient of products of `q^2`-integers and extra integer polynomials.
#[derive(Debug, Clone, Default)]
struct Ratio {
    ints: BTreeMap<i64, i64>,
    num: Vec<LaurentZ>,
    den: Vec<LaurentZ>,
}

impl Ratio {
    fn int(&mut self, k: i64, power: i64) {
        *self.ints.entry(k).or_insert(0) += power;
    }

    fn mul(&mut self, k: i64) {
        self.int(k, 1);
    }

    fn div(&mut self, k: i64) {
        self.int(k, -1);
    }

    fn div_factorial(&mut self, n: i64) {
        for k in 1..=n {
            self.div(k);
        }
    }

    fn eval(&self) -> Result<LaurentZ, FormulaError> {
        let mut num = LaurentZ::one();
        let mut den = LaurentZ::one();
        for (&k, &p) in &self.ints {
            if p == 0 {
                continue;
            }
            let f = z_q2_integer(k)?;
            let target = if p > 0 { &mut num } else { &mut den };
            for _ in 0..p.unsigned_abs() {
                *target = &*target * &f;
            }
        }
        for p in &self.num {
            num = &num * p;
        }
        for p in &self.den {
            den = &den * p;
        }
        Ok(num.div_exact(&den)?)
    }

    /// `2^-two q^-qexp` times the quotient.
    fn finish(&self, two: i64, qexp: i64) -> Result<LaurentQ, FormulaError> {
        Ok(to_q(&self.eval()?).scale(&pow2_inv(two)).shift(-qexp))
    }
}

/// Which of the two exponent pairs: `(E, F)` for P, `(E', F')` for Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentVariant {
    EF,
    EpFp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExponentContext {
    pub e: i64,
    pub e_prime: i64,
    pub x_bar: i64,
    pub x_tilde: i64,
    pub t1: i64,
    pub t2: i64,
    pub t1p: i64,
    pub t2p: i64,
}

impl ExponentContext {
    pub fn new(x: i64, u: i64, d: i64, m: i64, n: i64) -> Self {
        let e = (u - n).min(d - m);
        let e_prime = (u - n).min(d - m + 1);
        ExponentContext {
            e,
            e_prime,
            x_bar: x + (u - n).max(d - m),
            x_tilde: x + (u - n).max(d - m + 1) - 1,
            t1: 2 * (x + u - n - e) + 1,
            t2: 2 * (x + d - m - e),
            t1p: 2 * (x + u - n - e_prime) + 1,
            t2p: 2 * (x + d - m + 1 - e_prime),
        }
    }
}

/// `(E, F)` or `(E', F')`.
pub fn exponents(
    x: i64,
    u: i64,
    d: i64,
    l: &[i64],
    h: &[i64],
    variant: ExponentVariant,
) -> Result<(i64, i64), FormulaError> {
    let (m, n) = (l.len() as i64, h.len() as i64);
    let ctx = ExponentContext::new(x, u, d, m, n);
    let (t1, t2, mut e_exp, mut f_exp) = match variant {
        ExponentVariant::EF => (
            ctx.t1,
            ctx.t2,
            f_weight(ctx.t1 + 2 * d - m, n, m + 1)?,
            n * (m + 1),
        ),
        ExponentVariant::EpFp => (
            ctx.t1p,
            ctx.t2p,
            f_weight(ctx.t1p + 2 * d - m, n + 1, m)?,
            (n + 1) * m,
        ),
    };
    for (i, &li) in (1..).zip(l) {
        e_exp += angle_sum(
            t1 + 2 * d - m - (m - i + 1),
            t1 + 2 * (d - li) - 2 * (m - i),
        );
        f_exp += 2 * li - i;
    }
    for (i, &hi) in (1..).zip(h) {
        e_exp += angle_sum(
            t2 + 2 * u - n - (n - i + 1),
            t2 + 2 * (u - hi) - 2 * (n - i),
        );
        f_exp += 2 * hi - i;
    }
    Ok((e_exp, f_exp))
}

fn common_rows(r: &mut Ratio, l: &[i64], h: &[i64]) {
    for (i, &a) in l.iter().enumerate() {
        for &b in &l[i + 1..] {
            r.mul(2 * (b - a));
        }
    }
    for (i, &a) in h.iter().enumerate() {
        for &b in &h[i + 1..] {
            r.mul(2 * (b - a));
        }
    }
    for &a in l {
        for &b in h {
            r.div(2 * (a + b));
        }
    }
}

fn p_ratio(x: i64, u: i64, d: i64, l: &[i64], h: &[i64]) -> Ratio {
    let (m, n) = (l.len() as i64, h.len() as i64);
    let xb = ExponentContext::new(x, u, d, m, n).x_bar;
    let mut r = Ratio::default();
    common_rows(&mut r, l, h);
    for &li in l {
        r.div_factorial(2 * li - 1);
    }
    for &hj in h {
        r.div_factorial(2 * hj);
    }
    for i in 1..=(m + 1) / 2 {
        for j in 1..=2 * m - 4 * i + 3 {
            r.mul(2 * xb + 2 * i + j - 1);
        }
    }
    for i in 1..=n {
        r.mul(2 * (xb + m + i));
        for j in 1..=m + i {
            r.mul(2 * xb + m + i + j);
        }
    }
    for i in 1..=m {
        for j in 1..=n {
            r.mul(2 * (xb + i + j - 1));
            r.div(2 * (xb + i + j - 1) + 1);
        }
    }
    for (i, &li) in (1..).zip(l) {
        for j in 1..=li - i {
            r.mul(2 * (xb + i + j + n));
            r.mul(2 * (xb - i - j + m + 1));
        }
    }
    for (i, &hi) in (1..).zip(h) {
        for j in 1..=hi - i {
            r.mul(2 * (xb + i + j + m));
            r.mul(2 * (xb - i - j + n + 1));
        }
    }
    r
}

fn q_ratio(x: i64, u: i64, d: i64, l: &[i64], h: &[i64]) -> Ratio {
    let (m, n) = (l.len() as i64, h.len() as i64);
    let xt = ExponentContext::new(x, u, d, m, n).x_tilde;
    let mut r = Ratio::default();
    common_rows(&mut r, l, h);
    for &li in l {
        r.div_factorial(2 * li);
    }
    for &hj in h {
        r.div_factorial(2 * hj - 1);
    }
    for i in 1..=(n + 1) / 2 {
        for j in 1..=2 * n - 4 * i + 3 {
            r.mul(2 * xt + 2 * i + j);
        }
    }
    for i in 1..=m {
        r.mul(2 * (xt + n + i));
        r.mul(2 * (xt + n + i + 1));
        for j in 1..=n + i - 1 {
            r.mul(2 * xt + n + i + j + 1);
        }
    }
    for i in 1..=n {
        for j in 1..=m {
            r.mul(2 * (xt + i + j - 1));
            r.div(2 * (xt + i + j - 1) + 1);
        }
    }
    for (i, &li) in (1..).zip(l) {
        for j in 1..=li - i {
            r.mul(2 * (xt + i + j + n + 1));
            r.mul(2 * (xt - i - j + m + 1));
        }
    }
    for (i, &hi) in (1..).zip(h) {
        for j in 1..=hi - i {
            r.mul(2 * (xt + i + j + m));
            r.mul(2 * (xt - i - j + n + 2));
        }
    }
    r
}

/// The P polynomial. The prefactor is applied as `2^-F q^-E`.
pub fn poly_p(x: i64, u: i64, d: i64, l: &[i64], h: &[i64]) -> Result<LaurentQ, FormulaError> {
    let (e, f) = exponents(x, u, d, l, h, ExponentVariant::EF)?;
    p_ratio(x, u, d, l, h).finish(f, e)
}

/// The Q polynomial. The prefactor is applied as `2^-F' q^-E'`.
pub fn poly_q(x: i64, u: i64, d: i64, l: &[i64], h: &[i64]) -> Result<LaurentQ, FormulaError> {
    let (e, f) = exponents(x, u, d, l, h, ExponentVariant::EpFp)?;
    q_ratio(x, u, d, l, h).finish(f, e)
}

/// P with the prefactor exactly as printed, `2^-E q^-F`.
pub fn poly_p_printed(
    x: i64,
    u: i64,
    d: i64,
    l: &[i64],
    h: &[i64],
) -> Result<LaurentQ, FormulaError> {
    let (e, f) = exponents(x, u, d, l, h, ExponentVariant::EF)?;
    p_ratio(x, u, d, l, h).finish(e, f)
}

/// Which display of a quartered formula to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Display {
    /// Single quotient over `[2i-2]!` or `[2i-1]!`.
    Factorial,
    /// Products of ratios over `[i+j-1]` and `[j-i]`.
    Ratios,
}

fn check_kind(kind: u8) -> Result<(), FormulaError> {
    if (1..=4).contains(&kind) {
        Ok(())
    } else {
        Err(FormulaError::Unsupported(format!("quartered kind {kind}")))
    }
}

/// TGF of the quartered hexagon of the given kind.
pub fn quartered_formula(kind: u8, _x: i64, s: &[i64]) -> Result<LaurentQ, FormulaError> {
    quartered_display(kind, s, Display::Factorial)
}

pub fn quartered_display(kind: u8, s: &[i64], display: Display) -> Result<LaurentQ, FormulaError> {
    check_kind(kind)?;
    let s2: Vec<i64> = s.iter().map(|v| 2 * v).collect();
    match kind {
        1 | 2 => doubled(kind, &s2, display),
        _ => printed_wt2(kind, s, display),
    }
}

/// Kinds 1 and 2 with every `s_i` given doubled, so that half-integer
/// arguments stay integral: `s2_i = 2 s_i`.
fn doubled(kind: u8, s2: &[i64], display: Display) -> Result<LaurentQ, FormulaError> {
    let n = s2.len() as i64;
    let mut r = Ratio::default();
    let sum_shift = if kind == 1 { -2 } else { 0 };
    let mut qexp = 0;
    for (i, &a) in (1..).zip(s2) {
        qexp += if kind == 1 {
            (i - 1) * (2 * a - 2 * i - 1)
        } else {
            (2 * i - 1) * a - 2 * i * i + i
        };
    }
    for (i, &a) in s2.iter().enumerate() {
        for &b in &s2[i + 1..] {
            r.mul(a + b + sum_shift);
            r.mul(b - a);
        }
    }
    if kind == 2 {
        match display {
            Display::Factorial => s2.iter().for_each(|&a| r.mul(a)),
            Display::Ratios => {
                for &a in s2 {
                    r.mul(2 * a);
                    r.den.push(LaurentZ::one() + LaurentZ::q_pow(2 * a));
                }
            }
        }
    }
    ratio_denominators(&mut r, n, kind == 2, display);
    let two = if kind == 1 { n * (n - 1) } else { n * n };
    r.finish(two, qexp)
}

fn ratio_denominators(r: &mut Ratio, n: i64, diagonal: bool, display: Display) {
    match display {
        Display::Factorial => {
            for i in 1..=n {
                r.div_factorial(if diagonal { 2 * i - 1 } else { 2 * i - 2 });
            }
        }
        Display::Ratios => {
            for i in 1..=n {
                let start = if diagonal { i } else { i + 1 };
                for j in start..=n {
                    r.div(i + j - 1);
                    if j > i {
                        r.div(j - i);
                    }
                }
            }
        }
    }
}

/// Kinds 3 and 4 as printed.
fn printed_wt2(kind: u8, s: &[i64], display: Display) -> Result<LaurentQ, FormulaError> {
    let n = s.len() as i64;
    let mut r = Ratio::default();
    let mut qexp = 0;
    for (i, &a) in (1..).zip(s) {
        qexp += if kind == 3 {
            (4 * i - 4) * a - 2 * i * i - i + 3
        } else {
            (4 * i - 2) * a - 2 * i * i - i + 1
        };
    }
    let sum_shift = if kind == 3 { -2 } else { -1 };
    for (i, &a) in s.iter().enumerate() {
        for &b in &s[i + 1..] {
            r.mul(2 * (a + b + sum_shift));
            r.mul(2 * (b - a));
        }
    }
    if kind == 4 {
        match display {
            Display::Factorial => s.iter().for_each(|&a| r.mul(2 * a - 1)),
            Display::Ratios => {
                for &a in s {
                    r.mul(2 * (2 * a - 1));
                    r.den.push(LaurentZ::one() + LaurentZ::q_pow(4 * a - 2));
                }
            }
        }
    }
    ratio_denominators(&mut r, n, kind == 4, display);
    let two = if kind == 3 { n * (n - 1) } else { n * n };
    r.finish(two, qexp)
}

/// Kind 1 (resp. 2) evaluated with every `s_i` replaced by `s_i - 1/2`.
/// Reciprocity says this is kind 3 (resp. 4) at `s`.
pub fn quartered_shifted(kind: u8, s: &[i64], display: Display) -> Result<LaurentQ, FormulaError> {
    if kind != 1 && kind != 2 {
        return Err(FormulaError::Unsupported(format!(
            "shifted evaluation is defined for kinds 1 and 2, not {kind}"
        )));
    }
    let s2: Vec<i64> = s.iter().map(|v| 2 * v - 1).collect();
    doubled(kind, &s2, display)
}

/// Closed form for the halved hexagon `P_{n,x}` (or `P'_{n,x}`), as printed.
pub fn halved_formula(prime: bool, n: i64, x: i64) -> Result<LaurentQ, FormulaError> {
    let mut r = Ratio::default();
    let shift = if prime { 1 } else { 0 };
    for i in 1..=n {
        r.mul(2 * (x + i) - shift);
        for j in i + 1..=n {
            r.mul(2 * (2 * x + i + j - shift));
            r.mul(2 * (j - i));
        }
        r.div_factorial(2 * i - 1);
    }
    let qexp: i64 = (1..=n).map(|i| (2 * i - 1) * (2 * x + i - shift)).sum();
    r.finish(n * n, qexp)
}

/// Weights of the vertical lozenges forced by the cluster of dents that the
/// printed halved formula still counts.
pub fn halved_cluster_weight(prime: bool, n: i64, x: i64) -> LaurentQ {
    let shift = if prime { 1 } else { 0 };
    let mut w = LaurentQ::one();
    for r in 0..=n - 2 {
        let mut c = 2 * x + 3 + r;
        while c <= 2 * x + 2 * n - 1 - r {
            w = &w * &symmetric_weight(c - shift);
            c += 2;
        }
    }
    w
}

/// `halved_formula` divided by the cluster weights; equals the TGF of the
/// halved hexagon itself.
pub fn halved_corrected(prime: bool, n: i64, x: i64) -> Result<LaurentQ, FormulaError> {
    let printed = halved_formula(prime, n, x)?;
    Ok(printed.div_exact(&halved_cluster_weight(prime, n, x))?)
}

/// Closed form for a type C region, with `x` replaced by `x-1` when `n = u`.
pub fn type_c_corrected(x: i64, u: i64, h: &[i64]) -> Result<LaurentQ, FormulaError> {
    let n = h.len() as i64;
    let xc = if n == u && u >= 1 { x - 1 } else { x };
    poly_q(xc, u, 0, &[], h)
}

/// The theorem's closed form for any family.
pub fn family_formula(spec: &RegionSpec) -> Result<LaurentQ, FormulaError> {
    spec.validate()?;
    let RegionSpec { x, u, d, .. } = *spec;
    let (l, h, s) = (&spec.l, &spec.h, &spec.s);
    match spec.family {
        Family::P => halved_formula(false, spec.n, x),
        Family::Pprime => halved_formula(true, spec.n, x),
        Family::R1 | Family::R2 | Family::R3 | Family::R4 => {
            quartered_formula(spec.family.quartered_kind().unwrap_or(1), x, s)
        }
        Family::A => poly_p(x, 0, d, l, &[]),
        Family::B => poly_q(x, 0, d, l, &[]),
        Family::C => poly_q(x, u, 0, &[], h),
        Family::D => poly_p(x, u, 0, &[], h),
        Family::S => poly_p(x, u, d, l, h),
        Family::T => poly_q(x, u, d, l, h),
    }
}

/// `family_formula` with the halved and type C closed forms replaced by
/// their corrected versions.
pub fn corrected_formula(spec: &RegionSpec) -> Result<LaurentQ, FormulaError> {
    spec.validate()?;
    match spec.family {
        Family::P => halved_corrected(false, spec.n, spec.x),
        Family::Pprime => halved_corrected(true, spec.n, spec.x),
        Family::C => type_c_corrected(spec.x, spec.u, &spec.h),
        _ => family_formula(spec),
    }
}

/// Which top index the rewritten A/B exponent uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopIndex {
    /// `l_m`, as in the rewritten exponent.
    Lm,
    /// `d`, as in the general exponent.
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OneSided {
    A,
    B,
}

/// The rewritten one-sided forms in terms of `x + d - m`.
pub fn rewritten_a_b(
    x: i64,
    d: i64,
    l: &[i64],
    variant: OneSided,
    top: TopIndex,
) -> Result<LaurentQ, FormulaError> {
    let m = l.len() as i64;
    let big_x = x + d - m;
    let top_index = match (top, l.last()) {
        (TopIndex::Lm, Some(&lm)) => lm,
        _ => d,
    };
    let tail: i64 = (1..)
        .zip(l)
        .map(|(i, &li)| {
            angle_sum(
                2 * x + 1 + 2 * d - m - (m - i + 1),
                2 * x + 1 + 2 * (top_index - li) - 2 * (m - i),
            )
        })
        .sum();
    let f_sum: i64 = (1..).zip(l).map(|(i, &li)| 2 * li - i).sum();
    let mut r = Ratio::default();
    for (i, &a) in l.iter().enumerate() {
        for &b in &l[i + 1..] {
            r.mul(2 * (b - a));
        }
    }
    match variant {
        OneSided::A => {
            for &li in l {
                r.div_factorial(2 * li - 1);
            }
            for i in 1..=(m + 1) / 2 {
                for j in 1..=2 * m - 4 * i + 3 {
                    r.mul(2 * big_x + 2 * i + j - 1);
                }
            }
            for (i, &li) in (1..).zip(l) {
                for j in 1..=li - i {
                    r.mul(2 * (big_x + i + j));
                    r.mul(2 * (big_x - i - j + m + 1));
                }
            }
            r.finish(f_sum, tail)
        }
        OneSided::B => {
            for &li in l {
                r.div_factorial(2 * li);
            }
            for i in 1..=m {
                r.mul(2 * (big_x + i));
                r.mul(2 * (big_x + i + 1));
                for j in 1..=i - 1 {
                    r.mul(2 * big_x + i + j + 1);
                }
            }
            for (i, &li) in (1..).zip(l) {
                for j in 1..=li - i {
                    r.mul(2 * (big_x + i + j + 1));
                    r.mul(2 * (big_x - i - j + m + 1));
                }
            }
            let lead = m * (4 * x + 4 * d - 3 * m + 3);
            debug_assert!(lead % 2 == 0);
            r.finish(m + f_sum, lead / 2 + tail)
        }
    }
}
