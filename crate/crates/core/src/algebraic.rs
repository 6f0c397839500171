//! Exact real numbers of the form `sum c_i * sqrt(r_i)` with rational `c_i`
//! and positive integer `r_i`, and roots of rational quadratics built on them.
//!
//! Signs are decided exactly: the radicands are refined to a pairwise
//! coprime basis, each number is split as `a + b*sqrt(p)` over one basis
//! element and the sign of `a^2 - p*b^2` is decided recursively in the
//! smaller field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{int, rational_from_pair, rational_to_f64, rational_to_pair, Rational};

/// `sum coeff * sqrt(radicand)`. Radicand `1` holds the rational part.
/// Small square factors are pulled out of radicands; the representation is
/// not guaranteed canonical, so equality is decided by sign.
#[derive(Clone, Default)]
pub struct SqrtSum {
    terms: BTreeMap<BigInt, Rational>,
}

const SMALL_PRIMES_BOUND: u32 = 1000;

/// Writes `n = s^2 * r` after dividing out squares of small primes and
/// a full square, if any.
fn extract_square(n: &BigInt) -> (BigInt, BigInt) {
    let root = n.sqrt();
    if &root * &root == *n {
        return (root, BigInt::one());
    }
    let mut r = n.clone();
    let mut s = BigInt::one();
    let mut p = 2u32;
    while p <= SMALL_PRIMES_BOUND {
        let pp = BigInt::from(p * p);
        while (&r % &pp).is_zero() {
            r /= &pp;
            s *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (s, r)
}

impl SqrtSum {
    pub fn zero() -> Self {
        SqrtSum::default()
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut s = SqrtSum::zero();
        s.add_term(BigInt::one(), q);
        s
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    /// `sqrt(q)` for `q >= 0`.
    pub fn sqrt(q: &Rational) -> Self {
        assert!(!q.is_negative(), "square root of a negative number");
        if q.is_zero() {
            return SqrtSum::zero();
        }
        // sqrt(n/d) = sqrt(n*d)/d
        let nd = q.numer() * q.denom();
        let (s, r) = extract_square(&nd);
        let mut out = SqrtSum::zero();
        out.add_term(r, Rational::new(s, q.denom().clone()));
        out
    }

    fn add_term(&mut self, radicand: BigInt, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let e = self.terms.entry(radicand.clone()).or_insert_with(Rational::zero);
        *e += coeff;
        if e.is_zero() {
            self.terms.remove(&radicand);
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let mut out = SqrtSum::zero();
        for (r, c) in &self.terms {
            out.add_term(r.clone(), c * q);
        }
        out
    }

    /// `Some(q)` if the number is visibly rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&BigInt::one()).cloned(),
            _ => None,
        }
    }

    pub fn rational_part(&self) -> Rational {
        self.terms.get(&BigInt::one()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigInt, &Rational)> {
        self.terms.iter()
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(r, c)| rational_to_f64(c) * r.to_f64().unwrap_or(f64::INFINITY).sqrt())
            .sum()
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        if let Some(q) = self.as_rational() {
            return sign_of(&q);
        }
        let radicands: Vec<BigInt> = self.terms.keys().filter(|r| !r.is_one()).cloned().collect();
        let basis = coprime_basis(&radicands);
        let mut rep: BTreeMap<u64, Rational> = BTreeMap::new();
        for (r, c) in &self.terms {
            let (scale, mask) = factor_over(r, &basis);
            let e = rep.entry(mask).or_insert_with(Rational::zero);
            *e += c * Rational::from_integer(scale);
        }
        rep.retain(|_, c| !c.is_zero());
        masked_sign(&rep, &basis)
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == 0
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }
}

fn sign_of(q: &Rational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// Pairwise coprime integers `> 1` whose products generate every input.
fn coprime_basis(values: &[BigInt]) -> Vec<BigInt> {
    let mut b: Vec<BigInt> = values.iter().filter(|v| !v.is_one()).cloned().collect();
    b.sort();
    b.dedup();
    loop {
        let mut changed = false;
        'outer: for i in 0..b.len() {
            for j in i + 1..b.len() {
                let g = b[i].gcd(&b[j]);
                if !g.is_one() {
                    let (x, y) = (&b[i] / &g, &b[j] / &g);
                    let mut next: Vec<BigInt> =
                        b.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, v)| v.clone()).collect();
                    next.extend([x, y, g].into_iter().filter(|v| !v.is_one()));
                    next.sort();
                    next.dedup();
                    b = next;
                    changed = true;
                    break 'outer;
                }
            }
        }
        if !changed {
            return b;
        }
    }
}

/// `sqrt(r) = scale * sqrt(prod of basis elements in mask)`.
fn factor_over(r: &BigInt, basis: &[BigInt]) -> (BigInt, u64) {
    let mut rest = r.clone();
    let mut scale = BigInt::one();
    let mut mask = 0u64;
    for (i, p) in basis.iter().enumerate() {
        let mut e = 0u32;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        scale *= p.pow(e / 2);
        if e % 2 == 1 {
            mask |= 1 << i;
        }
    }
    debug_assert!(rest.is_one());
    (scale, mask)
}

fn masked_mul(a: &BTreeMap<u64, Rational>, b: &BTreeMap<u64, Rational>, basis: &[BigInt]) -> BTreeMap<u64, Rational> {
    let mut out: BTreeMap<u64, Rational> = BTreeMap::new();
    for (s, c) in a {
        for (t, d) in b {
            let mut f = c * d;
            let common = s & t;
            for (i, p) in basis.iter().enumerate() {
                if common >> i & 1 == 1 {
                    f *= Rational::from_integer(p.clone());
                }
            }
            *out.entry(s ^ t).or_insert_with(Rational::zero) += f;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn masked_sign(x: &BTreeMap<u64, Rational>, basis: &[BigInt]) -> i32 {
    let Some(top) = x.keys().map(|m| 64 - m.leading_zeros()).max() else {
        return 0;
    };
    if top == 0 {
        return sign_of(&x[&0]);
    }
    let bit = 1u64 << (top - 1);
    let mut a = BTreeMap::new();
    let mut b = BTreeMap::new();
    for (m, c) in x {
        if m & bit != 0 {
            b.insert(m ^ bit, c.clone());
        } else {
            a.insert(*m, c.clone());
        }
    }
    let sa = masked_sign(&a, basis);
    let sb = masked_sign(&b, basis);
    if sa == 0 || sb == 0 || sa == sb {
        return if sa != 0 { sa } else { sb };
    }
    // a + b sqrt(p) has the sign of a iff a^2 > p b^2
    let p = Rational::from_integer(basis[(top - 1) as usize].clone());
    let mut diff = masked_mul(&a, &a, basis);
    for (m, c) in masked_mul(&b, &b, basis) {
        *diff.entry(m).or_insert_with(Rational::zero) -= c * &p;
    }
    diff.retain(|_, c| !c.is_zero());
    sa * masked_sign(&diff, basis)
}

impl Add for &SqrtSum {
    type Output = SqrtSum;
    fn add(self, rhs: &SqrtSum) -> SqrtSum {
        let mut out = self.clone();
        for (r, c) in &rhs.terms {
            out.add_term(r.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SqrtSum {
    type Output = SqrtSum;
    fn sub(self, rhs: &SqrtSum) -> SqrtSum {
        self + &(-rhs)
    }
}

impl Neg for &SqrtSum {
    type Output = SqrtSum;
    fn neg(self) -> SqrtSum {
        self.scale(&int(-1))
    }
}

impl Mul for &SqrtSum {
    type Output = SqrtSum;
    fn mul(self, rhs: &SqrtSum) -> SqrtSum {
        let mut out = SqrtSum::zero();
        for (r1, c1) in &self.terms {
            for (r2, c2) in &rhs.terms {
                // sqrt(r1) sqrt(r2) = g sqrt(r1 r2 / g^2)
                let g = r1.gcd(r2);
                let rest = (r1 / &g) * (r2 / &g);
                let (s, r) = extract_square(&rest);
                out.add_term(r, c1 * c2 * Rational::from_integer(g * s));
            }
        }
        out
    }
}

impl Add<&Rational> for &SqrtSum {
    type Output = SqrtSum;
    fn add(self, rhs: &Rational) -> SqrtSum {
        let mut out = self.clone();
        out.add_term(BigInt::one(), rhs.clone());
        out
    }
}

impl PartialEq for SqrtSum {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl Eq for SqrtSum {}

impl PartialOrd for SqrtSum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SqrtSum {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl From<Rational> for SqrtSum {
    fn from(q: Rational) -> Self {
        SqrtSum::from_rational(q)
    }
}

impl fmt::Debug for SqrtSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SqrtSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (r, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if r.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})*sqrt({r})")?;
            }
        }
        Ok(())
    }
}

/// Which root of a quadratic with two real roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootChoice {
    Smaller,
    Larger,
}

/// A real root of `a x^2 + b x + c` with `a != 0` and nonnegative
/// discriminant.
#[derive(Clone, Debug)]
pub struct QuadraticRoot {
    pub poly: [Rational; 3],
    pub root: RootChoice,
}

impl QuadraticRoot {
    pub fn discriminant(&self) -> Rational {
        let [a, b, c] = &self.poly;
        b * b - int(4) * a * c
    }

    pub fn value(&self) -> SqrtSum {
        let [a, b, _] = &self.poly;
        let sq = SqrtSum::sqrt(&self.discriminant());
        let two_a = int(2) * a;
        // the smaller root takes -sqrt when a > 0
        let plus = match self.root {
            RootChoice::Larger => a.is_positive(),
            RootChoice::Smaller => a.is_negative(),
        };
        let signed = if plus { sq } else { -&sq };
        (&signed + &(-b)).scale(&two_a.recip())
    }
}

/// An exact real that is rational or a root of a rational quadratic.
#[derive(Clone, Debug)]
pub enum QuadraticNumber {
    Rational(Rational),
    Root(QuadraticRoot),
}

impl QuadraticNumber {
    /// The chosen root of `a x^2 + b x + c`, or `None` if the roots are not
    /// real. Degenerates to the linear root when `a = 0`; a perfect-square
    /// discriminant yields a rational.
    pub fn root_of(a: &Rational, b: &Rational, c: &Rational, root: RootChoice) -> Option<QuadraticNumber> {
        if a.is_zero() {
            if b.is_zero() {
                return None;
            }
            return Some(QuadraticNumber::Rational(-c / b));
        }
        let r = QuadraticRoot { poly: [a.clone(), b.clone(), c.clone()], root };
        let disc = r.discriminant();
        if disc.is_negative() {
            return None;
        }
        let v = r.value();
        Some(match v.as_rational() {
            Some(q) => QuadraticNumber::Rational(q),
            None => QuadraticNumber::Root(r),
        })
    }

    pub fn value(&self) -> SqrtSum {
        match self {
            QuadraticNumber::Rational(q) => SqrtSum::from_rational(q.clone()),
            QuadraticNumber::Root(r) => r.value(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            QuadraticNumber::Rational(q) => Some(q),
            QuadraticNumber::Root(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value().to_f64()
    }

    /// `p * x` for rational `p > 0`.
    pub fn scale(&self, p: &Rational) -> QuadraticNumber {
        assert!(p.is_positive(), "scale factor must be positive");
        match self {
            QuadraticNumber::Rational(q) => QuadraticNumber::Rational(q * p),
            QuadraticNumber::Root(r) => {
                let [a, b, c] = &r.poly;
                QuadraticNumber::Root(QuadraticRoot { poly: [a.clone(), b * p, c * p * p], root: r.root })
            }
        }
    }

    /// `x + s`.
    pub fn shift(&self, s: &Rational) -> QuadraticNumber {
        match self {
            QuadraticNumber::Rational(q) => QuadraticNumber::Rational(q + s),
            QuadraticNumber::Root(r) => {
                let [a, b, c] = &r.poly;
                let poly = [a.clone(), b - int(2) * a * s, a * s * s - b * s + c];
                QuadraticNumber::Root(QuadraticRoot { poly, root: r.root })
            }
        }
    }

    /// All real roots of `a x^2 + b x + c` (not all zero), ascending.
    pub fn real_roots(a: &Rational, b: &Rational, c: &Rational) -> Vec<QuadraticNumber> {
        let mut out: Vec<QuadraticNumber> = [RootChoice::Smaller, RootChoice::Larger]
            .into_iter()
            .filter_map(|ch| QuadraticNumber::root_of(a, b, c, ch))
            .collect();
        out.dedup();
        out
    }
}

impl From<Rational> for QuadraticNumber {
    fn from(q: Rational) -> Self {
        QuadraticNumber::Rational(q)
    }
}

impl PartialEq for QuadraticNumber {
    fn eq(&self, other: &Self) -> bool {
        self.value() == other.value()
    }
}

impl Eq for QuadraticNumber {}

impl PartialOrd for QuadraticNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value().cmp(&other.value())
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadraticNumber::Rational(q) => write!(f, "{q}"),
            QuadraticNumber::Root(r) => write!(f, "{}", r.value()),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum QuadraticJson {
    Rational {
        value: [String; 2],
        approx: f64,
    },
    Quadratic {
        disc: [String; 2],
        poly: [[String; 2]; 3],
        root: RootChoice,
        /// decimal approximation, for display only
        approx: f64,
    },
}

impl Serialize for QuadraticNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let j = match self {
            QuadraticNumber::Rational(q) => QuadraticJson::Rational { value: rational_to_pair(q), approx: self.to_f64() },
            QuadraticNumber::Root(r) => QuadraticJson::Quadratic {
                disc: rational_to_pair(&r.discriminant()),
                poly: [rational_to_pair(&r.poly[0]), rational_to_pair(&r.poly[1]), rational_to_pair(&r.poly[2])],
                root: r.root,
                approx: self.to_f64(),
            },
        };
        j.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadraticNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let bad = || D::Error::custom("bad rational pair");
        match QuadraticJson::deserialize(d)? {
            QuadraticJson::Rational { value, .. } => {
                Ok(QuadraticNumber::Rational(rational_from_pair(&value).ok_or_else(bad)?))
            }
            QuadraticJson::Quadratic { poly, root, .. } => {
                let a = rational_from_pair(&poly[0]).ok_or_else(bad)?;
                let b = rational_from_pair(&poly[1]).ok_or_else(bad)?;
                let c = rational_from_pair(&poly[2]).ok_or_else(bad)?;
                QuadraticNumber::root_of(&a, &b, &c, root).ok_or_else(|| D::Error::custom("no real root"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn s(q: i64) -> SqrtSum {
        SqrtSum::sqrt(&int(q))
    }

    #[test]
    fn square_factors_extracted() {
        assert_eq!(s(8).terms().count(), 1);
        assert_eq!(s(8), &s(2) + &s(2));
        assert_eq!(s(9).as_rational(), Some(int(3)));
        assert_eq!(SqrtSum::sqrt(&rat(1, 2)), s(2).scale(&rat(1, 2)));
    }

    #[test]
    fn signs_of_nested_differences() {
        // sqrt2 + sqrt3 vs sqrt10: 5 + 2 sqrt6 < 10 iff sqrt6 < 2.5
        let x = &(&s(2) + &s(3)) - &s(10);
        assert_eq!(x.signum(), -1);
        assert!((&(&s(2) * &s(3)) - &s(6)).is_zero());
        let z = &(&s(5) + &s(7)) - &(&s(3) + &s(9));
        assert_eq!(z.signum(), if 5f64.sqrt() + 7f64.sqrt() > 3f64.sqrt() + 3.0 { 1 } else { -1 });
    }

    #[test]
    fn shared_factor_radicands() {
        // sqrt12 - 2 sqrt3 = 0 ; sqrt15 - sqrt3*sqrt5 = 0
        assert!((&s(12) - &s(3).scale(&int(2))).is_zero());
        assert!((&s(15) - &(&s(3) * &s(5))).is_zero());
        let w = &(&s(6) + &s(10)) - &(&s(15) + &SqrtSum::from_int(1));
        assert_eq!(w.signum(), if 6f64.sqrt() + 10f64.sqrt() > 15f64.sqrt() + 1.0 { 1 } else { -1 });
    }

    #[test]
    fn quadratic_roots() {
        // 2(t-1)(t-4) = 2t^2 - 10t + 8
        let r = QuadraticNumber::root_of(&int(2), &int(-10), &int(8), RootChoice::Smaller).unwrap();
        assert_eq!(r.as_rational(), Some(&int(1)));
        let q = QuadraticNumber::root_of(&int(1), &int(0), &int(-2), RootChoice::Larger).unwrap();
        assert!(q.as_rational().is_none());
        assert_eq!(q.value(), s(2));
        assert!(q > QuadraticNumber::Rational(rat(141, 100)));
        assert!(q < QuadraticNumber::Rational(rat(142, 100)));
        let neg = QuadraticNumber::root_of(&int(-1), &int(0), &int(2), RootChoice::Smaller).unwrap();
        assert_eq!(neg.value(), -&s(2));
    }

    #[test]
    fn json_shapes() {
        let q = QuadraticNumber::root_of(&int(1), &int(0), &int(-2), RootChoice::Larger).unwrap();
        let j = serde_json::to_value(&q).unwrap();
        assert_eq!(j["kind"], "quadratic");
        assert_eq!(j["root"], "larger");
        let back: QuadraticNumber = serde_json::from_value(j).unwrap();
        assert_eq!(back, q);
        let r = serde_json::to_value(QuadraticNumber::Rational(rat(1, 2))).unwrap();
        assert_eq!(r["kind"], "rational");
    }
}
