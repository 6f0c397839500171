//! Exact rational scalars and vectors.
//!
//! Every geometric quantity in the crate is carried as a [`Rational`], an
//! arbitrary-precision fraction kept in lowest terms with a positive
//! denominator. [`RationalVector`] is a fixed-dimension point or direction.

use std::fmt;
use std::ops::{Add, Deref, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        n / d
    } else {
        // both huge: shift before dividing
        let bits = r.numer().bits().max(r.denom().bits()) as i64 - 900;
        let shift = bits.max(0) as u64;
        let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
        let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
        n / d
    }
}

/// Parses `"3"`, `"-7/4"` or a decimal integer string.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// `[num, den]` pair of decimal strings, the wire form of a rational.
pub fn rational_to_pair(r: &Rational) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

pub fn rational_from_pair(pair: &[String; 2]) -> Option<Rational> {
    let n: BigInt = pair[0].parse().ok()?;
    let d: BigInt = pair[1].parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Serde adapter writing a rational as `["num", "den"]`.
pub mod pair {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        rational_to_pair(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let p = <[String; 2]>::deserialize(d)?;
        rational_from_pair(&p).ok_or_else(|| serde::de::Error::custom("bad rational pair"))
    }
}

/// Reads a rational from JSON: an integer, a `"p/q"` string or a
/// `["p", "q"]` pair.
pub fn rational_from_json(v: &serde_json::Value) -> Option<Rational> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(int),
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Array(a) if a.len() == 2 => {
            let part = |x: &serde_json::Value| match x {
                serde_json::Value::String(s) => s.parse::<BigInt>().ok(),
                serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
                _ => None,
            };
            let (n, d) = (part(&a[0])?, part(&a[1])?);
            (!d.is_zero()).then(|| Rational::new(n, d))
        }
        _ => None,
    }
}

pub fn rational_to_json(r: &Rational) -> serde_json::Value {
    serde_json::json!(rational_to_pair(r))
}

/// Least common multiple of the denominators.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// A point or direction with rational coordinates. The dimension is fixed at
/// construction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalVector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        RationalVector(vec![Rational::zero(); dim])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RationalVector(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn dot(&self, other: &RationalVector) -> Rational {
        dot(&self.0, &other.0)
    }

    pub fn scale(&self, factor: &Rational) -> RationalVector {
        RationalVector(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    /// The primitive integer vector pointing in the same direction.
    /// The zero vector maps to itself.
    pub fn primitive(&self) -> RationalVector {
        RationalVector(primitive(&self.0))
    }

    /// Coordinates as `i64`, if every coordinate is an integer in range.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
            .collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rational_to_f64).collect()
    }

    /// Drops the coordinate at `axis`.
    pub fn without(&self, axis: usize) -> RationalVector {
        RationalVector(
            self.0
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != axis)
                .map(|(_, c)| c.clone())
                .collect(),
        )
    }

    pub fn select(&self, indices: &[usize]) -> RationalVector {
        RationalVector(indices.iter().map(|&i| self.0[i].clone()).collect())
    }
}

impl Deref for RationalVector {
    type Target = [Rational];
    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl Index<usize> for RationalVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl From<Vec<Rational>> for RationalVector {
    fn from(v: Vec<Rational>) -> Self {
        RationalVector(v)
    }
}

impl<'a> Add for &'a RationalVector {
    type Output = RationalVector;
    fn add(self, rhs: &'a RationalVector) -> RationalVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub for &'a RationalVector {
    type Output = RationalVector;
    fn sub(self, rhs: &'a RationalVector) -> RationalVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl<'a> Neg for &'a RationalVector {
    type Output = RationalVector;
    fn neg(self) -> RationalVector {
        RationalVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[String; 2]> = self.0.iter().map(rational_to_pair).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<[String; 2]>::deserialize(d)?;
        pairs
            .iter()
            .map(|p| rational_from_pair(p).ok_or_else(|| serde::de::Error::custom("bad rational pair")))
            .collect::<Result<Vec<_>, _>>()
            .map(RationalVector)
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Scales `v` to the primitive integer vector on the same ray.
pub fn primitive(v: &[Rational]) -> Vec<Rational> {
    if v.iter().all(Zero::is_zero) {
        return v.to_vec();
    }
    let l = denominator_lcm(v);
    let ints: Vec<BigInt> = v.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

/// Scales `(normal, offset)` together so that `normal` becomes a primitive
/// integer vector. Used for canonical facet inequalities.
pub fn primitive_with_offset(normal: &[Rational], offset: &Rational) -> (Vec<Rational>, Rational) {
    let p = primitive(normal);
    let (i, pivot) = normal
        .iter()
        .enumerate()
        .find(|(_, c)| !c.is_zero())
        .expect("nonzero normal");
    let factor = &p[i] / pivot;
    debug_assert!(factor.is_positive());
    (p, offset * factor)
}

pub fn to_integer_vec(v: &[Rational]) -> Option<Vec<BigInt>> {
    v.iter()
        .map(|c| if c.is_integer() { Some(c.to_integer()) } else { None })
        .collect()
}

pub fn floor(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

pub fn ceil(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}
