//! Linear series on projective space with the lexicographic valuation, and
//! graded families of monomial ideals.
//!
//! A monomial `T_0^a_0 ... T_d^a_d` is stored as its exponent vector. Its
//! valuation drops `a_0`. A general subspace of degree-`m` forms is a
//! coefficient matrix whose columns are the degree-`m` monomials sorted by
//! increasing valuation, so row reduction exposes the valuation image.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{GeomError, Polytope};
use crate::linalg::{self, Matrix};
use crate::rational::{denominator_lcm, rational_to_f64, Rational, RationalVector};
use crate::semigroup::{GradedSemigroup, SemigroupError, Slice};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MonomialError {
    #[error("body is not inside the standard simplex: rescale K into the simplex first")]
    NotInSimplex,
    #[error("ideal {0} is not primary to the maximal ideal: some variable has no pure power")]
    NotPrimary(String),
    #[error("not multiplicative: product of degrees {k} and {l} leaves {point:?} outside degree {}", k + l)]
    NotMultiplicative { k: u64, l: u64, point: Vec<i64> },
    #[error("exponent {exponents:?} does not have degree {degree}")]
    WrongDegree { exponents: Vec<i64>, degree: u64 },
    #[error("degree-zero piece must be exactly the constants")]
    BadDegreeZero,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("negative exponent in {0:?}")]
    NegativeExponent(Vec<i64>),
    #[error("rows of the coefficient matrix are linearly dependent")]
    DependentRows,
    #[error("degree {degree} exceeds the series maximum {max}")]
    DegreeOutOfRange { degree: u64, max: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial {
    exponents: Vec<i64>,
}

impl Monomial {
    pub fn new(exponents: Vec<i64>) -> Result<Self, MonomialError> {
        if exponents.is_empty() {
            return Err(MonomialError::InvalidParameter("a monomial needs at least one variable".into()));
        }
        if exponents.iter().any(|&a| a < 0) {
            return Err(MonomialError::NegativeExponent(exponents));
        }
        Ok(Monomial { exponents })
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    pub fn degree(&self) -> u64 {
        self.exponents.iter().sum::<i64>() as u64
    }

    /// Number of affine coordinates `d` (one less than the variable count).
    pub fn dim(&self) -> usize {
        self.exponents.len() - 1
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial { exponents: self.exponents.iter().zip(&other.exponents).map(|(a, b)| a + b).collect() }
    }
}

/// `(a_1, ..., a_d)`.
pub fn lex_valuation(s: &Monomial) -> Vec<i64> {
    s.exponents[1..].to_vec()
}

/// All degree-`m` monomials in `d + 1` variables, sorted by increasing
/// lexicographic valuation.
pub fn degree_monomials(d: usize, m: u64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut tail = vec![0i64; d];
    fn rec(i: usize, left: i64, tail: &mut Vec<i64>, out: &mut Vec<Monomial>) {
        if i == tail.len() {
            let mut e = vec![left];
            e.extend_from_slice(tail);
            out.push(Monomial { exponents: e });
            return;
        }
        for a in 0..=left {
            tail[i] = a;
            rec(i + 1, left - a, tail, out);
        }
        tail[i] = 0;
    }
    rec(0, m as i64, &mut tail, &mut out);
    out.sort_by_key(lex_valuation);
    out
}

/// A subspace of degree-`m` forms in `d + 1` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralSubspace {
    d: usize,
    degree: u64,
    columns: Vec<Monomial>,
    rows: Matrix,
}

impl GeneralSubspace {
    /// Rows must be independent, each of length `#degree_monomials(d, m)`
    /// in the column order of [`degree_monomials`].
    pub fn new(d: usize, degree: u64, rows: Matrix) -> Result<Self, MonomialError> {
        let columns = degree_monomials(d, degree);
        for r in &rows {
            if r.len() != columns.len() {
                return Err(MonomialError::DimensionMismatch { expected: columns.len(), found: r.len() });
            }
        }
        if linalg::rank(&rows) != rows.len() {
            return Err(MonomialError::DependentRows);
        }
        Ok(GeneralSubspace { d, degree, columns, rows })
    }

    /// The span of arbitrary (possibly dependent) rows.
    pub fn spanned_by(d: usize, degree: u64, rows: &[Vec<Rational>]) -> Result<Self, MonomialError> {
        let n = degree_monomials(d, degree).len();
        for r in rows {
            if r.len() != n {
                return Err(MonomialError::DimensionMismatch { expected: n, found: r.len() });
            }
        }
        let (r, pivots) = linalg::rref(rows);
        Self::new(d, degree, r.into_iter().take(pivots.len()).collect())
    }

    /// Span of polynomials given as `(monomial, coefficient)` lists.
    pub fn from_polynomials(
        d: usize,
        degree: u64,
        polys: &[Vec<(Monomial, Rational)>],
    ) -> Result<Self, MonomialError> {
        let columns = degree_monomials(d, degree);
        let index: BTreeMap<&Monomial, usize> = columns.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for p in polys {
            let mut row = vec![Rational::zero(); columns.len()];
            for (mono, c) in p {
                let &i = index.get(mono).ok_or_else(|| MonomialError::WrongDegree {
                    exponents: mono.exponents.clone(),
                    degree,
                })?;
                row[i] += c;
            }
            rows.push(row);
        }
        Self::spanned_by(d, degree, &rows)
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn columns(&self) -> &[Monomial] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Valuations of the pivot columns after row reduction. Each pivot is the
/// lex-leading monomial of a basis element, and these leading terms are
/// pairwise distinct, so the count equals the dimension.
pub fn subspace_valuation_image(w: &GeneralSubspace) -> BTreeSet<Vec<i64>> {
    let (_, pivots) = linalg::rref(&w.rows);
    pivots.into_iter().map(|c| lex_valuation(&w.columns[c])).collect()
}

/// A graded linear series spanned by monomials: degree `m` maps to the set of
/// exponent vectors `(a_0, ..., a_d)` of degree `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialSeries {
    d: usize,
    max_degree: u64,
    slices: BTreeMap<u64, BTreeSet<Vec<i64>>>,
    /// The body the series was built from, if any.
    source_body: Option<Polytope>,
}

impl MonomialSeries {
    /// Checks degrees, `W_0 = {1}` and `W_k W_l ⊆ W_{k+l}` for `k + l <= max`.
    pub fn new(d: usize, slices: BTreeMap<u64, BTreeSet<Vec<i64>>>, max_degree: u64) -> Result<Self, MonomialError> {
        for (&m, s) in &slices {
            if m > max_degree {
                return Err(MonomialError::DegreeOutOfRange { degree: m, max: max_degree });
            }
            for e in s {
                if e.len() != d + 1 {
                    return Err(MonomialError::DimensionMismatch { expected: d + 1, found: e.len() });
                }
                if e.iter().any(|&a| a < 0) {
                    return Err(MonomialError::NegativeExponent(e.clone()));
                }
                if e.iter().sum::<i64>() as u64 != m {
                    return Err(MonomialError::WrongDegree { exponents: e.clone(), degree: m });
                }
            }
        }
        let zero: BTreeSet<Vec<i64>> = [vec![0; d + 1]].into_iter().collect();
        if slices.get(&0) != Some(&zero) {
            return Err(MonomialError::BadDegreeZero);
        }
        let empty = BTreeSet::new();
        let get = |m: u64| slices.get(&m).unwrap_or(&empty);
        for k in 1..=max_degree {
            for l in k..=max_degree - k {
                let target = get(k + l);
                for a in get(k) {
                    for b in get(l) {
                        let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        if !target.contains(&s) {
                            return Err(MonomialError::NotMultiplicative { k, l, point: s });
                        }
                    }
                }
            }
        }
        Ok(MonomialSeries { d, max_degree, slices, source_body: None })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn max_degree(&self) -> u64 {
        self.max_degree
    }

    pub fn slices(&self) -> &BTreeMap<u64, BTreeSet<Vec<i64>>> {
        &self.slices
    }

    pub fn source_body(&self) -> Option<&Polytope> {
        self.source_body.as_ref()
    }

    pub fn slice(&self, m: u64) -> Result<BTreeSet<Vec<i64>>, MonomialError> {
        if m > self.max_degree {
            return Err(MonomialError::DegreeOutOfRange { degree: m, max: self.max_degree });
        }
        Ok(self.slices.get(&m).cloned().unwrap_or_default())
    }

    /// Valuation vectors of degree `m`.
    pub fn valuation_slice(&self, m: u64) -> Result<Slice, MonomialError> {
        Ok(self.slice(m)?.iter().map(|e| e[1..].to_vec()).collect())
    }

    /// The graded semigroup of valuation vectors, up to the maximum degree.
    pub fn semigroup(&self) -> Result<GradedSemigroup, MonomialError> {
        let mut slices = BTreeMap::new();
        for m in 0..=self.max_degree {
            slices.insert(m, self.valuation_slice(m)?);
        }
        Ok(GradedSemigroup::from_slices(self.d, slices, self.max_degree)?)
    }

    /// The smallest degree whose valuation image contains `0` and every unit
    /// vector, a sufficient stand-in for birationality of the series map.
    pub fn surrogate_b_degree(&self) -> Option<u64> {
        (1..=self.max_degree).find(|&m| {
            let s = self.valuation_slice(m).unwrap_or_default();
            s.contains(&vec![0; self.d])
                && (0..self.d).all(|i| {
                    let mut e = vec![0; self.d];
                    e[i] = 1;
                    s.contains(&e)
                })
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, MonomialError> {
        let j: SeriesJson = serde_json::from_value(v.clone()).map_err(|e| MonomialError::InvalidParameter(e.to_string()))?;
        let mut slices = BTreeMap::new();
        for (k, es) in j.degrees {
            let m: u64 = k.parse().map_err(|_| MonomialError::InvalidParameter(format!("bad degree key {k}")))?;
            slices.insert(m, es.into_iter().collect());
        }
        slices.entry(0).or_insert_with(|| [vec![0; j.vars + 1]].into_iter().collect());
        let max = j.max_degree.unwrap_or_else(|| slices.keys().copied().max().unwrap_or(0));
        Self::new(j.vars, slices, max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let degrees: BTreeMap<String, Vec<Vec<i64>>> =
            self.slices.iter().map(|(m, s)| (m.to_string(), s.iter().cloned().collect())).collect();
        serde_json::json!({ "vars": self.d, "max_degree": self.max_degree, "degrees": degrees })
    }
}

#[derive(Deserialize)]
struct SeriesJson {
    vars: usize,
    #[serde(default)]
    max_degree: Option<u64>,
    degrees: BTreeMap<String, Vec<Vec<i64>>>,
}

/// `W_m` = monomials `T_0^(m - |v|) T^v` for lattice points `v` of `mK`.
pub fn series_from_body(k: &Polytope, max_degree: u64) -> Result<MonomialSeries, MonomialError> {
    let d = k.dim();
    if !Polytope::standard_simplex(d).contains_polytope(k) {
        return Err(MonomialError::NotInSimplex);
    }
    let mut slices = BTreeMap::new();
    for m in 0..=max_degree {
        let mk = k.scale(&Rational::from_integer(BigInt::from(m)));
        let set: BTreeSet<Vec<i64>> = mk
            .lattice_points()
            .into_iter()
            .map(|v| {
                let mut e = vec![m as i64 - v.iter().sum::<i64>()];
                e.extend(v);
                e
            })
            .collect();
        slices.insert(m, set);
    }
    let mut s = MonomialSeries::new(d, slices, max_degree)?;
    s.source_body = Some(k.clone());
    Ok(s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesBody {
    /// Hull of `slice(m)/m` over `1 <= m <= m_max`.
    pub body: Polytope,
    /// Smallest `m <= m_max` with `mK` a lattice polytope, when the hull was
    /// also verified equal to `K`.
    pub certificate: Option<u64>,
    pub hausdorff_squared: Option<Rational>,
    pub hausdorff: Option<f64>,
}

/// Approximates the body of a series from its first `m_max` slices and
/// compares it with `reference` (default: the body the series came from).
pub fn series_okounkov_body(
    w: &MonomialSeries,
    m_max: u64,
    reference: Option<&Polytope>,
) -> Result<SeriesBody, MonomialError> {
    if m_max == 0 {
        return Err(MonomialError::InvalidParameter("m_max must be positive".into()));
    }
    if m_max > w.max_degree {
        return Err(MonomialError::DegreeOutOfRange { degree: m_max, max: w.max_degree });
    }
    let mut pts = Vec::new();
    for m in 1..=m_max {
        let inv = Rational::new(BigInt::one(), BigInt::from(m));
        for v in w.valuation_slice(m)? {
            pts.push(RationalVector::from_ints(&v).scale(&inv));
        }
    }
    let body = Polytope::from_points(&pts, w.d)?;
    let reference = reference.or(w.source_body.as_ref());
    let (certificate, hausdorff_squared) = match reference {
        None => (None, None),
        Some(k) => {
            let h2 = body.hausdorff_squared(k);
            let lcm = denominator_lcm(k.vertices().iter().flat_map(|v| v.coords().iter()));
            let cert = lcm
                .to_u64()
                .filter(|&l| l <= m_max && h2.is_zero() && body.same_set(k));
            (cert, Some(h2))
        }
    };
    let hausdorff = hausdorff_squared.as_ref().map(|h| rational_to_f64(h).sqrt());
    Ok(SeriesBody { body, certificate, hausdorff_squared, hausdorff })
}

/// A monomial ideal in `vars` variables, kept by its minimal generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialIdeal {
    vars: usize,
    generators: Vec<Vec<i64>>,
}

fn divides(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl MonomialIdeal {
    pub fn new(vars: usize, generators: Vec<Vec<i64>>) -> Result<Self, MonomialError> {
        for g in &generators {
            if g.len() != vars {
                return Err(MonomialError::DimensionMismatch { expected: vars, found: g.len() });
            }
            if g.iter().any(|&a| a < 0) {
                return Err(MonomialError::NegativeExponent(g.clone()));
            }
        }
        let mut gens = generators;
        gens.sort();
        gens.dedup();
        let minimal: Vec<Vec<i64>> = gens
            .iter()
            .filter(|g| !gens.iter().any(|h| h != *g && divides(h, g)))
            .cloned()
            .collect();
        Ok(MonomialIdeal { vars, generators: minimal })
    }

    /// `(x_1, ..., x_vars)^n`.
    pub fn maximal_power(vars: usize, n: i64) -> Self {
        let gens = degree_monomials(vars - 1, n as u64).into_iter().map(|m| m.exponents).collect();
        MonomialIdeal::new(vars, gens).expect("valid exponents")
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn contains(&self, u: &[i64]) -> bool {
        self.generators.iter().any(|g| divides(g, u))
    }

    /// Exponent of the pure power of each variable, if all exist.
    pub fn pure_powers(&self) -> Option<Vec<i64>> {
        (0..self.vars)
            .map(|i| {
                self.generators
                    .iter()
                    .filter(|g| g.iter().enumerate().all(|(j, &a)| j == i || a == 0))
                    .map(|g| g[i])
                    .min()
            })
            .collect()
    }

    pub fn is_primary(&self) -> bool {
        self.vars > 0 && self.pure_powers().is_some()
    }

    pub fn product(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let mut gens = Vec::new();
        for a in &self.generators {
            for b in &other.generators {
                gens.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        MonomialIdeal::new(self.vars, gens).expect("same variable count")
    }

    pub fn power(&self, k: u64) -> MonomialIdeal {
        let mut out = MonomialIdeal::new(self.vars, vec![vec![0; self.vars]]).expect("unit ideal");
        for _ in 0..k {
            out = out.product(self);
        }
        out
    }

    fn require_primary(&self) -> Result<Vec<i64>, MonomialError> {
        self.pure_powers()
            .filter(|_| self.vars > 0)
            .ok_or_else(|| MonomialError::NotPrimary(format!("{:?}", self.generators)))
    }
}

/// Number of monomials outside the ideal.
pub fn ideal_colength(ideal: &MonomialIdeal) -> Result<u64, MonomialError> {
    let r = ideal.require_primary()?;
    let mut count = 0u64;
    let mut u = vec![0i64; ideal.vars];
    'odometer: loop {
        if !ideal.contains(&u) {
            count += 1;
        }
        for i in 0..u.len() {
            u[i] += 1;
            if u[i] < r[i] {
                continue 'odometer;
            }
            u[i] = 0;
        }
        break;
    }
    Ok(count)
}

/// `d!` times the volume of the bounded region under the Newton polyhedron.
///
/// With `R` the largest pure-power exponent, the Newton polyhedron cut by
/// the box `[0, R]^d` is the hull of the generators pushed to the box walls
/// along every subset of axes; the region is the box minus that hull.
pub fn ideal_multiplicity(ideal: &MonomialIdeal) -> Result<Rational, MonomialError> {
    let r = *ideal.require_primary()?.iter().max().expect("nonempty");
    let d = ideal.vars;
    let mut pts = Vec::new();
    for g in &ideal.generators {
        for mask in 0u32..(1 << d) {
            let p: Vec<i64> = (0..d).map(|i| if mask >> i & 1 == 1 { r } else { g[i] }).collect();
            pts.push(RationalVector::from_ints(&p));
        }
    }
    let hull = Polytope::from_points(&pts, d)?;
    let boxvol = Rational::from_integer(BigInt::from(r).pow(d as u32));
    let fact: BigInt = (1..=d as u64).map(BigInt::from).product();
    Ok((boxvol - hull.volume()) * Rational::from_integer(fact))
}

/// How a family was built, when its limit multiplicity is known in closed
/// form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyKind {
    /// `a_k = {u : w.u >= k}`.
    Valuation(Vec<i64>),
    /// `a_k = a^k`.
    Power(MonomialIdeal),
    /// `a_k = m^(n k)`.
    MaximalPower(i64),
    Explicit,
}

/// Graded family `a_1, ..., a_max` with `a_k a_l ⊆ a_{k+l}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialIdealFamily {
    vars: usize,
    ideals: BTreeMap<u64, MonomialIdeal>,
    max_index: u64,
    kind: FamilyKind,
}

impl MonomialIdealFamily {
    /// Checks that every index `1..=max` is present and primary, and the
    /// product containment for all `k + l <= max`.
    pub fn new(vars: usize, ideals: BTreeMap<u64, MonomialIdeal>) -> Result<Self, MonomialError> {
        Self::with_kind(vars, ideals, FamilyKind::Explicit)
    }

    fn with_kind(vars: usize, ideals: BTreeMap<u64, MonomialIdeal>, kind: FamilyKind) -> Result<Self, MonomialError> {
        let max_index = ideals.keys().copied().max().unwrap_or(0);
        for k in 1..=max_index {
            let a = ideals.get(&k).ok_or_else(|| MonomialError::InvalidParameter(format!("missing index {k}")))?;
            if a.vars != vars {
                return Err(MonomialError::DimensionMismatch { expected: vars, found: a.vars });
            }
            a.require_primary().map_err(|_| MonomialError::NotPrimary(format!("a_{k}")))?;
        }
        for k in 1..=max_index {
            for l in k..=max_index - k {
                let target = &ideals[&(k + l)];
                for g in &ideals[&k].generators {
                    for h in &ideals[&l].generators {
                        let s: Vec<i64> = g.iter().zip(h).map(|(x, y)| x + y).collect();
                        if !target.contains(&s) {
                            return Err(MonomialError::NotMultiplicative { k, l, point: s });
                        }
                    }
                }
            }
        }
        Ok(MonomialIdealFamily { vars, ideals, max_index, kind })
    }

    /// Valuation ideals `{u : w.u >= k}` of a monomial valuation with
    /// positive integer weights.
    pub fn valuation_family(weights: &[i64], max_index: u64) -> Result<Self, MonomialError> {
        if weights.is_empty() || weights.iter().any(|&w| w <= 0) {
            return Err(MonomialError::InvalidParameter("weights must be positive".into()));
        }
        let vars = weights.len();
        let mut ideals = BTreeMap::new();
        for k in 1..=max_index as i64 {
            let bound: Vec<i64> = weights.iter().map(|w| (k + w - 1) / w).collect();
            let mut gens = Vec::new();
            let mut u = vec![0i64; vars];
            'odometer: loop {
                let val: i64 = u.iter().zip(weights).map(|(a, w)| a * w).sum();
                let minimal = (0..vars).all(|i| u[i] == 0 || val - weights[i] < k);
                if val >= k && minimal {
                    gens.push(u.clone());
                }
                for i in 0..vars {
                    u[i] += 1;
                    if u[i] <= bound[i] {
                        continue 'odometer;
                    }
                    u[i] = 0;
                }
                break;
            }
            ideals.insert(k as u64, MonomialIdeal::new(vars, gens)?);
        }
        Self::with_kind(vars, ideals, FamilyKind::Valuation(weights.to_vec()))
    }

    /// `a_k = a^k`.
    pub fn power_family(a: &MonomialIdeal, max_index: u64) -> Result<Self, MonomialError> {
        let mut ideals = BTreeMap::new();
        let mut cur = a.clone();
        for k in 1..=max_index {
            ideals.insert(k, cur.clone());
            cur = cur.product(a);
        }
        Self::with_kind(a.vars, ideals, FamilyKind::Power(a.clone()))
    }

    /// `a_k = m^(n k)` in `vars` variables.
    pub fn maximal_power_family(vars: usize, n: i64, max_index: u64) -> Result<Self, MonomialError> {
        let ideals = (1..=max_index).map(|k| (k, MonomialIdeal::maximal_power(vars, n * k as i64))).collect();
        Self::with_kind(vars, ideals, FamilyKind::MaximalPower(n))
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn max_index(&self) -> u64 {
        self.max_index
    }

    pub fn ideal(&self, k: u64) -> Option<&MonomialIdeal> {
        self.ideals.get(&k)
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    /// The limit multiplicity, when known in closed form.
    pub fn exact_limit(&self) -> Result<Option<Rational>, MonomialError> {
        Ok(match &self.kind {
            FamilyKind::Valuation(w) => {
                let prod: BigInt = w.iter().map(|&x| BigInt::from(x)).product();
                Some(Rational::new(BigInt::one(), prod))
            }
            FamilyKind::Power(a) => Some(ideal_multiplicity(a)?),
            FamilyKind::MaximalPower(n) => Some(Rational::from_integer(BigInt::from(*n).pow(self.vars as u32))),
            FamilyKind::Explicit => None,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, MonomialError> {
        let j: FamilyJson = serde_json::from_value(v.clone()).map_err(|e| MonomialError::InvalidParameter(e.to_string()))?;
        let mut ideals = BTreeMap::new();
        for (k, gens) in j.ideals {
            let m: u64 = k.parse().map_err(|_| MonomialError::InvalidParameter(format!("bad index key {k}")))?;
            ideals.insert(m, MonomialIdeal::new(j.vars, gens)?);
        }
        Self::new(j.vars, ideals)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let ideals: BTreeMap<String, &Vec<Vec<i64>>> =
            self.ideals.iter().map(|(k, a)| (k.to_string(), &a.generators)).collect();
        serde_json::json!({ "vars": self.vars, "ideals": ideals })
    }
}

#[derive(Deserialize)]
struct FamilyJson {
    vars: usize,
    ideals: BTreeMap<String, Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyMultiplicityReport {
    /// `(m, d! colength(a_m) / m^d)`.
    pub colength_ratios: Vec<(u64, Rational)>,
    /// `(p, e(a_p) / p^d)`.
    pub multiplicity_ratios: Vec<(u64, Rational)>,
    /// Closed-form limit, when the family kind provides one.
    pub limit: Option<Rational>,
    /// Every `e(a_p)/p^d` is at least the limit (or the last colength ratio
    /// when no closed form is known).
    pub one_sided_bound_holds: bool,
}

pub fn family_multiplicity_check(f: &MonomialIdealFamily, m_max: u64) -> Result<FamilyMultiplicityReport, MonomialError> {
    if m_max == 0 || m_max > f.max_index {
        return Err(MonomialError::InvalidParameter(format!("m_max must lie in 1..={}", f.max_index)));
    }
    let d = f.vars as u32;
    let fact: BigInt = (1..=d as u64).map(BigInt::from).product();
    let mut colength_ratios = Vec::new();
    let mut multiplicity_ratios = Vec::new();
    for m in 1..=m_max {
        let a = &f.ideals[&m];
        let md = Rational::from_integer(BigInt::from(m).pow(d));
        let c = Rational::from_integer(BigInt::from(ideal_colength(a)?) * &fact);
        colength_ratios.push((m, c / &md));
        multiplicity_ratios.push((m, ideal_multiplicity(a)? / md));
    }
    let limit = f.exact_limit()?;
    let floor = limit.clone().unwrap_or_else(|| colength_ratios.last().expect("m_max >= 1").1.clone());
    let one_sided_bound_holds = multiplicity_ratios.iter().all(|(_, e)| *e >= floor);
    Ok(FamilyMultiplicityReport { colength_ratios, multiplicity_ratios, limit, one_sided_bound_holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn mono(e: &[i64]) -> Monomial {
        Monomial::new(e.to_vec()).unwrap()
    }

    fn rv(c: &[(i64, i64)]) -> RationalVector {
        RationalVector::new(c.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn valuations() {
        assert_eq!(lex_valuation(&mono(&[3, 0, 0])), vec![0, 0]);
        assert_eq!(lex_valuation(&mono(&[0, 1, 1])), vec![1, 1]);
        let (a, b) = (mono(&[1, 2, 0]), mono(&[0, 1, 3]));
        let sum: Vec<i64> = lex_valuation(&a).iter().zip(lex_valuation(&b)).map(|(x, y)| x + y).collect();
        assert_eq!(lex_valuation(&a.mul(&b)), sum);
    }

    #[test]
    fn valuation_image_examples() {
        let one = Rational::one();
        let w = GeneralSubspace::from_polynomials(
            2,
            2,
            &[
                vec![(mono(&[2, 0, 0]), one.clone())],
                vec![(mono(&[1, 1, 0]), one.clone())],
                vec![(mono(&[2, 0, 0]), one.clone()), (mono(&[0, 2, 0]), one.clone())],
            ],
        )
        .unwrap();
        let img = subspace_valuation_image(&w);
        assert_eq!(img, [vec![0, 0], vec![1, 0], vec![2, 0]].into_iter().collect());

        let w = GeneralSubspace::from_polynomials(2, 1, &[vec![(mono(&[1, 0, 0]), one.clone()), (mono(&[0, 1, 0]), one.clone())]])
            .unwrap();
        assert_eq!(subspace_valuation_image(&w), [vec![0, 0]].into_iter().collect());

        let n = degree_monomials(2, 3).len();
        let full: Matrix = (0..n).map(|i| (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect()).collect();
        let w = GeneralSubspace::new(2, 3, full).unwrap();
        assert_eq!(subspace_valuation_image(&w).len(), 10);

        let w = GeneralSubspace::spanned_by(2, 1, &[vec![int(0); 3]]).unwrap();
        assert!(subspace_valuation_image(&w).is_empty());
        assert_eq!(GeneralSubspace::new(1, 1, vec![vec![int(1), int(1)], vec![int(2), int(2)]]), Err(MonomialError::DependentRows));
    }

    #[test]
    fn series_from_small_triangle() {
        let k = Polytope::from_points(&[rv(&[(0, 1), (0, 1)]), rv(&[(1, 2), (0, 1)]), rv(&[(0, 1), (1, 2)])], 2).unwrap();
        let s = series_from_body(&k, 4).unwrap();
        assert_eq!(s.valuation_slice(2).unwrap(), [vec![0, 0], vec![1, 0], vec![0, 1]].into_iter().collect());
        let b = series_okounkov_body(&s, 2, None).unwrap();
        assert!(b.body.same_set(&k));
        assert_eq!(b.certificate, Some(2));
        let b1 = series_okounkov_body(&s, 1, None).unwrap();
        assert_eq!(b1.body.affine_dim(), 0);
        assert!(k.contains(&b1.body.vertices()[0]));
        assert_eq!(b1.certificate, None);
        assert_eq!(b1.hausdorff_squared, Some(rat(1, 4)));
        assert_eq!(s.surrogate_b_degree(), Some(2));
    }

    #[test]
    fn series_needs_simplex() {
        let big = Polytope::cuboid(&[int(1), int(1)]);
        assert_eq!(series_from_body(&big, 2), Err(MonomialError::NotInSimplex));
        let pt = Polytope::point(RationalVector::zeros(2));
        let s = series_from_body(&pt, 3).unwrap();
        assert_eq!(s.slice(3).unwrap(), [vec![3, 0, 0]].into_iter().collect());
        let t = series_from_body(&Polytope::standard_simplex(2), 2).unwrap();
        assert_eq!(t.slice(2).unwrap().len(), 6);
    }

    #[test]
    fn series_rejects_non_multiplicative() {
        let mut slices = BTreeMap::new();
        slices.insert(0, [vec![0, 0]].into_iter().collect());
        slices.insert(1, [vec![0, 1]].into_iter().collect());
        slices.insert(2, [vec![1, 1]].into_iter().collect());
        assert!(matches!(MonomialSeries::new(1, slices, 2), Err(MonomialError::NotMultiplicative { .. })));
    }

    #[test]
    fn colengths() {
        let i = |g: &[&[i64]]| MonomialIdeal::new(2, g.iter().map(|v| v.to_vec()).collect()).unwrap();
        assert_eq!(ideal_colength(&MonomialIdeal::maximal_power(2, 2)).unwrap(), 3);
        assert_eq!(ideal_colength(&i(&[&[3, 0], &[0, 5]])).unwrap(), 15);
        assert_eq!(ideal_colength(&i(&[&[2, 0], &[1, 1], &[0, 3]])).unwrap(), 4);
        assert!(matches!(ideal_colength(&i(&[&[1, 1], &[2, 0]])), Err(MonomialError::NotPrimary(_))));
    }

    #[test]
    fn multiplicities() {
        let i = |g: &[&[i64]]| MonomialIdeal::new(2, g.iter().map(|v| v.to_vec()).collect()).unwrap();
        assert_eq!(ideal_multiplicity(&i(&[&[3, 0], &[0, 5]])).unwrap(), int(15));
        assert_eq!(ideal_multiplicity(&MonomialIdeal::maximal_power(2, 4)).unwrap(), int(16));
        assert_eq!(ideal_multiplicity(&i(&[&[2, 0], &[1, 1], &[0, 3]])).unwrap(), int(5));
        assert_eq!(ideal_multiplicity(&MonomialIdeal::maximal_power(3, 2)).unwrap(), int(8));
    }

    #[test]
    fn families() {
        let f = MonomialIdealFamily::valuation_family(&[1, 2], 8).unwrap();
        assert_eq!(f.ideal(3).unwrap().generators(), &[vec![0, 2], vec![1, 1], vec![3, 0]]);
        let r = family_multiplicity_check(&f, 8).unwrap();
        assert_eq!(r.limit, Some(rat(1, 2)));
        assert_eq!(r.multiplicity_ratios[1].1, rat(1, 2));
        assert!(r.one_sided_bound_holds);

        let g = MonomialIdealFamily::maximal_power_family(2, 2, 5).unwrap();
        let r = family_multiplicity_check(&g, 5).unwrap();
        assert!(r.multiplicity_ratios.iter().all(|(_, e)| *e == int(4)));
        let a = MonomialIdeal::new(2, vec![vec![2, 0], vec![1, 1], vec![0, 3]]).unwrap();
        let h = MonomialIdealFamily::power_family(&a, 4).unwrap();
        let r = family_multiplicity_check(&h, 4).unwrap();
        assert!(r.multiplicity_ratios.iter().all(|(_, e)| *e == int(5)));

        let mut bad = BTreeMap::new();
        bad.insert(1, MonomialIdeal::maximal_power(2, 1));
        bad.insert(2, MonomialIdeal::maximal_power(2, 3));
        assert!(matches!(MonomialIdealFamily::new(2, bad), Err(MonomialError::NotMultiplicative { .. })));
    }

    #[test]
    fn json_round_trip() {
        let f = MonomialIdealFamily::valuation_family(&[1, 2], 3).unwrap();
        let back = MonomialIdealFamily::from_json(&f.to_json()).unwrap();
        assert_eq!(back.ideal(3), f.ideal(3));
        let s = series_from_body(&Polytope::standard_simplex(1), 3).unwrap();
        let t = MonomialSeries::from_json(&s.to_json()).unwrap();
        assert_eq!(t.slices(), s.slices());
    }
}
