//! Graded sub-semigroups of `N^(d+r)`.
//!
//! A point is a vector whose first `value_dim` coordinates are the value
//! part and whose last `grading_dim` coordinates are the degree. A semigroup
//! is given either by finitely many generators or by explicit degree slices
//! up to a declared maximum degree.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{cone_meet_subspace, cone_slice, GeomError, LinearSubspace, PolyCone, Polytope};
use crate::linalg::IntegerLattice;
use crate::rational::{int, Rational, RationalVector};

pub type Point = Vec<i64>;
pub type Slice = BTreeSet<Point>;

/// Slices kept for explicit curve semigroups when no bound is given.
pub const DEFAULT_CURVE_MAX_DEGREE: u64 = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SemigroupError {
    #[error("degree out of range: {degree} > declared maximum {max}")]
    DegreeOutOfRange { degree: u64, max: u64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("negative coordinate in {0:?}")]
    NegativeCoordinate(Point),
    #[error("nonzero generator {0:?} has degree zero")]
    ZeroDegreeGenerator(Point),
    #[error("slices are not additive: {point:?} from degrees {k} + {l} is missing")]
    NotAdditive { k: u64, l: u64, point: Point },
    #[error("semigroup is not admissible: {0}")]
    Inadmissible(AdmissibilityReport),
    #[error("statement (*) fails if the semigroup does not generate the full lattice")]
    GroupNotFull,
    #[error("slice of degree {0} is empty")]
    EmptySlice(u64),
    #[error("degree too small: need c >= 2g + 1, got c = {c}, g = {g}")]
    DegreeTooSmall { c: i64, g: i64 },
    #[error("no translate found in the box [0, {0}]")]
    NoTranslateInBox(i64),
    #[error("operation requires a finitely generated semigroup")]
    NotFinitelyGenerated,
    #[error("operation requires grading dimension {expected}, found {found}")]
    WrongGrading { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// The three standing conditions on a graded semigroup, checked exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub has_zero: bool,
    pub is_bounded: bool,
    /// Every point of degree `m` has coordinates at most `m * bound`.
    pub bound: Option<i64>,
    pub generates_full_group: bool,
}

impl AdmissibilityReport {
    pub fn admissible(&self) -> bool {
        self.has_zero && self.is_bounded && self.generates_full_group
    }
}

impl std::fmt::Display for AdmissibilityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "has_zero={}, bounded={} (b={:?}), full_group={}",
            self.has_zero, self.is_bounded, self.bound, self.generates_full_group
        )
    }
}

#[derive(Debug, Clone)]
pub enum Source {
    Generators(Vec<Point>),
    Explicit {
        slices: BTreeMap<u64, Slice>,
        max_degree: u64,
        /// The closed cone spanned by the whole (infinite) semigroup, when
        /// known in closed form.
        closure_cone: Option<PolyCone>,
    },
}

#[derive(Debug)]
pub struct GradedSemigroup {
    value_dim: usize,
    grading_dim: usize,
    source: Source,
    cache: RwLock<HashMap<Vec<u64>, Arc<Slice>>>,
}

impl Clone for GradedSemigroup {
    fn clone(&self) -> Self {
        GradedSemigroup {
            value_dim: self.value_dim,
            grading_dim: self.grading_dim,
            source: self.source.clone(),
            cache: RwLock::new(self.cache.read().expect("cache lock").clone()),
        }
    }
}

/// The Okounkov body of a semigroup, with a flag telling whether it is the
/// exact body or only the hull of finitely many slices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupBody {
    pub body: Polytope,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    /// `(m, #slice(m) / m^d)` for `1 <= m <= m_max`.
    pub ratios: Vec<(u64, Rational)>,
    pub counts: Vec<usize>,
    /// Volume of the body, the limit of the ratios.
    pub target: Rational,
    pub exact_target: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FujitaReport {
    pub p: u64,
    pub k: u64,
    /// `#(k-fold sumset of slice p)`.
    pub sumset_size: usize,
    /// `sumset_size / (k^d p^d)`.
    pub ratio: Rational,
    /// `vol(hull(slice p)) / p^d`, the limit of `ratio` as `k` grows.
    pub limit: Rational,
    /// `vol` of the body of the semigroup.
    pub target: Rational,
    /// `target - limit`.
    pub gap: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslateReport {
    pub z: Point,
    pub box_bound: i64,
    /// Integer points of `(z + cone)` inside the box that were checked.
    pub checked_points: usize,
    /// Verification covers the box only.
    pub box_limited: bool,
}

/// Outcome of comparing the cone of the semigroup points in a subspace with
/// the cone of the semigroup cut by that subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubspaceOutcome {
    Checked {
        equal: bool,
        /// Cone of the semigroup intersected with the subspace, in subspace
        /// coordinates.
        meet_cone: PolyCone,
        /// Cone spanned by enumerated semigroup points of the subspace.
        points_cone: PolyCone,
        box_bound: i64,
    },
    HypothesisNotMet {
        reason: String,
        /// The hypothesis is needed: equality may fail for such input.
        counterexample_possible: bool,
    },
}

impl SubspaceOutcome {
    pub fn is_equal(&self) -> bool {
        matches!(self, SubspaceOutcome::Checked { equal: true, .. })
    }
}

fn check_point(p: &[i64], n: usize) -> Result<(), SemigroupError> {
    if p.len() != n {
        return Err(SemigroupError::DimensionMismatch { expected: n, found: p.len() });
    }
    if p.iter().any(|&x| x < 0) {
        return Err(SemigroupError::NegativeCoordinate(p.to_vec()));
    }
    Ok(())
}

fn ceil_div(a: i64, b: i64) -> i64 {
    (a + b - 1).div_euclid(b)
}

fn to_rv(p: &[i64]) -> RationalVector {
    RationalVector::from_ints(p)
}

fn add_points(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl GradedSemigroup {
    /// The semigroup generated by the given vectors of length
    /// `value_dim + grading_dim`.
    pub fn from_generators(
        value_dim: usize,
        grading_dim: usize,
        generators: Vec<Point>,
    ) -> Result<Self, SemigroupError> {
        let n = value_dim + grading_dim;
        let mut gens = Vec::new();
        for g in generators {
            check_point(&g, n)?;
            if g.iter().all(|&x| x == 0) {
                continue;
            }
            if g[value_dim..].iter().all(|&x| x == 0) {
                return Err(SemigroupError::ZeroDegreeGenerator(g));
            }
            gens.push(g);
        }
        gens.sort();
        gens.dedup();
        Ok(GradedSemigroup { value_dim, grading_dim, source: Source::Generators(gens), cache: RwLock::default() })
    }

    /// A semigroup given by its slices `degree -> points of N^d` up to
    /// `max_degree`. Additivity is checked on all pairs of stored degrees.
    pub fn from_slices(
        value_dim: usize,
        slices: BTreeMap<u64, Slice>,
        max_degree: u64,
    ) -> Result<Self, SemigroupError> {
        for (&m, s) in &slices {
            if m > max_degree {
                return Err(SemigroupError::DegreeOutOfRange { degree: m, max: max_degree });
            }
            for p in s {
                check_point(p, value_dim)?;
            }
        }
        let empty = Slice::new();
        let get = |m: u64| slices.get(&m).unwrap_or(&empty);
        for k in 0..=max_degree {
            for l in k..=max_degree - k {
                let target = get(k + l);
                for a in get(k) {
                    for b in get(l) {
                        let s = add_points(a, b);
                        if !target.contains(&s) {
                            return Err(SemigroupError::NotAdditive { k, l, point: s });
                        }
                    }
                }
            }
        }
        Ok(GradedSemigroup {
            value_dim,
            grading_dim: 1,
            source: Source::Explicit { slices, max_degree, closure_cone: None },
            cache: RwLock::default(),
        })
    }

    pub fn value_dim(&self) -> usize {
        self.value_dim
    }

    pub fn grading_dim(&self) -> usize {
        self.grading_dim
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn generators(&self) -> Option<&[Point]> {
        match &self.source {
            Source::Generators(g) => Some(g),
            Source::Explicit { .. } => None,
        }
    }

    pub fn max_degree(&self) -> Option<u64> {
        match &self.source {
            Source::Generators(_) => None,
            Source::Explicit { max_degree, .. } => Some(*max_degree),
        }
    }

    fn require_graded(&self) -> Result<(), SemigroupError> {
        if self.grading_dim != 1 {
            return Err(SemigroupError::WrongGrading { expected: 1, found: self.grading_dim });
        }
        Ok(())
    }

    /// The slice of degree `m`, as a set of value vectors.
    pub fn degree_slice(&self, m: u64) -> Result<Arc<Slice>, SemigroupError> {
        self.require_graded()?;
        self.multidegree_slice(&[m])
    }

    /// The slice over a degree vector of length `grading_dim`.
    pub fn multidegree_slice(&self, degree: &[u64]) -> Result<Arc<Slice>, SemigroupError> {
        if degree.len() != self.grading_dim {
            return Err(SemigroupError::DimensionMismatch { expected: self.grading_dim, found: degree.len() });
        }
        match &self.source {
            Source::Explicit { slices, max_degree, .. } => {
                let m = degree[0];
                if m > *max_degree {
                    return Err(SemigroupError::DegreeOutOfRange { degree: m, max: *max_degree });
                }
                Ok(Arc::new(slices.get(&m).cloned().unwrap_or_default()))
            }
            Source::Generators(gens) => Ok(self.knapsack(gens, degree)),
        }
    }

    fn knapsack(&self, gens: &[Point], degree: &[u64]) -> Arc<Slice> {
        if let Some(s) = self.cache.read().expect("cache lock").get(degree) {
            return s.clone();
        }
        let d = self.value_dim;
        let mut out = Slice::new();
        if degree.iter().all(|&x| x == 0) {
            out.insert(vec![0; d]);
        } else {
            for g in gens {
                let h = &g[d..];
                if h.iter().zip(degree).all(|(&hi, &mi)| hi as u64 <= mi) {
                    let rest: Vec<u64> = degree.iter().zip(h).map(|(&mi, &hi)| mi - hi as u64).collect();
                    let lower = self.knapsack(gens, &rest);
                    for p in lower.iter() {
                        out.insert(add_points(p, &g[..d]));
                    }
                }
            }
        }
        let out = Arc::new(out);
        self.cache.write().expect("cache lock").insert(degree.to_vec(), out.clone());
        out
    }

    pub fn check_admissibility(&self) -> AdmissibilityReport {
        let d = self.value_dim;
        let n = d + self.grading_dim;
        match &self.source {
            Source::Generators(gens) => {
                let bound = gens
                    .iter()
                    .map(|g| {
                        let h: i64 = g[d..].iter().sum();
                        let top = g[..d].iter().copied().max().unwrap_or(0);
                        ceil_div(top, h)
                    })
                    .max()
                    .unwrap_or(0);
                let mut lat = IntegerLattice::new(n);
                for g in gens {
                    lat.insert(g);
                }
                AdmissibilityReport {
                    has_zero: true,
                    is_bounded: true,
                    bound: Some(bound),
                    generates_full_group: lat.index() == Some(BigInt::one()),
                }
            }
            Source::Explicit { slices, max_degree, closure_cone } => {
                let has_zero = slices.get(&0).is_some_and(|s| s.len() == 1 && s.iter().all(|p| p.iter().all(|&x| x == 0)));
                let mut bound = 0i64;
                for (&m, s) in slices {
                    if m == 0 {
                        continue;
                    }
                    for p in s {
                        let top = p.iter().copied().max().unwrap_or(0);
                        bound = bound.max(ceil_div(top, m as i64));
                    }
                }
                let mut is_bounded = true;
                if let Some(c) = closure_cone {
                    for r in c.rays() {
                        let h = &r[d];
                        if !h.is_positive() {
                            is_bounded = false;
                            continue;
                        }
                        for x in r.iter().take(d) {
                            let b = (x / h).ceil().to_integer().to_i64().unwrap_or(i64::MAX);
                            bound = bound.max(b);
                        }
                    }
                }
                let mut lat = IntegerLattice::new(n);
                let mut full = false;
                for m in 0..=*max_degree {
                    if let Some(s) = slices.get(&m) {
                        for p in s {
                            let mut q = p.clone();
                            q.push(m as i64);
                            lat.insert(&q);
                        }
                    }
                    if lat.index() == Some(BigInt::one()) {
                        full = true;
                        break;
                    }
                }
                AdmissibilityReport { has_zero, is_bounded, bound: Some(bound), generates_full_group: full }
            }
        }
    }

    fn require_admissible(&self) -> Result<(), SemigroupError> {
        let r = self.check_admissibility();
        if r.admissible() {
            Ok(())
        } else {
            Err(SemigroupError::Inadmissible(r))
        }
    }

    /// The closed cone spanned by the semigroup, if it is known exactly.
    pub fn cone(&self) -> Result<Option<PolyCone>, SemigroupError> {
        let n = self.value_dim + self.grading_dim;
        match &self.source {
            Source::Generators(gens) => {
                let rays: Vec<RationalVector> = gens.iter().map(|g| to_rv(g)).collect();
                Ok(Some(PolyCone::from_rays(n, &rays)?))
            }
            Source::Explicit { closure_cone, .. } => Ok(closure_cone.clone()),
        }
    }

    /// The Okounkov body: the slice of the cone at degree one, or, when the
    /// cone is not known, the hull of `slice(m)/m` for `m <= m_max`.
    pub fn okounkov_body(&self, m_max: u64) -> Result<SemigroupBody, SemigroupError> {
        self.require_graded()?;
        self.require_admissible()?;
        let d = self.value_dim;
        if let Some(c) = self.cone()? {
            let body = cone_slice(&c, d, &int(1))?;
            return Ok(SemigroupBody { body, exact: true });
        }
        if m_max == 0 {
            return Err(SemigroupError::InvalidParameter("m_max must be positive".into()));
        }
        let top = m_max.min(self.max_degree().unwrap_or(m_max));
        let mut pts = Vec::new();
        for m in 1..=top {
            let scale = Rational::new(BigInt::one(), BigInt::from(m));
            for p in self.degree_slice(m)?.iter() {
                pts.push(to_rv(p).scale(&scale));
            }
        }
        let body = Polytope::from_points(&pts, d)?;
        Ok(SemigroupBody { body, exact: false })
    }

    /// `#slice(m) / m^d` for `1 <= m <= m_max`, with the body volume.
    pub fn density_sequence(&self, m_max: u64) -> Result<DensityReport, SemigroupError> {
        if m_max == 0 {
            return Err(SemigroupError::InvalidParameter("m_max must be positive".into()));
        }
        let body = self.okounkov_body(m_max)?;
        let d = self.value_dim as u32;
        let mut ratios = Vec::new();
        let mut counts = Vec::new();
        for m in 1..=m_max {
            let c = self.degree_slice(m)?.len();
            counts.push(c);
            let denom = BigInt::from(m).pow(d);
            ratios.push((m, Rational::new(BigInt::from(c), denom)));
        }
        Ok(DensityReport { ratios, counts, target: body.body.volume(), exact_target: body.exact })
    }

    /// Compares the k-fold sumset of `slice(p)` with the body.
    pub fn fujita_gap(&self, p: u64, k: u64) -> Result<FujitaReport, SemigroupError> {
        if p == 0 || k == 0 {
            return Err(SemigroupError::InvalidParameter("p and k must be positive".into()));
        }
        self.require_admissible()?;
        let d = self.value_dim;
        let slice = self.degree_slice(p)?;
        if slice.is_empty() {
            return Err(SemigroupError::EmptySlice(p));
        }
        let pts: Vec<Point> = slice.iter().cloned().collect();
        let sumset_size = sumset_count(&pts, k as usize, d);
        let pk = BigInt::from(p * k).pow(d as u32);
        let ratio = Rational::new(BigInt::from(sumset_size), pk);
        let hull = Polytope::from_points(&pts.iter().map(|q| to_rv(q)).collect::<Vec<_>>(), d)?;
        let limit = hull.volume() / Rational::from_integer(BigInt::from(p).pow(d as u32));
        let target = self.okounkov_body(p)?.body.volume();
        let gap = &target - &limit;
        Ok(FujitaReport { p, k, sumset_size, ratio, limit, target, gap })
    }

    /// Compares the cone of the fiber over the ray through `a` with the
    /// cone of the semigroup cut by the preimage of that ray.
    pub fn ray_fiber_check(&self, a: &[i64], box_bound: i64) -> Result<SubspaceOutcome, SemigroupError> {
        let gens = self.generators().ok_or(SemigroupError::NotFinitelyGenerated)?;
        let (d, r) = (self.value_dim, self.grading_dim);
        if a.len() != r {
            return Err(SemigroupError::DimensionMismatch { expected: r, found: a.len() });
        }
        let degs: Vec<RationalVector> = gens.iter().map(|g| to_rv(&g[d..])).collect();
        let support = PolyCone::from_rays(r, &degs)?;
        if support.linear_dim() < r || !support.contains_relative_interior(&to_rv(a)) {
            return Ok(SubspaceOutcome::HypothesisNotMet {
                reason: "degree vector not in the interior of the support".into(),
                counterexample_possible: true,
            });
        }
        let n = d + r;
        let mut basis: Vec<RationalVector> = (0..d).map(|i| RationalVector::unit(n, i)).collect();
        let mut ray = vec![0i64; d];
        ray.extend_from_slice(a);
        basis.push(to_rv(&ray));
        let l = LinearSubspace::from_basis(basis, n)?;
        subspace_cone_check(gens, &l, box_bound)
    }
}

/// Size of the `k`-fold sumset of a finite set of points of `N^d`, by
/// repeated addition on a dense grid.
pub fn sumset_count(points: &[Point], k: usize, d: usize) -> usize {
    sumset(points, k, d).len()
}

pub fn sumset(points: &[Point], k: usize, d: usize) -> Vec<Point> {
    if points.is_empty() || k == 0 {
        return vec![vec![0; d]];
    }
    let maxc: Vec<i64> = (0..d).map(|i| points.iter().map(|p| p[i]).max().unwrap_or(0)).collect();
    let dims: Vec<usize> = maxc.iter().map(|&m| (m as usize) * k + 1).collect();
    let index = |p: &[i64]| -> usize { p.iter().zip(&dims).fold(0usize, |acc, (&x, &n)| acc * n + x as usize) };
    let total: usize = dims.iter().product();
    let offsets: Vec<usize> = points.iter().map(|p| index(p)).collect();
    let mut cur: Vec<usize> = offsets.clone();
    cur.sort_unstable();
    cur.dedup();
    for _ in 1..k {
        let mut mark = vec![false; total];
        let mut next = Vec::new();
        for &c in &cur {
            for &o in &offsets {
                // coordinates never overflow their axis: each axis holds k * max
                let t = c + o;
                if !mark[t] {
                    mark[t] = true;
                    next.push(t);
                }
            }
        }
        next.sort_unstable();
        cur = next;
    }
    cur.into_iter()
        .map(|mut t| {
            let mut p = vec![0i64; d];
            for i in (0..d).rev() {
                p[i] = (t % dims[i]) as i64;
                t /= dims[i];
            }
            p
        })
        .collect()
}

/// The curve semigroup `{0} ∪ {(k, m) : m >= 1, 0 <= k <= m c - g}`, stored
/// up to `DEFAULT_CURVE_MAX_DEGREE`.
pub fn curve_semigroup(c: i64, g: i64) -> Result<GradedSemigroup, SemigroupError> {
    curve_semigroup_up_to(c, g, DEFAULT_CURVE_MAX_DEGREE)
}

pub fn curve_semigroup_up_to(c: i64, g: i64, max_degree: u64) -> Result<GradedSemigroup, SemigroupError> {
    if g < 0 || c < 2 * g + 1 {
        return Err(SemigroupError::DegreeTooSmall { c, g });
    }
    let mut slices = BTreeMap::new();
    slices.insert(0, Slice::from([vec![0]]));
    for m in 1..=max_degree {
        let top = m as i64 * c - g;
        slices.insert(m, (0..=top).map(|k| vec![k]).collect());
    }
    // additivity holds since (mc - g) + (lc - g) <= (m + l)c - g
    let cone = PolyCone::from_rays(2, &[to_rv(&[0, 1]), to_rv(&[c, 1])])?;
    Ok(GradedSemigroup {
        value_dim: 1,
        grading_dim: 1,
        source: Source::Explicit { slices, max_degree, closure_cone: Some(cone) },
        cache: RwLock::default(),
    })
}

/// Points of the semigroup generated by `gens` inside `[0, b]^n`.
pub fn points_in_box(gens: &[Point], n: usize, b: i64) -> Vec<Point> {
    let side = (b + 1) as usize;
    let total = side.pow(n as u32);
    let index = |p: &[i64]| -> usize { p.iter().fold(0usize, |acc, &x| acc * side + x as usize) };
    let mut seen = vec![false; total];
    let mut stack = vec![vec![0i64; n]];
    seen[0] = true;
    let mut out = Vec::new();
    while let Some(p) = stack.pop() {
        for g in gens {
            let q = add_points(&p, g);
            if q.iter().all(|&x| x <= b) {
                let i = index(&q);
                if !seen[i] {
                    seen[i] = true;
                    stack.push(q);
                }
            }
        }
        out.push(p);
    }
    out.sort();
    out
}

/// Lexicographically smallest `z` in `[0, b]^n` such that every integer
/// point of `z + cone(gens)` inside the box lies in the semigroup.
pub fn khovanskii_translate(gens: &[Point], box_bound: i64) -> Result<TranslateReport, SemigroupError> {
    let n = gens.first().map_or(0, Vec::len);
    for g in gens {
        check_point(g, n)?;
    }
    let mut lat = IntegerLattice::new(n);
    for g in gens {
        lat.insert(g);
    }
    if lat.index() != Some(BigInt::one()) {
        return Err(SemigroupError::GroupNotFull);
    }
    let cone = PolyCone::from_rays(n, &gens.iter().map(|g| to_rv(g)).collect::<Vec<_>>())?;
    let normals: Vec<Vec<i64>> = cone.halfspaces().iter().map(|h| h.to_i64().expect("integral normal")).collect();
    let in_cone = |v: &[i64]| normals.iter().all(|nv| nv.iter().zip(v).map(|(a, b)| a * b).sum::<i64>() >= 0);

    let members: BTreeSet<Point> = points_in_box(gens, n, box_bound).into_iter().collect();
    let mut missing = Vec::new();
    let mut all = Vec::new();
    box_iter(n, box_bound, |p| {
        if !members.contains(p) {
            missing.push(p.to_vec());
        }
        all.push(p.to_vec());
    });
    for z in all {
        let ok = missing.iter().all(|m| {
            let diff: Vec<i64> = m.iter().zip(&z).map(|(a, b)| a - b).collect();
            !in_cone(&diff)
        });
        if ok {
            let mut checked = 0;
            box_iter(n, box_bound, |p| {
                let diff: Vec<i64> = p.iter().zip(&z).map(|(a, b)| a - b).collect();
                if in_cone(&diff) {
                    checked += 1;
                }
            });
            return Ok(TranslateReport { z, box_bound, checked_points: checked, box_limited: true });
        }
    }
    Err(SemigroupError::NoTranslateInBox(box_bound))
}

/// Checks that every integer point of `z + cone(gens)` in the box lies in
/// the semigroup.
pub fn verify_translate(gens: &[Point], z: &[i64], box_bound: i64) -> Result<bool, SemigroupError> {
    let n = z.len();
    let cone = PolyCone::from_rays(n, &gens.iter().map(|g| to_rv(g)).collect::<Vec<_>>())?;
    let members: BTreeSet<Point> = points_in_box(gens, n, box_bound).into_iter().collect();
    let mut ok = true;
    box_iter(n, box_bound, |p| {
        let diff: Vec<i64> = p.iter().zip(z).map(|(a, b)| a - b).collect();
        if cone.contains(&to_rv(&diff)) && !members.contains(p) {
            ok = false;
        }
    });
    Ok(ok)
}

fn box_iter(n: usize, b: i64, mut f: impl FnMut(&[i64])) {
    let mut cur = vec![0i64; n];
    loop {
        f(&cur);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if cur[i] < b {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = 0;
                }
                break;
            }
        }
    }
}

/// Compares `cone(Γ) ∩ L` with `cone(Γ ∩ L)` for the semigroup generated by
/// `gens`. The semigroup points of `L` are enumerated in a box that grows
/// until every extreme ray of the first cone carries such a point, or the
/// box exceeds `max_box`.
pub fn subspace_cone_check(gens: &[Point], l: &LinearSubspace, max_box: i64) -> Result<SubspaceOutcome, SemigroupError> {
    let n = l.ambient_dim();
    for g in gens {
        check_point(g, n)?;
    }
    let sigma = PolyCone::from_rays(n, &gens.iter().map(|g| to_rv(g)).collect::<Vec<_>>())?;
    if sigma.linear_dim() < n {
        return Ok(SubspaceOutcome::HypothesisNotMet {
            reason: "semigroup cone is not full-dimensional".into(),
            counterexample_possible: true,
        });
    }
    if !subspace_meets_interior(&sigma, l)? {
        return Ok(SubspaceOutcome::HypothesisNotMet {
            reason: "subspace misses the interior of the cone".into(),
            counterexample_possible: true,
        });
    }
    let meet = cone_meet_subspace(&sigma, l)?;
    let start = gens.iter().flatten().copied().max().unwrap_or(1).max(1);
    let mut b = start;
    loop {
        let pts = points_in_subspace(gens, l, b);
        let points_cone = PolyCone::from_rays(l.dim(), &pts)?;
        let equal = points_cone == meet.cone;
        if equal || b >= max_box {
            return Ok(SubspaceOutcome::Checked { equal, meet_cone: meet.cone, points_cone, box_bound: b });
        }
        b = (b * 2).min(max_box);
    }
}

/// Compares the cones for an explicitly listed finite part of a semigroup
/// whose closed cone is known. Used for semigroups that are not finitely
/// generated; no hypothesis is checked.
pub fn subspace_cone_compare(
    points: &[Point],
    closure_cone: &PolyCone,
    l: &LinearSubspace,
) -> Result<(PolyCone, PolyCone), SemigroupError> {
    let meet = cone_meet_subspace(closure_cone, l)?;
    let inside: Vec<RationalVector> = points.iter().filter_map(|p| l.coordinates(&to_rv(p))).collect();
    let points_cone = PolyCone::from_rays(l.dim(), &primitive_directions(inside))?;
    Ok((meet.cone, points_cone))
}

fn primitive_directions(v: Vec<RationalVector>) -> Vec<RationalVector> {
    let set: BTreeSet<RationalVector> = v.into_iter().filter(|x| !x.is_zero()).map(|x| x.primitive()).collect();
    set.into_iter().collect()
}

fn points_in_subspace(gens: &[Point], l: &LinearSubspace, b: i64) -> Vec<RationalVector> {
    let n = l.ambient_dim();
    let eqs = LinearSubspace::from_equations(l.basis(), n).expect("dims agree");
    // integer normals of L
    let normals: Vec<Vec<i64>> = eqs.basis().iter().map(|e| e.primitive().to_i64().expect("small normal")).collect();
    let inside = points_in_box(gens, n, b)
        .into_iter()
        .filter(|p| normals.iter().all(|nv| nv.iter().zip(p).map(|(a, x)| a * x).sum::<i64>() == 0))
        .filter_map(|p| l.coordinates(&to_rv(&p)));
    primitive_directions(inside.collect())
}

/// Whether `L` contains a point strictly inside every facet of the
/// full-dimensional cone `sigma`. Decided on the cone `sigma ∩ L`: a point
/// of its relative interior is the sum of its rays; `L` meets the interior
/// iff that point is interior to `sigma`.
pub fn subspace_meets_interior(sigma: &PolyCone, l: &LinearSubspace) -> Result<bool, SemigroupError> {
    let meet = cone_meet_subspace(sigma, l)?;
    let rays = meet.ambient_rays();
    if rays.is_empty() {
        return Ok(false);
    }
    let mut s = RationalVector::zeros(l.ambient_dim());
    for r in &rays {
        s = &s + r;
    }
    Ok(sigma.halfspaces().iter().all(|h| h.dot(&s).is_positive()))
}

#[derive(Serialize, Deserialize)]
struct SemigroupJson {
    value_dim: Option<usize>,
    #[serde(default)]
    grading_dim: Option<usize>,
    #[serde(default)]
    generators: Option<Vec<Point>>,
    #[serde(default)]
    slices: Option<BTreeMap<String, Vec<Point>>>,
    #[serde(default)]
    max_degree: Option<u64>,
}

impl GradedSemigroup {
    /// Reads `{"value_dim", "grading_dim", "generators"}` or
    /// `{"slices": {"1": [...]}, "max_degree"}`.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, SemigroupError> {
        let j: SemigroupJson =
            serde_json::from_value(v.clone()).map_err(|e| SemigroupError::InvalidParameter(e.to_string()))?;
        if let Some(gens) = j.generators {
            let r = j.grading_dim.unwrap_or(1);
            let d = match j.value_dim {
                Some(d) => d,
                None => gens.first().map_or(0, |g| g.len().saturating_sub(r)),
            };
            return Self::from_generators(d, r, gens);
        }
        let slices = j.slices.ok_or_else(|| SemigroupError::InvalidParameter("need generators or slices".into()))?;
        let mut parsed = BTreeMap::new();
        for (k, pts) in slices {
            let m: u64 = k.parse().map_err(|_| SemigroupError::InvalidParameter(format!("bad degree key {k}")))?;
            parsed.insert(m, pts.into_iter().collect::<Slice>());
        }
        let max = j.max_degree.unwrap_or_else(|| parsed.keys().copied().max().unwrap_or(0));
        let d = match j.value_dim {
            Some(d) => d,
            None => parsed.values().flatten().next().map_or(0, Vec::len),
        };
        Self::from_slices(d, parsed, max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn slice_vec(s: &Slice) -> Vec<i64> {
        s.iter().map(|p| p[0]).collect()
    }

    #[test]
    fn knapsack_slices() {
        let g = GradedSemigroup::from_generators(1, 1, vec![vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(slice_vec(&g.degree_slice(3).unwrap()), vec![0, 1, 2, 3]);
        let h = GradedSemigroup::from_generators(1, 1, vec![vec![0, 1], vec![3, 1]]).unwrap();
        assert_eq!(slice_vec(&h.degree_slice(2).unwrap()), vec![0, 3, 6]);
    }

    #[test]
    fn zero_degree_generator_rejected() {
        let e = GradedSemigroup::from_generators(1, 1, vec![vec![1, 0]]).unwrap_err();
        assert!(matches!(e, SemigroupError::ZeroDegreeGenerator(_)));
    }

    #[test]
    fn curve_slices_and_body() {
        let c = curve_semigroup(5, 2).unwrap();
        assert_eq!(slice_vec(&c.degree_slice(1).unwrap()), vec![0, 1, 2, 3]);
        assert_eq!(c.degree_slice(2).unwrap().len(), 9);
        let b = c.okounkov_body(10).unwrap();
        assert!(b.exact);
        assert_eq!(b.body.vertices(), &[to_rv(&[0]), to_rv(&[5])]);
        assert!(matches!(curve_semigroup(4, 2), Err(SemigroupError::DegreeTooSmall { .. })));
        assert!(matches!(
            c.degree_slice(DEFAULT_CURVE_MAX_DEGREE + 1),
            Err(SemigroupError::DegreeOutOfRange { .. })
        ));
    }

    #[test]
    fn admissibility_cases() {
        let g = GradedSemigroup::from_generators(1, 1, vec![vec![0, 2]]).unwrap();
        assert!(!g.check_admissibility().generates_full_group);
        let g = GradedSemigroup::from_generators(1, 1, vec![vec![0, 1], vec![1, 1]]).unwrap();
        let r = g.check_admissibility();
        assert!(r.admissible());
        assert_eq!(r.bound, Some(1));
        assert!(curve_semigroup(5, 2).unwrap().check_admissibility().admissible());
    }

    #[test]
    fn density_of_curve() {
        let c = curve_semigroup(5, 2).unwrap();
        let r = c.density_sequence(10).unwrap();
        assert_eq!(r.target, int(5));
        for (m, q) in &r.ratios {
            assert_eq!(q, &Rational::new(BigInt::from(5 * m - 1), BigInt::from(*m)));
        }
    }

    #[test]
    fn density_rejects_index_three() {
        let h = GradedSemigroup::from_generators(1, 1, vec![vec![0, 1], vec![3, 1]]).unwrap();
        assert!(matches!(h.density_sequence(5), Err(SemigroupError::Inadmissible(_))));
        // the oracle count for this semigroup: m + 1 points per slice
        assert_eq!(h.degree_slice(7).unwrap().len(), 8);
    }

    #[test]
    fn explicit_slices_checked() {
        let mut s = BTreeMap::new();
        s.insert(0, Slice::from([vec![0]]));
        s.insert(1, Slice::from([vec![0], vec![1]]));
        s.insert(2, Slice::from([vec![0], vec![2]]));
        let e = GradedSemigroup::from_slices(1, s, 2).unwrap_err();
        assert!(matches!(e, SemigroupError::NotAdditive { k: 1, l: 1, .. }));
    }

    #[test]
    fn frobenius_translate() {
        let r = khovanskii_translate(&[vec![3], vec![5]], 200).unwrap();
        assert_eq!(r.z, vec![8]);
        assert!(verify_translate(&[vec![3], vec![5]], &[8], 200).unwrap());
        assert!(!verify_translate(&[vec![3], vec![5]], &[7], 200).unwrap());
        assert_eq!(khovanskii_translate(&[vec![2], vec![4]], 20), Err(SemigroupError::GroupNotFull));
        let s = khovanskii_translate(&[vec![0, 1], vec![1, 2]], 50).unwrap();
        assert_eq!(s.z, vec![0, 0]);
    }

    #[test]
    fn fujita_on_curve() {
        let c = curve_semigroup(5, 2).unwrap();
        let r = c.fujita_gap(4, 3).unwrap();
        assert_eq!(r.sumset_size, 3 * 18 + 1);
        assert_eq!(r.gap, rat(2, 4));
    }

    #[test]
    fn sumset_in_two_dims() {
        let pts = vec![vec![0, 0], vec![1, 0], vec![0, 1]];
        assert_eq!(sumset_count(&pts, 3, 2), 10);
    }

    #[test]
    fn ray_fiber_examples() {
        let g = GradedSemigroup::from_generators(2, 2, vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1], vec![1, 1, 1, 1]])
            .unwrap();
        // support is the orthant, but the semigroup is not full-dimensional
        let out = g.ray_fiber_check(&[1, 1], 16).unwrap();
        assert!(matches!(out, SubspaceOutcome::HypothesisNotMet { .. }));
        let full = GradedSemigroup::from_generators(
            1,
            2,
            vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0], vec![1, 0, 1], vec![2, 1, 1]],
        )
        .unwrap();
        assert!(full.ray_fiber_check(&[1, 1], 32).unwrap().is_equal());
        let boundary = full.ray_fiber_check(&[1, 0], 32).unwrap();
        assert!(matches!(boundary, SubspaceOutcome::HypothesisNotMet { counterexample_possible: true, .. }));
        let graded = GradedSemigroup::from_generators(1, 1, vec![vec![0, 1], vec![1, 1]]).unwrap();
        assert!(graded.ray_fiber_check(&[1], 8).unwrap().is_equal());
    }

    #[test]
    fn json_forms() {
        let v: serde_json::Value =
            serde_json::from_str(r#"{"value_dim":1,"grading_dim":1,"generators":[[0,1],[1,1]]}"#).unwrap();
        let g = GradedSemigroup::from_json(&v).unwrap();
        assert_eq!(g.generators().unwrap().len(), 2);
        let v: serde_json::Value =
            serde_json::from_str(r#"{"slices":{"0":[[0]],"1":[[0],[1]],"2":[[0],[1],[2]]},"max_degree":2}"#).unwrap();
        let e = GradedSemigroup::from_json(&v).unwrap();
        assert_eq!(e.max_degree(), Some(2));
    }
}
