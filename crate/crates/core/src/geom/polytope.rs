//! Rational polytopes carried in both vertex and facet form.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::dd::{extreme_rays, DdError};
use super::{check_dim, GeomError};
use crate::linalg;
use crate::rational::{
    ceil, floor, int, primitive, primitive_with_offset, rational_from_pair, rational_to_pair, Rational,
    RationalVector,
};

/// The inequality `normal . x <= offset` (or an equation, in the affine hull
/// list). Normals are primitive integer vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    pub normal: RationalVector,
    pub offset: Rational,
}

impl Facet {
    pub fn new(normal: RationalVector, offset: Rational) -> Self {
        let (n, b) = primitive_with_offset(&normal, &offset);
        Facet { normal: n.into(), offset: b }
    }

    /// `offset - normal . x`; nonnegative on the polytope.
    pub fn slack(&self, x: &RationalVector) -> Rational {
        &self.offset - self.normal.dot(x)
    }
}

/// A nonempty bounded convex polytope in `Q^dim`.
///
/// `vertices` are exactly the extreme points, sorted lexicographically.
/// `facets` describe the polytope inside its affine hull, which is recorded
/// by `equations` (empty when full-dimensional). For lower-dimensional
/// polytopes the facet normals are supported on a fixed set of coordinates
/// that parametrize the affine hull, which keeps the representation
/// canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<RationalVector>,
    facets: Vec<Facet>,
    equations: Vec<Facet>,
    affine_dim: usize,
}

/// A volume together with a flag set when the polytope is not
/// full-dimensional (the value is then zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Volume {
    pub value: Rational,
    pub degenerate: bool,
}

impl Polytope {
    /// Convex hull of a finite point set.
    pub fn from_points(points: &[RationalVector], dim: usize) -> Result<Polytope, GeomError> {
        if points.is_empty() {
            return Err(GeomError::EmptyPointSet);
        }
        for p in points {
            check_dim(dim, p.dim())?;
        }
        let pts: Vec<RationalVector> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let p0 = pts[0].clone();
        let diffs: Vec<Vec<Rational>> = pts[1..].iter().map(|p| (p - &p0).into_inner()).collect();
        let (_, pivots) = linalg::rref(&diffs);
        let k = pivots.len();

        let mut equations: Vec<Facet> = Vec::new();
        let ns = linalg::nullspace(&diffs, dim);
        if !ns.is_empty() {
            let (ns, _) = linalg::rref(&ns);
            for row in ns {
                let n = RationalVector::new(primitive(&row));
                let b = n.dot(&p0);
                equations.push(Facet { normal: n, offset: b });
            }
        }

        if k == 0 {
            return Ok(Polytope { dim, vertices: pts, facets: Vec::new(), equations, affine_dim: 0 });
        }

        // Facets of the projection to the pivot coordinates, found as extreme
        // rays of the cone of valid inequalities w.q + c >= 0.
        let proj: Vec<RationalVector> = pts.iter().map(|p| p.select(&pivots)).collect();
        let rows: Vec<Vec<Rational>> = proj
            .iter()
            .map(|q| {
                let mut r = q.coords().to_vec();
                r.push(int(1));
                r
            })
            .collect();
        let rays = extreme_rays(&rows, k + 1).expect("points affinely span the projection");
        let mut facets: Vec<Facet> = rays
            .into_iter()
            .map(|ray| {
                let mut normal = vec![Rational::zero(); dim];
                for (j, &c) in pivots.iter().enumerate() {
                    normal[c] = -ray[j].clone();
                }
                Facet::new(normal.into(), ray[k].clone())
            })
            .collect();
        facets.sort();
        facets.dedup();

        let vertices: Vec<RationalVector> = pts
            .iter()
            .filter(|p| {
                let tight: Vec<Vec<Rational>> = facets
                    .iter()
                    .filter(|f| f.slack(p).is_zero())
                    .map(|f| f.normal.coords().to_vec())
                    .collect();
                linalg::rank(&tight) == k
            })
            .cloned()
            .collect();

        Ok(Polytope { dim, vertices, facets, equations, affine_dim: k })
    }

    /// The polytope `{x : n.x <= b for each inequality, n.x = b for each
    /// equation}`.
    pub fn from_constraints(
        dim: usize,
        inequalities: &[(RationalVector, Rational)],
        equations: &[(RationalVector, Rational)],
    ) -> Result<Polytope, GeomError> {
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        let mut push = |n: &RationalVector, b: &Rational, sign: i64| -> Result<(), GeomError> {
            check_dim(dim, n.dim())?;
            let mut r: Vec<Rational> = n.iter().map(|c| -c * int(sign)).collect();
            r.push(b * int(sign));
            rows.push(r);
            Ok(())
        };
        for (n, b) in inequalities {
            push(n, b, 1)?;
        }
        for (n, b) in equations {
            push(n, b, 1)?;
            push(n, b, -1)?;
        }
        let mut lam = vec![Rational::zero(); dim + 1];
        lam[dim] = int(1);
        rows.push(lam);

        let rays = match extreme_rays(&rows, dim + 1) {
            Ok(r) => r,
            Err(DdError::Lineality) => return Err(GeomError::Unbounded),
        };
        let mut verts = Vec::new();
        let mut recession = false;
        for r in rays {
            if r[dim].is_positive() {
                let l = r[dim].clone();
                verts.push(RationalVector::new(r[..dim].iter().map(|c| c / &l).collect()));
            } else {
                recession = true;
            }
        }
        if verts.is_empty() {
            return Err(GeomError::Infeasible);
        }
        if recession {
            return Err(GeomError::Unbounded);
        }
        Polytope::from_points(&verts, dim)
    }

    pub fn from_halfspaces(dim: usize, inequalities: &[(RationalVector, Rational)]) -> Result<Polytope, GeomError> {
        Self::from_constraints(dim, inequalities, &[])
    }

    pub fn point(p: RationalVector) -> Polytope {
        let d = p.dim();
        Polytope::from_points(&[p], d).expect("single point")
    }

    /// The standard simplex `conv(0, e_1, ..., e_d)`.
    pub fn standard_simplex(d: usize) -> Polytope {
        let mut pts = vec![RationalVector::zeros(d)];
        pts.extend((0..d).map(|i| RationalVector::unit(d, i)));
        Polytope::from_points(&pts, d).expect("simplex")
    }

    /// The box `prod [0, sides_i]`.
    pub fn cuboid(sides: &[Rational]) -> Polytope {
        let d = sides.len();
        let pts: Vec<RationalVector> = (0..1usize << d)
            .map(|mask| {
                RationalVector::new(
                    (0..d)
                        .map(|i| if mask >> i & 1 == 1 { sides[i].clone() } else { Rational::zero() })
                        .collect(),
                )
            })
            .collect();
        Polytope::from_points(&pts, d).expect("box")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Equations of the affine hull; empty when full-dimensional.
    pub fn equations(&self) -> &[Facet] {
        &self.equations
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.dim
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        x.dim() == self.dim
            && self.equations.iter().all(|e| e.slack(x).is_zero())
            && self.facets.iter().all(|f| !f.slack(x).is_negative())
    }

    pub fn contains_polytope(&self, other: &Polytope) -> bool {
        other.vertices.iter().all(|v| self.contains(v))
    }

    /// Set equality, by mutual containment of vertices.
    pub fn same_set(&self, other: &Polytope) -> bool {
        self.dim == other.dim && self.contains_polytope(other) && other.contains_polytope(self)
    }

    pub fn volume(&self) -> Rational {
        self.volume_checked().value
    }

    /// Euclidean volume, by coning from a vertex over a recursive
    /// triangulation of the far facets.
    pub fn volume_checked(&self) -> Volume {
        if !self.is_full_dimensional() {
            return Volume { value: Rational::zero(), degenerate: true };
        }
        let d = self.dim;
        let mut total = Rational::zero();
        for simplex in triangulate(self) {
            let rows: Vec<Vec<Rational>> = simplex[1..].iter().map(|v| (v - &simplex[0]).into_inner()).collect();
            total += linalg::det(&rows).abs();
        }
        let fact: u64 = (1..=d as u64).product();
        Volume { value: total / int(fact as i64), degenerate: false }
    }

    /// Integer points, in lexicographic order.
    pub fn lattice_points(&self) -> Vec<Vec<i64>> {
        use num_traits::ToPrimitive;
        let d = self.dim;
        let lo: Vec<i64> = (0..d)
            .map(|i| ceil(self.vertices.iter().map(|v| &v[i]).min().unwrap()).to_i64().expect("coordinate range"))
            .collect();
        let hi: Vec<i64> = (0..d)
            .map(|i| floor(self.vertices.iter().map(|v| &v[i]).max().unwrap()).to_i64().expect("coordinate range"))
            .collect();
        let mut out = Vec::new();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return out;
        }
        if d == 0 {
            out.push(Vec::new());
            return out;
        }
        let mut cur = lo.clone();
        loop {
            if self.contains(&RationalVector::from_ints(&cur)) {
                out.push(cur.clone());
            }
            let mut i = d;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    cur[i + 1..].copy_from_slice(&lo[i + 1..]);
                    break;
                }
            }
        }
    }

    pub fn scale(&self, factor: &Rational) -> Polytope {
        let pts: Vec<RationalVector> = self.vertices.iter().map(|v| v.scale(factor)).collect();
        Polytope::from_points(&pts, self.dim).expect("nonempty")
    }

    pub fn translate(&self, shift: &RationalVector) -> Polytope {
        let pts: Vec<RationalVector> = self.vertices.iter().map(|v| v + shift).collect();
        Polytope::from_points(&pts, self.dim).expect("nonempty")
    }

    /// Image under the linear map with the given matrix (rows index output
    /// coordinates).
    pub fn linear_image(&self, matrix: &[Vec<Rational>]) -> Polytope {
        let pts: Vec<RationalVector> =
            self.vertices.iter().map(|v| RationalVector::new(linalg::mat_vec(matrix, v))).collect();
        Polytope::from_points(&pts, matrix.len()).expect("nonempty")
    }

    /// Intersection with further constraints; `Err(Infeasible)` if empty.
    pub fn intersect(&self, inequalities: &[(RationalVector, Rational)]) -> Result<Polytope, GeomError> {
        let mut ineqs: Vec<(RationalVector, Rational)> =
            self.facets.iter().map(|f| (f.normal.clone(), f.offset.clone())).collect();
        ineqs.extend(inequalities.iter().cloned());
        let eqs: Vec<(RationalVector, Rational)> =
            self.equations.iter().map(|f| (f.normal.clone(), f.offset.clone())).collect();
        Polytope::from_constraints(self.dim, &ineqs, &eqs)
    }
}

impl Polytope {
    /// Squared Euclidean distance from `x` to the polytope, exactly.
    ///
    /// The point is projected onto the affine hull; if the projection lies
    /// outside, the nearest point lies on a facet whose inequality it
    /// violates, and the search recurses into those facets.
    pub fn distance_squared(&self, x: &RationalVector) -> Rational {
        let y = project_affine(&self.equations, x);
        let diff = x - &y;
        let base = diff.dot(&diff);
        if self.affine_dim == 0 {
            let v = &self.vertices[0];
            let e = x - v;
            return e.dot(&e);
        }
        if self.facets.iter().all(|f| !f.slack(&y).is_negative()) {
            return base;
        }
        self.facets
            .iter()
            .filter(|f| f.slack(&y).is_negative())
            .map(|f| {
                let face: Vec<RationalVector> = self.vertices.iter().filter(|v| f.slack(v).is_zero()).cloned().collect();
                let face = Polytope::from_points(&face, self.dim).expect("nonempty face");
                &base + face.distance_squared(&y)
            })
            .min()
            .expect("a violated facet")
    }

    /// Squared Hausdorff distance; attained at vertices since the distance
    /// to a convex set is a convex function.
    pub fn hausdorff_squared(&self, other: &Polytope) -> Rational {
        let a = self.vertices.iter().map(|v| other.distance_squared(v)).max().unwrap_or_else(Rational::zero);
        let b = other.vertices.iter().map(|v| self.distance_squared(v)).max().unwrap_or_else(Rational::zero);
        a.max(b)
    }
}

/// Orthogonal projection onto `{x : n.x = b}` for the given equations.
fn project_affine(equations: &[Facet], x: &RationalVector) -> RationalVector {
    if equations.is_empty() {
        return x.clone();
    }
    let gram: Vec<Vec<Rational>> =
        equations.iter().map(|e| equations.iter().map(|f| e.normal.dot(&f.normal)).collect()).collect();
    let resid: Vec<Rational> = equations.iter().map(|e| e.normal.dot(x) - &e.offset).collect();
    let lam = linalg::solve(&gram, &resid).expect("independent equations");
    let mut y = x.clone();
    for (l, e) in lam.iter().zip(equations) {
        y = &y - &e.normal.scale(l);
    }
    y
}

fn triangulate(p: &Polytope) -> Vec<Vec<RationalVector>> {
    if p.affine_dim == 0 {
        return vec![vec![p.vertices[0].clone()]];
    }
    let v0 = &p.vertices[0];
    let mut out = Vec::new();
    for f in &p.facets {
        if f.slack(v0).is_zero() {
            continue;
        }
        let face: Vec<RationalVector> = p.vertices.iter().filter(|v| f.slack(v).is_zero()).cloned().collect();
        let face = Polytope::from_points(&face, p.dim).expect("nonempty face");
        for mut s in triangulate(&face) {
            s.insert(0, v0.clone());
            out.push(s);
        }
    }
    out
}

pub fn convex_hull(points: &[RationalVector], dim: usize) -> Result<Polytope, GeomError> {
    Polytope::from_points(points, dim)
}

pub fn polytope_volume(p: &Polytope) -> Volume {
    p.volume_checked()
}

pub fn lattice_points(p: &Polytope) -> Vec<Vec<i64>> {
    p.lattice_points()
}

pub fn minkowski_sum(p: &Polytope, q: &Polytope) -> Result<Polytope, GeomError> {
    check_dim(p.dim, q.dim)?;
    let mut pts = Vec::with_capacity(p.vertices.len() * q.vertices.len());
    for a in &p.vertices {
        for b in &q.vertices {
            pts.push(a + b);
        }
    }
    Polytope::from_points(&pts, p.dim)
}

#[derive(Serialize, Deserialize)]
struct FacetJson {
    normal: Vec<String>,
    offset: [String; 2],
}

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    dim: usize,
    vertices: Vec<RationalVector>,
    #[serde(default)]
    facets: Vec<FacetJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    equations: Vec<FacetJson>,
}

fn facet_json(f: &Facet) -> FacetJson {
    FacetJson {
        normal: f.normal.iter().map(|c| c.numer().to_string()).collect(),
        offset: rational_to_pair(&f.offset),
    }
}

impl Serialize for Polytope {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolytopeJson {
            dim: self.dim,
            vertices: self.vertices.clone(),
            facets: self.facets.iter().map(facet_json).collect(),
            equations: self.equations.iter().map(facet_json).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polytope {
    /// Rebuilt from the vertices; facet data, if present, must agree.
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = PolytopeJson::deserialize(d)?;
        let p = Polytope::from_points(&j.vertices, j.dim).map_err(D::Error::custom)?;
        for f in &j.facets {
            let normal: Option<Vec<Rational>> = f.normal.iter().map(|s| crate::rational::parse_rational(s)).collect();
            let normal = normal.ok_or_else(|| D::Error::custom("bad facet normal"))?;
            let offset = rational_from_pair(&f.offset).ok_or_else(|| D::Error::custom("bad facet offset"))?;
            if normal.len() != j.dim {
                return Err(D::Error::custom("facet dimension mismatch"));
            }
            let facet = Facet { normal: normal.into(), offset };
            if p.vertices.iter().any(|v| facet.slack(v).is_negative()) {
                return Err(D::Error::custom("facet violated by a vertex"));
            }
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn pts(v: &[&[i64]]) -> Vec<RationalVector> {
        v.iter().map(|p| RationalVector::from_ints(p)).collect()
    }

    #[test]
    fn interior_point_is_dropped() {
        let mut p = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        p.push(RationalVector::new(vec![rat(1, 4), rat(1, 4)]));
        let t = convex_hull(&p, 2).unwrap();
        assert_eq!(t.vertices(), &pts(&[&[0, 0], &[0, 1], &[1, 0]])[..]);
        assert_eq!(t.facets().len(), 3);
        assert_eq!(t.volume(), rat(1, 2));
    }

    #[test]
    fn square_and_trapezoid() {
        let sq = convex_hull(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]), 2).unwrap();
        assert_eq!(sq.vertices().len(), 4);
        assert_eq!(sq.volume(), int(1));
        let tr = convex_hull(&pts(&[&[0, 0], &[1, 0], &[0, 5], &[1, 3]]), 2).unwrap();
        assert_eq!(tr.volume(), int(4));
    }

    #[test]
    fn simplex_volumes() {
        for d in 1..=4 {
            let fact: i64 = (1..=d as i64).product();
            assert_eq!(Polytope::standard_simplex(d).volume(), rat(1, fact));
        }
    }

    #[test]
    fn lattice_points_of_scaled_square() {
        let sq = Polytope::cuboid(&[int(2), int(2)]);
        assert_eq!(sq.lattice_points().len(), 9);
        let t = Polytope::standard_simplex(2).scale(&int(4));
        assert_eq!(t.lattice_points().len(), 15);
    }

    #[test]
    fn degenerate_hull_records_affine_hull() {
        let seg = convex_hull(&pts(&[&[0, 0], &[1, 1], &[2, 2]]), 2).unwrap();
        assert_eq!(seg.affine_dim(), 1);
        assert_eq!(seg.vertices(), &pts(&[&[0, 0], &[2, 2]])[..]);
        assert_eq!(seg.equations().len(), 1);
        let v = seg.volume_checked();
        assert!(v.degenerate);
        assert!(v.value.is_zero());
        assert!(seg.contains(&RationalVector::from_ints(&[1, 1])));
        assert!(!seg.contains(&RationalVector::from_ints(&[1, 0])));
    }

    #[test]
    fn halfspaces_round_trip() {
        let tri = Polytope::standard_simplex(2);
        let ineqs: Vec<_> = tri.facets().iter().map(|f| (f.normal.clone(), f.offset.clone())).collect();
        let back = Polytope::from_halfspaces(2, &ineqs).unwrap();
        assert_eq!(back, tri);
        let half = vec![(RationalVector::from_ints(&[-1, 0]), int(0))];
        assert_eq!(Polytope::from_halfspaces(2, &half), Err(GeomError::Unbounded));
        let bad = vec![
            (RationalVector::from_ints(&[1]), int(0)),
            (RationalVector::from_ints(&[-1]), int(-1)),
        ];
        assert_eq!(Polytope::from_halfspaces(1, &bad), Err(GeomError::Infeasible));
    }

    #[test]
    fn minkowski_of_squares() {
        let sq = Polytope::cuboid(&[int(1), int(1)]);
        let s2 = minkowski_sum(&sq, &sq).unwrap();
        assert!(s2.same_set(&sq.scale(&int(2))));
    }

    #[test]
    fn distances() {
        let sq = Polytope::cuboid(&[int(1), int(1)]);
        assert_eq!(sq.distance_squared(&RationalVector::from_ints(&[2, 2])), int(2));
        assert_eq!(sq.distance_squared(&RationalVector::from_ints(&[3, 0])), int(4));
        let inner = Polytope::point(RationalVector::from_ints(&[0, 0]));
        assert_eq!(sq.hausdorff_squared(&inner), int(2));
        let seg = convex_hull(&pts(&[&[0, 0], &[2, 2]]), 2).unwrap();
        assert_eq!(seg.distance_squared(&RationalVector::from_ints(&[2, 0])), int(2));
        assert_eq!(seg.distance_squared(&RationalVector::from_ints(&[3, 3])), int(2));
    }

    #[test]
    fn json_round_trip() {
        let tri = Polytope::standard_simplex(2);
        let s = serde_json::to_string(&tri).unwrap();
        assert!(s.contains(r#""normal":["-1","0"]"#), "{s}");
        let back: Polytope = serde_json::from_str(&s).unwrap();
        assert_eq!(back, tri);
    }
}
