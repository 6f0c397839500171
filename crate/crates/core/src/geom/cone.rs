//! Pointed rational polyhedral cones.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::dd::{extreme_rays, DdError};
use super::{check_dim, GeomError, LinearSubspace, Polytope};
use crate::linalg;
use crate::rational::{parse_rational, primitive, Rational, RationalVector};

/// A pointed cone with synchronized generators and inequalities.
///
/// `rays` are the extreme rays as primitive integer vectors; `halfspaces`
/// are primitive normals `n` with `n . x >= 0` on the cone. A cone that is
/// not full-dimensional carries each equation of its span as a pair `+n`,
/// `-n`. Both lists are sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyCone {
    dim: usize,
    rays: Vec<RationalVector>,
    halfspaces: Vec<RationalVector>,
}

/// The result of intersecting a cone with a subspace: the cone in the
/// subspace's own coordinates, plus the subspace for mapping back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceCone {
    pub cone: PolyCone,
    pub subspace: LinearSubspace,
}

impl SubspaceCone {
    /// The rays mapped into the ambient space, made primitive and sorted.
    pub fn ambient_rays(&self) -> Vec<RationalVector> {
        let mut r: Vec<RationalVector> =
            self.cone.rays.iter().map(|y| self.subspace.embed(y).primitive()).collect();
        r.sort();
        r
    }
}

fn zero_cone(dim: usize) -> PolyCone {
    let mut halfspaces = Vec::new();
    for i in 0..dim {
        let e = RationalVector::unit(dim, i);
        halfspaces.push(-&e);
        halfspaces.push(e);
    }
    halfspaces.sort();
    PolyCone { dim, rays: Vec::new(), halfspaces }
}

impl PolyCone {
    pub fn from_rays(dim: usize, generators: &[RationalVector]) -> Result<PolyCone, GeomError> {
        for g in generators {
            check_dim(dim, g.dim())?;
        }
        let gens: Vec<RationalVector> = generators.iter().filter(|g| !g.is_zero()).cloned().collect();
        if gens.is_empty() {
            return Ok(zero_cone(dim));
        }
        let rows: Vec<Vec<Rational>> = gens.iter().map(|g| g.coords().to_vec()).collect();
        let (_, pivots) = linalg::rref(&rows);
        let k = pivots.len();

        // facet normals in the pivot coordinates: extreme rays of the dual
        let proj: Vec<Vec<Rational>> = gens.iter().map(|g| g.select(&pivots).into_inner()).collect();
        let dual = extreme_rays(&proj, k).map_err(|_| GeomError::NotPointed)?;
        let dual_rows: Vec<Vec<Rational>> = dual.clone();
        if linalg::rank(&dual_rows) < k {
            return Err(GeomError::NotPointed);
        }
        let mut halfspaces: Vec<RationalVector> = dual
            .iter()
            .map(|w| {
                let mut n = vec![Rational::zero(); dim];
                for (j, &c) in pivots.iter().enumerate() {
                    n[c] = w[j].clone();
                }
                RationalVector::new(n)
            })
            .collect();
        let ns = linalg::nullspace(&rows, dim);
        if !ns.is_empty() {
            let (ns, _) = linalg::rref(&ns);
            for row in ns {
                let n = RationalVector::new(primitive(&row));
                halfspaces.push(-&n);
                halfspaces.push(n);
            }
        }
        halfspaces.sort();
        halfspaces.dedup();

        let mut rays: Vec<RationalVector> = gens
            .iter()
            .filter(|g| {
                let p = g.select(&pivots);
                let tight: Vec<Vec<Rational>> =
                    dual.iter().filter(|w| crate::rational::dot(w, &p).is_zero()).cloned().collect();
                linalg::rank(&tight) + 1 == k
            })
            .map(|g| g.primitive())
            .collect();
        rays.sort();
        rays.dedup();
        Ok(PolyCone { dim, rays, halfspaces })
    }

    /// `{x : n . x >= 0 for each normal}`; must be pointed.
    pub fn from_halfspaces(dim: usize, normals: &[RationalVector]) -> Result<PolyCone, GeomError> {
        for n in normals {
            check_dim(dim, n.dim())?;
        }
        let rows: Vec<Vec<Rational>> = normals.iter().map(|n| n.coords().to_vec()).collect();
        match extreme_rays(&rows, dim) {
            Ok(rays) => {
                let rays: Vec<RationalVector> = rays.into_iter().map(RationalVector::new).collect();
                PolyCone::from_rays(dim, &rays)
            }
            Err(DdError::Lineality) => Err(GeomError::NotPointed),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[RationalVector] {
        &self.rays
    }

    pub fn halfspaces(&self) -> &[RationalVector] {
        &self.halfspaces
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        x.dim() == self.dim && self.halfspaces.iter().all(|n| !n.dot(x).is_negative())
    }

    /// Whether `x` lies in the relative interior (strictly inside every
    /// facet that is not an equation).
    pub fn contains_relative_interior(&self, x: &RationalVector) -> bool {
        if !self.contains(x) {
            return false;
        }
        self.halfspaces.iter().all(|n| {
            let is_equation = self.halfspaces.contains(&-n);
            is_equation || n.dot(x).is_positive()
        })
    }

    pub fn linear_dim(&self) -> usize {
        let rows: Vec<Vec<Rational>> = self.rays.iter().map(|r| r.coords().to_vec()).collect();
        linalg::rank(&rows)
    }

    /// Set equality; the representation is canonical.
    pub fn same_set(&self, other: &PolyCone) -> bool {
        self == other
    }

    /// Image of the cone under a linear map (rows index output coordinates).
    pub fn linear_image(&self, matrix: &[Vec<Rational>]) -> Result<PolyCone, GeomError> {
        let rays: Vec<RationalVector> =
            self.rays.iter().map(|r| RationalVector::new(linalg::mat_vec(matrix, r))).collect();
        PolyCone::from_rays(matrix.len(), &rays)
    }
}

/// The slice `C ∩ {x_axis = height}`, projected away from `axis`.
pub fn cone_slice(c: &PolyCone, axis: usize, height: &Rational) -> Result<Polytope, GeomError> {
    if axis >= c.dim || c.rays.is_empty() || c.rays.iter().any(|r| !r[axis].is_positive()) {
        return Err(GeomError::NotGraded(axis));
    }
    if height.is_negative() {
        return Err(GeomError::Infeasible);
    }
    let pts: Vec<RationalVector> = c.rays.iter().map(|r| r.scale(&(height / &r[axis])).without(axis)).collect();
    Polytope::from_points(&pts, c.dim - 1)
}

/// `C ∩ L`, in the coordinates of `L`.
pub fn cone_meet_subspace(c: &PolyCone, l: &LinearSubspace) -> Result<SubspaceCone, GeomError> {
    check_dim(c.dim, l.ambient_dim())?;
    let k = l.dim();
    let rows: Vec<Vec<Rational>> =
        c.halfspaces.iter().map(|n| l.basis().iter().map(|b| n.dot(b)).collect()).collect();
    let rays = extreme_rays(&rows, k).map_err(|_| GeomError::NotPointed)?;
    let rays: Vec<RationalVector> = rays.into_iter().map(RationalVector::new).collect();
    let cone = PolyCone::from_rays(k, &rays)?;
    Ok(SubspaceCone { cone, subspace: l.clone() })
}

fn int_strings(v: &RationalVector) -> Vec<String> {
    v.iter().map(|c| c.numer().to_string()).collect()
}

#[derive(Serialize, Deserialize)]
struct ConeJson {
    dim: usize,
    rays: Vec<Vec<String>>,
    #[serde(default)]
    halfspaces: Vec<Vec<String>>,
}

impl Serialize for PolyCone {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ConeJson {
            dim: self.dim,
            rays: self.rays.iter().map(int_strings).collect(),
            halfspaces: self.halfspaces.iter().map(int_strings).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyCone {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = ConeJson::deserialize(d)?;
        let rays: Option<Vec<RationalVector>> = j
            .rays
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Option<Vec<_>>>().map(RationalVector::new))
            .collect();
        let rays = rays.ok_or_else(|| D::Error::custom("bad ray entry"))?;
        PolyCone::from_rays(j.dim, &rays).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn v(x: &[i64]) -> RationalVector {
        RationalVector::from_ints(x)
    }

    #[test]
    fn slice_of_segment_cone() {
        let c = PolyCone::from_rays(2, &[v(&[0, 1]), v(&[3, 1])]).unwrap();
        let s = cone_slice(&c, 1, &int(1)).unwrap();
        assert_eq!(s.vertices(), &[v(&[0]), v(&[3])]);
    }

    #[test]
    fn slice_of_simplex_cone() {
        let c = PolyCone::from_rays(3, &[v(&[0, 0, 1]), v(&[1, 0, 1]), v(&[0, 1, 1])]).unwrap();
        let s = cone_slice(&c, 2, &int(1)).unwrap();
        assert_eq!(s, Polytope::standard_simplex(2));
        let c2 = PolyCone::from_rays(2, &[v(&[1, 0]), v(&[0, 1])]).unwrap();
        assert_eq!(cone_slice(&c2, 1, &int(1)), Err(GeomError::NotGraded(1)));
    }

    #[test]
    fn redundant_generators_removed() {
        let c = PolyCone::from_rays(2, &[v(&[1, 0]), v(&[0, 1]), v(&[1, 1]), v(&[2, 0])]).unwrap();
        assert_eq!(c.rays(), &[v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(c.halfspaces(), &[v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn non_pointed_rejected() {
        assert_eq!(PolyCone::from_rays(2, &[v(&[1, 0]), v(&[-1, 0]), v(&[0, 1])]), Err(GeomError::NotPointed));
    }

    #[test]
    fn lower_dimensional_cone() {
        let c = PolyCone::from_rays(3, &[v(&[1, 0, 1]), v(&[0, 1, 1])]).unwrap();
        assert_eq!(c.linear_dim(), 2);
        assert!(c.contains(&v(&[1, 1, 2])));
        assert!(!c.contains(&v(&[1, 1, 1])));
        let back = PolyCone::from_halfspaces(3, c.halfspaces()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn meet_subspace_diagonal() {
        let c = PolyCone::from_rays(3, &[v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[1, 1, 1])]).unwrap();
        let l = LinearSubspace::from_equations(&[v(&[1, -1, 0])], 3).unwrap();
        let m = cone_meet_subspace(&c, &l).unwrap();
        assert_eq!(m.ambient_rays(), vec![v(&[1, 1, 1]), v(&[1, 1, 2])]);
    }

    #[test]
    fn meet_subspace_trivial_cases() {
        let orthant = PolyCone::from_rays(2, &[v(&[1, 0]), v(&[0, 1])]).unwrap();
        let anti = LinearSubspace::from_equations(&[v(&[1, 1])], 2).unwrap();
        assert!(cone_meet_subspace(&orthant, &anti).unwrap().cone.is_zero());
        let whole = cone_meet_subspace(&orthant, &LinearSubspace::whole(2)).unwrap();
        assert_eq!(whole.ambient_rays(), orthant.rays().to_vec());
    }

    #[test]
    fn json_round_trip() {
        let c = PolyCone::from_rays(2, &[v(&[0, 1]), v(&[3, 1])]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: PolyCone = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
