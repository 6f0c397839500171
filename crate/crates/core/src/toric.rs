//! Smooth projective toric varieties: divisor polytopes, the chart map of an
//! invariant flag, bodies of divisor classes and the global cone.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{GeomError, PolyCone, Polytope};
use crate::linalg::{self, Matrix};
use crate::rational::{int, Rational, RationalVector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ToricError {
    #[error("divisor not big/complete fan required: the divisor polytope is unbounded")]
    NotBigOrComplete,
    #[error("the divisor has no sections: its polytope is empty")]
    EmptyPolytope,
    #[error("ray {0} is zero or not primitive")]
    BadRay(usize),
    #[error("cone {0:?} is not simplicial of full dimension")]
    NotSimplicial(Vec<usize>),
    #[error("cone {cone:?} is simplicial but singular (|det| = {det})")]
    Singular { cone: Vec<usize>, det: BigInt },
    #[error("ray index {0} out of range")]
    RayIndex(usize),
    #[error("rays {0:?} do not form a maximal cone of the fan")]
    NotAMaximalCone(Vec<usize>),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Geom(GeomError),
}

impl From<GeomError> for ToricError {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::Unbounded => ToricError::NotBigOrComplete,
            GeomError::Infeasible => ToricError::EmptyPolytope,
            other => ToricError::Geom(other),
        }
    }
}

/// A smooth fan: primitive rays and unimodular maximal cones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricModel {
    rank: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

fn int_matrix(rows: &[&Vec<i64>]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl ToricModel {
    pub fn new(rank: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Self, ToricError> {
        for (i, r) in rays.iter().enumerate() {
            if r.len() != rank {
                return Err(ToricError::DimensionMismatch { expected: rank, found: r.len() });
            }
            if r.iter().fold(0, |g, &x| gcd(g, x)) != 1 {
                return Err(ToricError::BadRay(i));
            }
        }
        let mut cones = Vec::new();
        for c in max_cones {
            if let Some(&bad) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(ToricError::RayIndex(bad));
            }
            let mut sorted = c.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != rank {
                return Err(ToricError::NotSimplicial(c));
            }
            let det = linalg::det(&int_matrix(&sorted.iter().map(|&i| &rays[i]).collect::<Vec<_>>()));
            if det.is_zero() {
                return Err(ToricError::NotSimplicial(c));
            }
            if !det.abs().is_one() {
                return Err(ToricError::Singular { cone: c, det: det.numer().abs() });
            }
            cones.push(sorted);
        }
        Ok(ToricModel { rank, rays, max_cones: cones })
    }

    /// `P^d` with rays `e_1, ..., e_d, -(e_1 + ... + e_d)`.
    pub fn projective_space(d: usize) -> Self {
        let mut rays: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
        rays.push(vec![-1; d]);
        let cones = (0..=d).map(|skip| (0..=d).filter(|&i| i != skip).collect()).collect();
        ToricModel::new(d, rays, cones).expect("smooth fan")
    }

    /// `P^1 x P^1` with rays `e1, e2, -e1, -e2`.
    pub fn p1_times_p1() -> Self {
        Self::hirzebruch(0)
    }

    /// The Hirzebruch surface with rays `e1, e2, -e1 + a e2, -e2`.
    pub fn hirzebruch(a: i64) -> Self {
        let rays = vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]];
        let cones = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]];
        ToricModel::new(2, rays, cones).expect("smooth fan")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, ToricError> {
        #[derive(Deserialize)]
        struct FanJson {
            rank: usize,
            rays: Vec<Vec<i64>>,
            max_cones: Vec<Vec<usize>>,
        }
        let j: FanJson = serde_json::from_value(v.clone()).map_err(|e| ToricError::Invalid(e.to_string()))?;
        Self::new(j.rank, j.rays, j.max_cones)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    fn ray(&self, i: usize) -> RationalVector {
        RationalVector::from_ints(&self.rays[i])
    }
}

/// `D = sum a_i D_i`, one coefficient per ray.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InvariantDivisor {
    #[serde(with = "coeffs")]
    coeffs: Vec<Rational>,
}

mod coeffs {
    use super::*;
    use crate::rational::{rational_from_pair, rational_to_pair};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        c.iter().map(rational_to_pair).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let pairs: Vec<[String; 2]> = Vec::deserialize(d)?;
        pairs
            .iter()
            .map(|p| rational_from_pair(p).ok_or_else(|| serde::de::Error::custom("bad rational")))
            .collect()
    }
}

impl InvariantDivisor {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        InvariantDivisor { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        InvariantDivisor { coeffs: coeffs.iter().map(|&c| int(c)).collect() }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn scale(&self, q: &Rational) -> Self {
        InvariantDivisor { coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn add(&self, other: &InvariantDivisor) -> Self {
        InvariantDivisor { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    fn check(&self, t: &ToricModel) -> Result<(), ToricError> {
        if self.coeffs.len() != t.num_rays() {
            return Err(ToricError::DimensionMismatch { expected: t.num_rays(), found: self.coeffs.len() });
        }
        Ok(())
    }
}

/// A maximal cone with an ordering of its rays; the flag is
/// `D_(order[0]) ⊇ D_(order[0]) ∩ D_(order[1]) ⊇ ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagChart {
    order: Vec<usize>,
}

impl FlagChart {
    pub fn new(t: &ToricModel, order: Vec<usize>) -> Result<Self, ToricError> {
        let mut sorted = order.clone();
        sorted.sort_unstable();
        if !t.max_cones.contains(&sorted) || sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(ToricError::NotAMaximalCone(order));
        }
        Ok(FlagChart { order })
    }

    /// The first maximal cone with its rays in increasing order.
    pub fn first(t: &ToricModel) -> Self {
        FlagChart { order: t.max_cones[0].clone() }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// `phi(u) = (<u, v_i>)` over the chart rays; rows are the rays.
    pub fn phi_matrix(&self, t: &ToricModel) -> Matrix {
        int_matrix(&self.order.iter().map(|&i| &t.rays[i]).collect::<Vec<_>>())
    }

    /// Rays outside the chart, in increasing index order.
    pub fn complement(&self, t: &ToricModel) -> Vec<usize> {
        (0..t.num_rays()).filter(|i| !self.order.contains(i)).collect()
    }
}

/// `P_D = {u : <u, v_i> >= -a_i}`.
pub fn divisor_polytope(t: &ToricModel, d: &InvariantDivisor) -> Result<Polytope, ToricError> {
    d.check(t)?;
    let ineqs: Vec<(RationalVector, Rational)> =
        (0..t.num_rays()).map(|i| (-&t.ray(i), d.coeffs[i].clone())).collect();
    Ok(Polytope::from_halfspaces(t.rank, &ineqs)?)
}

/// The character `u` with `D + div(chi^u)` vanishing on the chart rays.
pub fn chart_character(t: &ToricModel, d: &InvariantDivisor, chart: &FlagChart) -> Result<RationalVector, ToricError> {
    d.check(t)?;
    let v = chart.phi_matrix(t);
    let rhs: Vec<Rational> = chart.order.iter().map(|&i| -&d.coeffs[i]).collect();
    let u = linalg::solve(&v, &rhs).expect("unimodular chart");
    Ok(RationalVector::new(u))
}

/// `div(chi^u) = sum <u, v_i> D_i`.
pub fn principal_divisor(t: &ToricModel, u: &RationalVector) -> InvariantDivisor {
    InvariantDivisor { coeffs: (0..t.num_rays()).map(|i| t.ray(i).dot(u)).collect() }
}

/// `D + div(chi^u)`, zero on the chart rays.
pub fn normalize_on_chart(t: &ToricModel, d: &InvariantDivisor, chart: &FlagChart) -> Result<InvariantDivisor, ToricError> {
    let u = chart_character(t, d, chart)?;
    Ok(d.add(&principal_divisor(t, &u)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricBody {
    pub body: Polytope,
    /// Full-dimensional, i.e. the class is big.
    pub big: bool,
}

/// `phi(P_D')` for `D'` the chart-normalized representative of `D`.
pub fn toric_okounkov_body(t: &ToricModel, d: &InvariantDivisor, chart: &FlagChart) -> Result<ToricBody, ToricError> {
    let dn = normalize_on_chart(t, d, chart)?;
    let p = divisor_polytope(t, &dn)?;
    let body = p.linear_image(&chart.phi_matrix(t));
    let big = body.is_full_dimensional();
    Ok(ToricBody { body, big })
}

/// `#(m P_D ∩ M)`.
pub fn ehrhart_count(t: &ToricModel, d: &InvariantDivisor, m: u64) -> Result<u64, ToricError> {
    let p = divisor_polytope(t, d)?;
    Ok(p.scale(&int(m as i64)).lattice_points().len() as u64)
}

/// Coefficients `c_0, ..., c_d` of the polynomial through the counts at
/// `m = 1, ..., d + 1`.
pub fn ehrhart_polynomial(t: &ToricModel, d: &InvariantDivisor) -> Result<Vec<Rational>, ToricError> {
    let n = t.rank + 1;
    let mut vander: Matrix = Vec::with_capacity(n);
    let mut counts = Vec::with_capacity(n);
    for m in 1..=n as i64 {
        vander.push((0..n as u32).map(|k| int(m.pow(k))).collect());
        counts.push(int(ehrhart_count(t, d, m as u64)? as i64));
    }
    Ok(linalg::solve(&vander, &counts).expect("Vandermonde is invertible"))
}

/// The splitting `psi : Z^d x Pic -> Z^s` induced by a chart.
///
/// Picard classes are coordinatized by the coefficients of the
/// chart-normalized representative on the rays outside the chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PicardPresentation {
    chart: FlagChart,
    complement: Vec<usize>,
    /// `psi` as an `s x s` matrix acting on `(z, class)`.
    psi: Matrix,
}

impl PicardPresentation {
    pub fn new(t: &ToricModel, chart: &FlagChart) -> Self {
        let d = t.rank;
        let s = t.num_rays();
        let complement = chart.complement(t);
        let phi_inv = linalg::inverse(&chart.phi_matrix(t)).expect("unimodular chart");
        let mut psi = vec![vec![Rational::zero(); s]; s];
        // iota(phi^-1(z)) in the first d columns, the class on the rest
        for i in 0..s {
            let v = t.ray(i);
            for j in 0..d {
                psi[i][j] = (0..d).map(|k| &v[k] * &phi_inv[k][j]).sum();
            }
        }
        for (c, &i) in complement.iter().enumerate() {
            psi[i][d + c] = Rational::one();
        }
        PicardPresentation { chart: chart.clone(), complement, psi }
    }

    pub fn picard_rank(&self) -> usize {
        self.complement.len()
    }

    /// `psi(z, class)` as divisor coefficients.
    pub fn psi(&self, z: &[Rational], class: &[Rational]) -> InvariantDivisor {
        let x: Vec<Rational> = z.iter().chain(class).cloned().collect();
        InvariantDivisor { coeffs: linalg::mat_vec(&self.psi, &x) }
    }

    /// `psi^-1(E) = (p(E), q(E))`.
    pub fn psi_inverse(&self, t: &ToricModel, e: &InvariantDivisor) -> Result<(Vec<Rational>, Vec<Rational>), ToricError> {
        e.check(t)?;
        let z: Vec<Rational> = self.chart.order.iter().map(|&i| e.coeffs[i].clone()).collect();
        let normal = normalize_on_chart(t, e, &self.chart)?;
        let class = self.complement.iter().map(|&i| normal.coeffs[i].clone()).collect();
        Ok((z, class))
    }

    /// The normalized representative of a class.
    pub fn divisor_of_class(&self, class: &[Rational]) -> InvariantDivisor {
        let z = vec![Rational::zero(); self.psi.len() - class.len()];
        self.psi(&z, class)
    }

    /// The global cone `psi^-1(orthant)` in `R^d x Pic_R`.
    pub fn global_cone(&self) -> Result<PolyCone, ToricError> {
        let n = self.psi.len();
        let normals: Vec<RationalVector> = self.psi.iter().map(|r| RationalVector::new(r.clone())).collect();
        Ok(PolyCone::from_halfspaces(n, &normals)?)
    }

    /// The fibre of the global cone over a class.
    pub fn global_fiber(&self, class: &[Rational]) -> Result<Polytope, ToricError> {
        let d = self.psi.len() - class.len();
        let ineqs: Vec<(RationalVector, Rational)> = self
            .psi
            .iter()
            .map(|row| {
                let rhs: Rational = row[d..].iter().zip(class).map(|(a, b)| a * b).sum();
                (RationalVector::new(row[..d].iter().map(|a| -a).collect()), rhs)
            })
            .collect();
        Ok(Polytope::from_halfspaces(d, &ineqs)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthantSample {
    pub divisor: InvariantDivisor,
    /// `Phi^-1(E) = (u, [E])`.
    pub character: RationalVector,
    pub class: Vec<Rational>,
    pub effective: bool,
    /// `u` lies in the polytope of the normalized representative of `[E]`.
    pub in_global_body: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthantReport {
    pub samples: Vec<OrthantSample>,
    pub all_agree: bool,
}

/// For each sample `E`, decides membership of `Phi^-1(E)` in the global
/// semigroup through the divisor polytope, and compares with effectivity.
pub fn global_orthant_check(
    t: &ToricModel,
    chart: &FlagChart,
    samples: &[InvariantDivisor],
) -> Result<OrthantReport, ToricError> {
    let pres = PicardPresentation::new(t, chart);
    let phi_inv = linalg::inverse(&chart.phi_matrix(t)).expect("unimodular chart");
    let mut out = Vec::new();
    for e in samples {
        let (z, class) = pres.psi_inverse(t, e)?;
        let u = RationalVector::new(linalg::mat_vec(&phi_inv, &z));
        let normal = pres.divisor_of_class(&class);
        let in_global_body = match divisor_polytope(t, &normal) {
            Ok(p) => p.contains(&u),
            Err(ToricError::EmptyPolytope) => false,
            Err(e) => return Err(e),
        };
        out.push(OrthantSample { divisor: e.clone(), character: u, class, effective: e.is_effective(), in_global_body });
    }
    let all_agree = out.iter().all(|s| s.effective == s.in_global_body);
    Ok(OrthantReport { samples: out, all_agree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn fans_validated() {
        assert!(matches!(
            ToricModel::new(2, vec![vec![1, 0], vec![1, 2]], vec![vec![0, 1]]),
            Err(ToricError::Singular { .. })
        ));
        assert!(matches!(ToricModel::new(2, vec![vec![2, 0]], vec![]), Err(ToricError::BadRay(0))));
        assert!(matches!(
            ToricModel::new(2, vec![vec![1, 0], vec![-1, 0]], vec![vec![0, 1]]),
            Err(ToricError::NotSimplicial(_))
        ));
        let h = ToricModel::hirzebruch(1);
        assert_eq!(h.max_cones().len(), 4);
    }

    #[test]
    fn polytopes() {
        let p2 = ToricModel::projective_space(2);
        let p = divisor_polytope(&p2, &InvariantDivisor::from_ints(&[0, 0, 3])).unwrap();
        assert!(p.same_set(&Polytope::standard_simplex(2).scale(&int(3))));
        let q = ToricModel::p1_times_p1();
        let p = divisor_polytope(&q, &InvariantDivisor::from_ints(&[0, 0, 2, 3])).unwrap();
        assert!(p.same_set(&Polytope::cuboid(&[int(2), int(3)])));
        let z = divisor_polytope(&p2, &InvariantDivisor::from_ints(&[0, 0, 0])).unwrap();
        assert_eq!(z.affine_dim(), 0);
        let open = ToricModel::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap();
        assert_eq!(divisor_polytope(&open, &InvariantDivisor::from_ints(&[1, 1])), Err(ToricError::NotBigOrComplete));
    }

    #[test]
    fn normalization() {
        let p2 = ToricModel::projective_space(2);
        let chart = FlagChart::new(&p2, vec![0, 1]).unwrap();
        let d = InvariantDivisor::from_ints(&[1, 0, 0]);
        assert_eq!(chart_character(&p2, &d, &chart).unwrap(), RationalVector::from_ints(&[-1, 0]));
        let n = normalize_on_chart(&p2, &d, &chart).unwrap();
        assert_eq!(n, InvariantDivisor::from_ints(&[0, 0, 1]));
        assert_eq!(normalize_on_chart(&p2, &n, &chart).unwrap(), n);
        let shifted = divisor_polytope(&p2, &n).unwrap();
        let orig = divisor_polytope(&p2, &d).unwrap();
        assert!(shifted.same_set(&orig.translate(&RationalVector::from_ints(&[1, 0]))));
    }

    #[test]
    fn bodies_and_counts() {
        let p2 = ToricModel::projective_space(2);
        let chart = FlagChart::first(&p2);
        let b = toric_okounkov_body(&p2, &InvariantDivisor::from_ints(&[1, 0, 0]), &chart).unwrap();
        assert!(b.big && b.body.same_set(&Polytope::standard_simplex(2)));
        let p1 = ToricModel::projective_space(1);
        let b = toric_okounkov_body(&p1, &InvariantDivisor::from_ints(&[1, 1]), &FlagChart::first(&p1)).unwrap();
        assert!(b.body.same_set(&Polytope::cuboid(&[int(2)])));
        let q = ToricModel::p1_times_p1();
        let d = InvariantDivisor::from_ints(&[0, 0, 1, 2]);
        for m in 0..5u64 {
            assert_eq!(ehrhart_count(&q, &d, m).unwrap(), (m + 1) * (2 * m + 1));
            assert_eq!(ehrhart_count(&p2, &InvariantDivisor::from_ints(&[0, 0, 1]), m).unwrap(), (m + 1) * (m + 2) / 2);
        }
        assert_eq!(ehrhart_polynomial(&q, &d).unwrap(), vec![int(1), int(3), int(2)]);
        let line = InvariantDivisor::from_ints(&[0, 1, 0, 0]);
        assert!(!toric_okounkov_body(&q, &line, &FlagChart::first(&q)).unwrap().big);
    }

    #[test]
    fn global_orthant() {
        let h = ToricModel::hirzebruch(1);
        let chart = FlagChart::first(&h);
        let samples = [
            InvariantDivisor::from_ints(&[1, 0, 2, 1]),
            InvariantDivisor::from_ints(&[0, 0, 0, 0]),
            InvariantDivisor::from_ints(&[-1, 2, 1, 1]),
            InvariantDivisor::new(vec![rat(1, 2), int(0), int(1), rat(-1, 3)]),
        ];
        let r = global_orthant_check(&h, &chart, &samples).unwrap();
        assert!(r.all_agree);
        let eff: Vec<bool> = r.samples.iter().map(|s| s.in_global_body).collect();
        assert_eq!(eff, vec![true, true, false, false]);

        let pres = PicardPresentation::new(&h, &chart);
        assert_eq!(pres.picard_rank(), 2);
        let class = vec![int(2), int(1)];
        let fiber = pres.global_fiber(&class).unwrap();
        let body = toric_okounkov_body(&h, &pres.divisor_of_class(&class), &chart).unwrap();
        assert!(fiber.same_set(&body.body));
        let e = InvariantDivisor::from_ints(&[3, 1, 2, 0]);
        let (z, c) = pres.psi_inverse(&h, &e).unwrap();
        assert_eq!(pres.psi(&z, &c), e);
        assert!(pres.global_cone().unwrap().linear_dim() == 4);
    }
}
