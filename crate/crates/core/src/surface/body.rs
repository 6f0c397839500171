//! Bodies of big classes with respect to a flag `X ⊇ C ⊇ {x}`.
//!
//! The sweep walks `D - tC` from `t = 0`. On each chamber the support of the
//! negative part is fixed and everything is affine in `t`; the chamber ends
//! where a new curve is met negatively, a coefficient reaches zero, or the
//! positive part stops being big. The last event is a root of a rational
//! quadratic and is kept exactly.

use num_traits::{One, Signed, Zero};

use super::pl::{Affine, PiecewiseLinearFn};
use super::zariski::{decompose_linear, zariski_decomposition};
use super::{axpy, scale, Class, FlagData, SurfaceError, SurfaceModel};
use crate::algebraic::{QuadraticNumber, SqrtSum};
use crate::geom::Polytope;
use crate::rational::{int, rational_to_json, Rational, RationalVector};

const MAX_CHAMBERS: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceVolume {
    pub volume: Rational,
    pub big: bool,
}

/// `q(P)` for the positive part `P`; zero with `big = false` otherwise.
pub fn surface_volume(model: &SurfaceModel, d: &[Rational]) -> Result<SurfaceVolume, SurfaceError> {
    match zariski_decomposition(model, d) {
        Ok(z) if z.big => Ok(SurfaceVolume { volume: model.square(&z.positive), big: true }),
        Ok(_) | Err(SurfaceError::NotPseudoEffective) => Ok(SurfaceVolume { volume: Rational::zero(), big: false }),
        Err(e) => Err(e),
    }
}

/// One chamber of the sweep: on `[start, next start]`, the negative part is
/// `sum (n0 + (t - start) n1) C_k` over `support` and the positive part is
/// `p0 + (t - start) p1`.
#[derive(Debug, Clone)]
struct Chamber {
    start: Rational,
    support: Vec<usize>,
    n0: Vec<Rational>,
    n1: Vec<Rational>,
    p0: Class,
    p1: Class,
}

struct Sweep {
    chambers: Vec<Chamber>,
    mu: QuadraticNumber,
}

fn require_direction(model: &SurfaceModel, d: &[Rational], c: &[Rational]) -> Result<(), SurfaceError> {
    model.check_class(d)?;
    model.check_class(c)?;
    if !model.form(c, model.reference()).is_positive() {
        return Err(SurfaceError::UnboundedDirection);
    }
    Ok(())
}

fn sweep(model: &SurfaceModel, d: &[Rational], c: &[Rational], flag_curve: Option<usize>) -> Result<Sweep, SurfaceError> {
    if !zariski_decomposition(model, d)?.big {
        return Err(SurfaceError::NotBig);
    }
    let curves = model.curves();
    let neg_c = scale(&int(-1), c);
    let mut s = Rational::zero();
    let mut chambers = Vec::new();
    for _ in 0..MAX_CHAMBERS {
        let base = axpy(&-&s, c, d);
        let lin = decompose_linear(model, &base, &neg_c)?;
        if let Some(ci) = flag_curve {
            if let Some(k) = lin.support.iter().position(|&j| j == ci) {
                if lin.n0[k].is_positive() || lin.n1[k].is_positive() {
                    return Err(SurfaceError::FlagCurveInBPlus);
                }
            }
        }
        let mut p0 = base.clone();
        let mut p1 = neg_c.clone();
        for (k, &j) in lin.support.iter().enumerate() {
            p0 = axpy(&-&lin.n0[k], &curves[j], &p0);
            p1 = axpy(&-&lin.n1[k], &curves[j], &p1);
        }
        // rational chamber walls, as offsets u > 0 from s
        let mut wall: Option<Rational> = None;
        let mut consider = |u: Rational| {
            if u.is_positive() && wall.as_ref().map_or(true, |w| u < *w) {
                wall = Some(u);
            }
        };
        for (j, cj) in curves.iter().enumerate() {
            if lin.support.contains(&j) {
                continue;
            }
            let (v0, v1) = (model.form(&p0, cj), model.form(&p1, cj));
            if v1.is_negative() {
                consider(-v0 / v1);
            }
        }
        for (a, b) in lin.n0.iter().zip(&lin.n1) {
            if b.is_negative() {
                consider(-a / b);
            }
        }
        let (qa, qb, qc) = (model.square(&p1), int(2) * model.form(&p0, &p1), model.square(&p0));
        let zero = QuadraticNumber::Rational(Rational::zero());
        let root = QuadraticNumber::real_roots(&qa, &qb, &qc).into_iter().find(|r| *r > zero);
        let chamber = Chamber { start: s.clone(), support: lin.support, n0: lin.n0, n1: lin.n1, p0, p1 };
        chambers.push(chamber);
        match (root, wall) {
            (Some(r), None) => return Ok(Sweep { chambers, mu: r.shift(&s) }),
            (Some(r), Some(w)) if r <= QuadraticNumber::Rational(w.clone()) => {
                return Ok(Sweep { chambers, mu: r.shift(&s) });
            }
            (_, Some(w)) => s += w,
            (None, None) => return Err(SurfaceError::UnboundedDirection),
        }
    }
    Err(SurfaceError::ModelInconsistent(format!("more than {MAX_CHAMBERS} chambers along the direction")))
}

/// `sup {s > 0 : D - sC big}`, exactly.
pub fn mu_invariant(model: &SurfaceModel, d: &[Rational], c: &[Rational]) -> Result<QuadraticNumber, SurfaceError> {
    require_direction(model, d, c)?;
    Ok(sweep(model, d, c, None)?.mu)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedInterval {
    pub alpha: Rational,
    pub beta: Rational,
}

impl RestrictedInterval {
    pub fn length(&self) -> Rational {
        &self.beta - &self.alpha
    }
}

/// `[ord_x(N|_C), ord_x(N|_C) + C.P]`.
pub fn restricted_interval(model: &SurfaceModel, d: &[Rational], flag: &FlagData) -> Result<RestrictedInterval, SurfaceError> {
    require_direction(model, d, &flag.curve)?;
    let z = zariski_decomposition(model, d)?;
    if !z.big {
        return Err(SurfaceError::NotBig);
    }
    if let Some(ci) = model.curve_index(&flag.curve) {
        if z.coefficient(ci).is_positive() {
            return Err(SurfaceError::FlagCurveInBPlus);
        }
    }
    let alpha: Rational = z.negative.iter().map(|(j, n)| n * flag.multiplicity(*j)).sum();
    let beta = &alpha + model.form(&flag.curve, &z.positive);
    Ok(RestrictedInterval { alpha, beta })
}

/// The region `{a <= t <= mu, alpha(t) <= y <= beta(t)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceBody {
    pub a: Rational,
    pub mu: QuadraticNumber,
    pub alpha: PiecewiseLinearFn,
    pub beta: PiecewiseLinearFn,
}

pub fn okounkov_body_surface(model: &SurfaceModel, d: &[Rational], flag: &FlagData) -> Result<SurfaceBody, SurfaceError> {
    let c = &flag.curve;
    require_direction(model, d, c)?;
    let z = zariski_decomposition(model, d)?;
    if !z.big {
        return Err(SurfaceError::NotBig);
    }
    let ci = model.curve_index(c);
    let a = ci.map(|i| z.coefficient(i)).unwrap_or_else(Rational::zero);
    let d0 = axpy(&-&a, c, d);
    let sw = sweep(model, &d0, c, ci)?;
    let mut starts = Vec::new();
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    for ch in &sw.chambers {
        let mut a0 = Rational::zero();
        let mut a1 = Rational::zero();
        for (k, &j) in ch.support.iter().enumerate() {
            let m = flag.multiplicity(j);
            a0 += &ch.n0[k] * &m;
            a1 += &ch.n1[k] * &m;
        }
        let b0 = &a0 + model.form(c, &ch.p0);
        let b1 = &a1 + model.form(c, &ch.p1);
        alpha.push(Affine::new(a1.clone(), a0 - &a1 * &ch.start));
        beta.push(Affine::new(b1.clone(), b0 - &b1 * &ch.start));
        starts.push(ch.start.clone());
    }
    let alpha = PiecewiseLinearFn::new(starts.clone(), alpha, sw.mu.clone()).shift(&a);
    let beta = PiecewiseLinearFn::new(starts, beta, sw.mu.clone()).shift(&a);
    Ok(SurfaceBody { mu: sw.mu.shift(&a), a, alpha, beta })
}

impl SurfaceBody {
    /// Exact area between the graphs.
    pub fn area(&self) -> SqrtSum {
        &self.beta.integral() - &self.alpha.integral()
    }

    /// `alpha` convex, `beta` concave and `alpha <= beta` at every
    /// breakpoint and at both ends.
    pub fn is_well_formed(&self) -> bool {
        self.alpha.is_convex()
            && self.beta.is_concave()
            && self.vertex_columns().iter().all(|(_, lo, hi)| lo <= hi)
            && self.mu >= QuadraticNumber::Rational(self.a.clone())
    }

    /// `(t, alpha(t), beta(t))` at every breakpoint and at both ends.
    fn vertex_columns(&self) -> Vec<(SqrtSum, SqrtSum, SqrtSum)> {
        let mut ts: Vec<Rational> =
            self.alpha.breakpoints().iter().chain(self.beta.breakpoints()).cloned().collect();
        ts.sort();
        ts.dedup();
        let mut cols: Vec<(SqrtSum, SqrtSum, SqrtSum)> = ts
            .into_iter()
            .map(|t| {
                let x = SqrtSum::from_rational(t.clone());
                let lo = SqrtSum::from_rational(self.alpha.eval(&t).expect("in domain"));
                let hi = SqrtSum::from_rational(self.beta.eval(&t).expect("in domain"));
                (x, lo, hi)
            })
            .collect();
        let end = self.mu.value();
        if cols.last().map_or(true, |(t, _, _)| *t != end) {
            cols.push((end, self.alpha.value_at_end(), self.beta.value_at_end()));
        }
        cols
    }

    /// Boundary points in counterclockwise order: along `alpha` left to
    /// right, then back along `beta`. Their convex hull is the body.
    pub fn vertices(&self) -> Vec<(SqrtSum, SqrtSum)> {
        let cols = self.vertex_columns();
        let mut out: Vec<(SqrtSum, SqrtSum)> = cols.iter().map(|(t, lo, _)| (t.clone(), lo.clone())).collect();
        for (t, lo, hi) in cols.into_iter().rev() {
            if lo != hi {
                out.push((t, hi));
            }
        }
        out
    }

    pub fn contains(&self, t: &SqrtSum, y: &SqrtSum) -> bool {
        match (self.alpha.eval_sqrt(t), self.beta.eval_sqrt(t)) {
            (Some(lo), Some(hi)) => lo <= *y && *y <= hi,
            _ => false,
        }
    }

    /// `[alpha(t), beta(t)]`, if `a <= t <= mu`.
    pub fn fiber(&self, t: &Rational) -> Option<(Rational, Rational)> {
        Some((self.alpha.eval(t)?, self.beta.eval(t)?))
    }

    /// `p * body` for `p > 0`.
    pub fn dilate(&self, p: &Rational) -> SurfaceBody {
        SurfaceBody { a: &self.a * p, mu: self.mu.scale(p), alpha: self.alpha.dilate(p), beta: self.beta.dilate(p) }
    }

    /// Translate by `(s, 0)`.
    pub fn shift(&self, s: &Rational) -> SurfaceBody {
        SurfaceBody { a: &self.a + s, mu: self.mu.shift(s), alpha: self.alpha.shift(s), beta: self.beta.shift(s) }
    }

    /// The part with `t >= t0`, for `a <= t0 <= mu`.
    pub fn restrict_from(&self, t0: &Rational) -> SurfaceBody {
        SurfaceBody {
            a: t0.clone(),
            mu: self.mu.clone(),
            alpha: self.alpha.restrict_from(t0),
            beta: self.beta.restrict_from(t0),
        }
    }

    /// The body as an exact polygon when `mu` is rational.
    pub fn polygon(&self) -> Option<Polytope> {
        let mu = self.mu.as_rational()?.clone();
        Some(self.truncated(&mu))
    }

    /// The rational polygon `body ∩ {t <= t1}` for rational `a <= t1 <= mu`.
    pub fn truncated(&self, t1: &Rational) -> Polytope {
        let lo = self.alpha.restrict_to(t1);
        let hi = self.beta.restrict_to(t1);
        let mut ts: Vec<Rational> = lo.breakpoints().iter().chain(hi.breakpoints()).cloned().collect();
        ts.push(t1.clone());
        let pts: Vec<RationalVector> = ts
            .iter()
            .flat_map(|t| {
                let a = self.alpha.eval(t).expect("in domain");
                let b = self.beta.eval(t).expect("in domain");
                [RationalVector::new(vec![t.clone(), a]), RationalVector::new(vec![t.clone(), b])]
            })
            .collect();
        Polytope::from_points(&pts, 2).expect("nonempty")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "a": rational_to_json(&self.a),
            "mu": serde_json::to_value(&self.mu).expect("serializable"),
            "alpha": self.alpha.to_json(),
            "beta": self.beta.to_json(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceReport {
    pub t: Rational,
    /// `body(D) ∩ {nu_1 >= t} = body(D - tC) + (t, 0)`.
    pub upper_part_matches: bool,
    pub fiber: Option<(Rational, Rational)>,
    pub restricted: Option<(Rational, Rational)>,
    pub fiber_matches: bool,
}

impl SliceReport {
    pub fn passed(&self) -> bool {
        self.upper_part_matches && self.fiber_matches
    }
}

/// Compares the part of the body beyond `t` with the shifted body of
/// `D - tC`, and the fibre at `t` with the restricted interval of `D - tC`.
pub fn slice_check(model: &SurfaceModel, d: &[Rational], flag: &FlagData, t: &Rational) -> Result<SliceReport, SurfaceError> {
    let body = okounkov_body_surface(model, d, flag)?;
    let tq = QuadraticNumber::Rational(t.clone());
    if t.is_negative() || tq >= body.mu {
        return Err(SurfaceError::OutOfRange { t: t.clone(), mu: body.mu.to_string() });
    }
    let dt = axpy(&-t, &flag.curve, d);
    let upper = if *t <= body.a { body.clone() } else { body.restrict_from(t) };
    let shifted = okounkov_body_surface(model, &dt, flag)?.shift(t);
    let fiber = body.fiber(t);
    let restricted = match restricted_interval(model, &dt, flag) {
        Ok(r) => Some((r.alpha, r.beta)),
        Err(SurfaceError::FlagCurveInBPlus) => None,
        Err(e) => return Err(e),
    };
    Ok(SliceReport {
        t: t.clone(),
        upper_part_matches: upper == shifted,
        fiber_matches: fiber == restricted,
        fiber,
        restricted,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivativeReport {
    /// One-sided derivatives of `t -> vol(D + tC)` at `0`.
    pub left: Rational,
    pub right: Rational,
    pub interval: RestrictedInterval,
    /// Both sides agree and equal `2 (beta - alpha)`.
    pub matches: bool,
}

impl DerivativeReport {
    pub fn derivative(&self) -> Option<&Rational> {
        (self.left == self.right).then_some(&self.right)
    }
}

/// Differentiates the volume along `C` from the chamber on each side.
pub fn volume_derivative(model: &SurfaceModel, d: &[Rational], flag: &FlagData) -> Result<DerivativeReport, SurfaceError> {
    let interval = restricted_interval(model, d, flag)?;
    let c = &flag.curve;
    let one_sided = |dir: &Class| -> Result<Rational, SurfaceError> {
        let lin = decompose_linear(model, d, dir)?;
        let mut p0 = d.to_vec();
        let mut p1 = dir.clone();
        for (k, &j) in lin.support.iter().enumerate() {
            p0 = axpy(&-&lin.n0[k], &model.curves()[j], &p0);
            p1 = axpy(&-&lin.n1[k], &model.curves()[j], &p1);
        }
        Ok(int(2) * model.form(&p0, &p1))
    };
    let right = one_sided(c)?;
    let left = -one_sided(&scale(&-Rational::one(), c))?;
    let target = int(2) * interval.length();
    let matches = left == right && right == target;
    Ok(DerivativeReport { left, right, interval, matches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::SqrtSum;
    use crate::rational::rat;
    use crate::surface::class_from_ints as c;
    use std::collections::BTreeMap;

    fn q(x: Rational) -> QuadraticNumber {
        QuadraticNumber::Rational(x)
    }

    #[test]
    fn abelian_trapezoid() {
        let m = SurfaceModel::abelian();
        let d = c(&[3, 1, 0]);
        let flag = FlagData::generic(c(&[2, 1, 1]));
        assert_eq!(surface_volume(&m, &d).unwrap().volume, int(8));
        assert_eq!(mu_invariant(&m, &d, &flag.curve).unwrap(), q(int(1)));
        assert_eq!(restricted_interval(&m, &d, &flag).unwrap(), RestrictedInterval { alpha: int(0), beta: int(5) });
        let b = okounkov_body_surface(&m, &d, &flag).unwrap();
        assert_eq!(b.a, int(0));
        assert_eq!(b.beta.pieces(), &[Affine::new(int(-2), int(5))]);
        assert_eq!(b.alpha.pieces(), &[Affine::new(int(0), int(0))]);
        assert_eq!(b.area().as_rational(), Some(int(4)));
        let poly = b.polygon().unwrap();
        let expected = Polytope::from_points(
            &[
                RationalVector::from_ints(&[0, 0]),
                RationalVector::from_ints(&[1, 0]),
                RationalVector::from_ints(&[1, 3]),
                RationalVector::from_ints(&[0, 5]),
            ],
            2,
        )
        .unwrap();
        assert!(poly.same_set(&expected));
        for t in [rat(0, 1), rat(1, 4), rat(1, 2), rat(3, 4)] {
            assert!(slice_check(&m, &d, &flag, &t).unwrap().passed());
        }
        assert_eq!(slice_check(&m, &d, &flag, &rat(1, 2)).unwrap().fiber, Some((int(0), int(4))));
        assert!(slice_check(&m, &d, &flag, &int(1)).is_err());
        let dv = volume_derivative(&m, &d, &flag).unwrap();
        assert!(dv.matches);
        assert_eq!(dv.derivative(), Some(&int(10)));
    }

    #[test]
    fn irrational_endpoint() {
        let m = SurfaceModel::abelian();
        let d = c(&[3, 1, 1]);
        let flag = FlagData::generic(c(&[1, 0, 0]));
        let mu = mu_invariant(&m, &d, &flag.curve).unwrap();
        assert!(mu.as_rational().is_none());
        assert_eq!(mu.value(), &SqrtSum::from_int(3) - &SqrtSum::sqrt(&int(2)));
        let b = okounkov_body_surface(&m, &d, &flag).unwrap();
        assert_eq!(b.area().scale(&int(2)), SqrtSum::from_int(7));
        assert!(b.polygon().is_none());
        assert!(b.truncated(&int(1)).is_full_dimensional());
        assert!(b.is_well_formed());
    }

    #[test]
    fn blow_up_triangle() {
        let m = SurfaceModel::blow_up_plane();
        let d = c(&[1, 1]);
        let flag = FlagData::generic(c(&[1, 0]));
        assert_eq!(surface_volume(&m, &d).unwrap().volume, int(1));
        assert_eq!(mu_invariant(&m, &d, &flag.curve).unwrap(), q(int(1)));
        assert_eq!(restricted_interval(&m, &d, &flag).unwrap(), RestrictedInterval { alpha: int(0), beta: int(1) });
        let b = okounkov_body_surface(&m, &d, &flag).unwrap();
        assert!(b.polygon().unwrap().same_set(&Polytope::standard_simplex(2)));
        let dv = volume_derivative(&m, &d, &flag).unwrap();
        assert_eq!(dv.derivative(), Some(&int(2)));
        assert!(dv.matches);
    }

    #[test]
    fn exceptional_flag_curve() {
        // flag curve E on D = H + 2E: the body starts at a = 2
        let m = SurfaceModel::blow_up_plane();
        let d = c(&[1, 2]);
        let flag = FlagData::generic(c(&[0, 1]));
        assert_eq!(restricted_interval(&m, &d, &flag), Err(SurfaceError::FlagCurveInBPlus));
        let b = okounkov_body_surface(&m, &d, &flag).unwrap();
        assert_eq!(b.a, int(2));
        assert_eq!(b.area().scale(&int(2)), SqrtSum::from_int(1));
        let r = slice_check(&m, &d, &flag, &int(1)).unwrap();
        assert!(r.passed());
        assert_eq!(r.fiber, None);
    }

    #[test]
    fn three_point_chambers() {
        let m = SurfaceModel::three_point_blow_up();
        let d = c(&[4, -1, -1, -1]);
        let flag = FlagData::with_table(c(&[1, -1, 0, 0]), BTreeMap::from([(0, int(1))]));
        let b = okounkov_body_surface(&m, &d, &flag).unwrap();
        assert_eq!(b.mu, q(int(3)));
        assert_eq!(b.alpha.breakpoints(), &[int(0), int(1)]);
        assert_eq!(b.beta.breakpoints(), &[int(0), int(2)]);
        assert_eq!(b.area().scale(&int(2)).as_rational(), Some(int(13)));
        assert!(b.is_well_formed());
        let expected: Vec<RationalVector> =
            [[0, 0], [1, 0], [3, 2], [2, 3], [0, 3]].iter().map(|p| RationalVector::from_ints(p)).collect();
        assert!(b.polygon().unwrap().same_set(&Polytope::from_points(&expected, 2).unwrap()));
        for t in [rat(1, 2), int(1), rat(3, 2), int(2), rat(5, 2)] {
            assert!(slice_check(&m, &d, &flag, &t).unwrap().passed(), "t = {t}");
        }
        assert!(volume_derivative(&m, &d, &flag).unwrap().matches);
    }
}
