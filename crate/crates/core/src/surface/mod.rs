//! Surfaces given by their intersection theory: a symmetric form of
//! signature `(1, rho - 1)` on the Néron–Severi space, an ample reference
//! class, and either a finite list of negative curves or none at all (the
//! quadric model, where the pseudo-effective cone is the positive cone).
//!
//! Everything is model-relative: the Zariski decomposition only ever uses
//! the listed curves.

mod body;
mod cutkosky;
mod pl;
mod probe;
mod zariski;

pub use body::{
    mu_invariant, okounkov_body_surface, restricted_interval, slice_check, surface_volume, volume_derivative,
    DerivativeReport, RestrictedInterval, SliceReport, SurfaceBody, SurfaceVolume,
};
pub use cutkosky::{cutkosky_mu, CutkoskyReport};
pub use pl::{Affine, PiecewiseLinearFn};
pub use probe::{global_body_probe, ProbeReport};
pub use zariski::{zariski_decomposition, ZariskiDecomposition};

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::linalg::Matrix;
use crate::rational::{int, rational_from_json, rational_to_json, Rational};

pub type Class = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceError {
    #[error("intersection form must be symmetric")]
    NotSymmetric,
    #[error("intersection form has signature ({pos}, {neg}) with {zero} null directions; need (1, rho - 1)")]
    BadSignature { pos: usize, neg: usize, zero: usize },
    #[error("reference class is not ample: q(h) = {0}")]
    ReferenceNotAmple(Rational),
    #[error("curve {0} does not meet the reference class positively")]
    CurveNotEffective(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("model curves inconsistent: {0}")]
    ModelInconsistent(String),
    #[error("class is not pseudo-effective in the model")]
    NotPseudoEffective,
    #[error("class is not big")]
    NotBig,
    #[error("flag curve in B_+: the curve lies in the negative part")]
    FlagCurveInBPlus,
    #[error("unbounded direction: the class stays big along the curve")]
    UnboundedDirection,
    #[error("parameter t = {t} must lie in [0, mu) with mu = {mu}")]
    OutOfRange { t: Rational, mu: String },
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// How effective curves are described.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceMode {
    /// No curves: pseudo-effective = nef = `{q >= 0, . h >= 0}`.
    Quadric,
    /// A finite list of curve classes.
    Curves(Vec<Class>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceModel {
    q: Matrix,
    h: Class,
    mode: SurfaceMode,
}

/// `(positive, negative, zero)` counts of a symmetric rational matrix,
/// by congruence diagonalization.
pub fn inertia(m: &[Vec<Rational>]) -> (usize, usize, usize) {
    let mut a: Matrix = m.to_vec();
    let mut n = a.len();
    let (mut pos, mut neg) = (0, 0);
    while n > 0 {
        let piv = (0..n).find(|&i| !a[i][i].is_zero());
        let p = match piv {
            Some(p) => p,
            None => {
                let Some((i, j)) = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero())
                else {
                    break;
                };
                // row/column i += row/column j makes a_ii = 2 a_ij
                for k in 0..n {
                    let v = a[j][k].clone();
                    a[i][k] += v;
                }
                for k in 0..n {
                    let v = a[k][j].clone();
                    a[k][i] += v;
                }
                i
            }
        };
        let d = a[p][p].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&k| k != p).collect();
        a = rest
            .iter()
            .map(|&i| rest.iter().map(|&j| &a[i][j] - &a[i][p] * &a[p][j] / &d).collect())
            .collect();
        n -= 1;
    }
    (pos, neg, n)
}

pub fn is_negative_definite(m: &[Vec<Rational>]) -> bool {
    inertia(m) == (0, m.len(), 0)
}

impl SurfaceModel {
    pub fn new(q: Matrix, h: Class, mode: SurfaceMode) -> Result<Self, SurfaceError> {
        let rho = q.len();
        for row in &q {
            if row.len() != rho {
                return Err(SurfaceError::DimensionMismatch { expected: rho, found: row.len() });
            }
        }
        if (0..rho).any(|i| (0..i).any(|j| q[i][j] != q[j][i])) {
            return Err(SurfaceError::NotSymmetric);
        }
        let (pos, neg, zero) = inertia(&q);
        if pos != 1 || zero != 0 {
            return Err(SurfaceError::BadSignature { pos, neg, zero });
        }
        if h.len() != rho {
            return Err(SurfaceError::DimensionMismatch { expected: rho, found: h.len() });
        }
        let model = SurfaceModel { q, h, mode };
        let qh = model.form(&model.h, &model.h);
        if !qh.is_positive() {
            return Err(SurfaceError::ReferenceNotAmple(qh));
        }
        for (i, c) in model.curves().iter().enumerate() {
            if c.len() != rho {
                return Err(SurfaceError::DimensionMismatch { expected: rho, found: c.len() });
            }
            if !model.form(c, &model.h).is_positive() {
                return Err(SurfaceError::CurveNotEffective(i));
            }
            if !model.square(c).is_negative() {
                return Err(SurfaceError::ModelInconsistent(format!("curve {i} has nonnegative square")));
            }
        }
        Ok(model)
    }

    /// `diag(1, -1, -1)` with `h = (1, 0, 0)` and no curves: the abelian
    /// surface of Picard number three.
    pub fn abelian() -> Self {
        Self::new(diagonal(&[1, -1, -1]), ints(&[1, 0, 0]), SurfaceMode::Quadric).expect("valid model")
    }

    /// The plane blown up at a point: `H = (1, 0)`, `E = (0, 1)`.
    pub fn blow_up_plane() -> Self {
        Self::new(diagonal(&[1, -1]), ints(&[2, -1]), SurfaceMode::Curves(vec![ints(&[0, 1])])).expect("valid model")
    }

    /// The plane blown up at three general points, with the six
    /// `(-1)`-curves `E_1, E_2, E_3, H - E_1 - E_2, H - E_1 - E_3, H - E_2 - E_3`.
    pub fn three_point_blow_up() -> Self {
        let curves = vec![
            ints(&[0, 1, 0, 0]),
            ints(&[0, 0, 1, 0]),
            ints(&[0, 0, 0, 1]),
            ints(&[1, -1, -1, 0]),
            ints(&[1, -1, 0, -1]),
            ints(&[1, 0, -1, -1]),
        ];
        Self::new(diagonal(&[1, -1, -1, -1]), ints(&[3, -1, -1, -1]), SurfaceMode::Curves(curves)).expect("valid model")
    }

    pub fn rank(&self) -> usize {
        self.q.len()
    }

    pub fn form_matrix(&self) -> &Matrix {
        &self.q
    }

    pub fn reference(&self) -> &Class {
        &self.h
    }

    pub fn mode(&self) -> &SurfaceMode {
        &self.mode
    }

    pub fn curves(&self) -> &[Class] {
        match &self.mode {
            SurfaceMode::Quadric => &[],
            SurfaceMode::Curves(c) => c,
        }
    }

    pub fn is_quadric(&self) -> bool {
        matches!(self.mode, SurfaceMode::Quadric)
    }

    /// The bilinear form `B(x, y) = x^T Q y`.
    pub fn form(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let mut s = Rational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                s += xi * &self.q[i][j] * yj;
            }
        }
        s
    }

    pub fn square(&self, x: &[Rational]) -> Rational {
        self.form(x, x)
    }

    pub(crate) fn check_class(&self, x: &[Rational]) -> Result<(), SurfaceError> {
        if x.len() != self.rank() {
            return Err(SurfaceError::DimensionMismatch { expected: self.rank(), found: x.len() });
        }
        Ok(())
    }

    /// Index of the listed curve with this class, if any.
    pub fn curve_index(&self, c: &[Rational]) -> Option<usize> {
        self.curves().iter().position(|x| x.as_slice() == c)
    }

    /// Positive cone membership: `q(x) > 0` and `x . h > 0`.
    pub fn in_positive_cone(&self, x: &[Rational]) -> bool {
        self.square(x).is_positive() && self.form(x, &self.h).is_positive()
    }

    /// Reads `{"rank", "Q", "h", "mode": "quadric"|"curves", "curves"}`.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, SurfaceError> {
        let bad = |what: &str| SurfaceError::Invalid(format!("model field `{what}` missing or malformed"));
        let q: Matrix = v
            .get("Q")
            .and_then(|m| m.as_array())
            .ok_or_else(|| bad("Q"))?
            .iter()
            .map(|row| class_from_json(row).ok_or_else(|| bad("Q")))
            .collect::<Result<_, _>>()?;
        if let Some(r) = v.get("rank").and_then(|r| r.as_u64()) {
            if r as usize != q.len() {
                return Err(SurfaceError::DimensionMismatch { expected: r as usize, found: q.len() });
            }
        }
        let h = v.get("h").and_then(class_from_json).ok_or_else(|| bad("h"))?;
        let mode = match v.get("mode").and_then(|m| m.as_str()).unwrap_or("curves") {
            "quadric" => SurfaceMode::Quadric,
            "curves" => {
                let curves = match v.get("curves") {
                    None => Vec::new(),
                    Some(c) => c
                        .as_array()
                        .ok_or_else(|| bad("curves"))?
                        .iter()
                        .map(|x| class_from_json(x).ok_or_else(|| bad("curves")))
                        .collect::<Result<_, _>>()?,
                };
                SurfaceMode::Curves(curves)
            }
            other => return Err(SurfaceError::Invalid(format!("unknown mode `{other}`"))),
        };
        Self::new(q, h, mode)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        m.insert("rank".into(), self.rank().into());
        m.insert("Q".into(), self.q.iter().map(|r| class_to_json(r)).collect());
        m.insert("h".into(), class_to_json(&self.h));
        match &self.mode {
            SurfaceMode::Quadric => {
                m.insert("mode".into(), "quadric".into());
            }
            SurfaceMode::Curves(c) => {
                m.insert("mode".into(), "curves".into());
                m.insert("curves".into(), c.iter().map(|x| class_to_json(x)).collect());
            }
        }
        serde_json::Value::Object(m)
    }
}

/// The point of the flag `X ⊇ C ⊇ {x}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointRule {
    /// A general point of `C`: no listed curve other than `C` passes through it.
    Generic,
    /// Local intersection multiplicities of listed curves with `C` at the
    /// point, by curve index; missing entries are zero.
    Table(BTreeMap<usize, Rational>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagData {
    pub curve: Class,
    pub point: PointRule,
}

impl FlagData {
    pub fn generic(curve: Class) -> Self {
        FlagData { curve, point: PointRule::Generic }
    }

    pub fn with_table(curve: Class, table: BTreeMap<usize, Rational>) -> Self {
        FlagData { curve, point: PointRule::Table(table) }
    }

    /// `mult_x(C_j ∩ C)`.
    pub fn multiplicity(&self, j: usize) -> Rational {
        match &self.point {
            PointRule::Generic => Rational::zero(),
            PointRule::Table(t) => t.get(&j).cloned().unwrap_or_else(Rational::zero),
        }
    }

    /// Reads `{"curve": [...], "mult": {"0": 1}}`.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, SurfaceError> {
        let curve = v
            .get("curve")
            .and_then(class_from_json)
            .ok_or_else(|| SurfaceError::Invalid("flag field `curve` missing or malformed".into()))?;
        let Some(m) = v.get("mult") else {
            return Ok(FlagData::generic(curve));
        };
        let obj = m.as_object().ok_or_else(|| SurfaceError::Invalid("flag field `mult` must be an object".into()))?;
        let mut table = BTreeMap::new();
        for (k, x) in obj {
            let j: usize = k.parse().map_err(|_| SurfaceError::Invalid(format!("bad curve index {k}")))?;
            let r = rational_from_json(x).ok_or_else(|| SurfaceError::Invalid(format!("bad multiplicity for {k}")))?;
            table.insert(j, r);
        }
        Ok(FlagData::with_table(curve, table))
    }
}

pub fn class_from_json(v: &serde_json::Value) -> Option<Class> {
    v.as_array()?.iter().map(rational_from_json).collect()
}

pub fn class_to_json(c: &[Rational]) -> serde_json::Value {
    c.iter().map(rational_to_json).collect()
}

fn ints(v: &[i64]) -> Class {
    v.iter().map(|&x| int(x)).collect()
}

fn diagonal(d: &[i64]) -> Matrix {
    (0..d.len())
        .map(|i| (0..d.len()).map(|j| if i == j { int(d[i]) } else { Rational::zero() }).collect())
        .collect()
}

pub(crate) fn add(x: &[Rational], y: &[Rational]) -> Class {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub(crate) fn axpy(a: &Rational, x: &[Rational], y: &[Rational]) -> Class {
    x.iter().zip(y).map(|(xi, yi)| a * xi + yi).collect()
}

pub(crate) fn scale(a: &Rational, x: &[Rational]) -> Class {
    x.iter().map(|xi| a * xi).collect()
}

pub fn class_from_ints(v: &[i64]) -> Class {
    ints(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signatures() {
        assert_eq!(inertia(&diagonal(&[1, -1, -1])), (1, 2, 0));
        let hyperbolic = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert_eq!(inertia(&hyperbolic), (1, 1, 0));
        assert_eq!(inertia(&diagonal(&[0, -1])), (0, 1, 1));
        assert!(is_negative_definite(&[vec![int(-2), int(1)], vec![int(1), int(-2)]]));
        assert!(!is_negative_definite(&[vec![int(-1), int(2)], vec![int(2), int(-1)]]));
    }

    #[test]
    fn models_validate() {
        assert_eq!(SurfaceModel::abelian().rank(), 3);
        assert_eq!(SurfaceModel::three_point_blow_up().curves().len(), 6);
        assert!(matches!(
            SurfaceModel::new(diagonal(&[1, 1]), ints(&[1, 0]), SurfaceMode::Quadric),
            Err(SurfaceError::BadSignature { pos: 2, .. })
        ));
        assert!(matches!(
            SurfaceModel::new(diagonal(&[1, -1]), ints(&[0, 1]), SurfaceMode::Quadric),
            Err(SurfaceError::ReferenceNotAmple(_))
        ));
        assert_eq!(
            SurfaceModel::new(diagonal(&[1, -1]), ints(&[2, -1]), SurfaceMode::Curves(vec![ints(&[0, -1])])),
            Err(SurfaceError::CurveNotEffective(0))
        );
    }

    #[test]
    fn json_round_trip() {
        let m = SurfaceModel::three_point_blow_up();
        assert_eq!(SurfaceModel::from_json(&m.to_json()).unwrap(), m);
        let j = serde_json::json!({"rank": 3, "Q": [[1,0,0],[0,-1,0],[0,0,-1]], "h": [1,0,0], "mode": "quadric"});
        assert_eq!(SurfaceModel::from_json(&j).unwrap(), SurfaceModel::abelian());
        let f = FlagData::from_json(&serde_json::json!({"curve": [1, -1, 0, 0], "mult": {"0": 1}})).unwrap();
        assert_eq!(f.multiplicity(0), int(1));
        assert_eq!(f.multiplicity(3), Rational::zero());
    }
}
