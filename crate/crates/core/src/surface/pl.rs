//! Piecewise-linear functions on `[t_0, end]` with rational breakpoints and
//! an end point that may be a quadratic irrational.

use crate::algebraic::{QuadraticNumber, SqrtSum};
use crate::rational::{int, rational_to_json, Rational};

/// `t -> slope * t + intercept`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub slope: Rational,
    pub intercept: Rational,
}

impl Affine {
    pub fn new(slope: Rational, intercept: Rational) -> Self {
        Affine { slope, intercept }
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        &self.slope * t + &self.intercept
    }

    pub fn eval_sqrt(&self, t: &SqrtSum) -> SqrtSum {
        &t.scale(&self.slope) + &self.intercept
    }
}

/// Piece `i` is valid on `[breakpoints[i], breakpoints[i + 1]]`, the last one
/// up to `end`. Kept canonical: consecutive pieces differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinearFn {
    breakpoints: Vec<Rational>,
    pieces: Vec<Affine>,
    end: QuadraticNumber,
}

impl PiecewiseLinearFn {
    /// Requires `breakpoints` strictly increasing, as many as `pieces`, and
    /// all below `end` (or the single start equal to `end`).
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<Affine>, end: QuadraticNumber) -> Self {
        assert_eq!(breakpoints.len(), pieces.len(), "one start per piece");
        assert!(!pieces.is_empty(), "at least one piece");
        assert!(breakpoints.windows(2).all(|w| w[0] < w[1]), "breakpoints increase");
        let mut b = Vec::new();
        let mut p: Vec<Affine> = Vec::new();
        for (t, f) in breakpoints.into_iter().zip(pieces) {
            if p.last() != Some(&f) {
                b.push(t);
                p.push(f);
            }
        }
        PiecewiseLinearFn { breakpoints: b, pieces: p, end }
    }

    pub fn start(&self) -> &Rational {
        &self.breakpoints[0]
    }

    pub fn end(&self) -> &QuadraticNumber {
        &self.end
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Affine] {
        &self.pieces
    }

    fn piece_index(&self, t: &SqrtSum) -> usize {
        let mut i = 0;
        while i + 1 < self.breakpoints.len() && *t >= SqrtSum::from_rational(self.breakpoints[i + 1].clone()) {
            i += 1;
        }
        i
    }

    pub fn in_domain(&self, t: &SqrtSum) -> bool {
        *t >= SqrtSum::from_rational(self.start().clone()) && *t <= self.end.value()
    }

    pub fn eval(&self, t: &Rational) -> Option<Rational> {
        let x = SqrtSum::from_rational(t.clone());
        self.in_domain(&x).then(|| self.pieces[self.piece_index(&x)].eval(t))
    }

    pub fn eval_sqrt(&self, t: &SqrtSum) -> Option<SqrtSum> {
        self.in_domain(t).then(|| self.pieces[self.piece_index(t)].eval_sqrt(t))
    }

    pub fn value_at_end(&self) -> SqrtSum {
        self.pieces.last().expect("nonempty").eval_sqrt(&self.end.value())
    }

    /// Continuity at interior breakpoints.
    pub fn is_continuous(&self) -> bool {
        self.pieces.windows(2).zip(&self.breakpoints[1..]).all(|(w, t)| w[0].eval(t) == w[1].eval(t))
    }

    pub fn is_convex(&self) -> bool {
        self.is_continuous() && self.pieces.windows(2).all(|w| w[0].slope <= w[1].slope)
    }

    pub fn is_concave(&self) -> bool {
        self.is_continuous() && self.pieces.windows(2).all(|w| w[0].slope >= w[1].slope)
    }

    /// Exact integral over the domain.
    pub fn integral(&self) -> SqrtSum {
        let mut total = SqrtSum::zero();
        for (i, f) in self.pieces.iter().enumerate() {
            let lo = SqrtSum::from_rational(self.breakpoints[i].clone());
            let hi = match self.breakpoints.get(i + 1) {
                Some(t) => SqrtSum::from_rational(t.clone()),
                None => self.end.value(),
            };
            let half = &f.slope / int(2);
            let sq = &(&hi * &hi) - &(&lo * &lo);
            total = &total + &(&sq.scale(&half) + &(&hi - &lo).scale(&f.intercept));
        }
        total
    }

    /// `t -> p f(t / p)` for `p > 0`.
    pub fn dilate(&self, p: &Rational) -> Self {
        PiecewiseLinearFn::new(
            self.breakpoints.iter().map(|t| t * p).collect(),
            self.pieces.iter().map(|f| Affine::new(f.slope.clone(), &f.intercept * p)).collect(),
            self.end.scale(p),
        )
    }

    /// `t -> f(t - s)`.
    pub fn shift(&self, s: &Rational) -> Self {
        PiecewiseLinearFn::new(
            self.breakpoints.iter().map(|t| t + s).collect(),
            self.pieces.iter().map(|f| Affine::new(f.slope.clone(), &f.intercept - &f.slope * s)).collect(),
            self.end.shift(s),
        )
    }

    /// Restriction to `[t, end]` for `start <= t <= end`.
    pub fn restrict_from(&self, t: &Rational) -> Self {
        let x = SqrtSum::from_rational(t.clone());
        let i = self.piece_index(&x);
        let mut b = vec![t.clone()];
        b.extend(self.breakpoints[i + 1..].iter().cloned());
        PiecewiseLinearFn::new(b, self.pieces[i..].to_vec(), self.end.clone())
    }

    /// Restriction to `[start, t]` for rational `t` inside the domain.
    pub fn restrict_to(&self, t: &Rational) -> Self {
        let x = SqrtSum::from_rational(t.clone());
        let i = self.piece_index(&x);
        let keep = if i > 0 && self.breakpoints[i] == *t { i } else { i + 1 };
        PiecewiseLinearFn::new(
            self.breakpoints[..keep].to_vec(),
            self.pieces[..keep].to_vec(),
            QuadraticNumber::Rational(t.clone()),
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pieces: Vec<serde_json::Value> = self
            .breakpoints
            .iter()
            .zip(&self.pieces)
            .map(|(t, f)| {
                serde_json::json!({
                    "from": rational_to_json(t),
                    "slope": rational_to_json(&f.slope),
                    "intercept": rational_to_json(&f.intercept),
                })
            })
            .collect();
        serde_json::json!({ "pieces": pieces, "end": serde_json::to_value(&self.end).expect("serializable") })
    }
}
