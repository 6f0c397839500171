//! Zariski decomposition over the listed curves.
//!
//! The support is grown from the curves met negatively until the positive
//! part is nonnegative on every listed curve. The same loop runs for a
//! class `X + eps * Y` with `eps` an infinitesimal, comparing lexicographic
//! pairs; this gives the decomposition just to the right of a chamber wall.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::{axpy, is_negative_definite, Class, SurfaceError, SurfaceModel};
use crate::linalg;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZariskiDecomposition {
    pub positive: Class,
    /// `(curve index, coefficient)`, coefficients positive.
    pub negative: Vec<(usize, Rational)>,
    /// `q(P) > 0` and `P . h > 0`.
    pub big: bool,
}

impl ZariskiDecomposition {
    pub fn coefficient(&self, j: usize) -> Rational {
        self.negative.iter().find(|(i, _)| *i == j).map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn negative_class(&self, model: &SurfaceModel) -> Class {
        let mut n = vec![Rational::zero(); model.rank()];
        for (j, c) in &self.negative {
            n = axpy(c, &model.curves()[*j], &n);
        }
        n
    }
}

/// Decomposition of `base + eps * dir` valid for all small `eps > 0`:
/// the support and the coefficients `n0 + eps * n1` on it.
#[derive(Debug, Clone)]
pub(crate) struct LinearDecomposition {
    pub support: Vec<usize>,
    pub n0: Vec<Rational>,
    pub n1: Vec<Rational>,
}

fn lex_sign(a: &Rational, b: &Rational) -> Ordering {
    match a.cmp(&Rational::zero()) {
        Ordering::Equal => b.cmp(&Rational::zero()),
        o => o,
    }
}

pub(crate) fn decompose_linear(
    model: &SurfaceModel,
    base: &[Rational],
    dir: &[Rational],
) -> Result<LinearDecomposition, SurfaceError> {
    let curves = model.curves();
    let mut support: Vec<usize> = (0..curves.len())
        .filter(|&j| lex_sign(&model.form(base, &curves[j]), &model.form(dir, &curves[j])) == Ordering::Less)
        .collect();
    loop {
        let gram: Vec<Vec<Rational>> =
            support.iter().map(|&i| support.iter().map(|&j| model.form(&curves[i], &curves[j])).collect()).collect();
        let (n0, n1) = if support.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            // every listed curve has negative square, so a support that is not
            // negative definite can only come from a class that is not
            // pseudo-effective: on a pseudo-effective class the growth stays
            // inside the negative part
            if !is_negative_definite(&gram) {
                return Err(SurfaceError::NotPseudoEffective);
            }
            let r0: Vec<Rational> = support.iter().map(|&i| model.form(base, &curves[i])).collect();
            let r1: Vec<Rational> = support.iter().map(|&i| model.form(dir, &curves[i])).collect();
            let singular = || SurfaceError::ModelInconsistent("singular intersection system".into());
            (linalg::solve(&gram, &r0).ok_or_else(singular)?, linalg::solve(&gram, &r1).ok_or_else(singular)?)
        };
        let mut p0 = base.to_vec();
        let mut p1 = dir.to_vec();
        for (k, &j) in support.iter().enumerate() {
            p0 = axpy(&-&n0[k], &curves[j], &p0);
            p1 = axpy(&-&n1[k], &curves[j], &p1);
        }
        let extra: Vec<usize> = (0..curves.len())
            .filter(|j| !support.contains(j))
            .filter(|&j| lex_sign(&model.form(&p0, &curves[j]), &model.form(&p1, &curves[j])) == Ordering::Less)
            .collect();
        if extra.is_empty() {
            if n0.iter().zip(&n1).any(|(a, b)| lex_sign(a, b) == Ordering::Less) {
                return Err(SurfaceError::NotPseudoEffective);
            }
            return Ok(LinearDecomposition { support, n0, n1 });
        }
        support.extend(extra);
        support.sort_unstable();
    }
}

/// `D = P + N` with `P` nonnegative on every listed curve, `P . C = 0` on the
/// support of `N`, and the support negative definite.
pub fn zariski_decomposition(model: &SurfaceModel, d: &[Rational]) -> Result<ZariskiDecomposition, SurfaceError> {
    model.check_class(d)?;
    let zero = vec![Rational::zero(); d.len()];
    let lin = decompose_linear(model, d, &zero)?;
    let mut positive = d.to_vec();
    let mut negative = Vec::new();
    for (k, &j) in lin.support.iter().enumerate() {
        positive = axpy(&-&lin.n0[k], &model.curves()[j], &positive);
        if lin.n0[k].is_positive() {
            negative.push((j, lin.n0[k].clone()));
        }
    }
    let qp = model.square(&positive);
    let ph = model.form(&positive, model.reference());
    if qp.is_negative() || ph.is_negative() || (ph.is_zero() && !positive.iter().all(Zero::is_zero)) {
        return Err(SurfaceError::NotPseudoEffective);
    }
    let big = qp.is_positive() && ph.is_positive();
    Ok(ZariskiDecomposition { positive, negative, big })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::surface::class_from_ints as c;

    #[test]
    fn blow_up_examples() {
        let m = SurfaceModel::blow_up_plane();
        let z = zariski_decomposition(&m, &c(&[1, 1])).unwrap();
        assert_eq!(z.positive, c(&[1, 0]));
        assert_eq!(z.negative, vec![(0, int(1))]);
        let z = zariski_decomposition(&m, &c(&[1, 2])).unwrap();
        assert_eq!(z.positive, c(&[1, 0]));
        assert_eq!(z.negative, vec![(0, int(2))]);
        let z = zariski_decomposition(&m, &c(&[2, -1])).unwrap();
        assert!(z.negative.is_empty() && z.big);
        assert_eq!(zariski_decomposition(&m, &c(&[-1, 0])), Err(SurfaceError::NotPseudoEffective));
        let three = SurfaceModel::three_point_blow_up();
        assert_eq!(zariski_decomposition(&three, &c(&[1, 0, 0, -2])), Err(SurfaceError::NotPseudoEffective));
    }

    #[test]
    fn three_point_chambers() {
        let m = SurfaceModel::three_point_blow_up();
        let d = c(&[2, 1, 1, 0]);
        let z = zariski_decomposition(&m, &d).unwrap();
        assert_eq!(z.negative, vec![(0, int(1)), (1, int(1))]);
        for (j, _) in &z.negative {
            assert!(m.form(&z.positive, &m.curves()[*j]).is_zero());
        }
        for cv in m.curves() {
            assert!(!m.form(&z.positive, cv).is_negative());
        }
        let e = c(&[1, -1, -1, 0]);
        let z = zariski_decomposition(&m, &e).unwrap();
        assert!(!z.big);
        assert_eq!(z.negative, vec![(3, int(1))]);
    }

    #[test]
    fn quadric_is_identity() {
        let m = SurfaceModel::abelian();
        let z = zariski_decomposition(&m, &c(&[3, 1, 0])).unwrap();
        assert_eq!(z.positive, c(&[3, 1, 0]));
        assert!(z.negative.is_empty() && z.big);
    }
}
