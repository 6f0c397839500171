//! `sup { s > 0 : ((1 - t - s) A - t B2 - s B1)^2 >= 0 }` in the quadric model,
//! the classical example of a non-polyhedral slope function.

use num_traits::Zero;

use super::body::mu_invariant;
use super::{add, axpy, scale, SurfaceError, SurfaceModel};
use crate::algebraic::QuadraticNumber;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutkoskyReport {
    pub t: Rational,
    pub mu: QuadraticNumber,
    /// `false` when `(1 - t) A - t B2` is already outside the big cone; `mu` is then `0`.
    pub well_posed: bool,
}

pub fn cutkosky_mu(
    model: &SurfaceModel,
    a: &[Rational],
    b1: &[Rational],
    b2: &[Rational],
    t: &Rational,
) -> Result<CutkoskyReport, SurfaceError> {
    if !model.is_quadric() {
        return Err(SurfaceError::Invalid("the slope example needs the quadric model".into()));
    }
    for x in [a, b1, b2] {
        model.check_class(x)?;
        if !model.in_positive_cone(x) {
            return Err(SurfaceError::Invalid("A, B1, B2 must be ample".into()));
        }
    }
    let one_minus_t = Rational::from_integer(1.into()) - t;
    let start = axpy(&-t, b2, &scale(&one_minus_t, a));
    let dir = add(a, b1);
    match mu_invariant(model, &start, &dir) {
        Ok(mu) => Ok(CutkoskyReport { t: t.clone(), mu, well_posed: true }),
        Err(SurfaceError::NotBig) | Err(SurfaceError::NotPseudoEffective) => {
            Ok(CutkoskyReport { t: t.clone(), mu: QuadraticNumber::Rational(Rational::zero()), well_posed: false })
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::SqrtSum;
    use crate::rational::{int, rat};
    use crate::surface::class_from_ints as c;

    fn run(t: Rational) -> QuadraticNumber {
        let m = SurfaceModel::abelian();
        let r = cutkosky_mu(&m, &c(&[3, 1, 1]), &c(&[2, 1, 0]), &c(&[2, 0, 1]), &t).unwrap();
        assert!(r.well_posed);
        r.mu
    }

    #[test]
    fn endpoint_values() {
        assert_eq!(run(int(0)), QuadraticNumber::Rational(rat(1, 2)));
        // (19.8 - sqrt 8.04) / 40
        let expected = &SqrtSum::sqrt(&rat(804, 100)).scale(&rat(-1, 40)) + &rat(198, 400);
        assert_eq!(run(rat(1, 10)).value(), expected);
    }

    #[test]
    fn second_difference_nonzero() {
        let (m0, m1, m2) = (run(int(0)).value(), run(rat(1, 10)).value(), run(rat(2, 10)).value());
        let second = &(&m0 + &m2) - &m1.scale(&int(2));
        assert!(!second.is_zero());
    }

    #[test]
    fn ill_posed_is_flagged() {
        let m = SurfaceModel::abelian();
        let r = cutkosky_mu(&m, &c(&[3, 1, 1]), &c(&[2, 1, 0]), &c(&[2, 0, 1]), &int(1)).unwrap();
        assert!(!r.well_posed);
    }
}
