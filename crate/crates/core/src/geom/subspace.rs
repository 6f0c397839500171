use super::{check_dim, GeomError};
use crate::linalg;
use crate::rational::{Rational, RationalVector};

/// A rational linear subspace of `Q^ambient_dim`, given by an independent
/// basis. Coordinates "in L" always refer to this basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSubspace {
    basis: Vec<RationalVector>,
    ambient_dim: usize,
}

impl LinearSubspace {
    pub fn from_basis(basis: Vec<RationalVector>, ambient_dim: usize) -> Result<Self, GeomError> {
        for b in &basis {
            check_dim(ambient_dim, b.dim())?;
        }
        let rows: Vec<Vec<Rational>> = basis.iter().map(|b| b.coords().to_vec()).collect();
        if linalg::rank(&rows) != basis.len() {
            return Err(GeomError::DependentBasis);
        }
        Ok(LinearSubspace { basis, ambient_dim })
    }

    /// Any spanning set; a basis is extracted (the reduced row echelon rows).
    pub fn span(vectors: &[RationalVector], ambient_dim: usize) -> Result<Self, GeomError> {
        for b in vectors {
            check_dim(ambient_dim, b.dim())?;
        }
        let rows: Vec<Vec<Rational>> = vectors.iter().map(|b| b.coords().to_vec()).collect();
        let (r, piv) = linalg::rref(&rows);
        let basis = r.into_iter().take(piv.len()).map(RationalVector::new).collect();
        Ok(LinearSubspace { basis, ambient_dim })
    }

    /// `{x : n . x = 0 for each normal}`.
    pub fn from_equations(normals: &[RationalVector], ambient_dim: usize) -> Result<Self, GeomError> {
        for n in normals {
            check_dim(ambient_dim, n.dim())?;
        }
        let rows: Vec<Vec<Rational>> = normals.iter().map(|n| n.coords().to_vec()).collect();
        let basis = linalg::nullspace(&rows, ambient_dim).into_iter().map(RationalVector::new).collect();
        Ok(LinearSubspace { basis, ambient_dim })
    }

    pub fn whole(ambient_dim: usize) -> Self {
        LinearSubspace {
            basis: (0..ambient_dim).map(|i| RationalVector::unit(ambient_dim, i)).collect(),
            ambient_dim,
        }
    }

    /// Span of the given coordinate axes.
    pub fn coordinate(axes: &[usize], ambient_dim: usize) -> Self {
        LinearSubspace { basis: axes.iter().map(|&i| RationalVector::unit(ambient_dim, i)).collect(), ambient_dim }
    }

    pub fn basis(&self) -> &[RationalVector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Maps coordinates in `L` to the ambient space.
    pub fn embed(&self, y: &RationalVector) -> RationalVector {
        let mut x = RationalVector::zeros(self.ambient_dim);
        for (c, b) in y.iter().zip(&self.basis) {
            x = &x + &b.scale(c);
        }
        x
    }

    /// Coordinates of `x` in the basis, if `x` lies in `L`.
    pub fn coordinates(&self, x: &RationalVector) -> Option<RationalVector> {
        let cols = linalg::transpose(
            &self.basis.iter().map(|b| b.coords().to_vec()).collect::<Vec<_>>(),
            self.ambient_dim,
        );
        if self.basis.is_empty() {
            return if x.is_zero() { Some(RationalVector::zeros(0)) } else { None };
        }
        linalg::solve(&cols, x).map(RationalVector::new)
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        self.coordinates(x).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dependent_basis_rejected() {
        let b = vec![RationalVector::from_ints(&[1, 2]), RationalVector::from_ints(&[2, 4])];
        assert_eq!(LinearSubspace::from_basis(b, 2), Err(GeomError::DependentBasis));
    }

    #[test]
    fn equations_and_coordinates() {
        let l = LinearSubspace::from_equations(&[RationalVector::from_ints(&[1, -1, 0])], 3).unwrap();
        assert_eq!(l.dim(), 2);
        assert!(l.contains(&RationalVector::from_ints(&[2, 2, 5])));
        assert!(!l.contains(&RationalVector::from_ints(&[1, 2, 0])));
        let y = l.coordinates(&RationalVector::from_ints(&[3, 3, 1])).unwrap();
        assert_eq!(l.embed(&y), RationalVector::from_ints(&[3, 3, 1]));
    }
}
