//! Polyhedral geometry over the rationals: polytopes, cones and subspaces.

pub mod cone;
pub mod dd;
pub mod polytope;
pub mod subspace;

pub use cone::{cone_meet_subspace, cone_slice, PolyCone, SubspaceCone};
pub use polytope::{convex_hull, lattice_points, minkowski_sum, polytope_volume, Facet, Polytope, Volume};
pub use subspace::LinearSubspace;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("empty point set")]
    EmptyPointSet,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polytope required: the region is unbounded")]
    Unbounded,
    #[error("the inequalities have no common solution")]
    Infeasible,
    #[error("cone is not pointed")]
    NotPointed,
    #[error("cone not graded along axis {0}")]
    NotGraded(usize),
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<(), GeomError> {
    if expected == found {
        Ok(())
    } else {
        Err(GeomError::DimensionMismatch { expected, found })
    }
}
