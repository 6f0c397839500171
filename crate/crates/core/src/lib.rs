//! Exact computation of Newton–Okounkov bodies in the cases where they are
//! effectively computable: graded semigroups given by generators or by
//! explicit slices, monomial linear series on projective space, divisors on
//! smooth toric varieties, and divisors on surfaces with a prescribed
//! intersection form.
//!
//! All arithmetic is exact. Rationals are arbitrary precision; the only
//! irrational numbers that appear (endpoints of surface bodies) are carried
//! as elements of multiquadratic fields with exact sign decisions.

pub mod algebraic;
pub mod geom;
pub mod linalg;
pub mod monomial;
pub mod rational;
pub mod semigroup;
pub mod surface;
pub mod toric;

pub use geom::{LinearSubspace, PolyCone, Polytope};
pub use rational::{Rational, RationalVector};
