//! Exact combinatorics of conic modules over affine toric algebras.

pub mod class_group;
pub mod cone;
pub mod error;
pub mod linalg;

pub use class_group::{ClassGroupData, LatticePoint, TorsionElement};
pub use cone::{trapezoid_cone, Cone, ConeSpec, Divisor, RationalVector, Shape};
pub use error::{Error, Result};
pub mod paths;
pub mod zonotope;
pub mod complexes;
pub mod search;
pub mod almost_simplicial;
pub mod oracle;
pub mod corpus;
pub mod cli;
