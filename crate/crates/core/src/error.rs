use crate::class_group::LatticePoint;
use crate::linalg::LinalgError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error("cone has no rays")]
    NoRays,
    #[error("ray {index} has length {found}, expected {expected}")]
    RaggedRay { index: usize, expected: usize, found: usize },
    #[error("ray {index} is not primitive (gcd of entries is not 1)")]
    NonPrimitiveRay { index: usize },
    #[error("ray matrix has rank {rank}, ambient dimension is {dim}")]
    NotFullDimensional { rank: usize, dim: usize },
    #[error("cone is not pointed: no linear form is positive on every ray")]
    NotPointed,
    #[error("cone has {rays} rays; at most {max} are supported")]
    TooManyRays { rays: usize, max: usize },

    #[error("trapezoid side lengths must be positive")]
    InvalidTrapezoid,

    #[error("replacement basis does not present the same free quotient")]
    BasisMismatch,
    #[error("point {0} is not a lattice point of the zonotope")]
    PointOutsideZonotope(LatticePoint),
    #[error("point {point} has length {found}, expected {expected}")]
    PointDimension { point: LatticePoint, expected: usize, found: usize },
    #[error("integer value does not fit in 64 bits")]
    Overflow,
    #[error("multiplicity overflow while splicing")]
    MultiplicityOverflow,

    #[error("one-dimensional validity needs nonzero betas")]
    ZeroBetaUnsupported,
    #[error("invalid beta list: {0}")]
    InvalidBetas(String),
    #[error("class group has free rank {0}, expected 1")]
    NotRankOne(usize),

    #[error("cannot substitute a complex into itself")]
    SelfSubstitution,
    #[error("substituted complex belongs to {found}, expected {expected}")]
    ProfileMismatch { expected: LatticePoint, found: LatticePoint },
    #[error("point set is empty")]
    EmptySet,
    #[error("{points} lattice points; subset search supports at most {max}")]
    TooManyPoints { points: usize, max: usize },
    #[error("subset cap exceeded after examining {examined} subsets")]
    CapExceeded { examined: u64 },
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("pruning needs a Gorenstein almost-simplicial model with nonzero betas")]
    PruningNotApplicable,

    #[error("grid oracle supports at most {max} variables, got {found}")]
    GridTooLarge { max: usize, found: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("malformed fixture: {0}")]
    Fixture(String),
}
