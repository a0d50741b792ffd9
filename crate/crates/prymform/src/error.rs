//! Error type shared by every module.

use thiserror::Error;

/// Failures reported by surface construction, homology, verification,
/// geodesic searches and deformations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("glued edges are not opposite vectors: {0}")]
    MismatchedEdge(String),
    #[error("surface is disconnected")]
    Disconnected,
    #[error("polygon {0} is not simple or not counterclockwise")]
    NonSimplePolygon(usize),
    #[error("malformed surface: {0}")]
    Malformed(String),
    #[error("matrix determinant must be positive")]
    NonPositiveDeterminant,
    #[error("anti-invariant lattice has elementary divisors {0:?}, expected (1, 2)")]
    WrongDivisors(Vec<i64>),
    #[error("slit length out of range: {0}")]
    SlitOutOfRange(String),
    #[error("generator is not self-adjoint for diag(J, 2J)")]
    NotSelfAdjoint,
    #[error("period vector is not an eigenvector of the generator: {0}")]
    NotEigenform(String),
    #[error("minimal polynomial discriminant {found} differs from D = {expected}")]
    WrongDiscriminant { expected: i64, found: i64 },
    #[error("empty locus for D = {0}")]
    EmptyLocus(i64),
    #[error("saddle connection violates the endpoint convention: {0}")]
    WrongEndpoints(String),
    #[error("direction not periodic within the tracing budget")]
    NotPeriodicWithinBudget,
    #[error("zeros collide during the move: {0}")]
    CollisionDuringMove(String),
    #[error("saddle connection is not admissible: {0}")]
    NotAdmissible(String),
    #[error("a parallel saddle connection obstructs the collapse: {0}")]
    ParallelObstruction(String),
    #[error("displacement vector too large: {0}")]
    VectorTooLarge(String),
    #[error("no Prym involution found: {0}")]
    NoInvolution(String),
    #[error("replay step {index} failed: {source}")]
    StepFailed { index: usize, source: Box<Error> },
    #[error("replay assertion failed: {0}")]
    AssertionFailed(String),
    #[error("invalid input: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
