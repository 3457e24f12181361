use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid root system family/rank pair: {family} rank {rank}")]
    InvalidFamilyRank { family: String, rank: usize },
    #[error("not a root of the system: {0}")]
    NotARoot(String),
    #[error("not a simple root: {0}")]
    NotSimple(String),
    #[error("root is not of minimum level in its string class: {0}")]
    NotMinimumLevel(String),
    #[error("trivial string: Cartan integer of the pair is zero")]
    TrivialString,
    #[error("invalid constructor parameter: {0}")]
    InvalidParameter(String),
    #[error("linearly dependent input at index {0}")]
    DependentInput(usize),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("vector is not normal to the orbit (or not unit): {0}")]
    BadNormal(String),
    #[error("subalgebra closure failure: bracket of pre-basis vectors {i} and {j} leaves s")]
    ClosureFailure { i: usize, j: usize },
    #[error("shape operator symmetry residual {0:.3e} exceeds bound")]
    SymmetryResidual(f64),
    #[error("string-class invariance violated: off-block leakage {0:.3e}")]
    LeakageViolation(f64),
    #[error("structure certificate residual violation: {0}")]
    StructureResidual(String),
    #[error("unknown subspace tag: {0}")]
    UnknownSubspace(String),
    #[error("unknown block kind: {0}")]
    UnknownBlockKind(String),
    #[error("subspace is not contained in the expected root space: {0}")]
    NotInRootSpace(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
