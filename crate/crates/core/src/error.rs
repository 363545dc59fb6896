use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("multiplication table is not square or has out-of-range entries")]
    TableShape,
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NonAssociative(usize, usize, usize),
    #[error("multiplication table has no two-sided identity")]
    MissingIdentity,
    #[error("element {0} has no two-sided inverse")]
    MissingInverse(usize),
    #[error("permutation closure exceeds the size bound {0}")]
    ClosureTooLarge(usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("unknown builtin group `{0}`")]
    UnknownBuiltin(String),
    #[error("map is not a group homomorphism at ({0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("elements {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("cochain is not a cocycle, witness {0:?}")]
    NotCocycle(Vec<usize>),
    #[error("cochain is not normalized")]
    NotNormalized,
    #[error("cochain groups do not match")]
    GroupMismatch,
    #[error("element {0} is not in the cochain carrier")]
    NotInCarrier(usize),
    #[error("no suitable prime below {0}")]
    NoPrime(u64),
    #[error("invalid G-set: {0}")]
    InvalidGSet(String),
    #[error("map is not equivariant at point {point}, element {element}")]
    NotEquivariant { point: usize, element: usize },
    #[error("invalid basis element: {0}")]
    InvalidBasis(String),
    #[error("matrix ({0}, {1}; {2}, {3}) is not in SL2(Z)")]
    NotUnimodular(i64, i64, i64, i64),
    #[error("point is outside the domain Im(t1/t2) > 0")]
    OutsideDomain,
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}
