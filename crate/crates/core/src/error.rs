use core::fmt;

/// Errors reported by tree construction, assembly, the batched kernels and
/// the solvers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A documented precondition was violated by the caller.
    Contract(&'static str),
    LevelOutOfRange { level: usize, depth: usize },
    DimensionMismatch { expected: usize, found: usize },
    /// The entry oracle produced NaN or an infinity.
    NonFiniteEntry { row: usize, col: usize },
    /// Batched kernel item `index` has incompatible or out-of-bounds shapes.
    Shape { index: usize, reason: &'static str },
    /// Two output blocks of one batch overlap.
    OverlappingOutput { first: usize, second: usize },
    /// A leaf diagonal block (`level == None`) or a coupling block at
    /// `level` is singular to working precision.
    Singular { level: Option<usize>, node: usize, column: usize },
    RankMismatch { left: usize, right: usize },
    /// Dense materialization refused above the configured guard.
    SizeGuard { n: usize, limit: usize },
    CoincidentNodes { first: usize, second: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Contract(msg) => write!(f, "contract violation: {msg}"),
            Error::LevelOutOfRange { level, depth } => {
                write!(f, "level {level} out of range for a tree of depth {depth}")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NonFiniteEntry { row, col } => {
                write!(f, "entry oracle returned a non-finite value at ({row}, {col})")
            }
            Error::Shape { index, reason } => write!(f, "batch item {index}: {reason}"),
            Error::OverlappingOutput { first, second } => {
                write!(f, "output blocks of batch items {first} and {second} overlap")
            }
            Error::Singular { level: None, node, column } => {
                write!(f, "leaf diagonal block {node} is singular (pivot column {column})")
            }
            Error::Singular { level: Some(level), node, column } => write!(
                f,
                "coupling block of node {node} at level {level} is singular (pivot column {column})"
            ),
            Error::RankMismatch { left, right } => {
                write!(f, "sibling basis ranks do not pair up ({left} vs {right})")
            }
            Error::SizeGuard { n, limit } => {
                write!(f, "dense materialization of n = {n} exceeds the guard {limit}")
            }
            Error::CoincidentNodes { first, second } => {
                write!(f, "quadrature nodes {first} and {second} coincide")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
