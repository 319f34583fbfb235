use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no spike of degree {n} in {k} variables (mu({n}) = {mu} > {k})")]
    NoSpike { k: usize, n: u32, mu: u32 },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("variable count mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("Kameko map needs n - k even and non-negative (k = {k}, n = {n})")]
    Parity { k: usize, n: u32 },
    #[error("generator index {d} out of range 1..={k}")]
    GeneratorRange { d: usize, k: usize },
    #[error("subspace is not stable under generator {d}")]
    NotStable { d: usize },
    #[error("element is not A-annihilated: dual Sq^{l} does not vanish")]
    NotAnnihilated { l: u32 },
    #[error("expression is not a cycle")]
    NotCycle,
    #[error("missing dimension for j = {j}")]
    MissingDimension { j: usize },
    #[error("rewriting did not terminate within {0} steps")]
    RewriteLimit(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of a mathematical precondition (as opposed to I/O).
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
