use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("multi-index must have at least one component")]
    EmptyMultiIndex,

    #[error("component index {k} out of range for a multi-index of length {m}")]
    ComponentOutOfRange { k: usize, m: usize },

    #[error("decrementing component {k} would make it negative")]
    NegativeComponent { k: usize },

    #[error("length mismatch: expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    /// Two parameters coincide where a residue expansion needs them distinct.
    #[error("singular expansion: parameters {i} and {j} coincide")]
    SingularExpansion { i: usize, j: usize },

    #[error("singular expansion: (c + t)^-n expanded at c = 0")]
    ZeroExpansionPoint,

    #[error("rate parameter must be positive, got {0}")]
    NonPositiveRate(String),

    #[error("cannot add scaled constants with different transcendental parts")]
    IncompatibleScaledSum,

    #[error("division by zero")]
    DivisionByZero,

    #[error("series truncation orders differ ({left} vs {right})")]
    SeriesOrderMismatch { left: usize, right: usize },

    #[error("component {k} of the multi-index is zero; drop that component before building the kernel")]
    DegenerateIndex { k: usize },

    #[error("h-ratio for component {k}: expected {expected}, moment computation gave {found}")]
    RatioMismatch { k: usize, expected: String, found: String },

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("expected an exact rational value, got a transcendental residue {0}")]
    NotRational(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid contour geometry: {0}")]
    Geometry(String),

    #[error("invalid quadrature rule: {0}")]
    InvalidRule(String),

    #[error("no convergence after {nodes} nodes (last delta {delta:e}, best value {best_re} + {best_im}i)")]
    NonConvergence { best_re: f64, best_im: f64, delta: f64, nodes: usize },

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix dimension {0} exceeds the supported maximum of 64")]
    MatrixTooLarge(usize),

    #[error("family mismatch: {0}")]
    FamilyMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),
}
