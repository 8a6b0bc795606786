use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A multiplication table failed validation. `witness` names the
    /// offending element triple (or pair, with the third slot repeated).
    #[error("invalid group table: {reason}{}", fmt_witness(.witness))]
    InvalidTable {
        reason: String,
        witness: Option<(usize, usize, usize)>,
    },

    #[error("cannot parse group descriptor `{input}`: {reason}")]
    Descriptor { input: String, reason: String },

    #[error("group of order {order} exceeds the supported maximum of {max}")]
    TooLarge { order: usize, max: usize },

    #[error("operands belong to different groups")]
    GroupMismatch,

    #[error("irreducible decomposition failed: {0}")]
    DecompositionFailed(String),

    #[error("block layouts differ: {left:?} vs {right:?}")]
    LayoutMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("not an effect: {0}")]
    NotAnEffect(String),

    #[error("operator does not commute with the left regular action (residual {0:e})")]
    NotIntertwining(f64),

    #[error("points belong to different convex spaces")]
    SpaceMismatch,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimMismatch { expected: usize, actual: usize },

    #[error("not a state: {0}")]
    NotAState(String),

    #[error("point does not match the irrep catalog: {0}")]
    CatalogMismatch(String),

    #[error("Fourier inversion is singular: {0}")]
    SingularSystem(String),

    #[error("unrecognized convex monoid: {0}")]
    UnrecognizedMonoid(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("interrupted")]
    Interrupted,

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("invalid run specification: {0}")]
    InvalidSpec(String),

    #[error("malformed report: {0}")]
    MalformedReport(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn fmt_witness(w: &Option<(usize, usize, usize)>) -> String {
    match w {
        Some((a, b, c)) => format!(" (witness {a}, {b}, {c})"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn table(reason: impl Into<String>, witness: Option<(usize, usize, usize)>) -> Self {
        Error::InvalidTable {
            reason: reason.into(),
            witness,
        }
    }
}
