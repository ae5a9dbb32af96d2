use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid prime {0}: {1}")]
    InvalidPrime(u64, &'static str),

    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),

    #[error("arrow `{arrow}` refers to undeclared node `{node}`")]
    DanglingEndpoint { arrow: String, node: String },

    #[error("quiver has an oriented cycle through node `{0}`")]
    OrientedCycle(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("not a Dynkin quiver: {0}")]
    NotDynkin(String),

    #[error("dimension vector has empty support")]
    EmptySupport,

    #[error("dimension vector is not a real root (Tits form {0})")]
    NotRealRoot(i64),

    #[error("result is not a dimension vector: {0:?}")]
    NegativeEntry(Vec<i64>),

    #[error("duplicate interpolation abscissa")]
    DuplicateAbscissa,

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("weights are linearly dependent")]
    DependentWeights,

    #[error("discriminant weight is not a combination of the supplied weights")]
    WeightNotInSpan,

    #[error("multiplicity vector is not a positive integer vector: {0}")]
    BadMultiplicity(String),

    #[error("degenerate sampling: {0}")]
    Degenerate(String),

    #[error("field or quiver mismatch: {0}")]
    Mismatch(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown builtin `{name}`; known: {known}")]
    UnknownBuiltin { name: String, known: String },

    #[error("invalid block recipe: {0}")]
    Recipe(String),

    #[error("{0}")]
    Usage(String),

    #[error("stage `{stage}`: {source}")]
    Stage { stage: &'static str, source: Box<Error> },

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn at(self, stage: &'static str) -> Error {
        Error::Stage { stage, source: Box::new(self) }
    }
}

pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| e.at(stage))
    }
}
