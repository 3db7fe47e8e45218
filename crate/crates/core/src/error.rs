use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("top-degree form has no exterior derivative")]
    TopDegreeForm,

    #[error("the Koszul operator is not defined on 0-forms")]
    KoszulOfZeroForm,

    #[error("form degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported element: {0}")]
    UnsupportedElement(String),

    #[error("basis not linearly independent")]
    SingularGram,

    #[error("unknown element name `{name}`; expected one of: {}", crate::refelem::ELEMENT_NAMES.join(", "))]
    UnknownElement { name: String },

    #[error("trace kind {kind} does not apply to {k}-forms in {n}D")]
    InapplicableTrace { kind: &'static str, n: usize, k: usize },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("incompatible form: {0}")]
    IncompatibleForm(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("factorization failed: {0}")]
    Factorization(String),

    #[error("solver did not converge: {0}")]
    NoConvergence(String),

    #[error("shift {shift} is too close to an eigenvalue; factorization of the shifted matrix failed ({detail}); try a perturbed target")]
    BadShift { shift: f64, detail: String },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Tags an error with the pipeline stage that produced it.
    pub fn at(stage: &'static str) -> impl FnOnce(Error) -> Error {
        move |e| Error::Stage {
            stage,
            source: Box::new(e),
        }
    }
}
