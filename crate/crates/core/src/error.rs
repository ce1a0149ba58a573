use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Variants split into two families: malformed input (bad identifiers,
/// parameters, documents) and falsification, where the input is well formed
/// but some structural claim about it does not hold. [`Error::is_falsification`]
/// tells them apart; the CLI maps the first family to exit status 2 and the
/// second to exit status 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown identifier `{0}`")]
    UnknownId(String),
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("identifier `{0}` is used both as a point and as a line")]
    SortClash(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid document: {0}")]
    Format(String),
    #[error("structure carries no construction coordinates")]
    MissingCoordinates,

    #[error("uniqueness violated: lines `{0}` and `{1}` share more than one point")]
    UniquenessViolated(String, String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("coordinate mismatch: {0}")]
    CoordinateMismatch(String),
    #[error("correlation is not involutive: {0}")]
    NotInvolutive(String),
    #[error("structure is not connected ({0} components)")]
    Disconnected(usize),
    #[error("invalid covering: {0}")]
    InvalidCovering(String),
    #[error("conditions violated: {0}")]
    ConditionsFailed(String),
    #[error("successor relation on blocks: {0}")]
    Rho(String),
    #[error("tack relation is not a point-line bijection: {0}")]
    TackNotBijective(String),
    #[error("cannot complete inter-block correlation: {0}")]
    CorrelationCompletion(String),
    #[error("map fails to be an isomorphism: {0}")]
    NotIsomorphism(String),
    #[error("compatibility equation fails at index {index}: {detail}")]
    Compatibility { index: usize, detail: String },
    #[error("correlation composite is not the identity: {0}")]
    CompositeNotIdentity(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True when the input was well formed but a checked property failed.
    pub fn is_falsification(&self) -> bool {
        !matches!(
            self,
            Error::UnknownId(_)
                | Error::DuplicateId(_)
                | Error::SortClash(_)
                | Error::InvalidParameter(_)
                | Error::Format(_)
                | Error::MissingCoordinates
                | Error::Json(_)
                | Error::Io(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
