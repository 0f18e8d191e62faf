use thiserror::Error;

/// Errors raised by the temporal model and the operation engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemporalError {
    #[error("unsupported TIMEX3 value form: {0:?}")]
    UnsupportedValueForm(String),

    #[error("operation applied to a value of the wrong kind")]
    WrongKind,

    #[error("operation incompatible with the running value: {0}")]
    KindMismatch(String),

    #[error("field value out of bounds: {0}")]
    FieldOverflow(String),

    #[error("values are not comparable over the requested field range")]
    IncomparableRange,

    #[error("duration sequence contains no Add operation")]
    EmptySequenceOnDuration,

    #[error("operation has unresolved variable slots")]
    UnresolvedVariable,

    #[error("no operation sequence transforms the base into the target")]
    NoSequenceFound,

    #[error("cannot learn from an empty corpus")]
    EmptyCorpus,

    #[error("segments resolve to conflicting value kinds: {0}")]
    KindConflict(String),

    #[error("no rule cover for the expression")]
    NoCover,

    #[error("malformed corpus: {0}")]
    MalformedCorpus(String),
}

pub type Result<T> = std::result::Result<T, TemporalError>;
