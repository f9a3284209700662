use alloc::string::String;

/// Errors reported by the core algorithms.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Two n-gram tables of different order were combined.
    #[error("n-gram order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("reference has no n-grams of the requested order")]
    EmptyReference,
    #[error("reference set is empty")]
    EmptyReferenceSet,
    #[error("problem has no candidate sentences or no usable references")]
    EmptyProblem,
    #[error("auxiliary-variable encoding supports exactly one reference, got {references}")]
    UnsupportedEncoding { references: usize },
    #[error("instance has {sentences} sentences, enumeration is limited to {max}")]
    InstanceTooLarge { sentences: usize, max: usize },
    /// The integer scaling of the objective does not fit in 128 bits.
    #[error("objective weights overflow the exact integer representation")]
    ScaleOverflow,
    #[error("no training samples")]
    NoTrainingData,
    #[error("sentence has no tokens")]
    EmptySentence,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
