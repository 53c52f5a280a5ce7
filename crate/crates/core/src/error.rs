use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad class of an [`Error`], used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Input violates a structural invariant (bad frame, bad mass, ...).
    Validation,
    /// The mathematics is undefined for this input (zero commonality, total conflict, ...).
    Domain,
    /// A size or memory cap was exceeded.
    Resource,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("frame of {n} elements exceeds the limit of {limit} for this operation")]
    FrameTooLarge { n: usize, limit: usize },
    #[error("dense representation needs {required} bytes, over the cap of {cap} bytes")]
    MemoryCap { required: u128, cap: u64 },
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("set functions are defined over different frames")]
    FrameMismatch,
    #[error("elements are not comparable in the requested order")]
    NotComparable,
    #[error("element is not a focal point of this set")]
    NotInSet,
    #[error("no image given for focal point {0}")]
    IncompleteInput(String),
    #[error("zero image at {0}: multiplicative inversion is impossible")]
    ZeroImage(String),
    #[error("cannot build a closure from an empty generating set")]
    EmptyGenerators,
    #[error("invalid image partition: {0}")]
    InvalidPartition(String),
    #[error("not a mass function: {0}")]
    NotAMass(String),
    #[error("commonality vanishes at {0}")]
    ZeroCommonality(String),
    #[error("sources are in total conflict (K = {0})")]
    TotalConflict(f64),
    #[error("the union of the focal sets is not itself a focal set; discount first")]
    MaximumMissing,
    #[error("discount target must contain the union of the focal sets")]
    InvalidTarget,
    #[error("discount factor {0} is not strictly inside (0, 1)")]
    InvalidAlpha(f64),
    #[error("{0} is not a focal point of the weight function")]
    NotAFocalPoint(String),
    #[error("weight must be strictly positive and finite, got {0}")]
    ZeroWeight(f64),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::FrameTooLarge { .. } | Error::MemoryCap { .. } => ErrorKind::Resource,
            Error::ZeroImage(_)
            | Error::ZeroCommonality(_)
            | Error::TotalConflict(_)
            | Error::MaximumMissing
            | Error::ZeroWeight(_)
            | Error::NotComparable => ErrorKind::Domain,
            _ => ErrorKind::Validation,
        }
    }
}
