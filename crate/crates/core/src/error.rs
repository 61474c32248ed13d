use std::fmt;

use crate::rational::Rational;

/// Stage of a pipeline at which a size or purity bound could not be met.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stage {
    /// The regularity partition could not be formed at the requested tolerance.
    PartitionBound,
    /// Too few pairwise weakly-pure parts of a common size.
    TuranSelection,
    /// Trimming left an empty block or the purity certificate failed.
    Trimming,
    /// Neither outcome of the anticomplete-pair search reached its size bound.
    AnticompletePair,
    /// Blockade growth stopped before reaching its target length.
    BlockadeGrowth,
    /// The initial restricted subgraph could not be produced.
    Init,
    /// A descent step failed.
    Descent,
    /// The union of selected blocks did not verify as restricted.
    RestrictedUnion,
    /// A step handed back an object that failed exact verification.
    Verification,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::PartitionBound => "partition-bound",
            Stage::TuranSelection => "turan-selection",
            Stage::Trimming => "trimming",
            Stage::AnticompletePair => "anticomplete-pair",
            Stage::BlockadeGrowth => "blockade-growth",
            Stage::Init => "init",
            Stage::Descent => "descent",
            Stage::RestrictedUnion => "restricted-union",
            Stage::Verification => "verification",
        };
        f.write_str(s)
    }
}

/// Diagnostics carried when a procedure could not reach the size it promises.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundNotMet {
    pub stage: Stage,
    pub detail: String,
    /// Best `(length, width)` reached, where meaningful.
    pub achieved: (usize, usize),
    /// Descent trace `(y, |F|)` accumulated so far, where meaningful.
    pub trace: Vec<(Rational, usize)>,
}

impl BoundNotMet {
    pub fn new(stage: Stage, detail: impl Into<String>) -> Self {
        BoundNotMet {
            stage,
            detail: detail.into(),
            achieved: (0, 0),
            trace: Vec::new(),
        }
    }

    pub fn with_achieved(mut self, length: usize, width: usize) -> Self {
        self.achieved = (length, width);
        self
    }

    pub fn with_trace(mut self, trace: Vec<(Rational, usize)>) -> Self {
        self.trace = trace;
        self
    }
}

impl fmt::Display for BoundNotMet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "bound not met at {}: {} (achieved length {}, width {})",
            self.stage, self.detail, self.achieved.0, self.achieved.1
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    BoundNotMet(Box<BoundNotMet>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn refused(msg: impl Into<String>) -> Self {
        Error::Refused(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// The bound diagnostics, if this is a `BoundNotMet` outcome.
    pub fn bound(&self) -> Option<&BoundNotMet> {
        match self {
            Error::BoundNotMet(b) => Some(b),
            _ => None,
        }
    }
}

impl From<BoundNotMet> for Error {
    fn from(b: BoundNotMet) -> Self {
        Error::BoundNotMet(Box::new(b))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
