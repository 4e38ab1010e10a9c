use core::fmt;

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside its documented domain.
    InvalidParameter(&'static str),
    /// Evaluation requested exactly at a pole of the function.
    Pole(&'static str),
    /// An operation that needs at least one sample was given none.
    EmptyPath,
    /// A series did not reach the requested tolerance within the term cap.
    NoConvergence { terms: usize },
    /// The four-scale count differences are non-positive, so the tail-index
    /// estimator is undefined at this scale.
    DegenerateSample,
    /// Too many bootstrap resamples were degenerate for the test to be
    /// trustworthy.
    UnstableTest { degenerate: usize, resamples: usize },
    /// Two algebraically equal evaluation routes disagreed beyond rounding.
    Numerical(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::Pole(what) => write!(f, "evaluation at a pole: {what}"),
            Error::EmptyPath => write!(f, "empty path"),
            Error::NoConvergence { terms } => {
                write!(f, "series did not converge within {terms} terms")
            }
            Error::DegenerateSample => write!(
                f,
                "count differences are non-positive; eps is outside the valid scale window"
            ),
            Error::UnstableTest {
                degenerate,
                resamples,
            } => write!(
                f,
                "{degenerate} of {resamples} bootstrap resamples were degenerate"
            ),
            Error::Numerical(what) => write!(f, "numerical inconsistency: {what}"),
        }
    }
}

impl core::error::Error for Error {}
