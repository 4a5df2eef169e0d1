use alloc::string::String;

use crate::surfaces::PhViolation;

/// Crate-wide result alias.
pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Coarse classification of an [`Error`], used by front ends to choose exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed text input.
    Syntax,
    /// Well-formed input describing an invalid or unsupported object.
    Invalid,
    /// An internal consistency check failed.
    Internal,
}

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A lens curve was given an odd first entry.
    #[error("longitude coefficient {0} is odd; the lens curve needs an even first entry")]
    OddLongitude(i64),
    /// A lens curve with a common factor.
    #[error("({0}, {1}) are not coprime")]
    NotCoprime(i64, i64),
    /// A fraction that is not positive and reduced.
    #[error("continued fraction input {0}/{1} must be a positive reduced fraction")]
    BadFraction(i64, i64),
    /// A digit list that is not a continued fraction.
    #[error("invalid continued fraction digits: {0}")]
    BadDigits(&'static str),
    /// The skip sequence summed to an odd number.
    #[error("skip sum {0} is odd")]
    OddSkipSum(u64),
    /// A target curve that is not in normal form.
    #[error("lens curve ({0}, {1}) is not normalized")]
    NotNormalized(i64, i64),
    /// The recursive evaluation found no admissible step.
    #[error("no recursion step (Q, m) exists for N({0}, {1})")]
    NoRecursionStep(i64, i64),
    /// Malformed input text.
    #[error("syntax error at column {column}: {message}")]
    Syntax {
        /// 1-based column.
        column: usize,
        /// What was expected.
        message: String,
    },
    /// A template or constraint refers to an unbound variable.
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    /// A fiber with multiplicity below 2.
    #[error("fiber {fiber}: multiplicity {alpha} is below 2 (fewer than three exceptional fibers is a lens space)")]
    DegenerateFiber {
        /// 1-based fiber.
        fiber: usize,
        /// The multiplicity.
        alpha: i64,
    },
    /// A fiber whose invariants share a factor.
    #[error("fiber {fiber}: ({alpha}, {beta}) are not coprime")]
    FiberNotCoprime {
        /// 1-based fiber.
        fiber: usize,
        /// The multiplicity.
        alpha: i64,
        /// The obstruction.
        beta: i64,
    },
    /// An Orlik invariant outside `0 < b < a`.
    #[error("fiber {fiber}: Orlik invariant {beta} must satisfy 0 < b' < {alpha}")]
    OrlikRange {
        /// 1-based fiber.
        fiber: usize,
        /// The multiplicity.
        alpha: i64,
        /// The normalized obstruction.
        beta: i64,
    },
    /// A gluing matrix that is not unimodular.
    #[error("fiber {fiber}: gluing matrix has determinant {det}, expected 1")]
    Determinant {
        /// 1-based fiber.
        fiber: usize,
        /// The determinant found.
        det: i64,
    },
    /// The manifold contains a horizontal incompressible surface.
    #[error(
        "not small: the Euler number sum b1/a1 + b2/a2 + b3/a3 vanishes, so a horizontal incompressible surface exists"
    )]
    NotSmall,
    /// An operation was called outside its domain.
    #[error("precondition failed: {0}")]
    Precondition(&'static str),
    /// Slopes that determine no pseudo-horizontal surface.
    #[error("pseudo-horizontal surface does not exist: {0}")]
    NoPseudoHorizontal(PhViolation),
    /// A family instance fails one of its constraints.
    #[error("constraint `{0}` does not hold")]
    Constraint(String),
    /// There is no nonzero class to report on.
    #[error("H1(M; Z2) is trivial, there is no nonzero class")]
    TrivialHomology,
    /// A search budget field is out of range.
    #[error("invalid search budget: {0}")]
    Budget(&'static str),
    /// Exact arithmetic left the 64-bit range.
    #[error("integer overflow")]
    Overflow,
    /// An internal consistency check failed.
    #[error("internal invariant breached: {0}")]
    Invariant(String),
}

impl Error {
    /// The coarse category of this error.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Syntax { .. } | Error::UnknownVariable(_) => ErrorKind::Syntax,
            Error::Invariant(_) | Error::Overflow => ErrorKind::Internal,
            _ => ErrorKind::Invalid,
        }
    }

    pub(crate) fn syntax(column: usize, message: impl Into<String>) -> Self {
        Error::Syntax { column, message: message.into() }
    }

    pub(crate) fn invariant(message: impl Into<String>) -> Self {
        Error::Invariant(message.into())
    }
}
