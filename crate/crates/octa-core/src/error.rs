use alloc::string::String;
use core::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A shape must have at least one class and no class of size zero.
    BadShape(String),
    /// The operation needs every class to have at least two vertices.
    ClassTooSmall { class: usize, size: usize },
    /// A vertex or edge refers to a position outside its class.
    PositionOutOfRange {
        class: usize,
        position: usize,
        size: usize,
    },
    /// An edge tuple does not have one entry per class.
    ArityMismatch { expected: usize, got: usize },
    /// Two systems that must share a shape do not.
    ShapeMismatch,
    /// A size, product, or enumeration exceeds the configured budget.
    Resource(String),
    /// A caller-side contract was violated.
    Precondition(String),
    /// Arguments outside the mathematical domain of a formula.
    Domain(String),
    /// A geometric selection is affinely degenerate or touches a boundary.
    NotGeneralPosition(String),
    /// Rejection sampling gave up before finding a valid configuration.
    SamplingBudget(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::BadShape(s) => write!(f, "bad shape: {s}"),
            Error::ClassTooSmall { class, size } => {
                write!(f, "class {class} has {size} vertices, need at least 2")
            }
            Error::PositionOutOfRange {
                class,
                position,
                size,
            } => write!(
                f,
                "position {position} out of range for class {class} of size {size}"
            ),
            Error::ArityMismatch { expected, got } => {
                write!(f, "edge arity {got} does not match {expected} classes")
            }
            Error::ShapeMismatch => write!(f, "shapes do not match"),
            Error::Resource(s) => write!(f, "resource budget exceeded: {s}"),
            Error::Precondition(s) => write!(f, "precondition violated: {s}"),
            Error::Domain(s) => write!(f, "domain error: {s}"),
            Error::NotGeneralPosition(s) => write!(f, "not in general position: {s}"),
            Error::SamplingBudget(s) => write!(f, "sampling budget exhausted: {s}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
