use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A parameter is outside the range the algorithm is defined on.
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    /// An input collection that must be non-empty was empty.
    Empty(&'static str),
    /// Matrix and vector shapes do not agree.
    DimensionMismatch(&'static str),
    /// A linear system has no unique solution.
    Singular,
    /// An optimization problem has no feasible point.
    Infeasible,
    /// An optimization problem is unbounded below.
    Unbounded,
    /// A constructed distribution has a mass below the clamping window.
    NegativeMass { day: u64, mass: f64 },
}

impl Error {
    pub(crate) fn out_of_range(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::OutOfRange {
            name,
            value,
            expected,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutOfRange {
                name,
                value,
                expected,
            } => write!(f, "parameter `{name}` = {value} is outside {expected}"),
            Error::Empty(what) => write!(f, "{what} must not be empty"),
            Error::DimensionMismatch(what) => write!(f, "dimension mismatch: {what}"),
            Error::Singular => f.write_str("linear system is singular"),
            Error::Infeasible => f.write_str("problem is infeasible"),
            Error::Unbounded => f.write_str("problem is unbounded"),
            Error::NegativeMass { day, mass } => {
                write!(f, "negative probability mass {mass:e} on day {day}")
            }
        }
    }
}

impl core::error::Error for Error {}
