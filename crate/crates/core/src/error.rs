use core::fmt;

use crate::matrix::Edge;

pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong across the library.
///
/// Edges and indices carried by variants are internal (0-based); `Display`
/// renders edges 1-based.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    EmptyMatrix,
    RaggedMatrix {
        row: usize,
        expected: usize,
        found: usize,
    },
    NegativeInfinityWeight {
        row: usize,
        col: usize,
    },
    NotANumber {
        row: usize,
        col: usize,
    },
    NonFinitePerturbation {
        row: usize,
        col: usize,
    },
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    InvalidAssignment(&'static str),
    NoFeasibleAssignment,
    NotABottleneckEdge(Edge),
    NotOptimalAssignment {
        value: f64,
        optimum: f64,
    },
    PreconditionViolation {
        edge: Edge,
        reason: &'static str,
    },
    IndexOutOfRange {
        index: usize,
        len: usize,
    },
    BudgetExceeded {
        rows: usize,
        assignments: u128,
    },
    InvariantViolation(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyMatrix => write!(f, "weight matrix is empty"),
            Error::RaggedMatrix { row, expected, found } => {
                write!(f, "row {} has {} entries, expected {}", row + 1, found, expected)
            }
            Error::NegativeInfinityWeight { row, col } => {
                write!(f, "weight at ({},{}) is -inf", row + 1, col + 1)
            }
            Error::NotANumber { row, col } => write!(f, "weight at ({},{}) is NaN", row + 1, col + 1),
            Error::NonFinitePerturbation { row, col } => {
                write!(f, "perturbation at ({},{}) is not finite", row + 1, col + 1)
            }
            Error::DimensionMismatch { expected, found } => write!(
                f,
                "dimension mismatch: expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Error::InvalidAssignment(why) => write!(f, "invalid assignment: {why}"),
            Error::NoFeasibleAssignment => {
                write!(f, "no column-perfect matching of finite edges exists")
            }
            Error::NotABottleneckEdge(e) => write!(f, "edge {e} is not a bottleneck edge"),
            Error::NotOptimalAssignment { value, optimum } => {
                write!(f, "assignment has max weight {value}, bottleneck optimum is {optimum}")
            }
            Error::PreconditionViolation { edge, reason } => {
                write!(f, "precondition violated at edge {edge}: {reason}")
            }
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range 1..={len}")
            }
            Error::BudgetExceeded { rows, assignments } => write!(
                f,
                "enumeration budget exceeded ({rows} rows, {assignments} candidate assignments)"
            ),
            Error::InvariantViolation(what) => write!(f, "internal invariant violated: {what}"),
        }
    }
}

impl core::error::Error for Error {}
