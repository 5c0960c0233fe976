use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed PD code: {0}")]
    MalformedPd(String),
    #[error("diagram does not embed in the sphere: {faces} faces, Euler formula needs {expected}")]
    EulerMismatch { faces: usize, expected: i64 },
    #[error("parameter is not invertible: {0}")]
    NonInvertibleParameter(String),
    #[error("element {element} of subgroup {family} is not central in it")]
    NonCentralElement { family: usize, element: usize },
    #[error("element {element} is not in subgroup {family}")]
    NotInSubgroup { family: usize, element: usize },
    #[error("not a quandle: {0}")]
    InvalidQuandle(String),
    #[error("invalid group data: {0}")]
    InvalidGroup(String),
    #[error("inconsistent region propagation across edge {edge}")]
    InconsistentPropagation { edge: usize },
    #[error("coloring relation fails at crossing {crossing}")]
    WirtingerViolation { crossing: usize },
    #[error("coloring is underdetermined: arc {arc} has no color")]
    Underdetermined { arc: usize },
    #[error("chain is not a cycle: {0}")]
    NotACycle(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("computation budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("integer overflow during elimination")]
    Overflow,
    #[error("points {i} and {j} are proportional (a_i b_j = a_j b_i)")]
    DegenerateTuple { i: usize, j: usize },
    #[error("the first two points of the tuple are dependent")]
    IllConditioned,
    #[error("cocycle has no value at {0:?}")]
    PartialCocycle(Vec<usize>),
    #[error("bad exponent {0}")]
    BadExponent(u64),
    #[error("form is not invariant under group element {0}")]
    NotInvariant(usize),
    #[error("field error: {0}")]
    Field(String),
    #[error("manifest error: {0}")]
    Manifest(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that come from resource limits rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::Overflow)
    }
}
