use thiserror::Error;

/// Errors raised by the analysis and construction routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count {0} outside the supported range 1..=32")]
    VariableCount(usize),
    #[error("truth table has {got} bits, expected {expected}")]
    TableLength { expected: usize, got: usize },
    #[error("variable index {index} out of range for {n} variables")]
    VariableIndex { index: usize, n: usize },
    #[error("vector {vector:#x} does not fit in {n} bits")]
    VectorWidth { vector: u64, n: usize },
    #[error("function is constant, its degree is undefined for this operation")]
    ConstantFunction,
    #[error("bent functions need an even number of variables, got {0}")]
    OddVariableCount(usize),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("mapping is not a permutation")]
    NotPermutation,
    #[error("subspace is not an M-subspace: D_{{a,b}}f != 0 for a = {a:#x}, b = {b:#x}")]
    NotMSubspace { a: u32, b: u32 },
    #[error("no Maiorana-McFarland split for a subspace of dimension {dim} in {n} variables")]
    DegenerateSplit { dim: usize, n: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("catalog entry `{0}` not found")]
    UnknownEntry(String),
    #[error("catalog entry `{0}` has no sourced algebraic normal form (missing external function)")]
    Unsourced(String),
    #[error("candidate for `{name}` rejected: {reason}")]
    SlotValidation { name: String, reason: String },
    #[error("combinatorial budget of {budget} operations exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
