use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("d = {0} must be a positive square-free integer")]
    InvalidField(u64),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("{p} is {actual}, expected a split prime")]
    NotSplit { p: u64, actual: &'static str },

    #[error("{root} is not a root of the minimal polynomial of w modulo {p}")]
    InvalidRoot { p: u64, root: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("denominator {den} is not invertible modulo the prime above {p}")]
    DenominatorNotInvertible { p: u64, den: String },

    #[error("mixed fields: Q(sqrt(-{0})) and Q(sqrt(-{1}))")]
    FieldMismatch(u64, u64),

    #[error("matrix does not have determinant 1 (det = {0})")]
    NotDeterminantOne(String),

    #[error("a group context needs at least one generator")]
    NoGenerators,

    #[error("at most {max} generators are supported, got {got}")]
    TooManyGenerators { max: usize, got: usize },

    #[error("square-free ideal: {0}")]
    InvalidIdeal(String),

    #[error("enumeration exceeded the element cap of {cap}")]
    CapExceeded { cap: usize },

    #[error("index formulas are not supported for residue fields of even order (q = {0})")]
    UnsupportedEvenResidueField(u128),

    #[error("{0} is not loxodromic")]
    NotLoxodromic(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("the trace-norm product is {0}; no prime obstruction to avoid (deepen the enumeration)")]
    NoObstruction(String),

    #[error("{check} violated by {witness}: {detail}")]
    BoundViolation {
        check: &'static str,
        witness: String,
        detail: String,
    },

    #[error("no admissible prime found: {0}")]
    NoAdmissiblePrime(String),

    #[error("export failed: {0}")]
    Export(String),
}
