use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {p}^{h} does not fit in 64 bits")]
    FieldTooLarge { p: u64, h: u32 },
    #[error("supplied modulus is reducible")]
    ReducibleModulus,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("F_(p^{r}) is not a subfield of F_(p^{h})")]
    NotASubfield { r: u32, h: u32 },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("coefficient literal not in the field: {0}")]
    CoefficientNotInField(String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("polynomials live over different fields or variable counts")]
    IncompatibleOperands,
    #[error("not a hypersurface: {0}")]
    NotAHypersurface(String),
    #[error("{0} is not a power of the characteristic {1}")]
    NotAPowerOfP(u64, u64),
    #[error("coefficients do not lie in F_{0}")]
    CoefficientsOutsideFq(u64),
    #[error("enumeration of {candidates} candidates exceeds the guard of {guard}")]
    GuardExceeded { candidates: u128, guard: u128 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("wrong shape: {0}")]
    WrongShape(String),
    #[error("invalid curve model: {0}")]
    InvalidCurve(String),
    #[error("no admissible center found up to F_{field_order}")]
    NoCenter { field_order: u64 },
    #[error("rank stalled at {rank} of {needed} rows before derivative order cap {cap}: coordinates are degenerate, or the cap or precision is too small")]
    CapExhausted { rank: usize, needed: usize, cap: u32 },
    #[error("rank stalled at {rank} of {needed} rows after rejecting rows at exhausted series precision {precision}; raise the precision")]
    PrecisionExhausted { rank: usize, needed: usize, precision: usize },
    #[error("non-generic center: {0}")]
    NonGenericCenter(String),
    #[error("unknown example {0}")]
    UnknownExample(String),
}
