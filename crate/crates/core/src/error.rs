use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRatError {
    #[error("malformed rational {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("coefficient denominators have lcm {0}, too large for residue enumeration")]
    ModulusTooLarge(String),
    #[error("operation needs a nonzero polynomial")]
    ZeroPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChernDataError {
    #[error("half-dimension must be positive")]
    ZeroDimension,
    #[error("partition {parts:?} does not sum to n = {n}")]
    WeightMismatch { n: u32, parts: Vec<u32> },
    #[error("partition {0:?} contains a zero part or is empty")]
    BadPartition(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("not in span: nonzero residual {residual}")]
    NotInSpan { residual: String },
    #[error("cannot decompose the zero polynomial")]
    ZeroPolynomial,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("k must be at least 1")]
    DegreeZero,
    #[error("expected {expected} real roots, isolated {found}")]
    RootCount { expected: usize, found: usize },
    #[error("root {index} = {found} deviates from closed form {expected} by more than 1e-9")]
    Deviation {
        index: usize,
        found: f64,
        expected: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("polynomial has degree {found:?}, expected {expected}")]
    BadDegree { expected: u32, found: Option<usize> },
    #[error("leading coefficient {0} is not positive")]
    NonPositiveLeading(String),
    #[error("bad constant term {found}, expected {expected}")]
    BadConstantTerm { expected: u32, found: String },
    #[error("no symmetry: p(-T-s) != (-1)^n p(T) for every s")]
    NoSymmetry,
    #[error("A_X = {0} out of range (0, 1)")]
    AOutOfRange(String),
    #[error("factorization failed: residual {0}")]
    FactorizationFailed(String),
    #[error("n_X must be nonzero")]
    ZeroShift,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnError {
    #[error("n must be at least 1")]
    ZeroN,
    #[error("search bound {cap} reached without a certified gcd (last value {last})")]
    SearchCapExceeded { cap: u64, last: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("unsupported case n = {n}, a = {a}: only n = 3 with a in {{1, 2}} is fully mechanized")]
    UnsupportedCase { n: u32, a: u64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Cn(#[from] CnError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
