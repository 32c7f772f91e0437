use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("invalid rational {0:?}")]
    Rational(String),
    #[error("invalid monomial {0:?}")]
    Monomial(String),
    #[error("invalid operator expression {0:?}")]
    OpExpr(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),
    #[error("both factors carry a positive Segre index; the product is not a basis element")]
    TwoSegreFactors,
}

/// Internal-consistency failures of the integral pipeline. These indicate a bug,
/// never a recoverable input condition.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntegralError {
    #[error("n = {n}: pushforward result {value} is not divisible by {n}!")]
    InexactFactorial { n: u32, value: String },
    #[error("n = {n}: level-0 element has surviving symbol {monomial}")]
    SurvivingSymbols { n: u32, monomial: String },
    #[error("n = {n}: after {steps} pushforwards found {monomial} of degree {found}, expected {expected}")]
    Inhomogeneous {
        n: u32,
        steps: u32,
        monomial: String,
        found: i64,
        expected: i64,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("variable mismatch: {0} vs {1}")]
    VariableMismatch(char, char),
    #[error("truncation order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("series has constant term {0}, expected 1")]
    NonUnitConstant(String),
    #[error("exp needs a zero constant term, got {0}")]
    ExpConstant(String),
    #[error("series has zero constant term and cannot be inverted")]
    NotInvertible,
    #[error("substituted series must have zero constant term")]
    NonzeroConstantInSubstitution,
    #[error("fit needs at least three distinct d values other than 3, got {0:?}")]
    SingularFit(Vec<i64>),
    #[error("fit residual nonzero at z^{order} for d = {d}")]
    FitResidual { d: i64, order: usize },
    #[error("missing integral for n = {n}, d = {d}")]
    MissingIntegral { n: usize, d: i64 },
}

/// A checker or command was called outside its parameter domain.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid parameters: {0}")]
pub struct PreconditionError(pub String);

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache format: {0}")]
    Format(#[from] serde_json::Error),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Integral(#[from] IntegralError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error(transparent)]
    Precondition(#[from] PreconditionError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
