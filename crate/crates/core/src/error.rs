use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("term x^{exponent} in `{var}` lies below the allowed pole order {floor}")]
    PoleTooDeep { var: String, exponent: i64, floor: i64 },

    #[error("series variables differ: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },

    #[error("series is not invertible: {0}")]
    NotInvertible(String),

    #[error("coefficient {exponent:?} requested beyond truncation order {order:?}")]
    BeyondOrder { exponent: Vec<i64>, order: Vec<i64> },

    #[error("size mismatch: |lambda| = {partition}, |rho| = {class}")]
    SizeMismatch { partition: usize, class: usize },

    #[error("no block supplied for subset {0:?}")]
    MissingBlock(Vec<usize>),

    #[error("intermediate state of energy {energy} exceeds the cap {cap}")]
    EnergyCap { energy: i64, cap: i64 },

    #[error("group-algebra oracle limited to d <= {cap}, got d = {d}")]
    OracleCap { d: usize, cap: usize },

    #[error("inconsistent samples at grid point {0:?}")]
    InconsistentSample(Vec<i64>),

    #[error("samples do not form a full tensor grid: {0}")]
    NotAGrid(String),

    #[error("operator coefficient is singular: {0}")]
    Singular(String),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("cache file: {0}")]
    Cache(String),
}
