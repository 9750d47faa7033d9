use thiserror::Error;

use crate::kernel::KernelValue;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid set expression: {0}")]
    InvalidSet(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("gamma function argument must be positive, got {0}")]
    GammaDomain(f64),

    #[error(
        "restriction mass {mass:.3e} is below the rejection-sampling threshold {threshold:.0e}; \
         use importance sampling instead"
    )]
    RestrictionTooSmall { mass: f64, threshold: f64 },

    #[error("singular input: x and y coincide")]
    SingularInput,

    #[error("kernel quadrature did not reach tolerance (best estimate {} +/- {})", best.value, best.error_bound)]
    ToleranceNotMet { best: KernelValue },

    #[error("operands overlap on a set of positive measure")]
    NotDisjoint,

    #[error("evaluation budget exhausted: need {needed} kernel evaluations, budget is {budget}")]
    BudgetExhausted { needed: u64, budget: u64 },

    #[error("hermite degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("quadrature order insufficient: {0}")]
    QuadratureOrder(String),

    #[error("sweep needs at least {required} rows, got {got}")]
    TooFewRows { required: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
