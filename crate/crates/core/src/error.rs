use thiserror::Error;

/// Errors produced by construction, integration, fitting and diagnostics.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid derivator: {0}")]
    InvalidDerivator(String),
    #[error("nonpositive gap {gap} at jump abscissa {at}")]
    NonpositiveGap { at: f64, gap: f64 },
    #[error("argument {x} outside the derivator domain [{a}, {b}]")]
    OutOfDomain { x: f64, a: f64, b: f64 },
    #[error("right limit undefined at the right endpoint {b}")]
    RightLimitAtEnd { b: f64 },
    #[error("empty interval bounds reversed: {c} > {e}")]
    ReversedInterval { c: f64, e: f64 },
    #[error("quadrature tolerance {requested:e} not reached (best {achieved:e}, {subintervals} subintervals)")]
    ToleranceNotReached {
        requested: f64,
        achieved: f64,
        subintervals: usize,
    },
    #[error("difference quotient did not converge at {at} (last spread {spread:e})")]
    NonConvergentQuotient { at: f64, spread: f64 },
    #[error("Stieltjes derivative undefined: flat component around {at} reaches the right endpoint")]
    FlatReachesEnd { at: f64 },
    #[error("null g-measure on [{x1}, {x2})")]
    NullMeasure { x1: f64, x2: f64 },
    #[error("degree {n} exceeds the binomial overflow guard (max {max})")]
    DegreeTooLarge { n: usize, max: usize },
    #[error("target varies on a flat segment of g (spread {spread:e} at [{lo}, {hi}])")]
    VariesOnFlat { lo: f64, hi: f64, spread: f64 },
    #[error("rank-deficient design matrix (condition estimate {cond:e})")]
    RankDeficient { cond: f64 },
    #[error("inconsistent point-constraint system (residual {residual:e})")]
    InconsistentSystem { residual: f64 },
    #[error("ODE step size underflow at {at} (h = {h:e})")]
    StepSizeUnderflow { at: f64, h: f64 },
    #[error("degenerate interpolation interval [{lo}, {hi}]")]
    DegenerateInterval { lo: f64, hi: f64 },
    #[error("{0} is not a jump abscissa")]
    NotAJump(f64),
    #[error("monomial family is null at center {0}")]
    NullFamily(f64),
    #[error("partition is not sorted or not contained in the domain")]
    BadPartition,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;
