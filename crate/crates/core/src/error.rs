use thiserror::Error;

use crate::validation::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("breakpoints must be finite and strictly increasing ({0})")]
    Breakpoints(String),
    #[error("function is decreasing on cell [{left}, {right}] (slope {slope})")]
    Decreasing { left: f64, right: f64, slope: f64 },
    #[error("function has a flat cell [{left}, {right}]; its pseudo-inverse would jump")]
    FlatCell { left: f64, right: f64 },
    #[error("function must be unbounded in both directions (extension slopes {left}, {right})")]
    BoundedRange { left: f64, right: f64 },
    #[error("negative weight {value} on cell [{left}, {right}]")]
    NegativeWeight { left: f64, right: f64, value: f64 },
    #[error("weight must vanish outside its breakpoint span")]
    NonzeroTail,
    #[error("invalid relabeling: {0}")]
    Relabeling(String),
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("velocity is not constant on collapsed cell [{left}, {right}] ({a} vs {b})")]
    CollapsedVelocity { left: f64, right: f64, a: f64, b: f64 },
    #[error("state fails validation: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("state is not in F_0 (sup |y + H - id| = {0})")]
    NotNormalized(f64),
    #[error("y + H is not bounded below by a positive constant (min slope {0})")]
    Degenerate(f64),
    #[error("M and M o Pi disagree by {0}")]
    PathMismatch(f64),
    #[error("{0} is outside the valid range of the example")]
    OutOfRange(f64),
    #[error("time nodes must start at 0 and increase")]
    TimeNodes,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
