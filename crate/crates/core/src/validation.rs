//! Structured invariant violations reported by the state validators.

use std::fmt;

/// Default relative tolerance for the compatibility identities.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Tolerance on `sup |y + H - id|` for membership in `F_0`.
pub const F0_TOL: f64 = 1e-10;

/// Smallest admissible witness `c` in `y' + H' >= c`.
pub const MIN_WITNESS: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    NonFinite { component: &'static str },
    /// Extension slope outside the span differs from the one the component requires.
    Extension { component: &'static str, side: Side, slope: f64, expected: f64 },
    NonzeroTail { component: &'static str },
    /// `H(-inf)` must vanish.
    LeftLimit { component: &'static str, value: f64 },
    Negative { component: &'static str, left: f64, right: f64, value: f64 },
    NegativeAtom { x: f64, mass: f64 },
    /// Two sides of a cell-wise identity disagree.
    Compatibility { identity: &'static str, left: f64, right: f64, lhs: f64, rhs: f64 },
    /// `y' + H'` is not bounded below by a positive constant.
    Degenerate { left: f64, right: f64, value: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFinite { component } => write!(f, "{component}: non-finite value"),
            Violation::Extension { component, side, slope, expected } => write!(
                f,
                "{component}: {side} extension slope {slope} (expected {expected})"
            ),
            Violation::NonzeroTail { component } => {
                write!(f, "{component}: must vanish outside its breakpoint span")
            }
            Violation::LeftLimit { component, value } => {
                write!(f, "{component}: limit at -inf is {value}, expected 0")
            }
            Violation::Negative { component, left, right, value } => {
                write!(f, "{component}: negative value {value} on [{left}, {right}]")
            }
            Violation::NegativeAtom { x, mass } => write!(f, "mu: atom at {x} has mass {mass}"),
            Violation::Compatibility { identity, left, right, lhs, rhs } => write!(
                f,
                "{identity} fails on [{left}, {right}]: {lhs} vs {rhs}"
            ),
            Violation::Degenerate { left, right, value } => write!(
                f,
                "y' + H' = {value} on [{left}, {right}] is not bounded away from 0"
            ),
        }
    }
}

/// `|lhs - rhs| <= tol * max(1, |lhs|, |rhs|)`.
pub(crate) fn close(lhs: f64, rhs: f64, tol: f64) -> bool {
    (lhs - rhs).abs() <= tol * lhs.abs().max(rhs.abs()).max(1.0)
}
