//! Exact calculus on continuous piecewise-linear and piecewise-constant functions.
//!
//! Every operation emits the exact breakpoint set it needs; nothing is resampled
//! onto a fixed grid. Breakpoints closer than `merge_tol * max(span, 1)` are
//! treated as coincident.

mod constant;
mod graph;
mod linear;

pub use constant::PiecewiseConstant;
pub use graph::MonotoneGraph;
pub use linear::PiecewiseLinear;

use crate::scalar::Scalar;

/// Sorts, drops non-finite entries and merges nodes that are closer than the
/// merge tolerance relative to the span of the list.
pub(crate) fn merge_nodes<T: Scalar>(mut nodes: Vec<T>) -> Vec<T> {
    nodes.retain(|x| x.is_finite());
    nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let Some((&first, &last)) = nodes.first().zip(nodes.last()) else {
        return nodes;
    };
    let tol = T::merge_tol() * (last - first).max(T::one());
    let mut out: Vec<T> = Vec::with_capacity(nodes.len());
    for x in nodes {
        match out.last() {
            Some(&prev) if x - prev <= tol => {}
            _ => out.push(x),
        }
    }
    out
}

/// Norm of the ambient space `B = E2 x E2 x E1 x L2` applied to a quadruple of
/// differences `(dy, dU, dH, dr)`.
///
/// `dy` must already have constant extensions (a difference of two `id + bounded`
/// functions, or `y - id`).
pub fn norm_b<T: Scalar>(
    dy: &PiecewiseLinear<T>,
    du: &PiecewiseLinear<T>,
    dh: &PiecewiseLinear<T>,
    dr: &PiecewiseConstant<T>,
) -> T {
    dy.norm_e2() + du.norm_e2() + dh.norm_e1() + dr.l2_norm()
}
