use super::PiecewiseLinear;
use crate::error::{Error, Result};
use crate::scalar::{diag, Scalar};

/// Graph of a nondecreasing function that may jump: an ordered list of points
/// where consecutive points either span an affine piece or, sharing the same
/// abscissa, a vertical jump. Extended with positive slopes on both sides.
///
/// Distribution-type functions such as `x + mu((-inf, x))` live here; their
/// pseudo-inverse is continuous, with a flat cell for every jump.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneGraph<T> {
    xs: Vec<T>,
    vs: Vec<T>,
    left_slope: T,
    right_slope: T,
}

impl<T: Scalar> MonotoneGraph<T> {
    pub fn new(points: Vec<(T, T)>, left_slope: T, right_slope: T) -> Result<Self> {
        if !(left_slope > T::zero() && right_slope > T::zero()) {
            return Err(Error::BoundedRange { left: diag(left_slope), right: diag(right_slope) });
        }
        let mut xs: Vec<T> = Vec::with_capacity(points.len());
        let mut vs: Vec<T> = Vec::with_capacity(points.len());
        for (x, v) in points {
            if !x.is_finite() || !v.is_finite() {
                return Err(Error::Breakpoints("non-finite graph point".into()));
            }
            if let (Some(&px), Some(&pv)) = (xs.last(), vs.last()) {
                if x < px || v < pv {
                    return Err(Error::Decreasing {
                        left: diag(px),
                        right: diag(x),
                        slope: diag(v - pv),
                    });
                }
                if x == px && v == pv {
                    continue;
                }
            }
            xs.push(x);
            vs.push(v);
        }
        if xs.is_empty() {
            return Err(Error::Breakpoints("empty graph".into()));
        }
        Ok(Self { xs, vs, left_slope, right_slope })
    }

    pub(crate) fn from_linear(f: &PiecewiseLinear<T>) -> Result<Self> {
        // Rounding may leave tiny decreases; clamp them to flat.
        let mut pts: Vec<(T, T)> = Vec::with_capacity(f.len());
        for (&x, &y) in f.xs().iter().zip(f.ys()) {
            let y = pts.last().map_or(y, |&(_, p): &(T, T)| y.max(p));
            pts.push((x, y));
        }
        Self::new(pts, f.left_slope(), f.right_slope())
    }

    pub fn points(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.xs.iter().copied().zip(self.vs.iter().copied())
    }

    /// Evaluates the right-continuous version of the graph.
    pub fn eval_right(&self, x: T) -> T {
        let n = self.xs.len();
        if x < self.xs[0] {
            return self.vs[0] + self.left_slope * (x - self.xs[0]);
        }
        if x >= self.xs[n - 1] {
            return self.vs[n - 1] + self.right_slope * (x - self.xs[n - 1]);
        }
        let i = self.xs.partition_point(|&p| p <= x);
        let (x0, x1, v0, v1) = (self.xs[i - 1], self.xs[i], self.vs[i - 1], self.vs[i]);
        v0 + (v1 - v0) * ((x - x0) / (x1 - x0))
    }

    /// `g(v) = sup{x | F(x) < v}` as a continuous piecewise-linear function.
    /// Jumps of the graph become flat cells; flat pieces of positive length
    /// would make `g` jump and are rejected.
    pub fn pseudo_inverse(&self) -> Result<PiecewiseLinear<T>> {
        let n = self.xs.len();
        let span_x = self.xs[n - 1] - self.xs[0];
        let span_v = self.vs[n - 1] - self.vs[0];
        let tol_x = T::merge_tol() * span_x.max(T::one());
        let tol_v = T::merge_tol() * span_v.max(T::one());
        let mut nodes: Vec<T> = Vec::with_capacity(n);
        let mut vals: Vec<T> = Vec::with_capacity(n);
        for i in 0..n {
            let (x, v) = (self.xs[i], self.vs[i]);
            if let (Some(&pv), Some(&px)) = (nodes.last(), vals.last()) {
                if v - pv <= tol_v {
                    if x - px > tol_x {
                        return Err(Error::FlatCell { left: diag(px), right: diag(x) });
                    }
                    continue;
                }
            }
            nodes.push(v);
            vals.push(x);
        }
        if nodes.len() == 1 {
            nodes.push(nodes[0] + self.right_slope);
            vals.push(vals[0] + T::one());
        }
        PiecewiseLinear::new(nodes, vals, T::one() / self.left_slope, T::one() / self.right_slope)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `G(x) = x + mu((-inf, x))` for the example measure with density 1 on
    /// (-1, 1) and an atom of mass 1/2 at 0.
    fn example_distribution() -> MonotoneGraph<f64> {
        MonotoneGraph::new(
            vec![(-1.0, -1.0), (0.0, 1.0), (0.0, 1.5), (1.0, 3.5)],
            1.0,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn jump_becomes_flat_cell() {
        let y = example_distribution().pseudo_inverse().unwrap();
        // y(xi) = 0 on [1, 3/2]
        for xi in [1.0, 1.1, 1.25, 1.5] {
            assert_eq!(y.eval(xi), 0.0);
        }
        assert_eq!(y.eval(0.0), -0.5);
        assert_eq!(y.eval(2.5), 0.5);
        assert_eq!(y.eval(3.5), 1.0);
        assert_eq!(y.eval(5.0), 2.5);
        assert_eq!(y.eval(-4.0), -4.0);
    }

    #[test]
    fn right_continuous_evaluation() {
        let g = example_distribution();
        assert_eq!(g.eval_right(0.0), 1.5);
        assert_eq!(g.eval_right(-0.5), 0.0);
        assert_eq!(g.eval_right(2.0), 4.5);
    }

    #[test]
    fn rejects_decreasing_and_bounded() {
        assert!(MonotoneGraph::new(vec![(0.0, 1.0), (1.0, 0.0)], 1.0, 1.0).is_err());
        assert!(MonotoneGraph::new(vec![(0.0, 0.0), (1.0, 1.0)], 0.0, 1.0).is_err());
    }
}
