use std::ops::{Add, Mul, Neg, Sub};

use super::{merge_nodes, MonotoneGraph, PiecewiseConstant};
use crate::error::{Error, Result};
use crate::scalar::{diag, Scalar};

/// A continuous function, affine on each cell between consecutive breakpoints
/// and affine with a fixed slope beyond the first and last breakpoint.
///
/// Bounded components (`U`, `H`, `u`) use slope 0 outside the span; positions
/// and relabelings (`y`, `f`) use slope 1 so that `f - id` stays bounded.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinear<T> {
    xs: Vec<T>,
    ys: Vec<T>,
    left_slope: T,
    right_slope: T,
}

impl<T: Scalar> PiecewiseLinear<T> {
    pub fn new(xs: Vec<T>, ys: Vec<T>, left_slope: T, right_slope: T) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::Breakpoints(format!(
                "{} abscissae but {} ordinates",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::Breakpoints("at least two breakpoints required".into()));
        }
        if !xs.iter().chain(&ys).all(|v| v.is_finite())
            || !left_slope.is_finite()
            || !right_slope.is_finite()
        {
            return Err(Error::Breakpoints("non-finite value".into()));
        }
        if let Some(w) = xs.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::Breakpoints(format!(
                "{} is not below {}",
                diag(w[0]),
                diag(w[1])
            )));
        }
        Ok(Self { xs, ys, left_slope, right_slope })
    }

    /// Interpolates `points` and extends by constants.
    pub fn bounded(points: &[(T, T)]) -> Result<Self> {
        let (xs, ys) = points.iter().copied().unzip();
        Self::new(xs, ys, T::zero(), T::zero())
    }

    /// Interpolates `points` and extends with slope 1 (functions of the form `id + bounded`).
    pub fn unit_slope(points: &[(T, T)]) -> Result<Self> {
        let (xs, ys) = points.iter().copied().unzip();
        Self::new(xs, ys, T::one(), T::one())
    }

    pub fn identity() -> Self {
        Self {
            xs: vec![T::zero(), T::one()],
            ys: vec![T::zero(), T::one()],
            left_slope: T::one(),
            right_slope: T::one(),
        }
    }

    pub fn constant(c: T) -> Self {
        Self {
            xs: vec![T::zero(), T::one()],
            ys: vec![c, c],
            left_slope: T::zero(),
            right_slope: T::zero(),
        }
    }

    /// Builds the interpolant of `f` on the merged node set. `f` must be affine
    /// between consecutive nodes for the result to be exact.
    pub(crate) fn sample(
        nodes: Vec<T>,
        left_slope: T,
        right_slope: T,
        f: impl Fn(T) -> T,
    ) -> Self {
        let mut xs = merge_nodes(nodes);
        match xs.len() {
            0 => xs = vec![T::zero(), T::one()],
            1 => xs.push(xs[0] + T::one()),
            _ => {}
        }
        let ys = xs.iter().map(|&x| f(x)).collect();
        Self { xs, ys, left_slope, right_slope }
    }

    pub fn xs(&self) -> &[T] {
        &self.xs
    }

    pub fn ys(&self) -> &[T] {
        &self.ys
    }

    pub fn left_slope(&self) -> T {
        self.left_slope
    }

    pub fn right_slope(&self) -> T {
        self.right_slope
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first_x(&self) -> T {
        self.xs[0]
    }

    pub fn last_x(&self) -> T {
        self.xs[self.xs.len() - 1]
    }

    /// Value at `+inf` for constant right extension, otherwise the last node value.
    pub fn last_y(&self) -> T {
        self.ys[self.ys.len() - 1]
    }

    pub fn first_y(&self) -> T {
        self.ys[0]
    }

    pub fn eval(&self, x: T) -> T {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0] + self.left_slope * (x - self.xs[0]);
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1] + self.right_slope * (x - self.xs[n - 1]);
        }
        let i = self.xs.partition_point(|&v| v <= x);
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let (y0, y1) = (self.ys[i - 1], self.ys[i]);
        if x == x0 {
            return y0;
        }
        y0 + (y1 - y0) * ((x - x0) / (x1 - x0))
    }

    /// Slopes of the interior cells, in order.
    pub fn cell_slopes(&self) -> impl Iterator<Item = T> + '_ {
        self.xs
            .windows(2)
            .zip(self.ys.windows(2))
            .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
    }

    /// Smallest slope over all cells and both extensions.
    pub fn min_slope(&self) -> T {
        self.cell_slopes()
            .fold(self.left_slope.min(self.right_slope), T::min)
    }

    /// Largest slope over all cells and both extensions.
    pub fn max_slope(&self) -> T {
        self.cell_slopes()
            .fold(self.left_slope.max(self.right_slope), T::max)
    }

    fn monotone_tol(&self) -> T {
        let scale = self
            .ys
            .iter()
            .fold(T::one(), |m, &y| m.max(y.abs()));
        T::lit(8.0) * T::merge_tol() * scale
    }

    /// Errors on the first cell where the function decreases by more than rounding.
    pub fn check_nondecreasing(&self) -> Result<()> {
        let tol = self.monotone_tol();
        for i in 0..self.xs.len() - 1 {
            if self.ys[i + 1] < self.ys[i] - tol {
                return Err(Error::Decreasing {
                    left: diag(self.xs[i]),
                    right: diag(self.xs[i + 1]),
                    slope: diag((self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i])),
                });
            }
        }
        for (s, x) in [(self.left_slope, self.xs[0]), (self.right_slope, self.last_x())] {
            if s < T::zero() {
                return Err(Error::Decreasing { left: diag(x), right: diag(x), slope: diag(s) });
            }
        }
        Ok(())
    }

    /// For a nondecreasing function, the abscissae at which each target value
    /// is crossed strictly inside a cell or an extension. Targets hit exactly
    /// at a node, or lying on a flat cell, contribute nothing.
    pub fn preimages(&self, targets: &[T]) -> Vec<T> {
        let n = self.xs.len();
        let mut out = Vec::new();
        for &c in targets {
            if c < self.ys[0] {
                if self.left_slope > T::zero() {
                    out.push(self.xs[0] + (c - self.ys[0]) / self.left_slope);
                }
                continue;
            }
            if c > self.ys[n - 1] {
                if self.right_slope > T::zero() {
                    out.push(self.xs[n - 1] + (c - self.ys[n - 1]) / self.right_slope);
                }
                continue;
            }
            let i = self.ys.partition_point(|&v| v < c);
            if i == 0 || i >= n || self.ys[i] == c {
                continue;
            }
            let (x0, x1, y0, y1) = (self.xs[i - 1], self.xs[i], self.ys[i - 1], self.ys[i]);
            if y1 > y0 {
                let s = x0 + (c - y0) * ((x1 - x0) / (y1 - y0));
                out.push(s.max(x0).min(x1));
            }
        }
        out
    }

    /// `sum_i c_i f_i + offset` on the merged breakpoint set.
    pub fn lincomb(terms: &[(T, &Self)], offset: T) -> Self {
        let nodes = terms.iter().flat_map(|(_, f)| f.xs.iter().copied()).collect();
        let left = terms.iter().fold(T::zero(), |a, (c, f)| a + *c * f.left_slope);
        let right = terms.iter().fold(T::zero(), |a, (c, f)| a + *c * f.right_slope);
        Self::sample(nodes, left, right, |x| {
            terms.iter().fold(offset, |a, (c, f)| a + *c * f.eval(x))
        })
    }

    pub fn add_constant(&self, c: T) -> Self {
        Self {
            xs: self.xs.clone(),
            ys: self.ys.iter().map(|&y| y + c).collect(),
            left_slope: self.left_slope,
            right_slope: self.right_slope,
        }
    }

    /// `self - id`.
    pub fn sub_identity(&self) -> Self {
        Self::lincomb(&[(T::one(), self), (-T::one(), &Self::identity())], T::zero())
    }

    /// `self o inner`. The inner function must be nondecreasing; the result
    /// breaks at the inner breakpoints and at preimages of the outer ones.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        inner.check_nondecreasing()?;
        let mut nodes = inner.xs.clone();
        nodes.extend(inner.preimages(&self.xs));
        Ok(Self::sample(
            nodes,
            self.left_slope * inner.left_slope,
            self.right_slope * inner.right_slope,
            |x| self.eval(inner.eval(x)),
        ))
    }

    /// `g(v) = sup{x | f(x) < v}` for a strictly increasing `f` that is
    /// unbounded in both directions.
    pub fn pseudo_inverse(&self) -> Result<Self> {
        self.check_nondecreasing()?;
        MonotoneGraph::from_linear(self)?.pseudo_inverse()
    }

    /// Exact cell-wise derivative; tails carry the extension slopes.
    pub fn derivative(&self) -> PiecewiseConstant<T> {
        PiecewiseConstant::from_raw(
            self.xs.clone(),
            self.cell_slopes().collect(),
            self.left_slope,
            self.right_slope,
        )
    }

    /// Exact sup norm; infinite unless both extensions are constant.
    pub fn sup_norm(&self) -> T {
        if self.left_slope != T::zero() || self.right_slope != T::zero() {
            return T::infinity();
        }
        self.ys.iter().fold(T::zero(), |m, &y| m.max(y.abs()))
    }

    /// `||f||_inf + ||f'||_2`.
    pub fn norm_e2(&self) -> T {
        self.sup_norm() + self.derivative().l2_norm()
    }

    /// Same value as [`norm_e2`](Self::norm_e2); membership in `E1` additionally
    /// asks for a vanishing limit at `-inf`, which callers validate separately.
    pub fn norm_e1(&self) -> T {
        self.norm_e2()
    }

    /// Exact `sup |self - other|`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self - other).sup_norm()
    }
}

impl<'a, T: Scalar> Add<&'a PiecewiseLinear<T>> for &'a PiecewiseLinear<T> {
    type Output = PiecewiseLinear<T>;
    fn add(self, rhs: &'a PiecewiseLinear<T>) -> PiecewiseLinear<T> {
        PiecewiseLinear::lincomb(&[(T::one(), self), (T::one(), rhs)], T::zero())
    }
}

impl<'a, T: Scalar> Sub<&'a PiecewiseLinear<T>> for &'a PiecewiseLinear<T> {
    type Output = PiecewiseLinear<T>;
    fn sub(self, rhs: &'a PiecewiseLinear<T>) -> PiecewiseLinear<T> {
        PiecewiseLinear::lincomb(&[(T::one(), self), (-T::one(), rhs)], T::zero())
    }
}

impl<T: Scalar> Mul<T> for &PiecewiseLinear<T> {
    type Output = PiecewiseLinear<T>;
    fn mul(self, c: T) -> PiecewiseLinear<T> {
        PiecewiseLinear {
            xs: self.xs.clone(),
            ys: self.ys.iter().map(|&y| y * c).collect(),
            left_slope: self.left_slope * c,
            right_slope: self.right_slope * c,
        }
    }
}

impl<T: Scalar> Neg for &PiecewiseLinear<T> {
    type Output = PiecewiseLinear<T>;
    fn neg(self) -> PiecewiseLinear<T> {
        self * -T::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex26_y() -> PiecewiseLinear<f64> {
        PiecewiseLinear::unit_slope(&[(-1.0, -1.0), (1.0, 0.0), (1.5, 0.0), (3.5, 1.0)]).unwrap()
    }

    #[test]
    fn eval_on_flat_cell_and_extension() {
        let y = ex26_y();
        assert_eq!(y.eval(1.25), 0.0);
        assert_eq!(y.eval(3.5), 1.0);
        assert_eq!(y.eval(5.0), 2.5);
        assert_eq!(y.eval(-3.0), -3.0);
        assert_eq!(PiecewiseLinear::<f64>::identity().eval(7.0), 7.0);
    }

    #[test]
    fn rejects_malformed_breakpoints() {
        assert!(PiecewiseLinear::bounded(&[(0.0, 1.0)]).is_err());
        assert!(PiecewiseLinear::bounded(&[(1.0, 1.0), (0.0, 2.0)]).is_err());
        assert!(PiecewiseLinear::bounded(&[(0.0, f64::NAN), (1.0, 2.0)]).is_err());
        assert!(PiecewiseLinear::new(vec![0.0, 1.0], vec![0.0], 0.0, 0.0).is_err());
    }

    #[test]
    fn compose_with_identity() {
        let f = ex26_y();
        let id = PiecewiseLinear::identity();
        let a = f.compose(&id).unwrap();
        let b = id.compose(&f).unwrap();
        assert_eq!(a.max_abs_diff(&f), 0.0);
        assert_eq!(b.max_abs_diff(&f), 0.0);
    }

    #[test]
    fn compose_sampled_square() {
        // f = 2x on [0, 1]; g = PL interpolant of x^2 through 0, 1/2, 1.
        let f = PiecewiseLinear::<f64>::new(vec![0.0, 1.0], vec![0.0, 2.0], 2.0, 2.0).unwrap();
        let g = PiecewiseLinear::bounded(&[(0.0, 0.0), (0.5, 0.25), (1.0, 1.0)]).unwrap();
        let h = f.compose(&g).unwrap();
        for (x, v) in [(0.0, 0.0), (0.5, 0.5), (1.0, 2.0)] {
            assert!((h.eval(x) - v).abs() < 1e-15);
        }
    }

    #[test]
    fn compose_rejects_decreasing_inner() {
        let f = PiecewiseLinear::<f64>::identity();
        let g = PiecewiseLinear::bounded(&[(0.0, 1.0), (1.0, 0.0)]).unwrap();
        assert!(matches!(f.compose(&g), Err(Error::Decreasing { .. })));
    }

    #[test]
    fn pseudo_inverse_linear_cases() {
        let id = PiecewiseLinear::<f64>::identity();
        assert_eq!(id.pseudo_inverse().unwrap().max_abs_diff(&id), 0.0);
        let two = PiecewiseLinear::<f64>::new(vec![0.0, 1.0], vec![0.0, 2.0], 2.0, 2.0).unwrap();
        let half = two.pseudo_inverse().unwrap();
        for x in [-3.0, 0.0, 0.7, 2.0, 9.0] {
            assert!((half.eval(x) - x / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn pseudo_inverse_rejects_flat_and_decreasing() {
        let flat = ex26_y();
        assert!(matches!(flat.pseudo_inverse(), Err(Error::FlatCell { .. })));
        let dec = PiecewiseLinear::unit_slope(&[(0.0, 1.0), (1.0, 0.0)]).unwrap();
        assert!(matches!(dec.pseudo_inverse(), Err(Error::Decreasing { .. })));
        let bounded = PiecewiseLinear::bounded(&[(0.0, 0.0), (1.0, 1.0)]).unwrap();
        assert!(matches!(bounded.pseudo_inverse(), Err(Error::BoundedRange { .. })));
    }

    #[test]
    fn derivative_of_example_h() {
        let h = PiecewiseLinear::bounded(&[(-1.0, 0.0), (1.0, 1.0), (1.5, 1.5), (3.5, 2.5)]).unwrap();
        let d = h.derivative();
        assert_eq!(d.eval(0.0), 0.5);
        assert_eq!(d.eval(1.2), 1.0);
        assert_eq!(d.eval(2.0), 0.5);
        assert_eq!(d.eval(-5.0), 0.0);
        assert_eq!(d.eval(10.0), 0.0);
        // ||H||_inf = 5/2, ||H'||_2 = sqrt(3/2)
        assert_eq!(h.sup_norm(), 2.5);
        assert!((h.norm_e1() - (2.5 + 1.5f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn derivative_trivial_cases() {
        let c = PiecewiseLinear::constant(3.0);
        assert_eq!(c.derivative().sup_norm(), 0.0);
        let id = PiecewiseLinear::<f64>::identity().derivative();
        assert_eq!(id.eval(0.5), 1.0);
        assert_eq!(PiecewiseLinear::constant(0.0).norm_e2(), 0.0);
    }

    #[test]
    fn unbounded_functions_have_infinite_sup_norm() {
        assert!(PiecewiseLinear::<f64>::identity().sup_norm().is_infinite());
        assert_eq!(ex26_y().sub_identity().sup_norm(), 2.5);
    }

    #[test]
    fn preimages_include_extensions() {
        let y = ex26_y();
        let p = y.preimages(&[-2.0, -0.5, 0.0, 0.5, 4.0]);
        assert_eq!(p, vec![-2.0, 0.0, 2.5, 6.5]);
    }

    #[test]
    fn single_precision_smoke() {
        let f = PiecewiseLinear::<f32>::unit_slope(&[(0.0, 0.0), (1.0, 2.0)]).unwrap();
        let g = f.pseudo_inverse().unwrap();
        assert!((g.eval(1.0) - 0.5).abs() < 1e-6);
        assert!((f.compose(&g).unwrap().eval(1.7) - 1.7).abs() < 1e-5);
    }
}
