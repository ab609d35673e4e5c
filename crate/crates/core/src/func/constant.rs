use super::{merge_nodes, PiecewiseLinear};
use crate::error::{Error, Result};
use crate::scalar::{diag, Scalar};

/// A function that is constant on each cell `[b_i, b_{i+1})` of a finite
/// breakpoint list and equal to fixed tail values outside it.
///
/// Densities, `r` and `rho` have zero tails. Derivatives of piecewise-linear
/// functions carry the extension slopes as tails.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseConstant<T> {
    breaks: Vec<T>,
    values: Vec<T>,
    left: T,
    right: T,
}

impl<T: Scalar> PiecewiseConstant<T> {
    pub fn new(breaks: Vec<T>, values: Vec<T>) -> Result<Self> {
        Self::with_tails(breaks, values, T::zero(), T::zero())
    }

    pub fn with_tails(breaks: Vec<T>, values: Vec<T>, left: T, right: T) -> Result<Self> {
        if breaks.is_empty() && values.is_empty() {
            return Ok(Self::from_raw(breaks, values, left, right));
        }
        if breaks.len() != values.len() + 1 {
            return Err(Error::Breakpoints(format!(
                "{} breakpoints for {} cells",
                breaks.len(),
                values.len()
            )));
        }
        if !breaks.iter().chain(&values).all(|v| v.is_finite()) {
            return Err(Error::Breakpoints("non-finite value".into()));
        }
        if let Some(w) = breaks.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::Breakpoints(format!(
                "{} is not below {}",
                diag(w[0]),
                diag(w[1])
            )));
        }
        Ok(Self::from_raw(breaks, values, left, right))
    }

    pub(crate) fn from_raw(breaks: Vec<T>, values: Vec<T>, left: T, right: T) -> Self {
        if values.is_empty() {
            return Self { breaks: Vec::new(), values, left, right };
        }
        Self { breaks, values, left, right }
    }

    pub fn zero() -> Self {
        Self::from_raw(Vec::new(), Vec::new(), T::zero(), T::zero())
    }

    /// `value` on `[a, b)`, zero elsewhere.
    pub fn indicator(a: T, b: T, value: T) -> Result<Self> {
        Self::new(vec![a, b], vec![value])
    }

    /// Builds a zero-tailed function from sorted, non-overlapping `(left, right, value)`
    /// segments; gaps between segments are zero.
    pub fn from_segments(segments: &[(T, T, T)]) -> Result<Self> {
        let mut breaks: Vec<T> = Vec::with_capacity(segments.len() + 1);
        let mut values: Vec<T> = Vec::with_capacity(segments.len());
        for &(a, b, v) in segments {
            if !(b > a) {
                return Err(Error::Breakpoints(format!(
                    "empty segment [{}, {}]",
                    diag(a),
                    diag(b)
                )));
            }
            match breaks.last() {
                None => breaks.push(a),
                Some(&last) if last == a => {}
                Some(&last) if last < a => {
                    values.push(T::zero());
                    breaks.push(a);
                }
                Some(&last) => {
                    return Err(Error::Breakpoints(format!(
                        "segment starting at {} overlaps previous ending at {}",
                        diag(a),
                        diag(last)
                    )))
                }
            }
            values.push(v);
            breaks.push(b);
        }
        Self::new(breaks, values)
    }

    pub fn breaks(&self) -> &[T] {
        &self.breaks
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn tails(&self) -> (T, T) {
        (self.left, self.right)
    }

    pub fn has_zero_tails(&self) -> bool {
        self.left == T::zero() && self.right == T::zero()
    }

    pub fn num_cells(&self) -> usize {
        self.values.len()
    }

    /// Interior cells as `(left, right, value)`.
    pub fn cells(&self) -> impl Iterator<Item = (T, T, T)> + '_ {
        self.breaks
            .windows(2)
            .zip(&self.values)
            .map(|(w, &v)| (w[0], w[1], v))
    }

    pub fn eval(&self, x: T) -> T {
        let n = self.breaks.len();
        if n == 0 || x < self.breaks[0] {
            return self.left;
        }
        if x >= self.breaks[n - 1] {
            return self.right;
        }
        self.values[self.breaks.partition_point(|&b| b <= x) - 1]
    }

    /// Integral over the breakpoint span (tails excluded).
    pub fn integral(&self) -> T {
        self.cells().fold(T::zero(), |acc, (a, b, v)| acc + v * (b - a))
    }

    /// Exact L2 norm; infinite when a tail is nonzero.
    pub fn l2_norm(&self) -> T {
        if !self.has_zero_tails() {
            return T::infinity();
        }
        self.cells()
            .fold(T::zero(), |acc, (a, b, v)| acc + v * v * (b - a))
            .sqrt()
    }

    pub fn sup_norm(&self) -> T {
        self.values
            .iter()
            .fold(self.left.abs().max(self.right.abs()), |m, &v| m.max(v.abs()))
    }

    /// Smallest value attained, tails included.
    pub fn min_value(&self) -> T {
        self.values.iter().fold(self.left.min(self.right), |m, &v| m.min(v))
    }

    pub fn max_value(&self) -> T {
        self.values.iter().fold(self.left.max(self.right), |m, &v| m.max(v))
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::from_raw(
            self.breaks.clone(),
            self.values.iter().map(|&v| f(v)).collect(),
            f(self.left),
            f(self.right),
        )
    }

    /// Combines two functions cell-wise on the merged breakpoint grid.
    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        let mut nodes = self.breaks.clone();
        nodes.extend_from_slice(&other.breaks);
        let nodes = merge_nodes(nodes);
        let values = nodes
            .windows(2)
            .map(|w| {
                let mid = (w[0] + w[1]) / T::lit(2.0);
                f(self.eval(mid), other.eval(mid))
            })
            .collect();
        Self::from_raw(nodes, values, f(self.left, other.left), f(self.right, other.right))
    }

    /// `(w o f) * f'` for a nondecreasing piecewise-linear `f`: the density that
    /// pulls back under relabeling. Cells where `f` is flat get value 0.
    pub fn pullback(&self, f: &PiecewiseLinear<T>) -> Result<Self> {
        f.check_nondecreasing()?;
        let mut nodes = f.xs().to_vec();
        nodes.extend(f.preimages(&self.breaks));
        let nodes = merge_nodes(nodes);
        let values = nodes
            .windows(2)
            .map(|w| {
                let (fa, fb) = (f.eval(w[0]), f.eval(w[1]));
                if fb <= fa {
                    return T::zero();
                }
                let slope = (fb - fa) / (w[1] - w[0]);
                slope * self.eval(f.eval((w[0] + w[1]) / T::lit(2.0)))
            })
            .collect();
        Ok(Self::from_raw(
            nodes,
            values,
            self.left * f.left_slope(),
            self.right * f.right_slope(),
        )
        .simplified())
    }

    /// Merges adjacent cells with identical values, and end cells equal to their tail.
    pub fn simplified(&self) -> Self {
        let mut breaks: Vec<T> = Vec::with_capacity(self.breaks.len());
        let mut values: Vec<T> = Vec::with_capacity(self.values.len());
        for (a, b, v) in self.cells() {
            if breaks.is_empty() {
                if v == self.left {
                    continue;
                }
                breaks.push(a);
            } else if values.last() == Some(&v) {
                *breaks.last_mut().expect("non-empty") = b;
                continue;
            } else if *breaks.last().expect("non-empty") < a {
                values.push(self.left);
                breaks.push(a);
            }
            values.push(v);
            breaks.push(b);
        }
        while values.last() == Some(&self.right) {
            values.pop();
            breaks.pop();
        }
        if values.is_empty() {
            breaks.clear();
        }
        Self::from_raw(breaks, values, self.left, self.right)
    }

    /// `F(x) = int_{b_0}^x w`, extended with the tail values as slopes.
    pub fn antiderivative(&self) -> PiecewiseLinear<T> {
        if self.breaks.is_empty() {
            return PiecewiseLinear::sample(vec![T::zero(), T::one()], self.left, self.right, |x| {
                self.left * x
            });
        }
        let mut acc = T::zero();
        let mut ys = Vec::with_capacity(self.breaks.len());
        ys.push(acc);
        for (a, b, v) in self.cells() {
            acc = acc + v * (b - a);
            ys.push(acc);
        }
        PiecewiseLinear::new(self.breaks.clone(), ys, self.left, self.right)
            .expect("breakpoints already validated")
    }

    /// `sup |self - other|` on the merged grid.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.zip_with(other, |a, b| (a - b).abs()).sup_norm()
    }
}
