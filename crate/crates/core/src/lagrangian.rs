//! Lagrangian states `(y, U, H, r)`, the relabeling group and the projection onto
//! the normalized section `y + H = id`.

use crate::error::{Error, Result};
use crate::func::{PiecewiseConstant, PiecewiseLinear};
use crate::scalar::{diag, Scalar};
use crate::validation::{close, Side, Violation, F0_TOL, MIN_WITNESS};

#[derive(Clone, Debug, PartialEq)]
pub struct LagrangianState<T> {
    y: PiecewiseLinear<T>,
    u: PiecewiseLinear<T>,
    h: PiecewiseLinear<T>,
    r: PiecewiseConstant<T>,
    h_inf: T,
}

/// Outcome of [`LagrangianState::validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct LagrangianReport<T> {
    pub violations: Vec<Violation>,
    /// `y + H = id` within [`F0_TOL`].
    pub in_f0: bool,
    /// `min (y' + H')` over all cells and extensions.
    pub witness: T,
}

impl<T> LagrangianReport<T> {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl<T: Scalar> LagrangianState<T> {
    /// Assembles a state; `H_inf` is read off the right extension of `H`.
    pub fn new(
        y: PiecewiseLinear<T>,
        u: PiecewiseLinear<T>,
        h: PiecewiseLinear<T>,
        r: PiecewiseConstant<T>,
    ) -> Self {
        let h_inf = h.last_y();
        Self { y, u, h, r, h_inf }
    }

    /// The vacuum `(id, 0, 0, 0)`.
    pub fn vacuum() -> Self {
        Self::new(
            PiecewiseLinear::identity(),
            PiecewiseLinear::constant(T::zero()),
            PiecewiseLinear::constant(T::zero()),
            PiecewiseConstant::zero(),
        )
    }

    pub fn y(&self) -> &PiecewiseLinear<T> {
        &self.y
    }

    pub fn u(&self) -> &PiecewiseLinear<T> {
        &self.u
    }

    pub fn h(&self) -> &PiecewiseLinear<T> {
        &self.h
    }

    pub fn r(&self) -> &PiecewiseConstant<T> {
        &self.r
    }

    /// `lim_{xi -> inf} H = sup H`.
    pub fn h_inf(&self) -> T {
        self.h_inf
    }

    /// `y + H`, the relabeling that [`project_f0`](Self::project_f0) inverts.
    pub fn y_plus_h(&self) -> PiecewiseLinear<T> {
        &self.y + &self.h
    }

    /// `sup |y + H - id|`.
    pub fn normalization_defect(&self) -> T {
        self.y_plus_h().sub_identity().sup_norm()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalization_defect() <= T::lit(F0_TOL)
    }

    /// Checks membership in `F` cell-wise on the merged grid of all components,
    /// and flags membership in `F_0`.
    pub fn validate(&self, tol: f64) -> LagrangianReport<T> {
        let mut v = Vec::new();
        let ext = [
            ("y", &self.y, T::one()),
            ("U", &self.u, T::zero()),
            ("H", &self.h, T::zero()),
        ];
        for (name, f, expected) in ext {
            if !f.ys().iter().all(|x| x.is_finite()) {
                v.push(Violation::NonFinite { component: name });
            }
            for (side, s) in [(Side::Left, f.left_slope()), (Side::Right, f.right_slope())] {
                if s != expected {
                    v.push(Violation::Extension {
                        component: name,
                        side,
                        slope: diag(s),
                        expected: diag(expected),
                    });
                }
            }
        }
        if !self.r.has_zero_tails() {
            v.push(Violation::NonzeroTail { component: "r" });
        }
        if !self.r.values().iter().all(|x| x.is_finite()) {
            v.push(Violation::NonFinite { component: "r" });
        }
        if self.h.first_y().abs() > T::lit(tol) {
            v.push(Violation::LeftLimit { component: "H", value: diag(self.h.first_y()) });
        }

        let yx = self.y.derivative();
        let ux = self.u.derivative();
        let hx = self.h.derivative();
        // Merged grid of all four components; values are read back at midpoints.
        let grid = yx
            .zip_with(&ux, |a, _| a)
            .zip_with(&hx, |a, _| a)
            .zip_with(&self.r, |a, _| a);
        let mut witness = T::infinity();
        let mut check = |a: T, b: T, x: T| {
            let (dy, du, dh, r) = (yx.eval(x), ux.eval(x), hx.eval(x), self.r.eval(x));
            let scale = T::lit(tol) * dy.abs().max(dh.abs()).max(T::one());
            for (name, d) in [("y'", dy), ("H'", dh)] {
                if d < -scale {
                    v.push(Violation::Negative {
                        component: name,
                        left: diag(a),
                        right: diag(b),
                        value: diag(d),
                    });
                }
            }
            witness = witness.min(dy + dh);
            if dy + dh < T::lit(MIN_WITNESS) {
                v.push(Violation::Degenerate { left: diag(a), right: diag(b), value: diag(dy + dh) });
            }
            let (lhs, rhs) = (diag(dy * dh), diag(du * du + r * r));
            if !close(lhs, rhs, tol) {
                v.push(Violation::Compatibility {
                    identity: "y' H' = U'^2 + r^2",
                    left: diag(a),
                    right: diag(b),
                    lhs,
                    rhs,
                });
            }
        };
        let b = grid.breaks();
        if let (Some(&first), Some(&last)) = (b.first(), b.last()) {
            check(-T::infinity(), first, first - T::one());
            for w in b.windows(2) {
                check(w[0], w[1], (w[0] + w[1]) / T::lit(2.0));
            }
            check(last, T::infinity(), last + T::one());
        } else {
            check(-T::infinity(), T::infinity(), T::zero());
        }

        LagrangianReport { violations: v, in_f0: self.is_normalized(), witness }
    }

    /// `X . f = (y o f, U o f, H o f, (r o f) f')`.
    pub fn relabel(&self, f: &Relabeling<T>) -> Result<Self> {
        let f = f.as_linear();
        Ok(Self::new(
            self.y.compose(f)?,
            self.u.compose(f)?,
            self.h.compose(f)?,
            self.r.pullback(f)?,
        ))
    }

    /// The projection `X . (y + H)^{-1}` onto `F_0`.
    pub fn project_f0(&self) -> Result<Self> {
        let g = self.y_plus_h();
        let c = g.min_slope();
        if !(c >= T::lit(MIN_WITNESS)) {
            return Err(Error::Degenerate(diag(c)));
        }
        let inv = Relabeling::new(g)?.inverse()?;
        self.relabel(&inv)
    }

    /// Node-wise agreement: the largest sup-distance over the four components
    /// (`r` compared through its antiderivative is not used here; it is compared directly).
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.y
            .max_abs_diff(&other.y)
            .max(self.u.max_abs_diff(&other.u))
            .max(self.h.max_abs_diff(&other.h))
            .max(self.r.max_abs_diff(&other.r))
    }
}

/// A strictly increasing piecewise-linear homeomorphism with `f - id` bounded.
#[derive(Clone, Debug, PartialEq)]
pub struct Relabeling<T> {
    f: PiecewiseLinear<T>,
}

impl<T: Scalar> Relabeling<T> {
    pub fn new(f: PiecewiseLinear<T>) -> Result<Self> {
        if f.left_slope() != T::one() || f.right_slope() != T::one() {
            return Err(Error::Relabeling(format!(
                "extension slopes must be 1, got {} and {}",
                diag(f.left_slope()),
                diag(f.right_slope())
            )));
        }
        let min = f.min_slope();
        if !(min > T::zero()) {
            return Err(Error::Relabeling(format!(
                "not strictly increasing (min slope {})",
                diag(min)
            )));
        }
        Ok(Self { f })
    }

    pub fn identity() -> Self {
        Self { f: PiecewiseLinear::identity() }
    }

    /// Piecewise-linear homeomorphism through `points`, slope 1 outside.
    pub fn from_points(points: &[(T, T)]) -> Result<Self> {
        Self::new(PiecewiseLinear::unit_slope(points)?)
    }

    pub fn as_linear(&self) -> &PiecewiseLinear<T> {
        &self.f
    }

    pub fn eval(&self, x: T) -> T {
        self.f.eval(x)
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(Self { f: self.f.pseudo_inverse()? })
    }

    /// `self o inner`, so that `X . self . inner = X . (self o inner)`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        Self::new(self.f.compose(&inner.f)?)
    }

    pub fn min_slope(&self) -> T {
        self.f.min_slope()
    }

    pub fn max_slope(&self) -> T {
        self.f.max_slope()
    }
}
