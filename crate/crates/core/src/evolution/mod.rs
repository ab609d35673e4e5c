//! The explicit Lagrangian semigroup `S_t`, wave-breaking times, the Eulerian
//! flow `T_t = M o Pi o S_t o L` and weak-form residuals along it.

mod residual;

pub use residual::{
    uniform_nodes, weak_residual, Residual, SpatialProfile, TemporalProfile, TestFunction,
    Trajectory,
};

use crate::error::{Error, Result};
use crate::eulerian::EulerianState;
use crate::func::PiecewiseLinear;
use crate::lagrangian::LagrangianState;
use crate::scalar::{diag, Scalar};
use crate::transform::{to_eulerian, to_lagrangian};

/// Agreement required between `M o S_t` and `M o Pi o S_t`.
pub const PATH_TOL: f64 = 1e-10;

/// Leading coefficients `H_0'` at or below this are treated as zero.
pub const LINEAR_CELL_TOL: f64 = 1e-14;

/// `S_t(X_0)`:
/// `y = y_0 + t U_0 + t^2/4 (H_0 - H_inf/2)`, `U = U_0 + t/2 (H_0 - H_inf/2)`,
/// with `H` and `r` unchanged.
pub fn evolve<T: Scalar>(x0: &LagrangianState<T>, t: T) -> Result<LagrangianState<T>> {
    if !(t >= T::zero()) {
        return Err(Error::NegativeTime(diag(t)));
    }
    if t == T::zero() {
        return Ok(x0.clone());
    }
    let (two, four, eight) = (T::lit(2.0), T::lit(4.0), T::lit(8.0));
    let h_inf = x0.h_inf();
    let y = PiecewiseLinear::lincomb(
        &[(T::one(), x0.y()), (t, x0.u()), (t * t / four, x0.h())],
        -t * t / eight * h_inf,
    );
    let u = PiecewiseLinear::lincomb(&[(T::one(), x0.u()), (t / two, x0.h())], -t / four * h_inf);
    Ok(LagrangianState::new(y, u, x0.h().clone(), x0.r().clone()))
}

/// Roots of `y_xi(t) = H_0'/4 t^2 + U_0' t + y_0'` on one cell.
#[derive(Clone, Debug, PartialEq)]
pub struct CellBreaking<T> {
    pub left: T,
    pub right: T,
    /// Real roots in increasing order; a double root is listed once.
    pub roots: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BreakingReport<T> {
    /// Cells with at least one real root.
    pub cells: Vec<CellBreaking<T>>,
    /// Earliest strictly positive root and the point `y(xi*, t*)` the cell collapses to.
    pub first: Option<(T, T)>,
}

/// Real roots of `a/4 t^2 + b t + c`.
///
/// Invariant (iii) makes the discriminant `b^2 - a c = -r^2` non-positive, so
/// genuine roots are double roots; near-zero discriminants are snapped to zero.
pub fn cell_roots<T: Scalar>(a: T, b: T, c: T) -> Vec<T> {
    if a <= T::lit(LINEAR_CELL_TOL) {
        if b == T::zero() {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - a * c;
    let scale = (b * b).max((a * c).abs());
    if disc.abs() <= T::lit(64.0) * T::epsilon() * scale {
        return vec![-T::lit(2.0) * b / a];
    }
    if disc < T::zero() {
        return Vec::new();
    }
    // q = -(B + sgn(B) sqrt(B^2 - 4AC)) / 2 with A = a/4, B = b, C = c.
    let sq = disc.sqrt();
    let q = -(b + if b >= T::zero() { sq } else { -sq }) / T::lit(2.0);
    let a4 = a / T::lit(4.0);
    let mut roots = vec![q / a4, if q != T::zero() { c / q } else { T::zero() }];
    roots.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
    roots
}

/// Per-cell breaking analysis of `S_t(X_0)`.
pub fn breaking_times<T: Scalar>(x0: &LagrangianState<T>) -> BreakingReport<T> {
    let yx = x0.y().derivative();
    let ux = x0.u().derivative();
    let hx = x0.h().derivative();
    let grid = yx.zip_with(&ux, |a, _| a).zip_with(&hx, |a, _| a);
    let mut cells = Vec::new();
    let mut first: Option<(T, T, T)> = None;
    for (left, right, _) in grid.cells() {
        let mid = (left + right) / T::lit(2.0);
        let roots = cell_roots(hx.eval(mid), ux.eval(mid), yx.eval(mid));
        if roots.is_empty() {
            continue;
        }
        if let Some(&t) = roots.iter().find(|&&t| t > T::zero()) {
            if first.is_none_or(|(t0, _, _)| t < t0) {
                first = Some((t, left, right));
            }
        }
        cells.push(CellBreaking { left, right, roots });
    }
    let first = first.map(|(t, left, right)| {
        let xt = evolve(x0, t).expect("positive time");
        (t, xt.y().eval((left + right) / T::lit(2.0)))
    });
    BreakingReport { cells, first }
}

/// `T_t(s_0) = M(Pi(S_t(L(s_0))))`, checked against `M(S_t(L(s_0)))`; `T_0` returns
/// `s_0` unchanged.
pub fn evolve_eulerian<T: Scalar>(s0: &EulerianState<T>, t: T) -> Result<EulerianState<T>> {
    let x0 = to_lagrangian(s0)?;
    if t == T::zero() {
        return Ok(s0.clone());
    }
    evolve_lagrangian_to_eulerian(&x0, t)
}

/// `M(Pi(S_t(X_0)))` for a Lagrangian initial state, with the same path check.
pub fn evolve_lagrangian_to_eulerian<T: Scalar>(
    x0: &LagrangianState<T>,
    t: T,
) -> Result<EulerianState<T>> {
    let xt = evolve(x0, t)?;
    let projected = to_eulerian(&xt.project_f0()?)?;
    let direct = to_eulerian(&xt)?;
    let (du, drho, dmu) = projected.distance(&direct);
    let scale = projected
        .u
        .sup_norm()
        .max(projected.mu.total_mass())
        .max(T::one());
    let gap = du.max(drho).max(dmu);
    if !(gap <= T::lit(PATH_TOL) * scale) {
        return Err(Error::PathMismatch(diag(gap)));
    }
    Ok(projected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::PiecewiseConstant;

    fn example() -> LagrangianState<f64> {
        LagrangianState::new(
            PiecewiseLinear::unit_slope(&[(-1.0, -1.0), (1.0, 0.0), (1.5, 0.0), (3.5, 1.0)]).unwrap(),
            PiecewiseLinear::bounded(&[(-1.0, 1.0), (1.0, 0.0)]).unwrap(),
            PiecewiseLinear::bounded(&[(-1.0, 0.0), (1.0, 1.0), (1.5, 1.5), (3.5, 2.5)]).unwrap(),
            PiecewiseConstant::indicator(1.5, 3.5, 0.5).unwrap(),
        )
    }

    #[test]
    fn evolve_matches_printed_branch() {
        let x = evolve(&example(), 1.0).unwrap();
        assert!((x.y().eval(-1.0) + 5.0 / 16.0).abs() < 1e-15);
        let x = evolve(&example(), 2.0).unwrap();
        for xi in [-1.0, -0.3, 0.0, 0.7, 1.0] {
            assert!((x.y().eval(xi) + 0.25).abs() < 1e-15);
        }
        assert_eq!(evolve(&example(), 0.0).unwrap(), example());
        assert!(matches!(evolve(&example(), -1.0), Err(Error::NegativeTime(_))));
    }

    #[test]
    fn semigroup_property() {
        let x = example();
        let a = evolve(&evolve(&x, 0.7).unwrap(), 1.6).unwrap();
        let b = evolve(&x, 2.3).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn first_breaking_of_example() {
        let rep = breaking_times(&example());
        let (t, x) = rep.first.unwrap();
        assert_eq!(t, 2.0);
        assert!((x + 0.25).abs() < 1e-15);
        assert!(rep.cells.iter().any(|c| c.left == -1.0 && c.roots == vec![2.0]));
    }

    #[test]
    fn no_breaking_without_compression() {
        let x = LagrangianState::<f64>::vacuum();
        assert!(breaking_times(&x).first.is_none());
        let spread = LagrangianState::new(
            PiecewiseLinear::unit_slope(&[(0.0, 0.0), (2.0, 1.0)]).unwrap(),
            PiecewiseLinear::bounded(&[(0.0, 0.0), (2.0, 1.0)]).unwrap(),
            PiecewiseLinear::bounded(&[(0.0, 0.0), (2.0, 1.0)]).unwrap(),
            PiecewiseConstant::zero(),
        );
        assert!(breaking_times(&spread).first.is_none());
    }

    #[test]
    fn roots_of_cell_polynomials() {
        assert_eq!(cell_roots(0.5, -0.5, 0.5), vec![2.0]);
        assert!(cell_roots(0.5, 0.0, 0.5).is_empty());
        assert_eq!(cell_roots(0.0, -2.0, 1.0), vec![0.5]);
        let r = cell_roots::<f64>(4.0, -3.0, 2.0);
        // t^2 - 3t + 2
        assert!((r[0] - 1.0).abs() < 1e-15 && (r[1] - 2.0).abs() < 1e-15);
        let r = cell_roots::<f64>(1e-10, -1.0, 1.0);
        assert!((r[0] - 1.0).abs() < 1e-9);
    }
}
