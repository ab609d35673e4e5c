//! The maps `L: D -> F_0` and `M: F -> D` between physical and characteristic variables.

use crate::error::{Error, Result};
use crate::eulerian::EulerianState;
use crate::func::{merge_nodes, PiecewiseLinear};
use crate::lagrangian::LagrangianState;
use crate::measure::{push_density, RadonMeasure};
use crate::scalar::{diag, Scalar};
use crate::validation::DEFAULT_TOL;

/// Largest jump of `U` tolerated across a cell that `y` collapses to a point.
pub const COLLAPSE_TOL: f64 = 1e-10;

/// `L(u, rho, mu) = (y, U, H, r)` with `y` the generalized inverse of
/// `x + mu((-inf, x))`, `H = id - y`, `U = u o y` and `r = (rho o y) y'`.
pub fn to_lagrangian<T: Scalar>(s: &EulerianState<T>) -> Result<LagrangianState<T>> {
    let violations = s.validate(DEFAULT_TOL);
    if !violations.is_empty() {
        return Err(Error::Invalid(violations));
    }
    let y = s.mu.distribution_graph().pseudo_inverse()?;
    let h = &PiecewiseLinear::identity() - &y;
    let u = s.u.compose(&y)?;
    let r = s.rho.pullback(&y)?;
    Ok(LagrangianState::new(y, u, h, r))
}

/// `M(y, U, H, r) = (u, rho, mu)` with `u o y = U`, `rho dx = y_#(r dxi)` and
/// `mu = y_#(H' dxi)`.
pub fn to_eulerian<T: Scalar>(x: &LagrangianState<T>) -> Result<EulerianState<T>> {
    let report = x.validate(DEFAULT_TOL);
    if !report.is_ok() {
        return Err(Error::Invalid(report.violations));
    }
    let u = velocity(x)?;
    let (rho, _) = push_density(x.y(), x.r());
    let mu = RadonMeasure::pushforward(x.y(), &x.h().derivative())?;
    Ok(EulerianState::new(u, rho, mu))
}

/// Reads `u` off the nodes `(y(xi_i), U(xi_i))`, merging nodes that `y` maps to
/// the same point after checking that `U` agrees there.
fn velocity<T: Scalar>(x: &LagrangianState<T>) -> Result<PiecewiseLinear<T>> {
    let (y, big_u) = (x.y(), x.u());
    let mut nodes = y.xs().to_vec();
    nodes.extend_from_slice(big_u.xs());
    let nodes = merge_nodes(nodes);
    let ys: Vec<T> = nodes.iter().map(|&xi| y.eval(xi)).collect();
    let span = ys[ys.len() - 1] - ys[0];
    let flat = T::merge_tol() * span.abs().max(T::one());
    let scale = big_u.sup_norm().max(T::one());

    let mut pts: Vec<(T, T)> = Vec::with_capacity(nodes.len());
    let mut collapsed_from = nodes[0];
    for (&xi, &yv) in nodes.iter().zip(&ys) {
        let uv = big_u.eval(xi);
        match pts.last() {
            Some(&(py, pu)) if yv - py <= flat => {
                if (uv - pu).abs() > T::lit(COLLAPSE_TOL) * scale {
                    return Err(Error::CollapsedVelocity {
                        left: diag(collapsed_from),
                        right: diag(xi),
                        a: diag(pu),
                        b: diag(uv),
                    });
                }
            }
            _ => {
                pts.push((yv, uv));
                collapsed_from = xi;
            }
        }
    }
    if pts.len() == 1 {
        let (p, v) = pts[0];
        pts.push((p + T::one(), v));
    }
    PiecewiseLinear::bounded(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::PiecewiseConstant;
    use crate::validation::DEFAULT_TOL;

    fn example_eulerian() -> EulerianState<f64> {
        let u = PiecewiseLinear::bounded(&[(-1.0, 1.0), (0.0, 0.0)]).unwrap();
        let rho = PiecewiseConstant::indicator(0.0, 1.0, 1.0).unwrap();
        let density = crate::eulerian::energy_density(&u, &rho);
        EulerianState::new(u, rho, RadonMeasure::new(density, vec![(0.0, 0.5)]).unwrap())
    }

    #[test]
    fn l_reproduces_printed_quadruple() {
        let x = to_lagrangian(&example_eulerian()).unwrap();
        let y = |xi: f64| match xi {
            xi if xi <= -1.0 => xi,
            xi if xi <= 1.0 => 0.5 * (xi - 1.0),
            xi if xi <= 1.5 => 0.0,
            xi if xi <= 3.5 => 0.5 * (xi - 1.5),
            xi => xi - 2.5,
        };
        for i in 0..=100 {
            let xi = -3.0 + 0.08 * i as f64;
            assert!((x.y().eval(xi) - y(xi)).abs() < 1e-14, "{xi}");
            assert!((x.h().eval(xi) - (xi - y(xi))).abs() < 1e-14, "{xi}");
        }
        assert_eq!(x.r().breaks(), &[1.5, 3.5]);
        assert_eq!(x.r().values(), &[0.5]);
        assert_eq!(x.h_inf(), 2.5);
        let rep = x.validate(DEFAULT_TOL);
        assert!(rep.is_ok() && rep.in_f0, "{:?}", rep.violations);
    }

    #[test]
    fn vacuum_round_trip() {
        let x = to_lagrangian(&EulerianState::<f64>::vacuum()).unwrap();
        assert_eq!(x.y().eval(3.0), 3.0);
        assert_eq!(x.u().sup_norm(), 0.0);
        assert_eq!(x.h().sup_norm(), 0.0);
        let s = to_eulerian(&x).unwrap();
        assert_eq!(s.mu.total_mass(), 0.0);
        assert_eq!(s.u.sup_norm(), 0.0);
    }

    #[test]
    fn m_recovers_distribution() {
        let s = to_eulerian(&to_lagrangian(&example_eulerian()).unwrap()).unwrap();
        assert!((s.mu.cdf_right(0.0) - 1.5).abs() < 1e-14);
        assert!((s.mu.cdf_left(0.0) - 1.0).abs() < 1e-14);
        assert!((s.mu.atom_mass_at(0.0) - 0.5).abs() < 1e-14);
        let (du, drho, dmu) = s.distance(&example_eulerian());
        assert!(du < 1e-14 && drho < 1e-14 && dmu < 1e-14);
    }

    #[test]
    fn no_atom_cell_has_half_slope() {
        let mut s = example_eulerian();
        s.mu = RadonMeasure::new(s.mu.density().clone(), vec![]).unwrap();
        let x = to_lagrangian(&s).unwrap();
        let yx = x.y().derivative();
        assert_eq!(yx.eval(-1.0), 0.5);
        assert_eq!(yx.eval(0.5), 0.5);
        assert_eq!(yx.eval(1.5), 0.5);
        assert_eq!(yx.eval(3.5), 1.0);
    }

    #[test]
    fn m_rejects_invalid_state() {
        let x = to_lagrangian(&example_eulerian()).unwrap();
        let bad = LagrangianState::new(x.y().clone(), x.u().clone(), x.h().clone(), x.r().map(|v| 2.0 * v));
        assert!(matches!(to_eulerian(&bad), Err(Error::Invalid(_))));
    }
}
