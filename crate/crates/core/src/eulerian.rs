//! Physical states `(u, rho, mu)`.

use crate::func::{PiecewiseConstant, PiecewiseLinear};
use crate::measure::RadonMeasure;
use crate::scalar::{diag, Scalar};
use crate::validation::{close, Side, Violation};

#[derive(Clone, Debug, PartialEq)]
pub struct EulerianState<T> {
    /// Velocity, bounded (constant extensions).
    pub u: PiecewiseLinear<T>,
    pub rho: PiecewiseConstant<T>,
    /// Energy measure; its absolutely continuous part must equal `u_x^2 + rho^2`.
    pub mu: RadonMeasure<T>,
}

/// `u_x^2 + rho^2` on the merged grid of `u` and `rho`.
pub fn energy_density<T: Scalar>(
    u: &PiecewiseLinear<T>,
    rho: &PiecewiseConstant<T>,
) -> PiecewiseConstant<T> {
    u.derivative()
        .zip_with(rho, |ux, r| ux * ux + r * r)
        .simplified()
}

impl<T: Scalar> EulerianState<T> {
    pub fn new(u: PiecewiseLinear<T>, rho: PiecewiseConstant<T>, mu: RadonMeasure<T>) -> Self {
        Self { u, rho, mu }
    }

    /// State whose energy measure is `(u_x^2 + rho^2) dx` with no atoms.
    pub fn from_u_rho(u: PiecewiseLinear<T>, rho: PiecewiseConstant<T>) -> Self {
        let density = energy_density(&u, &rho);
        let mu = RadonMeasure::new_unchecked(density, Vec::new());
        Self { u, rho, mu }
    }

    pub fn vacuum() -> Self {
        Self {
            u: PiecewiseLinear::constant(T::zero()),
            rho: PiecewiseConstant::zero(),
            mu: RadonMeasure::zero(),
        }
    }

    /// Checks every defining property; the compatibility identity is compared
    /// cell-wise with relative tolerance `tol`. An empty list means valid.
    pub fn validate(&self, tol: f64) -> Vec<Violation> {
        let mut out = Vec::new();
        if !self.u.xs().iter().chain(self.u.ys()).all(|v| v.is_finite()) {
            out.push(Violation::NonFinite { component: "u" });
        }
        for (side, s) in [(Side::Left, self.u.left_slope()), (Side::Right, self.u.right_slope())] {
            if s != T::zero() {
                out.push(Violation::Extension { component: "u", side, slope: diag(s), expected: 0.0 });
            }
        }
        if !self.rho.has_zero_tails() {
            out.push(Violation::NonzeroTail { component: "rho" });
        }
        if !self.rho.values().iter().all(|v| v.is_finite()) {
            out.push(Violation::NonFinite { component: "rho" });
        }
        out.extend(self.mu.violations());
        if !out.is_empty() {
            return out;
        }

        let expected = energy_density(&self.u, &self.rho);
        let cmp = self.mu.density().zip_with(&expected, |a, b| a - b);
        for (a, b, _) in cmp.cells() {
            let mid = (a + b) / T::lit(2.0);
            let lhs = diag(self.mu.density().eval(mid));
            let rhs = diag(expected.eval(mid));
            if !close(lhs, rhs, tol) {
                out.push(Violation::Compatibility {
                    identity: "mu_ac = u_x^2 + rho^2",
                    left: diag(a),
                    right: diag(b),
                    lhs,
                    rhs,
                });
                break;
            }
        }
        out
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.validate(tol).is_empty()
    }

    /// Sup-distance of velocities, cumulative-distance of densities and cdf-distance
    /// of energy measures, in that order.
    pub fn distance(&self, other: &Self) -> (T, T, T) {
        let du = self.u.max_abs_diff(&other.u);
        let drho = self
            .rho
            .antiderivative()
            .max_abs_diff(&other.rho.antiderivative());
        (du, drho, self.mu.cdf_distance(&other.mu))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validation::DEFAULT_TOL;

    fn example_u() -> PiecewiseLinear<f64> {
        PiecewiseLinear::bounded(&[(-1.0, 1.0), (0.0, 0.0)]).unwrap()
    }

    fn example_state(atom: f64) -> EulerianState<f64> {
        let u = example_u();
        let rho = PiecewiseConstant::indicator(0.0, 1.0, 1.0).unwrap();
        let density = energy_density(&u, &rho);
        EulerianState::new(u, rho, RadonMeasure::new_unchecked(density, vec![(0.0, atom)]))
    }

    #[test]
    fn example_state_is_valid() {
        assert!(example_state(0.5).validate(DEFAULT_TOL).is_empty());
        assert!(EulerianState::<f64>::vacuum().validate(DEFAULT_TOL).is_empty());
    }

    #[test]
    fn negative_atom_is_reported() {
        let v = example_state(-0.5).validate(DEFAULT_TOL);
        assert!(matches!(v.as_slice(), [Violation::NegativeAtom { .. }]));
    }

    #[test]
    fn incompatible_density_reports_both_sides() {
        let mut s = example_state(0.5);
        s.mu = RadonMeasure::new_unchecked(
            PiecewiseConstant::new(vec![-1.0, 0.0, 1.0], vec![1.0, 2.0]).unwrap(),
            vec![],
        );
        let v = s.validate(DEFAULT_TOL);
        match v.as_slice() {
            [Violation::Compatibility { left, lhs, rhs, .. }] => {
                assert_eq!((*left, *lhs, *rhs), (0.0, 2.0, 1.0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn energy_density_cases() {
        let u = example_u();
        let rho = PiecewiseConstant::indicator(0.0, 1.0, 1.0).unwrap();
        let e = energy_density(&u, &rho);
        assert_eq!(e.integral(), 2.0);
        let z = energy_density(&PiecewiseLinear::constant(0.0), &PiecewiseConstant::zero());
        assert_eq!(z.sup_norm(), 0.0);
        let ramp = PiecewiseLinear::bounded(&[(0.0, 0.0), (1.0, 1.0)]).unwrap();
        let e = energy_density(&ramp, &PiecewiseConstant::zero());
        assert_eq!(e.eval(0.5), 1.0);
        assert_eq!(e.integral(), 1.0);
    }
}
