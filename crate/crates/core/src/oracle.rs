//! Closed-form states and trajectories used as ground truth.
//!
//! * `ex11`: a compressive wave with a density bump, breaking at `t = 2`.
//! * `ex26`: the same `(u, rho)` with an extra atom of mass 1/2 at the origin,
//!   in Eulerian and Lagrangian form.
//! * `ex34`: `S_t` of the Lagrangian form of `ex26`.
//! * `ex36`: `T_t` of `ex26`, continued through breaking.
//! * `ex47`: the stretching relabeling `f^eps` and a pair of states differing by
//!   the sign of `r`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::eulerian::{energy_density, EulerianState};
use crate::func::{PiecewiseConstant, PiecewiseLinear};
use crate::lagrangian::{LagrangianState, Relabeling};
use crate::measure::RadonMeasure;
use crate::scalar::{diag, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Example {
    Ex11,
    Ex26,
    Ex34,
    Ex36,
    Ex47,
}

impl Example {
    pub const ALL: [Example; 5] = [Self::Ex11, Self::Ex26, Self::Ex34, Self::Ex36, Self::Ex47];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Ex11 => "ex11",
            Self::Ex26 => "ex26",
            Self::Ex34 => "ex34",
            Self::Ex36 => "ex36",
            Self::Ex47 => "ex47",
        }
    }
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Example {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown example `{s}` (expected one of ex11, ex26, ex34, ex36, ex47)"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExampleValue<T> {
    Eulerian(EulerianState<T>),
    Lagrangian(LagrangianState<T>),
    Relabeling(Relabeling<T>),
}

/// Evaluates an example at `t` (for `ex47`, `t` is `eps`).
pub fn example<T: Scalar>(which: Example, t: T) -> Result<ExampleValue<T>> {
    Ok(match which {
        Example::Ex11 => ExampleValue::Eulerian(ex11(t)?),
        Example::Ex26 => {
            nonnegative(t)?;
            ExampleValue::Eulerian(ex26_eulerian())
        }
        Example::Ex34 => ExampleValue::Lagrangian(ex34(t)?),
        Example::Ex36 => ExampleValue::Eulerian(ex36(t)?),
        Example::Ex47 => ExampleValue::Relabeling(ex47(t)?),
    })
}

fn nonnegative<T: Scalar>(t: T) -> Result<()> {
    if t >= T::zero() && t.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange(diag(t)))
    }
}

fn lit<T: Scalar>(v: f64) -> T {
    T::lit(v)
}

/// Drops nodes that coincide with their predecessor (degenerate branches).
fn distinct<T: Scalar>(points: &[(T, T)]) -> Vec<(T, T)> {
    let span = points[points.len() - 1].0 - points[0].0;
    let tol = T::merge_tol() * span.abs().max(T::one());
    let mut out: Vec<(T, T)> = Vec::with_capacity(points.len());
    for &p in points {
        match out.last() {
            Some(&(x, _)) if p.0 - x <= tol => {}
            _ => out.push(p),
        }
    }
    out
}

/// `ex11` at `t in [0, 2)`; energy measure without atoms.
pub fn ex11<T: Scalar>(t: T) -> Result<EulerianState<T>> {
    if !(t >= T::zero() && t < lit(2.0)) {
        return Err(Error::OutOfRange(diag(t)));
    }
    let q = t * t / lit(4.0);
    // u = 1 - t/2 left of -t^2/4 + t - 1, linear to 0 at the origin,
    // linear to t/2 at t^2/4 + 1, constant beyond.
    let u = PiecewiseLinear::bounded(&[
        (-q + t - T::one(), T::one() - t / lit(2.0)),
        (T::zero(), T::zero()),
        (q + T::one(), t / lit(2.0)),
    ])?;
    let rho = PiecewiseConstant::indicator(T::zero(), q + T::one(), T::one() / (q + T::one()))?;
    Ok(EulerianState::from_u_rho(u, rho))
}

fn ex26_u<T: Scalar>() -> PiecewiseLinear<T> {
    PiecewiseLinear::bounded(&[(lit(-1.0), T::one()), (T::zero(), T::zero())]).expect("static data")
}

/// `(u, rho, mu)` of `ex11` at `t = 0` with an atom of mass 1/2 at the origin.
pub fn ex26_eulerian<T: Scalar>() -> EulerianState<T> {
    let u = ex26_u();
    let rho = PiecewiseConstant::indicator(T::zero(), T::one(), T::one()).expect("static data");
    let density = energy_density(&u, &rho);
    let mu = RadonMeasure::new(density, vec![(T::zero(), lit(0.5))]).expect("static data");
    EulerianState::new(u, rho, mu)
}

/// The Lagrangian quadruple of [`ex26_eulerian`].
pub fn ex26_lagrangian<T: Scalar>() -> LagrangianState<T> {
    ex34(T::zero()).expect("t = 0 is in range")
}

/// `S_t` of [`ex26_lagrangian`], node by node.
pub fn ex34<T: Scalar>(t: T) -> Result<LagrangianState<T>> {
    nonnegative(t)?;
    let tt = t * t;
    let (c1, c2) = (lit::<T>(1.0), lit::<T>(2.0));
    let (xi_a, xi_b, xi_c, xi_d) = (lit::<T>(-1.0), c1, lit::<T>(1.5), lit::<T>(3.5));
    // y: -5/16 t^2 + t + xi | 1/8(xi - 3/2)t^2 - 1/2(xi - 1)t + 1/2(xi - 1)
    //    | 1/4(xi - 5/4)t^2 | 1/8(xi - 1)t^2 + 1/2(xi - 3/2) | 5/16 t^2 + xi - 5/2
    let y = PiecewiseLinear::unit_slope(&[
        (xi_a, lit::<T>(-5.0 / 16.0) * tt + t - c1),
        (xi_b, -tt / lit(16.0)),
        (xi_c, tt / lit(16.0)),
        (xi_d, lit::<T>(5.0 / 16.0) * tt + c1),
    ])?;
    // U: -5/8 t + 1 | 1/4(xi - 3/2)t - 1/2(xi - 1) | 1/2(xi - 5/4)t | 1/4(xi - 1)t | 5/8 t
    let u = PiecewiseLinear::bounded(&[
        (xi_a, c1 - lit::<T>(5.0 / 8.0) * t),
        (xi_b, -t / lit(8.0)),
        (xi_c, t / lit(8.0)),
        (xi_d, lit::<T>(5.0 / 8.0) * t),
    ])?;
    // H: 0 | (xi + 1)/2 | xi | (xi + 3/2)/2 | 5/2
    let h = PiecewiseLinear::bounded(&[
        (xi_a, T::zero()),
        (xi_b, c1),
        (xi_c, xi_c),
        (xi_d, lit(2.5)),
    ])?;
    let r = PiecewiseConstant::indicator(xi_c, xi_d, c1 / c2)?;
    Ok(LagrangianState::new(y, u, h, r))
}

/// `T_t(ex26)` for `t >= 0`: the atom at the origin spreads out, the compressive
/// part collapses into an atom of mass 1 at `x = -1/4` at `t = 2` and spreads again.
pub fn ex36<T: Scalar>(t: T) -> Result<EulerianState<T>> {
    nonnegative(t)?;
    let tt = t * t;
    let c1 = T::one();
    let a = lit::<T>(-5.0 / 16.0) * tt + t - c1;
    let b = -tt / lit(16.0);
    let c = tt / lit(16.0);
    let d = lit::<T>(5.0 / 16.0) * tt + c1;
    // u: 1 - 5t/8 | -(x + t^2/16)/(1 - t/2) - t/8 | 2x/t | (t/2)(x + 1/4)/(t^2/4 + 1) | 5t/8
    let u = PiecewiseLinear::bounded(&distinct(&[
        (a, c1 - lit::<T>(5.0 / 8.0) * t),
        (b, -t / lit(8.0)),
        (c, t / lit(8.0)),
        (d, lit::<T>(5.0 / 8.0) * t),
    ]))?;
    let rho = PiecewiseConstant::indicator(c, d, c1 / (tt / lit(4.0) + c1))?;
    let mut atoms = Vec::new();
    if t == T::zero() {
        atoms.push((T::zero(), lit(0.5)));
    }
    if t == lit(2.0) {
        atoms.push((lit(-0.25), c1));
    }
    let density = energy_density(&u, &rho);
    Ok(EulerianState::new(u, rho, RadonMeasure::new(density, atoms)?))
}

/// `f^eps`: identity left of 0, slope `eps` on `[0, 1/eps]`, slope 1 beyond.
pub fn ex47<T: Scalar>(eps: T) -> Result<Relabeling<T>> {
    if !(eps > T::zero() && eps < T::one()) {
        return Err(Error::OutOfRange(diag(eps)));
    }
    Relabeling::from_points(&[(T::zero(), T::zero()), (T::one() / eps, T::one())])
}

/// `X = (id, 0, min(max(xi, 0), 1), 1_[0,1])` and `Xb` with `r` negated. Both lie
/// in `F`: `y' H' = 1 = r^2` on `[0, 1]`.
pub fn ex47_pair<T: Scalar>() -> (LagrangianState<T>, LagrangianState<T>) {
    let (z, o) = (T::zero(), T::one());
    let h = PiecewiseLinear::bounded(&[(z, z), (o, o)]).expect("static data");
    let r = PiecewiseConstant::indicator(z, o, o).expect("static data");
    let x = LagrangianState::new(PiecewiseLinear::identity(), PiecewiseLinear::constant(z), h.clone(), r.clone());
    let xb = LagrangianState::new(PiecewiseLinear::identity(), PiecewiseLinear::constant(z), h, r.map(|v| -v));
    (x, xb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validation::DEFAULT_TOL;

    #[test]
    fn ex11_at_one() {
        let s = ex11::<f64>(1.0).unwrap();
        assert_eq!(s.u.xs(), &[-0.25, 0.0, 1.25]);
        assert_eq!(s.u.ys(), &[0.5, 0.0, 0.5]);
        assert!(s.is_valid(DEFAULT_TOL));
        assert!((s.mu.total_mass() - 2.0).abs() < 1e-15);
        assert!(ex11(2.0).is_err());
        assert!(ex11(-0.1).is_err());
    }

    #[test]
    fn ex36_initial_atom_and_breaking_atom() {
        let s = ex36::<f64>(0.0).unwrap();
        assert_eq!(s.mu.atoms(), &[(0.0, 0.5)]);
        assert!(s.is_valid(DEFAULT_TOL));
        let s = ex36::<f64>(2.0).unwrap();
        assert_eq!(s.mu.atoms(), &[(-0.25, 1.0)]);
        assert!((s.mu.total_mass() - 2.5).abs() < 1e-15);
        assert!(ex36(-1.0).is_err());
    }

    #[test]
    fn ex34_starts_at_ex26() {
        let x = ex34(0.0).unwrap();
        assert_eq!(x, ex26_lagrangian());
        let rep = x.validate(DEFAULT_TOL);
        assert!(rep.is_ok() && rep.in_f0);
        assert!(ex34(1.3).unwrap().validate(DEFAULT_TOL).is_ok());
    }

    #[test]
    fn ex47_relabeling_and_pair() {
        let f = ex47(0.25).unwrap();
        assert_eq!(f.eval(-1.0), -1.0);
        assert_eq!(f.eval(2.0), 0.5);
        assert_eq!(f.eval(5.0), 2.0);
        assert!(ex47(1.0).is_err());
        let (x, xb) = ex47_pair::<f64>();
        assert!(x.validate(DEFAULT_TOL).is_ok());
        assert!(xb.validate(DEFAULT_TOL).is_ok());
        assert!(!x.validate(DEFAULT_TOL).in_f0);
    }

    #[test]
    fn names_round_trip() {
        for e in Example::ALL {
            assert_eq!(e.name().parse::<Example>().unwrap(), e);
        }
        assert!("ex99".parse::<Example>().is_err());
    }
}
