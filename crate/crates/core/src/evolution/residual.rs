//! Defects of the three weak-form identities of a conservative solution along a
//! computed trajectory, for separable test functions `phi(x, t) = psi(x) chi(t)`.
//!
//! Space is integrated with 5-point Gauss-Legendre on the merged cells of the
//! state and of `psi`; time with the composite trapezoid rule on the trajectory
//! nodes. `chi` vanishes at the last node, so the interval `[0, t_max]` carries
//! the whole time support.

use super::evolve_lagrangian_to_eulerian;
use crate::error::{Error, Result};
use crate::eulerian::EulerianState;
use crate::func::merge_nodes;
use crate::scalar::Scalar;
use crate::transform::to_lagrangian;

const GAUSS_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GAUSS_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Quadrature cells are refined to at most `support / SUBDIVISIONS`.
const SUBDIVISIONS: f64 = 64.0;

/// Decay rate of the truncated Gaussian: `exp(-SIGMA s^2)`, cut at `|s| = 1`.
const SIGMA: f64 = 4.5;

/// Spatial factor `psi` of a test function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpatialProfile<T> {
    /// `exp(1 - 1/(1 - s^2))` with `s = (x - center)/radius`; smooth.
    Bump { center: T, radius: T },
    /// `1 - |s|`.
    Tent { center: T, radius: T },
    /// `(exp(-4.5 s^2) - exp(-4.5)) / (1 - exp(-4.5))`.
    TruncatedGaussian { center: T, radius: T },
    /// 1 on `[left, right]`, linear ramps of width `ramp` on both sides.
    Plateau { left: T, right: T, ramp: T },
}

impl<T: Scalar> SpatialProfile<T> {
    pub fn support(&self) -> (T, T) {
        match *self {
            Self::Bump { center, radius }
            | Self::Tent { center, radius }
            | Self::TruncatedGaussian { center, radius } => (center - radius, center + radius),
            Self::Plateau { left, right, ramp } => (left - ramp, right + ramp),
        }
    }

    /// Points where `psi'` may jump.
    pub fn kinks(&self) -> Vec<T> {
        let (a, b) = self.support();
        match *self {
            Self::Bump { .. } | Self::TruncatedGaussian { .. } => vec![a, b],
            Self::Tent { center, .. } => vec![a, center, b],
            Self::Plateau { left, right, .. } => vec![a, left, right, b],
        }
    }

    pub fn value(&self, x: T) -> T {
        let (a, b) = self.support();
        if !(x > a && x < b) {
            return T::zero();
        }
        match *self {
            Self::Bump { center, radius } => {
                let s = (x - center) / radius;
                (T::one() - T::one() / (T::one() - s * s)).exp()
            }
            Self::Tent { center, radius } => T::one() - ((x - center) / radius).abs(),
            Self::TruncatedGaussian { center, radius } => {
                let s = (x - center) / radius;
                let sigma = T::lit(SIGMA);
                ((-sigma * s * s).exp() - (-sigma).exp()) / (T::one() - (-sigma).exp())
            }
            Self::Plateau { left, right, ramp } => {
                if x < left {
                    (x - a) / ramp
                } else if x > right {
                    (b - x) / ramp
                } else {
                    T::one()
                }
            }
        }
    }

    /// `psi'`, averaged over both sides at a kink.
    pub fn slope(&self, x: T) -> T {
        (self.side_slope(x, false) + self.side_slope(x, true)) / T::lit(2.0)
    }

    fn side_slope(&self, x: T, from_right: bool) -> T {
        // Half-open piece membership decides which side a kink belongs to.
        let inside = |lo: T, hi: T| if from_right { x >= lo && x < hi } else { x > lo && x <= hi };
        let (a, b) = self.support();
        match *self {
            Self::Bump { center, radius } => {
                if !(x > a && x < b) {
                    return T::zero();
                }
                let s = (x - center) / radius;
                let d = T::one() - s * s;
                self.value(x) * (-T::lit(2.0) * s / (d * d)) / radius
            }
            Self::Tent { center, radius } => {
                if inside(a, center) {
                    T::one() / radius
                } else if inside(center, b) {
                    -T::one() / radius
                } else {
                    T::zero()
                }
            }
            Self::TruncatedGaussian { center, radius } => {
                if !inside(a, b) {
                    return T::zero();
                }
                let s = (x - center) / radius;
                let sigma = T::lit(SIGMA);
                -T::lit(2.0) * sigma * s * (-sigma * s * s).exp()
                    / (T::one() - (-sigma).exp())
                    / radius
            }
            Self::Plateau { left, right, ramp } => {
                if inside(a, left) {
                    T::one() / ramp
                } else if inside(right, b) {
                    -T::one() / ramp
                } else {
                    T::zero()
                }
            }
        }
    }
}

/// Temporal factor `chi` on `[0, T]`, with `chi(0) = 1` and `chi(T) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TemporalProfile {
    /// `(1 + cos(pi t / T)) / 2`.
    RaisedCosine,
    /// `1 - t / T`.
    Linear,
    /// `1 - (10 s^3 - 15 s^4 + 6 s^5)` with `s = t / T`; first and second
    /// derivatives vanish at both ends.
    Smoothstep,
}

impl TemporalProfile {
    pub fn value<T: Scalar>(&self, t: T, horizon: T) -> T {
        match self {
            Self::RaisedCosine => (T::one() + (T::PI() * t / horizon).cos()) / T::lit(2.0),
            Self::Linear => T::one() - t / horizon,
            Self::Smoothstep => {
                let s = t / horizon;
                T::one() - s * s * s * (T::lit(10.0) + s * (T::lit(-15.0) + s * T::lit(6.0)))
            }
        }
    }

    pub fn slope<T: Scalar>(&self, t: T, horizon: T) -> T {
        match self {
            Self::RaisedCosine => -T::PI() / (T::lit(2.0) * horizon) * (T::PI() * t / horizon).sin(),
            Self::Linear => -T::one() / horizon,
            Self::Smoothstep => {
                let s = t / horizon;
                let w = s * (T::one() - s);
                -T::lit(30.0) * w * w / horizon
            }
        }
    }
}

/// `phi(x, t) = psi(x) chi(t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestFunction<T> {
    pub space: SpatialProfile<T>,
    pub time: TemporalProfile,
}

impl<T: Scalar> TestFunction<T> {
    pub fn new(space: SpatialProfile<T>, time: TemporalProfile) -> Self {
        Self { space, time }
    }

    pub fn bump(center: T, radius: T) -> Self {
        Self::new(SpatialProfile::Bump { center, radius }, TemporalProfile::Smoothstep)
    }

    pub fn tent(center: T, radius: T) -> Self {
        Self::new(SpatialProfile::Tent { center, radius }, TemporalProfile::Smoothstep)
    }

    pub fn truncated_gaussian(center: T, radius: T) -> Self {
        Self::new(
            SpatialProfile::TruncatedGaussian { center, radius },
            TemporalProfile::Smoothstep,
        )
    }

    pub fn plateau(left: T, right: T, ramp: T) -> Self {
        Self::new(SpatialProfile::Plateau { left, right, ramp }, TemporalProfile::Linear)
    }
}

/// Left side minus right side of each weak identity, plus the largest deviation
/// of the total energy from its initial value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual<T> {
    pub velocity: T,
    pub density: T,
    pub energy: T,
    pub mass_defect: T,
}

impl<T: Scalar> Residual<T> {
    pub fn max_abs(&self) -> T {
        self.velocity.abs().max(self.density.abs()).max(self.energy.abs())
    }
}

/// `intervals + 1` equispaced nodes on `[0, t_max]`.
pub fn uniform_nodes<T: Scalar>(t_max: T, intervals: usize) -> Vec<T> {
    let n = T::from_usize(intervals).expect("count");
    (0..=intervals)
        .map(|k| t_max * T::from_usize(k).expect("count") / n)
        .collect()
}

/// Eulerian states `T_t(s_0)` at a list of time nodes starting at 0.
#[derive(Clone, Debug)]
pub struct Trajectory<T> {
    initial: EulerianState<T>,
    times: Vec<T>,
    states: Vec<EulerianState<T>>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn new(s0: &EulerianState<T>, times: &[T]) -> Result<Self> {
        if times.len() < 2
            || times[0] != T::zero()
            || times.windows(2).any(|w| !(w[1] > w[0]))
        {
            return Err(Error::TimeNodes);
        }
        let x0 = to_lagrangian(s0)?;
        let states = times
            .iter()
            .map(|&t| evolve_lagrangian_to_eulerian(&x0, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { initial: s0.clone(), times: times.to_vec(), states })
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn states(&self) -> &[EulerianState<T>] {
        &self.states
    }

    /// Weak-form defects for one test function; `chi` is scaled to the last node.
    pub fn residual(&self, phi: &TestFunction<T>) -> Residual<T> {
        let horizon = *self.times.last().expect("at least two nodes");
        let mut acc = [T::zero(); 3];
        let mut prev: Option<(T, [T; 6])> = None;
        for (&t, s) in self.times.iter().zip(&self.states) {
            let chi = phi.time.value(t, horizon);
            let dchi = phi.time.slope(t, horizon);
            let cur = integrands(s, &phi.space, chi, dchi);
            if let Some((tp, p)) = prev {
                let h = (t - tp) / T::lit(2.0);
                for i in 0..3 {
                    acc[i] = acc[i] + h * (p[i] + cur[i]);
                }
            }
            prev = Some((t, cur));
        }
        let init = integrands(&self.initial, &phi.space, T::one(), T::zero());
        let m0 = self.initial.mu.total_mass();
        let mass_defect = self
            .states
            .iter()
            .fold(T::zero(), |m, s| m.max((s.mu.total_mass() - m0).abs()));
        Residual {
            velocity: acc[0] + init[3],
            density: acc[1] + init[4],
            energy: acc[2] + init[5],
            mass_defect,
        }
    }
}

/// Runs the trajectory and evaluates one test function.
pub fn weak_residual<T: Scalar>(
    s0: &EulerianState<T>,
    phi: &TestFunction<T>,
    times: &[T],
) -> Result<Residual<T>> {
    Ok(Trajectory::new(s0, times)?.residual(phi))
}

/// Spatial integrals at one time: the three space-time integrands followed by
/// `int u psi`, `int rho psi` and `int psi dmu`, the latter three scaled by `chi`.
fn integrands<T: Scalar>(s: &EulerianState<T>, psi: &SpatialProfile<T>, chi: T, dchi: T) -> [T; 6] {
    let (a, b) = psi.support();
    let mut nodes: Vec<T> = psi.kinks();
    nodes.extend_from_slice(s.u.xs());
    nodes.extend_from_slice(s.rho.breaks());
    nodes.extend_from_slice(s.mu.density().breaks());
    nodes.extend(s.mu.atoms().iter().map(|p| p.0));
    nodes.retain(|&x| x >= a && x <= b);
    let nodes = merge_nodes(nodes);
    let max_len = (b - a) / T::lit(SUBDIVISIONS);
    let total = s.mu.total_mass();
    let (half, quarter) = (T::lit(0.5), T::lit(0.25));

    let mut out = [T::zero(); 6];
    for w in nodes.windows(2) {
        let pieces = ((w[1] - w[0]) / max_len).ceil().max(T::one());
        let len = (w[1] - w[0]) / pieces;
        let count = pieces.to_usize().expect("finite cell count");
        for j in 0..count {
            let lo = w[0] + len * T::from_usize(j).expect("count");
            let mid = lo + len * half;
            for (&g, &wt) in GAUSS_NODES.iter().zip(&GAUSS_WEIGHTS) {
                let x = mid + len * half * T::lit(g);
                let weight = len * half * T::lit(wt);
                let (p, dp) = (psi.value(x), psi.slope(x));
                let u = s.u.eval(x);
                let rho = s.rho.eval(x);
                let e = s.mu.density().eval(x);
                let cdf = s.mu.cdf_left(x);
                out[0] = out[0]
                    + weight
                        * (u * p * dchi
                            + half * u * u * dp * chi
                            + quarter * (T::lit(2.0) * cdf - total) * p * chi);
                out[1] = out[1] + weight * (rho * p * dchi + rho * u * dp * chi);
                out[2] = out[2] + weight * e * (p * dchi + u * dp * chi);
                out[3] = out[3] + weight * u * p * chi;
                out[4] = out[4] + weight * rho * p * chi;
                out[5] = out[5] + weight * e * p * chi;
            }
        }
    }
    for &(x, m) in s.mu.atoms() {
        if x >= a && x <= b {
            let (p, dp) = (psi.value(x), psi.slope(x));
            out[2] = out[2] + m * (p * dchi + s.u.eval(x) * dp * chi);
            out[5] = out[5] + m * p * chi;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::{PiecewiseConstant, PiecewiseLinear};
    use crate::measure::RadonMeasure;

    fn example() -> EulerianState<f64> {
        let u = PiecewiseLinear::bounded(&[(-1.0, 1.0), (0.0, 0.0)]).unwrap();
        let rho = PiecewiseConstant::indicator(0.0, 1.0, 1.0).unwrap();
        let density = crate::eulerian::energy_density(&u, &rho);
        EulerianState::new(u, rho, RadonMeasure::new(density, vec![(0.0, 0.5)]).unwrap())
    }

    #[test]
    fn profiles_vanish_outside_support() {
        for p in [
            SpatialProfile::<f64>::Bump { center: 0.0, radius: 1.0 },
            SpatialProfile::Tent { center: 0.0, radius: 1.0 },
            SpatialProfile::TruncatedGaussian { center: 0.0, radius: 1.0 },
            SpatialProfile::Plateau { left: -0.5, right: 0.5, ramp: 0.5 },
        ] {
            assert_eq!(p.value(1.0), 0.0);
            assert_eq!(p.value(-2.0), 0.0);
            assert!((p.value(0.0) - 1.0).abs() < 1e-15);
        }
        let tent = SpatialProfile::Tent { center: 0.0, radius: 2.0 };
        assert_eq!(tent.slope(0.0), 0.0);
        assert_eq!(tent.slope(-2.0), 0.25);
        assert_eq!(tent.slope(-1.0), 0.5);
    }

    #[test]
    fn bump_slope_matches_difference_quotient() {
        let p = SpatialProfile::<f64>::Bump { center: 0.3, radius: 1.7 };
        for x in [-1.0, -0.2, 0.5, 1.4] {
            let h = 1e-6;
            let fd = (p.value(x + h) - p.value(x - h)) / (2.0 * h);
            assert!((fd - p.slope(x)).abs() < 1e-8, "{x}");
        }
    }

    #[test]
    fn vacuum_has_zero_residual() {
        let s = EulerianState::<f64>::vacuum();
        let r = weak_residual(&s, &TestFunction::bump(0.0, 1.0), &uniform_nodes(1.0, 8)).unwrap();
        assert_eq!(r.max_abs(), 0.0);
        assert_eq!(r.mass_defect, 0.0);
    }

    #[test]
    fn plateau_sees_total_mass_only() {
        let times = uniform_nodes(3.0, 12);
        let r = weak_residual(&example(), &TestFunction::plateau(-50.0, 50.0, 1.0), &times).unwrap();
        assert!(r.energy.abs() < 1e-12, "{r:?}");
        assert!(r.mass_defect < 1e-12);
    }

    #[test]
    fn rejects_bad_time_nodes() {
        let s = example();
        let phi = TestFunction::bump(0.0, 1.0);
        assert!(matches!(weak_residual(&s, &phi, &[0.5, 1.0]), Err(Error::TimeNodes)));
        assert!(matches!(weak_residual(&s, &phi, &[0.0, 1.0, 1.0]), Err(Error::TimeNodes)));
    }
}
