//! Finite positive Radon measures represented as a piecewise-constant density
//! plus finitely many atoms.

use crate::error::{Error, Result};
use crate::func::{merge_nodes, MonotoneGraph, PiecewiseConstant, PiecewiseLinear};
use crate::scalar::{diag, Scalar};
use crate::validation::Violation;

/// Atoms closer than this are merged into one.
pub const ATOM_MERGE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct RadonMeasure<T> {
    density: PiecewiseConstant<T>,
    atoms: Vec<(T, T)>,
    cum_density: Vec<T>,
}

impl<T: Scalar> RadonMeasure<T> {
    /// Checked constructor: nonnegative zero-tailed density, positive atom masses.
    /// Atoms are sorted and coalesced.
    pub fn new(density: PiecewiseConstant<T>, atoms: Vec<(T, T)>) -> Result<Self> {
        if !density.has_zero_tails() {
            return Err(Error::NonzeroTail);
        }
        if let Some((a, b, v)) = density.cells().find(|c| !(c.2 >= T::zero())) {
            return Err(Error::NegativeWeight { left: diag(a), right: diag(b), value: diag(v) });
        }
        if let Some(&(x, m)) = atoms
            .iter()
            .find(|(x, m)| !x.is_finite() || !(*m >= T::zero()) || !m.is_finite())
        {
            return Err(Error::NegativeWeight { left: diag(x), right: diag(x), value: diag(m) });
        }
        let atoms = coalesce(atoms.into_iter().filter(|a| a.1 > T::zero()).collect());
        Ok(Self::assemble(density, atoms))
    }

    /// Keeps the data as given (sorted atoms) so that invalid input can be reported.
    pub fn new_unchecked(density: PiecewiseConstant<T>, mut atoms: Vec<(T, T)>) -> Self {
        atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        Self::assemble(density, atoms)
    }

    fn assemble(density: PiecewiseConstant<T>, atoms: Vec<(T, T)>) -> Self {
        let mut cum_density = Vec::with_capacity(density.breaks().len());
        if !density.breaks().is_empty() {
            let mut acc = T::zero();
            cum_density.push(acc);
            for (a, b, v) in density.cells() {
                acc = acc + v * (b - a);
                cum_density.push(acc);
            }
        }
        Self { density, atoms, cum_density }
    }

    pub fn zero() -> Self {
        Self::assemble(PiecewiseConstant::zero(), Vec::new())
    }

    pub fn absolutely_continuous(density: PiecewiseConstant<T>) -> Result<Self> {
        Self::new(density, Vec::new())
    }

    pub fn density(&self) -> &PiecewiseConstant<T> {
        &self.density
    }

    pub fn atoms(&self) -> &[(T, T)] {
        &self.atoms
    }

    /// Violations of positivity and finiteness.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !self.density.has_zero_tails() {
            out.push(Violation::NonzeroTail { component: "mu.density" });
        }
        for (a, b, v) in self.density.cells() {
            if !v.is_finite() {
                out.push(Violation::NonFinite { component: "mu.density" });
            } else if v < T::zero() {
                out.push(Violation::Negative {
                    component: "mu.density",
                    left: diag(a),
                    right: diag(b),
                    value: diag(v),
                });
            }
        }
        for &(x, m) in &self.atoms {
            if !(m > T::zero()) || !x.is_finite() {
                out.push(Violation::NegativeAtom { x: diag(x), mass: diag(m) });
            }
        }
        out
    }

    fn density_cdf(&self, x: T) -> T {
        let b = self.density.breaks();
        let n = b.len();
        if n == 0 || x <= b[0] {
            return T::zero();
        }
        if x >= b[n - 1] {
            return self.cum_density[n - 1];
        }
        let i = b.partition_point(|&p| p <= x) - 1;
        self.cum_density[i] + self.density.values()[i] * (x - b[i])
    }

    /// `mu((-inf, x))`.
    pub fn cdf_left(&self, x: T) -> T {
        self.atoms
            .iter()
            .take_while(|a| a.0 < x)
            .fold(self.density_cdf(x), |acc, a| acc + a.1)
    }

    /// `mu((-inf, x])`.
    pub fn cdf_right(&self, x: T) -> T {
        self.atoms
            .iter()
            .take_while(|a| a.0 <= x)
            .fold(self.density_cdf(x), |acc, a| acc + a.1)
    }

    pub fn total_mass(&self) -> T {
        let ac = self.cum_density.last().copied().unwrap_or_else(T::zero);
        self.atoms.iter().fold(ac, |acc, a| acc + a.1)
    }

    /// Mass of the atom located at `x` (0 when there is none).
    pub fn atom_mass_at(&self, x: T) -> T {
        let tol = T::lit(ATOM_MERGE_TOL);
        self.atoms
            .iter()
            .filter(|a| (a.0 - x).abs() <= tol)
            .fold(T::zero(), |acc, a| acc + a.1)
    }

    /// Graph of `x -> x + mu((-inf, x))`, with a vertical segment at every atom.
    pub fn distribution_graph(&self) -> MonotoneGraph<T> {
        let mut nodes: Vec<T> = self.density.breaks().to_vec();
        nodes.extend(self.atoms.iter().map(|a| a.0));
        let nodes = merge_nodes(nodes);
        if nodes.is_empty() {
            return MonotoneGraph::new(vec![(T::zero(), T::zero()), (T::one(), T::one())], T::one(), T::one())
                .expect("identity graph");
        }
        let mut pts = Vec::with_capacity(nodes.len() + self.atoms.len());
        for &x in &nodes {
            pts.push((x, x + self.cdf_left(x)));
            let m = self.atom_mass_at(x);
            if m > T::zero() {
                pts.push((x, x + self.cdf_left(x) + m));
            }
        }
        MonotoneGraph::new(pts, T::one(), T::one()).expect("distribution of a positive measure")
    }

    /// The push-forward `y_#(w dxi)` of a nonnegative density.
    pub fn pushforward(y: &PiecewiseLinear<T>, w: &PiecewiseConstant<T>) -> Result<Self> {
        y.check_nondecreasing()?;
        if !w.has_zero_tails() {
            return Err(Error::NonzeroTail);
        }
        let tol = T::merge_tol() * w.sup_norm().max(T::one());
        if let Some((a, b, v)) = w.cells().find(|c| c.2 < -tol) {
            return Err(Error::NegativeWeight { left: diag(a), right: diag(b), value: diag(v) });
        }
        let w = w.map(|v| v.max(T::zero()));
        let (density, atoms) = push_density(y, &w);
        Self::new(density, atoms)
    }

    /// `sup_x |F(x) - G(x)|` over both left- and right-continuous distributions.
    /// Positions closer than [`ATOM_MERGE_TOL`] are identified, so an atom moved
    /// by rounding does not count as a jump of the difference.
    pub fn cdf_distance(&self, other: &Self) -> T {
        let mut nodes: Vec<T> = self.density.breaks().to_vec();
        nodes.extend_from_slice(other.density.breaks());
        nodes.extend(self.atoms.iter().chain(&other.atoms).map(|a| a.0));
        nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let tol = T::lit(ATOM_MERGE_TOL);
        let mut clusters: Vec<(T, T)> = Vec::new();
        for x in nodes {
            match clusters.last_mut() {
                Some(c) if x - c.1 <= tol => c.1 = x,
                _ => clusters.push((x, x)),
            }
        }
        clusters
            .iter()
            .fold(T::zero(), |m, &(lo, hi)| {
                let (a, b) = (lo - tol, hi + tol);
                m.max((self.cdf_right(a) - other.cdf_right(a)).abs())
                    .max((self.cdf_right(b) - other.cdf_right(b)).abs())
            })
            .max((self.total_mass() - other.total_mass()).abs())
    }
}

fn coalesce<T: Scalar>(mut atoms: Vec<(T, T)>) -> Vec<(T, T)> {
    atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
    let tol = T::lit(ATOM_MERGE_TOL);
    let mut out: Vec<(T, T)> = Vec::with_capacity(atoms.len());
    for (x, m) in atoms {
        match out.last_mut() {
            Some(last) if x - last.0 <= tol => last.1 = last.1 + m,
            _ => out.push((x, m)),
        }
    }
    out
}

/// Pushes `w dxi` forward along a nondecreasing `y`. Cells where `y` is (numerically)
/// flat become atoms at their image point; elsewhere the image density on
/// `[y(a), y(b)]` carries exactly the mass `w (b - a)`. Signed `w` is allowed.
pub(crate) fn push_density<T: Scalar>(
    y: &PiecewiseLinear<T>,
    w: &PiecewiseConstant<T>,
) -> (PiecewiseConstant<T>, Vec<(T, T)>) {
    let b = w.breaks();
    if b.is_empty() {
        return (PiecewiseConstant::zero(), Vec::new());
    }
    let (lo, hi) = (b[0], b[b.len() - 1]);
    let mut nodes = b.to_vec();
    nodes.extend(y.xs().iter().copied().filter(|&x| x > lo && x < hi));
    let nodes = merge_nodes(nodes);
    let image_span = y.eval(hi) - y.eval(lo);
    let flat = T::merge_tol() * image_span.abs().max(T::one());

    let mut segments: Vec<(T, T, T)> = Vec::new();
    let mut atoms = Vec::new();
    for cell in nodes.windows(2) {
        let (p, q) = (cell[0], cell[1]);
        let wv = w.eval((p + q) / T::lit(2.0));
        if wv == T::zero() {
            continue;
        }
        let mass = wv * (q - p);
        let mut yp = y.eval(p);
        let yq = y.eval(q);
        if let Some(&(_, end, _)) = segments.last() {
            yp = yp.max(end);
        }
        if yq - yp <= flat {
            atoms.push(((yp + yq) / T::lit(2.0), mass));
        } else {
            segments.push((yp, yq, mass / (yq - yp)));
        }
    }
    let density = PiecewiseConstant::from_segments(&segments)
        .expect("image segments are ordered")
        .simplified();
    (density, atoms)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// mu = 1 dx on (-1, 1) plus 1/2 delta_0.
    fn example_measure() -> RadonMeasure<f64> {
        RadonMeasure::new(
            PiecewiseConstant::new(vec![-1.0, 0.0, 1.0], vec![1.0, 1.0]).unwrap(),
            vec![(0.0, 0.5)],
        )
        .unwrap()
    }

    #[test]
    fn distribution_functions() {
        let mu = example_measure();
        assert_eq!(mu.cdf_right(0.0), 1.5);
        assert_eq!(mu.cdf_left(0.0), 1.0);
        assert_eq!(mu.cdf_right(0.5), 2.0);
        assert_eq!(mu.total_mass(), 2.5);
        assert_eq!(mu.cdf_right(0.0) - mu.cdf_left(0.0), mu.atom_mass_at(0.0));
        let z = RadonMeasure::<f64>::zero();
        assert_eq!(z.cdf_left(3.0), 0.0);
        assert_eq!(z.total_mass(), 0.0);
    }

    #[test]
    fn checked_constructor_rejects_negative_mass() {
        let d = PiecewiseConstant::indicator(0.0, 1.0, 1.0).unwrap();
        assert!(RadonMeasure::new(d.clone(), vec![(0.0, -0.5)]).is_err());
        let neg = PiecewiseConstant::indicator(0.0, 1.0, -1.0).unwrap();
        assert!(RadonMeasure::new(neg, vec![]).is_err());
        let bad = RadonMeasure::new_unchecked(d, vec![(0.0, -0.5)]);
        assert_eq!(bad.violations().len(), 1);
    }

    #[test]
    fn atoms_coalesce() {
        let mu = RadonMeasure::new(
            PiecewiseConstant::zero(),
            vec![(1.0, 0.25), (0.0, 1.0), (1.0 + 1e-14, 0.5)],
        )
        .unwrap();
        assert_eq!(mu.atoms().len(), 2);
        assert_eq!(mu.atom_mass_at(1.0), 0.75);
    }

    #[test]
    fn pushforward_of_example_lagrangian_energy() {
        // y and H' from the worked L-transform example
        let y = PiecewiseLinear::unit_slope(&[(-1.0, -1.0), (1.0, 0.0), (1.5, 0.0), (3.5, 1.0)])
            .unwrap();
        let hx = PiecewiseConstant::new(vec![-1.0, 1.0, 1.5, 3.5], vec![0.5, 1.0, 0.5]).unwrap();
        let mu = RadonMeasure::pushforward(&y, &hx).unwrap();
        assert_eq!(mu.cdf_right(0.0), 1.5);
        assert_eq!(mu.atom_mass_at(0.0), 0.5);
        for x in [-1.0, -0.5, 0.25, 1.0, 2.0] {
            assert!((mu.cdf_right(x) - example_measure().cdf_right(x)).abs() < 1e-15);
        }
    }

    #[test]
    fn pushforward_identity_and_collapse() {
        let w = PiecewiseConstant::indicator(0.0, 1.0, 1.0).unwrap();
        let mu = RadonMeasure::pushforward(&PiecewiseLinear::identity(), &w).unwrap();
        assert!(mu.atoms().is_empty());
        assert_eq!(mu.density().values(), &[1.0]);

        let y = PiecewiseLinear::unit_slope(&[(-1.0, -0.25), (1.0, -0.25)]).unwrap();
        let hx = PiecewiseConstant::indicator(-1.0, 1.0, 0.5).unwrap();
        let mu = RadonMeasure::pushforward(&y, &hx).unwrap();
        assert_eq!(mu.atoms(), &[(-0.25, 1.0)]);
    }

    #[test]
    fn pushforward_rejects_bad_inputs() {
        let w = PiecewiseConstant::indicator(0.0, 1.0, -1.0).unwrap();
        assert!(RadonMeasure::pushforward(&PiecewiseLinear::identity(), &w).is_err());
        let dec = PiecewiseLinear::unit_slope(&[(0.0, 1.0), (1.0, 0.0)]).unwrap();
        let w = PiecewiseConstant::indicator(0.0, 1.0, 1.0).unwrap();
        assert!(RadonMeasure::pushforward(&dec, &w).is_err());
    }

    #[test]
    fn cdf_distance_identifies_rounded_atom_positions() {
        let a = RadonMeasure::new(PiecewiseConstant::zero(), vec![(0.1, 0.5)]).unwrap();
        let b = RadonMeasure::new(PiecewiseConstant::zero(), vec![(0.1 + 2e-15, 0.5)]).unwrap();
        assert!(a.cdf_distance(&b) < 1e-15);
        let c = RadonMeasure::new(PiecewiseConstant::zero(), vec![(0.1 + 1e-6, 0.5)]).unwrap();
        assert_eq!(a.cdf_distance(&c), 0.5);
        assert!((a.cdf_distance(&example_measure()) - 2.0).abs() < 1e-12);
    }
}
