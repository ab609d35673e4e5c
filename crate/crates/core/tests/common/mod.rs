#![allow(dead_code)]

use hs2_core::{
    energy_density, to_lagrangian, EulerianState64, LagrangianState64, PiecewiseConstant64,
    PiecewiseLinear64, RadonMeasure64, Relabeling64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Strictly increasing nodes starting in `[lo, lo + 1)` with gaps in `[min_gap, max_gap)`.
pub fn nodes(rng: &mut ChaCha8Rng, n: usize, lo: f64, min_gap: f64, max_gap: f64) -> Vec<f64> {
    let mut x = lo + rng.gen::<f64>();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(x);
        x += rng.gen_range(min_gap..max_gap);
    }
    out
}

/// Valid Eulerian state: piecewise-linear `u` with values in `[-1, 1]`, signed
/// piecewise-constant `rho` and up to two atoms.
pub fn eulerian(rng: &mut ChaCha8Rng) -> EulerianState64 {
    let n = rng.gen_range(2..=6);
    let xs = nodes(rng, n, -3.0, 0.2, 1.2);
    let pts: Vec<(f64, f64)> = xs.iter().map(|&x| (x, rng.gen_range(-1.0..1.0))).collect();
    let u = PiecewiseLinear64::bounded(&pts).unwrap();
    let cells = rng.gen_range(0..=3);
    let rho = if cells == 0 {
        PiecewiseConstant64::zero()
    } else {
        let breaks = nodes(rng, cells + 1, -3.0, 0.2, 1.5);
        let values = (0..cells).map(|_| rng.gen_range(-1.0..1.0)).collect();
        PiecewiseConstant64::new(breaks, values).unwrap()
    };
    let atoms = (0..rng.gen_range(0..=2))
        .map(|_| (rng.gen_range(-3.0..3.0), rng.gen_range(0.1..1.0)))
        .collect();
    let density = energy_density(&u, &rho);
    EulerianState64::new(u, rho, RadonMeasure64::new(density, atoms).unwrap())
}

/// A state in `F_0`.
pub fn f0_state(rng: &mut ChaCha8Rng) -> LagrangianState64 {
    to_lagrangian(&eulerian(rng)).unwrap()
}

/// Relabeling with cell slopes in `[0.3, 3]` and slope 1 outside its nodes.
pub fn relabeling(rng: &mut ChaCha8Rng) -> Relabeling64 {
    let n = rng.gen_range(2..=5);
    let xs = nodes(rng, n, -4.0, 0.3, 2.0);
    let mut y = xs[0] + rng.gen_range(-0.5..0.5);
    let mut pts = vec![(xs[0], y)];
    for w in xs.windows(2) {
        y += rng.gen_range(0.3..3.0) * (w[1] - w[0]);
        pts.push((w[1], y));
    }
    Relabeling64::from_points(&pts).unwrap()
}

/// A state in `F`, generally outside `F_0`.
pub fn f_state(rng: &mut ChaCha8Rng) -> LagrangianState64 {
    let x = f0_state(rng);
    x.relabel(&relabeling(rng)).unwrap()
}
