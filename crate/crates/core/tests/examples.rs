use hs2_core::oracle::{ex11, ex26_eulerian, ex34, ex36, example, Example, ExampleValue};
use hs2_core::{
    breaking_times, d_lower, evolve, evolve_eulerian, lipschitz_sweep, to_lagrangian,
    EulerianState32, EulerianState64, JOptions, LagrangianState64, PiecewiseLinear64, DEFAULT_TOL,
};

fn assert_close(a: &EulerianState64, b: &EulerianState64, tol: f64) {
    let (du, drho, dmu) = a.distance(b);
    assert!(a.u.max_abs_diff(&b.u) <= tol, "u differs by {du}");
    assert!(a.rho.max_abs_diff(&b.rho) <= tol, "rho differs by {drho}");
    assert!(a.mu.cdf_distance(&b.mu) <= tol, "mu differs by {dmu}");
}

#[test]
fn atom_trajectory_matches_closed_form() {
    let s0 = ex36::<f64>(0.0).unwrap();
    for t in [0.5, 1.0, 2.0, 3.0] {
        assert_close(&evolve_eulerian(&s0, t).unwrap(), &ex36(t).unwrap(), 1e-10);
    }
}

#[test]
fn smooth_trajectory_matches_closed_form_before_breaking() {
    let s0 = ex11::<f64>(0.0).unwrap();
    for t in [0.25, 0.5, 1.0, 1.5, 1.9, 1.99] {
        let s = evolve_eulerian(&s0, t).unwrap();
        let oracle = ex11(t).unwrap();
        assert!(s.u.max_abs_diff(&oracle.u) <= 1e-10);
        assert!(s.rho.max_abs_diff(&oracle.rho) <= 1e-10);
        assert!((s.mu.total_mass() - 2.0).abs() <= 1e-12);
        let conditioning = (1.0 - 0.5 * t).powi(-2);
        assert!((oracle.mu.total_mass() - 2.0).abs() <= 1e-12 * conditioning);
    }
}

#[test]
fn lagrangian_trajectory_matches_closed_form() {
    let x0 = to_lagrangian(&ex26_eulerian::<f64>()).unwrap();
    for t in [0.0, 0.7, 2.0, 3.5] {
        assert!(evolve(&x0, t).unwrap().max_abs_diff(&ex34(t).unwrap()) <= 1e-12);
    }
}

#[test]
fn perturbed_basic_example_satisfies_stability() {
    let x = to_lagrangian(&ex26_eulerian::<f64>()).unwrap();
    let s = ex26_eulerian::<f64>();
    let u = PiecewiseLinear64::bounded(&[(-1.0, 1.01), (0.0, 0.0)]).unwrap();
    let nudged = EulerianState64::new(u.clone(), s.rho.clone(), {
        let density = hs2_core::energy_density(&u, &s.rho);
        hs2_core::RadonMeasure64::new(density, s.mu.atoms().to_vec()).unwrap()
    });
    let xb: LagrangianState64 = to_lagrangian(&nudged).unwrap();
    let reports = lipschitz_sweep(&x, &xb, &[0.5, 1.0, 2.0], &JOptions::default()).unwrap();
    assert!(reports.iter().all(|r| r.satisfied && r.lhs > 0.0));
    assert!(d_lower(&x, &xb).unwrap() > 0.0);
}

#[test]
fn registry_dispatches_every_example() {
    for e in Example::ALL {
        let t = if e == Example::Ex47 { 0.5 } else { 1.0 };
        match example::<f64>(e, t).unwrap() {
            ExampleValue::Eulerian(s) => assert!(s.is_valid(DEFAULT_TOL)),
            ExampleValue::Lagrangian(x) => assert!(x.validate(DEFAULT_TOL).is_ok()),
            ExampleValue::Relabeling(f) => assert_eq!(f.eval(2.0), 1.0),
        }
    }
}

#[test]
fn single_precision_reproduces_breaking() {
    let s0: EulerianState32 = ex36(0.0).unwrap();
    let x0 = to_lagrangian(&s0).unwrap();
    let (t, at) = breaking_times(&x0).first.unwrap();
    assert!((t - 2.0).abs() < 1e-5 && (at + 0.25).abs() < 1e-5);
    let s2 = evolve_eulerian(&s0, 2.0f32).unwrap();
    let mass: f32 = s2.mu.atoms().iter().map(|a| a.1).sum();
    assert!((mass - 1.0).abs() < 1e-4);
    assert!((s2.mu.total_mass() - 2.5).abs() < 1e-4);
}
