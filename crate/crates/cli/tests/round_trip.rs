use hs2_cli::{parse, print, StateFile};
use hs2_core::{
    EulerianState64, LagrangianState64, PiecewiseConstant64, PiecewiseLinear64, RadonMeasure64,
    Relabeling64,
};
use proptest::prelude::*;

fn value() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e6..1e6f64,
        -1.0..1.0f64,
        -1e-300..1e-300f64,
        Just(0.0),
        Just(-0.0),
        Just(0.1),
        Just(1.0 / 3.0),
    ]
}

fn abscissae(min: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1e6..1e6f64, min..8).prop_filter_map("distinct abscissae", move |mut xs| {
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        (xs.len() >= min).then_some(xs)
    })
}

fn linear() -> impl Strategy<Value = PiecewiseLinear64> {
    (abscissae(2), value(), value()).prop_flat_map(|(xs, l, r)| {
        let n = xs.len();
        prop::collection::vec(value(), n)
            .prop_map(move |ys| PiecewiseLinear64::new(xs.clone(), ys, l, r).unwrap())
    })
}

fn constant() -> impl Strategy<Value = PiecewiseConstant64> {
    let tails = prop_oneof![Just((0.0, 0.0)), (value(), value())];
    (abscissae(0), tails).prop_flat_map(|(breaks, (l, r))| {
        let n = breaks.len().saturating_sub(1);
        prop::collection::vec(value(), n).prop_map(move |values| {
            if values.is_empty() {
                PiecewiseConstant64::zero()
            } else {
                PiecewiseConstant64::with_tails(breaks.clone(), values, l, r).unwrap()
            }
        })
    })
}

fn atoms() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((value(), value()), 0..4)
}

fn state() -> impl Strategy<Value = StateFile> {
    prop_oneof![
        (linear(), constant(), constant(), atoms()).prop_map(|(u, rho, density, atoms)| {
            StateFile::Eulerian(EulerianState64::new(
                u,
                rho,
                RadonMeasure64::new_unchecked(density, atoms),
            ))
        }),
        (linear(), linear(), linear(), constant())
            .prop_map(|(y, u, h, r)| StateFile::Lagrangian(LagrangianState64::new(y, u, h, r))),
        abscissae(2).prop_flat_map(|xs| {
            prop::collection::vec(0.01..100.0f64, xs.len() - 1).prop_map(move |slopes| {
                let mut pts = vec![(xs[0], xs[0])];
                for (w, s) in xs.windows(2).zip(&slopes) {
                    let y = pts.last().unwrap().1 + s * (w[1] - w[0]);
                    pts.push((w[1], y));
                }
                StateFile::Relabeling(Relabeling64::from_points(&pts).unwrap())
            })
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn parse_inverts_print(s in state()) {
        let text = print(&s);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(print(&back), text);
    }
}
