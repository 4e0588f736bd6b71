use proptest::prelude::*;
use spillover::{
    dominating_pairs, evaluate, parse_rational, rat, render, replicate_to_empty, Experiment, Instance, Network,
    Rational,
};

fn network(max_n: usize) -> impl Strategy<Value = Network> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
            Network::new(n, pairs.zip(bits).filter(|(_, on)| *on).map(|(e, _)| e)).unwrap()
        })
    })
}

/// A valid instance: k at least a majority, prior strictly below the
/// boundary.
fn instance(max_n: usize) -> impl Strategy<Value = Instance> {
    network(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), n.div_ceil(2)..=n, 1i64..100).prop_map(move |(g, k, t)| {
            // t/101 of the boundary k/(n+k).
            let prior = rat(k as i64 * t, (n + k) as i64 * 101);
            Instance::new(g, prior, k, false).unwrap()
        })
    })
}

/// Binary experiments with 1..=4 rows and integer weights.
fn experiment(n: usize) -> impl Strategy<Value = Experiment> {
    proptest::collection::vec((proptest::collection::vec(0u32..2, n), 0i64..4, 0i64..4), 1..=4).prop_map(
        move |mut rows| {
            rows[0].1 += 1;
            let last = rows.len() - 1;
            rows[last].2 += 1;
            let tx: i64 = rows.iter().map(|r| r.1).sum();
            let ty: i64 = rows.iter().map(|r| r.2).sum();
            let entries = rows.into_iter().map(|(s, x, y)| (s, rat(x, tx), rat(y, ty)));
            Experiment::collect(Experiment::binary_alphabets(n), entries).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rationals_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let r = rat(p, q);
        prop_assert_eq!(parse_rational(&render(&r)).unwrap(), r);
    }

    #[test]
    fn networks_round_trip(g in network(8)) {
        prop_assert_eq!(Network::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn bound_identities(inst in instance(9)) {
        let lx = inst.prior_x().clone();
        prop_assert_eq!(inst.v_upper(), &lx + inst.prior_y() * inst.v_tilde());
        prop_assert!(inst.v_public() <= inst.v_upper());
        prop_assert!(inst.v_upper() < Rational::from_integer(1.into()));
        prop_assert_eq!(inst.v_public() == inst.v_upper(), inst.k() == inst.n());
    }

    #[test]
    fn dominating_pairs_are_window_inclusions(g in network(8)) {
        let report = dominating_pairs(&g);
        prop_assert_eq!(report.count, report.pairs.len());
        for i in 0..g.n() {
            for j in 0..g.n() {
                let inside = i != j && g.window(j).iter().all(|v| g.window(i).contains(v));
                prop_assert_eq!(report.pairs.contains(&(i, j)), inside, "pair {}>{}", i, j);
            }
        }
    }

    #[test]
    fn values_respect_the_no_link_bound(
        (inst, e) in instance(6).prop_flat_map(|inst| { let n = inst.n(); (Just(inst), experiment(n)) })
    ) {
        prop_assert_eq!(Experiment::from_json(&e.to_json()).unwrap(), e.clone());
        if let Ok(report) = evaluate(&e, &inst) {
            prop_assert!(report.value <= inst.v_upper());
            let empty = inst.with_network(Network::empty(inst.n()).unwrap()).unwrap();
            let flat = replicate_to_empty(&e, inst.network()).unwrap().experiment;
            prop_assert_eq!(evaluate(&flat, &empty).unwrap().value, report.value);
        }
    }
}
