//! The standard worked examples, checked through the public API.

use spillover::families::{recognize_cluster_network, recognize_constellation, recognize_galaxy, recognize_halo, recognize_stellar};
use spillover::{
    certify_value_upper_attained, circle_block, combinations, dominating_pairs, empty_optimal, evaluate,
    example2_experiment, extend_clusters, extend_pairs_to_circle, extend_stellar, make_family, public_optimal, rat,
    replicate_to_empty, sweep_values, Error, FamilySpec, Instance, Network, SweepOptions, ValueCertificate,
};

fn nine_receivers() -> Instance {
    Instance::new(Network::empty(9).unwrap(), rat(1, 3), 5, false).unwrap()
}

/// The stellar network of the directed-tree example, relabelled from
/// 1..6 to 0..5.
fn stellar_six() -> Network {
    Network::new(6, [(0, 3), (1, 3), (2, 3), (3, 4), (3, 5), (2, 5), (4, 5)]).unwrap()
}

#[test]
fn nine_receiver_bounds() {
    let inst = nine_receivers();
    assert_eq!(inst.v_upper(), rat(14, 15));
    assert_eq!(inst.v_public(), rat(2, 3));
    assert_eq!(inst.v_tilde(), rat(9, 10));
}

#[test]
fn boundary_prior_is_opt_in() {
    let g = Network::empty(8).unwrap();
    assert!(matches!(Instance::new(g.clone(), rat(1, 3), 4, false), Err(Error::BoundaryPriorRejected(_))));
    assert!(Instance::new(g, rat(1, 3), 4, true).is_ok());
}

#[test]
fn empty_network_experiment() {
    let inst = nine_receivers();
    let c = empty_optimal(&inst).unwrap();
    assert_eq!(c.experiment.rows().len(), 1 + combinations(9, 5).len() + 1);
    let report = evaluate(&c.experiment, &inst).unwrap();
    assert_eq!(report.value, rat(14, 15));
    // A persuaded receiver holds posterior exactly 1/2.
    let split = report.rows.iter().find(|r| r.s.iter().filter(|&&m| m == spillover::X).count() == 5).unwrap();
    assert!(split.posteriors.iter().any(|p| *p == rat(1, 2)));
}

#[test]
fn circle_blocks_of_two() {
    let g = make_family(&FamilySpec::Circle { n: 9 }).unwrap();
    let inst = nine_receivers().with_network(g).unwrap();
    let e = circle_block(&inst).unwrap().experiment;
    let blocks: Vec<_> = e.rows().iter().filter(|r| r.s.iter().filter(|&&m| m == spillover::Y).count() == 2).collect();
    assert_eq!(blocks.len(), 9);
    assert!(blocks.iter().all(|r| r.p_y == rat(1, 10)));
    assert_eq!(evaluate(&e, &inst).unwrap().value, rat(14, 15));
    assert_eq!(
        certify_value_upper_attained(&inst),
        ValueCertificate::Certified { value: rat(14, 15) }
    );
}

#[test]
fn public_value_on_complete() {
    let inst = nine_receivers().with_network(make_family(&FamilySpec::Complete { n: 9 }).unwrap()).unwrap();
    assert_eq!(evaluate(&public_optimal(&inst).unwrap().experiment, &inst).unwrap().value, rat(2, 3));
}

#[test]
fn pairs_to_circle_chain_is_not_monotonic() {
    let pairs = Network::new(9, [(0, 1), (2, 3), (4, 5), (6, 8)]).unwrap();
    let plan = extend_pairs_to_circle(&pairs).unwrap();
    assert_eq!(plan.added_edges.len(), 5);
    let chain = vec![
        Network::empty(9).unwrap(),
        pairs,
        plan.extended,
        make_family(&FamilySpec::Complete { n: 9 }).unwrap(),
    ];
    let report = sweep_values(&nine_receivers(), &chain, &SweepOptions::default()).unwrap();
    assert!(!report.monotonic);
    assert_eq!(report.violations.len(), 1);
    assert_eq!((report.violations[0].from, report.violations[0].to), (1, 2));
    assert!(report.records[0].certified && report.records[2].certified && report.records[3].certified);
}

#[test]
fn sweep_rejects_non_extensions() {
    let chain = vec![make_family(&FamilySpec::Circle { n: 9 }).unwrap(), Network::empty(9).unwrap()];
    assert_eq!(sweep_values(&nine_receivers(), &chain, &SweepOptions::default()).unwrap_err(), Error::NotAnExtensionChain(1));
}

#[test]
fn example2_bridge() {
    let ex = example2_experiment().unwrap();
    assert_eq!(evaluate(&ex.canonical.experiment, &ex.instance).unwrap().value, rat(1, 1));
    // Receiver 3 dominates receivers 0, 1 and 2.
    let pairs = dominating_pairs(&ex.extended).pairs;
    for j in 0..3 {
        assert!(pairs.contains(&(3, j)));
    }
    assert!(matches!(certify_value_upper_attained(&ex.instance), ValueCertificate::Inconclusive { .. }));
    let replicated = replicate_to_empty(&ex.canonical.experiment, &ex.extended).unwrap().experiment;
    let empty = ex.instance.with_network(Network::empty(8).unwrap()).unwrap();
    assert_eq!(evaluate(&replicated, &empty).unwrap().value, rat(1, 1));
}

#[test]
fn stellar_directed_tree() {
    let cert = recognize_stellar(&stellar_six()).unwrap();
    assert_eq!(cert.root, 3);
    assert_eq!(cert.depth, 2);
    let mut edges = cert.tree_edges.clone();
    edges.sort_unstable();
    assert_eq!(edges, vec![(3, 0), (3, 1), (3, 5), (5, 2), (5, 4)]);
}

#[test]
fn stellar_extension_links_by_depth() {
    // The stellar network plus the outside pair 6–7.
    let base: Vec<_> = stellar_six().edges().to_vec();
    let g = Network::new(8, base.iter().copied().chain([(6, 7)])).unwrap();
    let plan = extend_stellar(&g, 5, 0).unwrap();
    for e in [(0, 6), (1, 6), (5, 6), (2, 7), (4, 7)] {
        assert!(plan.added_edges.contains(&e), "missing {e:?} in {:?}", plan.added_edges);
    }
    assert!(plan.certificate.is_empty());
    let seven = Network::new(7, base).unwrap();
    assert_eq!(extend_stellar(&seven, 4, 0).unwrap_err(), Error::NotEnoughOutsideNodes { needed: 2, found: 1 });
}

#[test]
fn halo_and_constellation_recognition() {
    assert!(recognize_halo(&make_family(&FamilySpec::Halo { n: 5 }).unwrap()));
    // Centers 4 and 5 around a depth-2 periphery.
    let mut edges = vec![(4, 5), (2, 3), (2, 6)];
    for v in [0, 1, 2, 3, 6] {
        edges.push((v, 4));
        edges.push((v, 5));
    }
    let cert = recognize_constellation(&Network::new(7, edges).unwrap()).unwrap();
    assert_eq!(cert.centers, vec![4, 5]);
    assert_eq!(cert.depth, 2);
    assert!(recognize_constellation(&make_family(&FamilySpec::Complete { n: 4 }).unwrap()).is_err());
}

#[test]
fn galaxy_recognition() {
    assert!(recognize_galaxy(&make_family(&FamilySpec::Galaxy { sizes: vec![3, 4] }).unwrap()).is_ok());
    let triangles = Network::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
    assert!(recognize_galaxy(&triangles).is_ok());
    let square = Network::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    assert!(recognize_galaxy(&square).is_err());
}

#[test]
fn cluster_rings() {
    let g = make_family(&FamilySpec::Clusters { q: 3, p: 3 }).unwrap();
    assert_eq!(recognize_cluster_network(&g).unwrap(), (3, 3));
    let plan = extend_clusters(&g, 5).unwrap();
    assert_eq!(plan.added_edges.len(), 9);
    let inst = Instance::new(plan.extended.clone(), rat(1, 4), 5, false).unwrap();
    assert!(matches!(certify_value_upper_attained(&inst), ValueCertificate::Certified { .. }));
}
