//! Random generators shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spillover::{
    dominating_pairs, extend, make_family, rat, Construction, Experiment, FamilySpec, Network, Rational,
    StellarShape, Symbol,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A stellar shape with exactly `size` nodes (`size` is 1 or at least 3):
/// every internal node gets at least two partition elements.
pub fn random_shape(rng: &mut impl Rng, size: usize, max_depth: usize) -> StellarShape {
    assert!(size == 1 || size >= 3);
    if size == 1 || max_depth == 0 {
        return if size == 1 { StellarShape::leaf() } else { StellarShape::star(size - 1) };
    }
    loop {
        let mut parts = Vec::new();
        let mut left = size - 1;
        while left > 0 {
            let choices: Vec<usize> = (1..=left).filter(|&p| p != 2).collect();
            let p = *choices.choose(rng).unwrap();
            parts.push(p);
            left -= p;
        }
        if parts.len() >= 2 {
            let children = parts.into_iter().map(|p| random_shape(rng, p, max_depth - 1)).collect();
            return StellarShape { children };
        }
    }
}

/// Places `component` on random labels among `component.n() + outside`
/// receivers and sprinkles random links among the outside receivers.
/// Returns the network and the labels of the component.
pub fn embed(rng: &mut impl Rng, component: &Network, outside: usize) -> (Network, Vec<usize>) {
    let n = component.n() + outside;
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let mut edges: Vec<(usize, usize)> =
        component.edges().iter().map(|&(a, b)| (labels[a], labels[b])).collect();
    let out = &labels[component.n()..];
    for (t, &a) in out.iter().enumerate() {
        for &b in &out[t + 1..] {
            if rng.gen_bool(0.3) {
                edges.push((a, b));
            }
        }
    }
    let mut comp = labels[..component.n()].to_vec();
    comp.sort_unstable();
    (Network::new(n, edges).unwrap(), comp)
}

/// Index (in `Network::components` order) of the component holding `v`.
pub fn component_of(g: &Network, v: usize) -> usize {
    g.components().iter().position(|c| c.contains(&v)).unwrap()
}

pub fn random_network(rng: &mut impl Rng, n: usize, density: f64) -> Network {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    Network::new(n, edges).unwrap()
}

/// A random experiment with small alphabets and at most `support` rows;
/// state-conditional probabilities are exact multiples of `1/total`.
pub fn random_experiment(rng: &mut impl Rng, n: usize, support: usize) -> Experiment {
    let alphabets: Vec<Vec<Symbol>> = (0..n).map(|_| (0..rng.gen_range(1..=3)).collect()).collect();
    let rows = rng.gen_range(1..=support);
    let weights = |rng: &mut dyn rand::RngCore| -> Vec<u32> { (0..rows).map(|_| rng.gen_range(0..4)).collect() };
    let (mut wx, mut wy) = (weights(rng), weights(rng));
    wx[0] += 1;
    wy[rows - 1] += 1;
    let (tx, ty): (u32, u32) = (wx.iter().sum(), wy.iter().sum());
    let entries: Vec<(Vec<Symbol>, Rational, Rational)> = (0..rows)
        .map(|_| alphabets.iter().map(|a| *a.choose(rng).unwrap()).collect::<Vec<Symbol>>())
        .zip(wx.iter().zip(&wy))
        .map(|(s, (&x, &y))| (s, rat(x as i64, tx as i64), rat(y as i64, ty as i64)))
        .collect();
    Experiment::collect(alphabets, entries).unwrap()
}

/// The same network under a uniformly random relabelling.
pub fn shuffle(rng: &mut impl Rng, g: &Network) -> Network {
    let mut labels: Vec<usize> = (0..g.n()).collect();
    labels.shuffle(rng);
    Network::new(g.n(), g.edges().iter().map(|&(a, b)| (labels[a], labels[b]))).unwrap()
}

pub fn majority(n: usize) -> usize {
    n.div_ceil(2)
}

/// A generated builder input: network, quota, component index and the
/// construction to run.
pub type Case = (Network, usize, usize, Construction);

/// Hypothesis-satisfying instance generators, one per builder.
pub fn builder_cases() -> Vec<(&'static str, fn(&mut ChaCha8Rng) -> Case)> {
    vec![
        ("stellar", stellar_case),
        ("constellation", constellation_case),
        ("halo", halo_case),
        ("galaxy", galaxy_case),
        ("clusters", clusters_case),
        ("pairs", pairs_case),
    ]
}

/// Stellar component of 3..=10 receivers, at least depth-many outside
/// receivers, n ≤ 12.
pub fn stellar_case(r: &mut ChaCha8Rng) -> Case {
    loop {
        let size = r.gen_range(3..=10);
        let shape = random_shape(r, size, 3);
        let depth = shape.depth();
        let out = r.gen_range(depth..=(12 - size).max(depth));
        let n = size + out;
        if n > 12 || majority(n) > size - 1 {
            continue;
        }
        let k = r.gen_range(majority(n)..size);
        let (g, comp) = embed(r, &make_family(&FamilySpec::Stellar { shape }).unwrap(), out);
        let idx = component_of(&g, comp[0]);
        return (g, k, idx, Construction::Stellar);
    }
}

/// Constellation with 1..=3 centers and `|N∖C| ≥ max(depth, |M|) + 1`,
/// n ≤ 12.
pub fn constellation_case(r: &mut ChaCha8Rng) -> Case {
    loop {
        let centers = r.gen_range(1..=3);
        let psize = r.gen_range(3..=7);
        let shape = random_shape(r, psize, 2);
        let depth = shape.depth();
        let size = centers + psize - 1;
        let min_out = depth.max(centers) + 1;
        if size + min_out > 12 {
            continue;
        }
        let out = r.gen_range(min_out..=12 - size);
        let n = size + out;
        if majority(n) > size - 1 {
            continue;
        }
        let k = r.gen_range(majority(n)..size);
        let base = make_family(&FamilySpec::Constellation { centers, shape }).unwrap();
        let (g, comp) = embed(r, &base, out);
        let idx = component_of(&g, comp[0]);
        return (g, k, idx, Construction::Constellation);
    }
}

/// Halo of 5..=9 receivers with k < size < n, n ≤ 12.
pub fn halo_case(r: &mut ChaCha8Rng) -> Case {
    loop {
        let size = r.gen_range(5..=9);
        let out = r.gen_range(1..=12 - size);
        let n = size + out;
        if majority(n) > size - 1 {
            continue;
        }
        let k = r.gen_range(majority(n)..size);
        let (g, comp) = embed(r, &make_family(&FamilySpec::Halo { n: size }).unwrap(), out);
        let idx = component_of(&g, comp[0]);
        return (g, k, idx, Construction::Halo);
    }
}

/// A galaxy component: a center linked to everyone, random links among
/// the rest.
fn galaxy_component(r: &mut impl Rng, size: usize) -> Network {
    let periphery = random_network(r, size - 1, 0.4);
    let edges = periphery.edges().iter().map(|&(a, b)| (a + 1, b + 1)).chain((1..size).map(|v| (0, v)));
    Network::new(size, edges).unwrap()
}

fn subset_sums(sizes: &[usize]) -> Vec<usize> {
    (0..1u32 << sizes.len())
        .map(|m| (0..sizes.len()).filter(|&i| m >> i & 1 == 1).map(|i| sizes[i]).sum())
        .collect()
}

/// 2..=4 galaxy components of 3..=6 receivers, each at most
/// `min(k−1, n/2)`, no union of exactly `k`; labels shuffled.
pub fn galaxy_case(r: &mut ChaCha8Rng) -> Case {
    loop {
        let count = r.gen_range(2..=4);
        let sizes: Vec<usize> = (0..count).map(|_| r.gen_range(3..=6)).collect();
        let n: usize = sizes.iter().sum();
        let max = *sizes.iter().max().unwrap();
        let sums = subset_sums(&sizes);
        let ks: Vec<usize> = (majority(n)..=n)
            .filter(|&k| max <= (k - 1).min(n / 2) && !sums.contains(&k))
            .collect();
        let Some(&k) = ks.choose(r) else { continue };
        let mut edges = Vec::new();
        let mut start = 0;
        for &s in &sizes {
            let c = galaxy_component(r, s);
            edges.extend(c.edges().iter().map(|&(a, b)| (a + start, b + start)));
            start += s;
        }
        return (shuffle(r, &Network::new(n, edges).unwrap()), k, 0, Construction::Galaxy);
    }
}

/// `q, p ∈ 2..=4` clusters with `n/2 < k < n`; labels shuffled.
pub fn clusters_case(r: &mut ChaCha8Rng) -> Case {
    loop {
        let (q, p) = (r.gen_range(2..=4), r.gen_range(2..=4));
        let n = q * p;
        if n / 2 + 1 >= n {
            continue;
        }
        let k = r.gen_range(n / 2 + 1..n);
        let g = shuffle(r, &make_family(&FamilySpec::Clusters { q, p }).unwrap());
        return (g, k, 0, Construction::Clusters);
    }
}

/// Random disjoint pairs (at least one) on 4..=11 receivers.
pub fn pairs_case(r: &mut ChaCha8Rng) -> Case {
    let n = r.gen_range(4..=11);
    let mut nodes: Vec<usize> = (0..n).collect();
    nodes.shuffle(r);
    let count = r.gen_range(1..=n / 2);
    let pairs: Vec<(usize, usize)> = (0..count).map(|i| (nodes[2 * i], nodes[2 * i + 1])).collect();
    let g = make_family(&FamilySpec::Pairs { n, pairs }).unwrap();
    (g, r.gen_range(majority(n)..=n), 0, Construction::PairsToCircle)
}

/// Runs `count` cases of one builder; returns the failures, each with
/// enough detail to replay it.
pub fn certify_builder(gen: fn(&mut ChaCha8Rng) -> Case, seed: u64, count: usize) -> Vec<String> {
    let mut r = rng(seed);
    let mut failures = Vec::new();
    for _ in 0..count {
        let (g, k, comp, construction) = gen(&mut r);
        match extend(construction, &g, k, comp) {
            Ok(plan) => {
                let ok = !plan.added_edges.is_empty()
                    && plan.extended.is_extension_of(&plan.base)
                    && plan.extended.edge_count() == plan.base.edge_count() + plan.added_edges.len()
                    && dominating_pairs(&plan.extended).is_empty()
                    && plan.certificate.is_empty()
                    && plan.narrative.last().is_some_and(|l| l.starts_with("certificate:"));
                if !ok {
                    failures.push(format!("k={k} comp={comp} n={} edges={:?}: bad plan", g.n(), g.edges()));
                }
            }
            Err(e) => failures.push(format!("k={k} comp={comp} n={} edges={:?}: {e}", g.n(), g.edges())),
        }
    }
    failures
}
