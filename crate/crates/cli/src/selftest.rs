//! Seeded invariant runner behind `spillover selftest`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use spillover::{
    evaluate, parse_rational, rat, render, replicate_to_empty, Experiment, Instance, Network, Rational, Symbol,
};

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// First failing case, for replay.
    pub example: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub seed: u64,
    pub cases: usize,
    pub checks: Vec<Check>,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failed == 0)
    }
}

struct Tally {
    checks: Vec<Check>,
}

impl Tally {
    fn record(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        let idx = match self.checks.iter().position(|c| c.name == name) {
            Some(i) => i,
            None => {
                self.checks.push(Check { name, passed: 0, failed: 0, example: None });
                self.checks.len() - 1
            }
        };
        let c = &mut self.checks[idx];
        if ok {
            c.passed += 1;
        } else {
            c.failed += 1;
            c.example.get_or_insert_with(detail);
        }
    }
}

fn random_network(r: &mut impl Rng, n: usize) -> Network {
    let density = r.gen_range(0.0..=1.0);
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|_| r.gen_bool(density)).collect();
    Network::new(n, edges).expect("generated edges are valid")
}

/// A valid non-boundary instance with 2..=6 receivers.
fn random_instance(r: &mut impl Rng) -> Instance {
    loop {
        let n: usize = r.gen_range(2..=6);
        let k = r.gen_range(n.div_ceil(2)..=n);
        let d = r.gen_range(2..=12);
        let prior = rat(r.gen_range(1..d), d);
        if let Ok(inst) = Instance::new(random_network(r, n), prior, k, false) {
            return inst;
        }
    }
}

fn random_experiment(r: &mut impl Rng, n: usize) -> Experiment {
    let alphabets: Vec<Vec<Symbol>> = (0..n).map(|_| (0..r.gen_range(1..=3)).collect()).collect();
    let rows = r.gen_range(1..=6);
    let mut wx: Vec<i64> = (0..rows).map(|_| r.gen_range(0..4)).collect();
    let mut wy: Vec<i64> = (0..rows).map(|_| r.gen_range(0..4)).collect();
    wx[0] += 1;
    wy[rows - 1] += 1;
    let (tx, ty): (i64, i64) = (wx.iter().sum(), wy.iter().sum());
    let entries: Vec<(Vec<Symbol>, Rational, Rational)> = (0..rows)
        .map(|t| {
            let s = alphabets.iter().map(|a| *a.choose(r).expect("alphabet is non-empty")).collect();
            (s, rat(wx[t], tx), rat(wy[t], ty))
        })
        .collect();
    Experiment::collect(alphabets, entries).expect("generated experiment is valid")
}

pub fn run(seed: u64, cases: usize) -> Summary {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally { checks: Vec::new() };
    for case in 0..cases {
        let q = rat(r.gen_range(-1000..1000), r.gen_range(1..1000));
        t.record("rational_round_trip", parse_rational(&render(&q)).ok() == Some(q.clone()), || render(&q));

        let inst = random_instance(&mut r);
        let g = inst.network();
        t.record("network_json_round_trip", Network::from_json(&g.to_json()).ok().as_ref() == Some(g), || {
            g.to_json()
        });

        let (lx, ly) = (inst.prior_x().clone(), inst.prior_y());
        t.record("upper_bound_identity", inst.v_upper() == &lx + &ly * inst.v_tilde(), || format!("case {case}"));
        t.record("public_below_upper", inst.v_public() <= inst.v_upper(), || format!("case {case}"));

        let e = random_experiment(&mut r, inst.n());
        t.record("experiment_json_round_trip", Experiment::from_json(&e.to_json()).ok().as_ref() == Some(&e), || {
            e.to_json()
        });
        let Ok(report) = evaluate(&e, &inst) else { continue };
        t.record("value_below_upper_bound", report.value <= inst.v_upper(), || {
            format!("network {} experiment {}", g.to_json(), e.to_json())
        });
        let empty = inst.with_network(Network::empty(inst.n()).expect("n >= 1")).expect("same parameters");
        let replicated = replicate_to_empty(&e, g).and_then(|tr| evaluate(&tr.experiment, &empty));
        t.record("replicate_preserves_value", replicated.map(|rep| rep.value) == Ok(report.value.clone()), || {
            format!("network {} experiment {}", g.to_json(), e.to_json())
        });
    }
    Summary { seed, cases, checks: t.checks }
}
