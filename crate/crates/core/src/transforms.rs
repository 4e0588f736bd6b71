//! Experiment relabellings used in the proofs: merging receivers with equal
//! neighbourhoods, replaying an experiment on the empty network, and the
//! two star-center transformations.
//!
//! Every transformation only renames messages, so supports never grow.
//! Fresh symbols are consecutive integers starting just past the largest
//! symbol the receiver used before (from 0 for [`replicate_to_empty`],
//! which replaces every alphabet); [`Transformed::fresh`] records what each
//! fresh symbol stands for.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evaluate::{evaluate, window_of, Action};
use crate::experiment::{Experiment, Row, Symbol, X};
use crate::families::star_center;
use crate::instance::Instance;
use crate::network::Network;

/// A fresh symbol and the messages it encodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreshSymbol {
    pub receiver: usize,
    pub symbol: Symbol,
    /// Former messages encoded, in the order documented by the transform.
    pub encodes: Vec<Symbol>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transformed {
    pub experiment: Experiment,
    pub fresh: Vec<FreshSymbol>,
}

/// Allocates fresh symbols for one receiver, keyed by what they encode.
struct Allocator {
    receiver: usize,
    next: Symbol,
    by_key: HashMap<Vec<Symbol>, Symbol>,
    log: Vec<FreshSymbol>,
}

impl Allocator {
    fn after(receiver: usize, existing: &[Symbol]) -> Self {
        let next = existing.iter().max().map_or(0, |m| m + 1);
        Self::starting_at(receiver, next)
    }

    fn starting_at(receiver: usize, next: Symbol) -> Self {
        Self { receiver, next, by_key: HashMap::new(), log: Vec::new() }
    }

    fn get(&mut self, key: Vec<Symbol>) -> Symbol {
        if let Some(&s) = self.by_key.get(&key) {
            return s;
        }
        let s = self.next;
        self.next += 1;
        self.log.push(FreshSymbol { receiver: self.receiver, symbol: s, encodes: key.clone() });
        self.by_key.insert(key, s);
        s
    }

    fn symbols(&self) -> Vec<Symbol> {
        self.log.iter().map(|f| f.symbol).collect()
    }
}

fn rebuild(alphabets: Vec<Vec<Symbol>>, old: &[Row], signals: Vec<Vec<Symbol>>) -> Result<Experiment> {
    let rows = old
        .iter()
        .zip(signals)
        .map(|(r, s)| Row { s, p_x: r.p_x.clone(), p_y: r.p_y.clone() })
        .collect();
    Experiment::new(alphabets, rows)
}

fn check_receiver(network: &Network, i: usize) -> Result<()> {
    if i >= network.n() {
        return Err(Error::NodeOutOfRange { index: i, n: network.n() });
    }
    Ok(())
}

/// Gives `i` and `j` (equal closed neighbourhoods) the same message in
/// every signal: the pair `(s_i, s_j)` becomes one fresh symbol. Anyone
/// observing one of them observes both, so no information set changes.
/// Already-merged pairs are returned unchanged.
pub fn symmetry_merge(experiment: &Experiment, network: &Network, i: usize, j: usize) -> Result<Transformed> {
    check_receiver(network, i)?;
    check_receiver(network, j)?;
    if network.closed_set(i) != network.closed_set(j) {
        return Err(Error::NeighborhoodsDiffer(i, j));
    }
    let merged = i == j
        || (experiment.alphabets()[i] == experiment.alphabets()[j]
            && experiment.rows().iter().all(|r| r.s[i] == r.s[j]));
    if merged {
        return Ok(Transformed { experiment: experiment.clone(), fresh: Vec::new() });
    }
    let used: Vec<Symbol> =
        experiment.alphabets()[i].iter().chain(&experiment.alphabets()[j]).copied().collect();
    let mut alloc = Allocator::after(i, &used);
    let signals: Vec<Vec<Symbol>> = experiment
        .rows()
        .iter()
        .map(|r| {
            let sym = alloc.get(vec![r.s[i], r.s[j]]);
            let mut s = r.s.clone();
            s[i] = sym;
            s[j] = sym;
            s
        })
        .collect();
    let mut alphabets = experiment.alphabets().to_vec();
    alphabets[i] = alloc.symbols();
    alphabets[j] = alloc.symbols();
    let mut fresh = alloc.log.clone();
    fresh.extend(alloc.log.iter().map(|f| FreshSymbol { receiver: j, ..f.clone() }));
    Ok(Transformed { experiment: rebuild(alphabets, experiment.rows(), signals)?, fresh })
}

/// Sends each receiver, privately, a message naming its former
/// information set; on the empty network every receiver then knows
/// exactly what it knew before.
pub fn replicate_to_empty(experiment: &Experiment, network: &Network) -> Result<Transformed> {
    let n = network.n();
    if experiment.n() != n {
        return Err(Error::InvalidExperiment(format!(
            "experiment has {} receivers, network has {n}",
            experiment.n()
        )));
    }
    let mut allocs: Vec<Allocator> = (0..n).map(|i| Allocator::starting_at(i, 0)).collect();
    let windows: Vec<Vec<usize>> = (0..n).map(|i| network.window(i)).collect();
    let signals: Vec<Vec<Symbol>> = experiment
        .rows()
        .iter()
        .map(|r| (0..n).map(|i| allocs[i].get(window_of(&r.s, &windows[i]))).collect())
        .collect();
    let alphabets = allocs.iter().map(Allocator::symbols).collect();
    let fresh = allocs.into_iter().flat_map(|a| a.log).collect();
    Ok(Transformed { experiment: rebuild(alphabets, experiment.rows(), signals)?, fresh })
}

/// Center and periphery of the star component with index `component`
/// (as in [`Network::components`]), which must have more than `k` members.
pub fn star_component(instance: &Instance, component: usize) -> Result<(usize, Vec<usize>)> {
    let g = instance.network();
    let comps = g.components();
    let comp = comps
        .get(component)
        .ok_or_else(|| Error::BadParameters(format!("no component {component}; there are {}", comps.len())))?;
    let c = star_center(g, comp).ok_or_else(|| Error::NotAStarComponent(comp.clone()))?;
    if comp.len() <= instance.k() {
        return Err(Error::ComponentTooSmall { size: comp.len(), k: instance.k() });
    }
    Ok((c, comp.iter().copied().filter(|&v| v != c).collect()))
}

/// The center always hears `x`; each peripheral `j` instead hears a fresh
/// symbol for the pair `(s_j, s_c)`. The center still sees everything it
/// saw (through the peripherals), and each peripheral's window carries the
/// same information, so all posteriors are unchanged.
pub fn center_collapse(experiment: &Experiment, instance: &Instance, component: usize) -> Result<Transformed> {
    let (c, periphery) = star_component(instance, component)?;
    let mut allocs: Vec<Allocator> =
        periphery.iter().map(|&j| Allocator::after(j, &experiment.alphabets()[j])).collect();
    let signals: Vec<Vec<Symbol>> = experiment
        .rows()
        .iter()
        .map(|r| {
            let mut s = r.s.clone();
            for (alloc, &j) in allocs.iter_mut().zip(&periphery) {
                s[j] = alloc.get(vec![r.s[j], r.s[c]]);
            }
            s[c] = X;
            s
        })
        .collect();
    let mut alphabets = experiment.alphabets().to_vec();
    alphabets[c] = vec![X];
    for (alloc, &j) in allocs.iter().zip(&periphery) {
        alphabets[j] = alloc.symbols();
    }
    let fresh = allocs.into_iter().flat_map(|a| a.log).collect();
    Ok(Transformed { experiment: rebuild(alphabets, experiment.rows(), signals)?, fresh })
}

/// For each peripheral `ℓ` in turn (ascending), on the signals where `ℓ`
/// plays y while the center plays x, replace `ℓ`'s message by a fresh
/// symbol naming the center's information set. `ℓ` then knows what the
/// center knows there and plays x with it; the center's information sets
/// do not change.
///
/// The action of `ℓ` can only switch from y to x, so the value never
/// decreases; it is unchanged exactly when no such switch completes a
/// critical mass that was missing before.
pub fn center_align(experiment: &Experiment, instance: &Instance, component: usize) -> Result<Transformed> {
    let (c, periphery) = star_component(instance, component)?;
    let center_window = instance.network().window(c);
    let mut current = experiment.clone();
    let mut fresh = Vec::new();
    for &l in &periphery {
        let report = evaluate(&current, instance)?;
        let mut alloc = Allocator::after(l, &current.alphabets()[l]);
        let signals: Vec<Vec<Symbol>> = report
            .rows
            .iter()
            .map(|r| {
                let mut s = r.s.clone();
                if r.actions[l] == Action::Y && r.actions[c] == Action::X {
                    s[l] = alloc.get(window_of(&r.s, &center_window));
                }
                s
            })
            .collect();
        if alloc.log.is_empty() {
            continue;
        }
        let mut alphabets = current.alphabets().to_vec();
        alphabets[l].extend(alloc.symbols());
        current = rebuild(alphabets, current.rows(), signals)?;
        fresh.extend(alloc.log);
    }
    Ok(Transformed { experiment: current, fresh })
}

/// Support rows with `π(s|X)·λ0(X) ≥ π(s|Y)·λ0(Y)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnchorSet {
    pub anchors: Vec<usize>,
}

pub fn anchors(experiment: &Experiment, instance: &Instance) -> AnchorSet {
    let (lx, ly) = (instance.prior_x(), instance.prior_y());
    let anchors = experiment
        .rows()
        .iter()
        .enumerate()
        .filter(|(_, r)| &r.p_x * lx >= &r.p_y * &ly)
        .map(|(t, _)| t)
        .collect();
    AnchorSet { anchors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{circle_block, public_optimal};
    use crate::families::{make_family, FamilySpec};
    use crate::rational::rat;

    #[test]
    fn merge_rejects_different_neighbourhoods() {
        let g = make_family(&FamilySpec::Circle { n: 5 }).unwrap();
        let inst = Instance::new(g.clone(), rat(1, 4), 3, false).unwrap();
        let e = public_optimal(&inst).unwrap().experiment;
        assert_eq!(symmetry_merge(&e, &g, 0, 2), Err(Error::NeighborhoodsDiffer(0, 2)));
    }

    #[test]
    fn merge_is_idempotent() {
        let g = make_family(&FamilySpec::Complete { n: 4 }).unwrap();
        let inst = Instance::new(g.clone(), rat(1, 4), 3, false).unwrap();
        let e = public_optimal(&inst).unwrap().experiment;
        let once = symmetry_merge(&e, &g, 0, 1).unwrap();
        assert!(once.fresh.is_empty());
        assert_eq!(once.experiment, e);
    }

    #[test]
    fn replicate_circle_block() {
        let g = make_family(&FamilySpec::Circle { n: 9 }).unwrap();
        let inst = Instance::new(g.clone(), rat(1, 3), 5, false).unwrap();
        let e = circle_block(&inst).unwrap().experiment;
        let r = replicate_to_empty(&e, &g).unwrap().experiment;
        let empty = inst.with_network(Network::empty(9).unwrap()).unwrap();
        assert_eq!(evaluate(&r, &empty).unwrap().value, rat(14, 15));
    }

    #[test]
    fn star_component_needs_more_than_k() {
        let g = make_family(&FamilySpec::Star { n: 4 }).unwrap();
        let inst = Instance::new(g, rat(1, 4), 4, false).unwrap();
        assert_eq!(star_component(&inst, 0), Err(Error::ComponentTooSmall { size: 4, k: 4 }));
        let inst = inst.with_network(make_family(&FamilySpec::Circle { n: 4 }).unwrap()).unwrap();
        assert!(matches!(star_component(&inst, 0), Err(Error::NotAStarComponent(_))));
    }
}
