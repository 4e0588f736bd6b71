//! Posteriors, best responses, outcomes and the sender's value.
//!
//! Receiver `i` observes the messages of its closed neighbourhood. Its
//! posterior on a support signal `s` is computed from the association set
//! (all support signals agreeing with `s` on that window); it plays `x`
//! exactly when the posterior is at least 1/2, ties going to the sender.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::{Experiment, Symbol};
use crate::instance::Instance;
use crate::network::Network;
use crate::rational::{half, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    #[serde(rename = "x")]
    X,
    #[serde(rename = "y")]
    Y,
}

/// Threshold best response with sender-favourable tie-breaking.
pub fn action(posterior: &Rational) -> Action {
    if *posterior >= half() {
        Action::X
    } else {
        Action::Y
    }
}

/// `x` iff at least `k` receivers play `x`.
pub fn outcome(actions: &[Action], k: usize) -> Action {
    if actions.iter().filter(|&&a| a == Action::X).count() >= k {
        Action::X
    } else {
        Action::Y
    }
}

/// Messages of `window` (receiver indices) read off a signal.
pub fn window_of(signal: &[Symbol], window: &[usize]) -> Vec<Symbol> {
    window.iter().map(|&j| signal[j]).collect()
}

/// Row indices of support signals receiver `i` cannot tell apart from
/// `signal`.
pub fn association_set(
    experiment: &Experiment,
    network: &Network,
    signal: &[Symbol],
    receiver: usize,
) -> Result<Vec<usize>> {
    if experiment.find(signal).is_none() {
        return Err(Error::SignalNotInSupport);
    }
    let window = network.window(receiver);
    let key = window_of(signal, &window);
    Ok(experiment
        .rows()
        .iter()
        .enumerate()
        .filter(|(_, r)| window_of(&r.s, &window) == key)
        .map(|(t, _)| t)
        .collect())
}

fn posterior_from_masses(instance: &Instance, mx: &Rational, my: &Rational) -> Option<Rational> {
    let num = instance.prior_x() * mx;
    let den = &num + instance.prior_y() * my;
    if den.is_zero() {
        None
    } else {
        Some(num / den)
    }
}

/// `λ^{s,g}_i(X)` for a support signal.
pub fn posterior(
    experiment: &Experiment,
    instance: &Instance,
    signal: &[Symbol],
    receiver: usize,
) -> Result<Rational> {
    let set = association_set(experiment, instance.network(), signal, receiver)?;
    let (mut mx, mut my) = (Rational::zero(), Rational::zero());
    for t in set {
        mx += &experiment.rows()[t].p_x;
        my += &experiment.rows()[t].p_y;
    }
    posterior_from_masses(instance, &mx, &my).ok_or(Error::ZeroMassInformationSet(receiver))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowReport {
    pub s: Vec<Symbol>,
    #[serde(rename = "pX", with = "crate::rational::serde_str")]
    pub p_x: Rational,
    #[serde(rename = "pY", with = "crate::rational::serde_str")]
    pub p_y: Rational,
    #[serde(with = "crate::rational::serde_str_vec")]
    pub posteriors: Vec<Rational>,
    pub actions: Vec<Action>,
    pub outcome: Action,
}

impl RowReport {
    pub fn x_count(&self) -> usize {
        self.actions.iter().filter(|&&a| a == Action::X).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvaluationReport {
    pub rows: Vec<RowReport>,
    /// Probability that the critical mass is reached.
    #[serde(with = "crate::rational::serde_str")]
    pub value: Rational,
    /// Probability that the outcome differs from the state.
    #[serde(with = "crate::rational::serde_str")]
    pub mismatch_prob: Rational,
    /// `P(outcome x | X)`.
    #[serde(with = "crate::rational::serde_str")]
    pub x_given_x: Rational,
    /// `P(outcome x | Y)`: the manipulation probability.
    #[serde(with = "crate::rational::serde_str")]
    pub x_given_y: Rational,
}

/// Evaluates `experiment` on the instance's network.
///
/// Posteriors are computed once per information set: support rows are
/// grouped by each receiver's window, so the cost is linear in
/// `rows × window size`.
pub fn evaluate(experiment: &Experiment, instance: &Instance) -> Result<EvaluationReport> {
    let network = instance.network();
    let n = network.n();
    if experiment.n() != n {
        return Err(Error::InvalidExperiment(format!(
            "experiment has {} receivers, network has {n}",
            experiment.n()
        )));
    }
    let rows = experiment.rows();
    let mut posteriors: Vec<Vec<Rational>> = vec![Vec::with_capacity(n); rows.len()];
    for i in 0..n {
        let window = network.window(i);
        let mut masses: HashMap<Vec<Symbol>, (Rational, Rational)> = HashMap::new();
        let keys: Vec<Vec<Symbol>> = rows.iter().map(|r| window_of(&r.s, &window)).collect();
        for (r, key) in rows.iter().zip(&keys) {
            let e = masses.entry(key.clone()).or_insert_with(|| (Rational::zero(), Rational::zero()));
            e.0 += &r.p_x;
            e.1 += &r.p_y;
        }
        let mut memo: HashMap<&Vec<Symbol>, Rational> = HashMap::new();
        for (t, key) in keys.iter().enumerate() {
            let p = match memo.get(key) {
                Some(p) => p.clone(),
                None => {
                    let (mx, my) = &masses[key];
                    let p = posterior_from_masses(instance, mx, my)
                        .ok_or(Error::ZeroMassInformationSet(i))?;
                    memo.insert(key, p.clone());
                    p
                }
            };
            posteriors[t].push(p);
        }
    }

    let (mut x_given_x, mut x_given_y) = (Rational::zero(), Rational::zero());
    let mut reports = Vec::with_capacity(rows.len());
    for (r, post) in rows.iter().zip(posteriors) {
        let actions: Vec<Action> = post.iter().map(action).collect();
        let out = outcome(&actions, instance.k());
        if out == Action::X {
            x_given_x += &r.p_x;
            x_given_y += &r.p_y;
        }
        reports.push(RowReport {
            s: r.s.clone(),
            p_x: r.p_x.clone(),
            p_y: r.p_y.clone(),
            posteriors: post,
            actions,
            outcome: out,
        });
    }
    let value = instance.prior_x() * &x_given_x + instance.prior_y() * &x_given_y;
    let mismatch_prob =
        instance.prior_x() * (Rational::one() - &x_given_x) + instance.prior_y() * &x_given_y;
    Ok(EvaluationReport { rows: reports, value, mismatch_prob, x_given_x, x_given_y })
}

/// Result of checking the posterior structure every value-`V^n_k`
/// experiment must have.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureVerdict {
    pub holds: bool,
    /// First failing clause (1, 2 or 3), if any.
    pub failed_clause: Option<u8>,
    pub detail: String,
}

/// Checks the three clauses:
///
/// 1. conditional on X the outcome is x with probability 1;
/// 2. conditional on Y, with probability `Ṽ` exactly `k` receivers hold
///    posterior 1/2 and the other `n−k` hold posterior 0;
/// 3. conditional on Y, with probability `1−Ṽ` every posterior is 0.
pub fn check_optimal_structure(report: &EvaluationReport, instance: &Instance) -> StructureVerdict {
    let (n, k) = (instance.n(), instance.k());
    let v_tilde = instance.v_tilde();
    let fail = |clause: u8, detail: String| StructureVerdict {
        holds: false,
        failed_clause: Some(clause),
        detail,
    };
    if !report.x_given_x.is_one() {
        return fail(1, format!("P(outcome x | X) = {}", report.x_given_x));
    }
    let (mut split, mut silent) = (Rational::zero(), Rational::zero());
    for row in &report.rows {
        let halves = row.posteriors.iter().filter(|p| **p == half()).count();
        let zeros = row.posteriors.iter().filter(|p| p.is_zero()).count();
        if halves == k && zeros == n - k {
            split += &row.p_y;
        }
        if zeros == n {
            silent += &row.p_y;
        }
    }
    if split != v_tilde {
        return fail(2, format!("Y-mass with k halves and n-k zeros is {split}, expected {v_tilde}"));
    }
    let rest = Rational::one() - &v_tilde;
    if silent != rest {
        return fail(3, format!("Y-mass with all posteriors zero is {silent}, expected {rest}"));
    }
    StructureVerdict { holds: true, failed_clause: None, detail: "all clauses hold".into() }
}
