//! Ground truth for small instances.
//!
//! Two exact modes share one front end: receivers with identical closed
//! neighbourhoods are merged into weighted classes first (they can be sent
//! identical messages without loss), which is what makes the nine-receiver
//! pairs network tractable.
//!
//! * [`anchored_optimal`] restricts to experiments that send all-x in state
//!   X and solves one LP per candidate persuadable set;
//! * [`exhaustive_optimal`] enumerates action patterns over binary
//!   class-level messages and solves the closed-constraint LP for each.
//!
//! Every reported lower bound is the evaluator's value of an explicit
//! witness experiment, never an LP objective.

mod anchored;
mod exhaustive;
pub mod simplex;

pub use anchored::anchored_optimal;
pub use exhaustive::{exhaustive_optimal, EXHAUSTIVE_CELL_CAP, EXHAUSTIVE_MAX_N};
pub use simplex::{simplex_solve, Constraint, LinearProgram, LpSolution, Relation};

use serde::Serialize;

use crate::experiment::{Experiment, Symbol, X, Y};
use crate::instance::Instance;
use crate::network::Network;
use crate::rational::Rational;

pub const DEFAULT_CAP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMode {
    Anchored,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    /// Largest number of receiver classes the anchored mode accepts.
    pub cap: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { cap: DEFAULT_CAP }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    /// Value of `witness`, as computed by the evaluator.
    #[serde(with = "crate::rational::serde_str")]
    pub lower_bound: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub upper_bound: Rational,
    /// Where the upper bound comes from.
    pub upper_source: String,
    pub witness: Experiment,
    pub mode: OracleMode,
    pub exact: bool,
    /// Number of receiver classes after symmetry reduction.
    pub classes: usize,
    pub lp_solves: usize,
}

/// Receivers grouped by closed neighbourhood.
#[derive(Debug, Clone)]
pub(crate) struct Classes {
    pub members: Vec<Vec<usize>>,
    /// Class of each receiver.
    pub of: Vec<usize>,
    /// Classes observed by each class, as a bitmask.
    pub windows: Vec<u64>,
}

impl Classes {
    pub fn new(g: &Network) -> Self {
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut of = vec![usize::MAX; g.n()];
        for i in 0..g.n() {
            if of[i] != usize::MAX {
                continue;
            }
            let cls = members.len();
            let group: Vec<usize> =
                (i..g.n()).filter(|&j| g.closed_set(j) == g.closed_set(i)).collect();
            for &j in &group {
                of[j] = cls;
            }
            members.push(group);
        }
        let windows = members
            .iter()
            .map(|m| g.closed_set(m[0]).ones().fold(0u64, |acc, j| acc | 1 << of[j]))
            .collect();
        Self { members, of, windows }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn weight(&self, mask: u64) -> usize {
        (0..self.len()).filter(|&a| mask >> a & 1 == 1).map(|a| self.members[a].len()).sum()
    }

    /// Receiver-level signal from a class-level one; `bit = 1` selects
    /// `on`, `0` selects `off`.
    pub fn expand(&self, sigma: u64, on: Symbol, off: Symbol) -> Vec<Symbol> {
        self.of.iter().map(|&a| if sigma >> a & 1 == 1 { on } else { off }).collect()
    }
}

/// Expands an x-mask (bit set = message x) to a receiver signal.
pub(crate) fn x_signal(classes: &Classes, x_mask: u64) -> Vec<Symbol> {
    classes.expand(x_mask, X, Y)
}

/// The tightest upper bound on the instance's optimal value this crate
/// can justify without solving anything:
///
/// * `V^n_k` always;
/// * `2·λ0(X)` when at least `n−k+1` receivers observe everybody (any
///   x-outcome then needs one of them, and they all share one posterior);
/// * `V^{n−m}_k` for a component with more than `k` receivers made of
///   `m` mutually linked centers and a periphery with no internal links
///   (the star reduction: the centers can be ignored).
pub fn structural_upper_bound(instance: &Instance) -> (Rational, String) {
    let g = instance.network();
    let (n, k) = (instance.n(), instance.k());
    let mut best = (instance.v_upper(), "V^n_k".to_string());
    let mut offer = |value: Rational, source: String| {
        if value < best.0 {
            best = (value, source);
        }
    };
    let universal = (0..n).filter(|&i| g.degree(i) == n - 1).count();
    if universal > n - k {
        offer(instance.v_public(), format!("{universal} receivers observe everyone: 2*lambda_X"));
    }
    for comp in g.components() {
        if comp.len() <= k {
            continue;
        }
        let centers: Vec<usize> =
            comp.iter().copied().filter(|&v| g.degree(v) == comp.len() - 1).collect();
        let m = centers.len();
        if m == 0 || m == comp.len() {
            continue;
        }
        let periphery_independent =
            comp.iter().filter(|v| !centers.contains(v)).all(|&v| g.degree(v) == m);
        if periphery_independent && n - m >= k {
            offer(
                instance.v_upper_for(n - m),
                format!("star reduction on component {comp:?} with centers {centers:?}: V^{}_k", n - m),
            );
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_family, FamilySpec};
    use crate::rational::rat;

    #[test]
    fn classes_merge_twins() {
        let g = Network::new(5, [(0, 1), (2, 3)]).unwrap();
        let c = Classes::new(&g);
        assert_eq!(c.members, vec![vec![0, 1], vec![2, 3], vec![4]]);
        assert_eq!(c.windows, vec![0b001, 0b010, 0b100]);
        assert_eq!(c.weight(0b011), 4);
        assert_eq!(x_signal(&c, 0b010), vec![Y, Y, X, X, Y]);
    }

    #[test]
    fn structural_bounds() {
        let complete = make_family(&FamilySpec::Complete { n: 5 }).unwrap();
        let inst = Instance::new(complete, rat(1, 4), 3, false).unwrap();
        assert_eq!(structural_upper_bound(&inst).0, rat(1, 2));

        let ex2 = crate::construct::example2_experiment().unwrap();
        let base = ex2.instance.with_network(ex2.base).unwrap();
        assert_eq!(structural_upper_bound(&base).0, rat(11, 12));
        assert_eq!(structural_upper_bound(&ex2.instance).0, rat(1, 1));
    }
}
