//! Information domination: `i` dominates `j` when `N_j(g) ⊆ N_i(g)`.
//!
//! A network without dominating pairs admits an experiment attaining the
//! empty-network bound `V^n_k`; the converse fails, so a non-empty report
//! is only ever "inconclusive".

use serde::Serialize;

use crate::instance::Instance;
use crate::network::Network;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DominationReport {
    /// Ordered `(dominator, dominated)` pairs, sorted.
    pub pairs: Vec<(usize, usize)>,
    pub count: usize,
}

impl DominationReport {
    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
}

/// All ordered dominating pairs.
///
/// `j ∈ N_j ⊆ N_i` forces `j` to be a neighbour of `i`, so only edges are
/// scanned; each test is a bitset containment.
pub fn dominating_pairs(g: &Network) -> DominationReport {
    let mut pairs = Vec::new();
    for i in 0..g.n() {
        for &j in g.neighbors(i) {
            if g.degree(j) <= g.degree(i) && g.closed_set(j).is_subset(g.closed_set(i)) {
                pairs.push((i, j));
            }
        }
    }
    pairs.sort_unstable();
    let count = pairs.len();
    DominationReport { pairs, count }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ValueCertificate {
    /// No dominating pairs: the network's optimal value is `V^n_k`.
    Certified {
        #[serde(with = "crate::rational::serde_str")]
        value: Rational,
    },
    /// Dominating pairs exist; the sufficient condition says nothing.
    Inconclusive { report: DominationReport },
}

pub fn certify_value_upper_attained(instance: &Instance) -> ValueCertificate {
    let report = dominating_pairs(instance.network());
    if report.is_empty() {
        ValueCertificate::Certified { value: instance.v_upper() }
    } else {
        ValueCertificate::Inconclusive { report }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_family, FamilySpec};

    #[test]
    fn star_pairs() {
        let g = make_family(&FamilySpec::Star { n: 5 }).unwrap();
        let r = dominating_pairs(&g);
        assert_eq!(r.pairs, vec![(0, 1), (0, 2), (0, 3), (0, 4)]);
    }

    #[test]
    fn twins_dominate_each_other() {
        let g = make_family(&FamilySpec::Complete { n: 3 }).unwrap();
        assert_eq!(dominating_pairs(&g).count, 6);
    }

    #[test]
    fn circles_and_empty_are_free() {
        for n in 4..10 {
            assert!(dominating_pairs(&make_family(&FamilySpec::Circle { n }).unwrap()).is_empty());
            assert!(dominating_pairs(&make_family(&FamilySpec::Empty { n }).unwrap()).is_empty());
        }
    }
}
