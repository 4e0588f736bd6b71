//! Undirected simple networks on receivers `0..n`.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::FamilyLabel;

/// The spillover topology: receiver `i` observes its own message and the
/// messages of its neighbours.
///
/// Edges are stored normalized (`i < j`) and sorted, so two networks with
/// the same edge set compare equal and serialize identically.
#[derive(Clone, PartialEq, Eq)]
pub struct Network {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    closed: Vec<FixedBitSet>,
}

impl std::fmt::Debug for Network {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Network").field("n", &self.n).field("edges", &self.edges).finish()
    }
}

impl Network {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyNodeSet);
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for index in [a, b] {
                if index >= n {
                    return Err(Error::NodeOutOfRange { index, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let e = (a.min(b), a.max(b));
            if !set.insert(e) {
                return Err(Error::DuplicateEdge(e.0, e.1));
            }
        }
        Ok(Self::from_set(n, set))
    }

    /// Network with no links.
    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    fn from_set(n: usize, set: BTreeSet<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        let mut closed: Vec<FixedBitSet> = (0..n)
            .map(|i| {
                let mut b = FixedBitSet::with_capacity(n);
                b.insert(i);
                b
            })
            .collect();
        for &(a, b) in &set {
            adj[a].push(b);
            adj[b].push(a);
            closed[a].insert(b);
            closed[b].insert(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Self { n, edges: set.into_iter().collect(), adj, closed }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.closed[a].contains(b)
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    /// Closed neighbourhood `N_i(g)` as a bitset.
    pub fn closed_set(&self, i: usize) -> &FixedBitSet {
        &self.closed[i]
    }

    /// Closed neighbourhood in increasing index order; this is the order in
    /// which a receiver's window of messages is read.
    pub fn window(&self, i: usize) -> Vec<usize> {
        self.closed[i].ones().collect()
    }

    /// Adds edges, rejecting any that already exist.
    pub fn with_edges(&self, added: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(self.n, self.edges.iter().copied().chain(added))
    }

    /// Same node set and a strict superset of edges.
    pub fn is_extension_of(&self, base: &Network) -> bool {
        self.n == base.n
            && self.edges.len() > base.edges.len()
            && base.edges.iter().all(|&(a, b)| self.has_edge(a, b))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Components of the subnetwork induced by `nodes` (given as a mask).
    pub fn components_within(&self, nodes: &FixedBitSet) -> Vec<Vec<usize>> {
        let mut seen = FixedBitSet::with_capacity(self.n);
        let mut out = Vec::new();
        for start in nodes.ones() {
            if seen.contains(start) {
                continue;
            }
            seen.insert(start);
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &self.adj[v] {
                    if nodes.contains(w) && !seen.contains(w) {
                        seen.insert(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Subnetwork induced by `nodes` (sorted ascending); node `nodes[t]`
    /// becomes `t`.
    pub fn induced(&self, nodes: &[usize]) -> Network {
        let mut pos = vec![usize::MAX; self.n];
        for (t, &v) in nodes.iter().enumerate() {
            pos[v] = t;
        }
        let set = self
            .edges
            .iter()
            .filter(|&&(a, b)| pos[a] != usize::MAX && pos[b] != usize::MAX)
            .map(|&(a, b)| (pos[a].min(pos[b]), pos[a].max(pos[b])))
            .collect();
        Self::from_set(nodes.len(), set)
    }

    pub fn to_file(&self, family: Option<FamilyLabel>) -> NetworkFile {
        NetworkFile { n: self.n, edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(), family }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file(None)).expect("network serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: NetworkFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("network JSON: {e}")))?;
        file.into_network()
    }
}

/// On-disk form: `{"n": 9, "edges": [[0,1],...], "family": {...}}`.
///
/// The optional family label is advisory; nothing trusts it without
/// running the matching recognizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyLabel>,
}

impl NetworkFile {
    pub fn into_network(self) -> Result<Network> {
        Network::new(self.n, self.edges.into_iter().map(|[a, b]| (a, b)))
    }
}

impl Serialize for Network {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file(None).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Network {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        NetworkFile::deserialize(de)?.into_network().map_err(serde::de::Error::custom)
    }
}
