//! Named network families: generators and recognizers.
//!
//! Labelling conventions used by [`make_family`]:
//!
//! * circle: edges `i — (i+1 mod n)`;
//! * star: center `0`, leaves `1..n`;
//! * halo: center `n−1`, periphery cycle `0 — 1 — … — (n−2) — 0`;
//! * stellar: nodes numbered in preorder of the shape, root `0`;
//! * constellation: centers `0..m`, periphery numbered in preorder after them;
//! * galaxy: consecutive star components, center first in each;
//! * clusters: node `(i, j)` (index `i` in cluster `j`) is `j·p + i`.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::Network;

/// Advisory family tag stored alongside a network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyLabel {
    Empty,
    Pairs { pairs: Vec<(usize, usize)> },
    Circle,
    Star { center: usize },
    Stellar { root: usize, depth: usize },
    Halo { center: usize },
    Constellation { centers: Vec<usize>, depth: usize },
    Galaxy { centers: Vec<usize> },
    ClusterNetwork { q: usize, p: usize },
    Complete,
    Other,
}

/// Recursive description of a stellar network: a node and the roots of its
/// partition elements. Text form: `()` is a single node, `(()())` a star
/// with two leaves, `(()(()()))` a depth-2 network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StellarShape {
    pub children: Vec<StellarShape>,
}

impl StellarShape {
    pub fn leaf() -> Self {
        Self { children: Vec::new() }
    }

    pub fn star(leaves: usize) -> Self {
        Self { children: vec![Self::leaf(); leaves] }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Self::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        self.children.iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bytes: Vec<u8> = text.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        let mut pos = 0;
        let shape = Self::parse_at(&bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(Error::BadParameters(format!("trailing input in shape {text:?}")));
        }
        Ok(shape)
    }

    fn parse_at(bytes: &[u8], pos: &mut usize) -> Result<Self> {
        if bytes.get(*pos) != Some(&b'(') {
            return Err(Error::BadParameters(format!("expected '(' at offset {}", *pos)));
        }
        *pos += 1;
        let mut children = Vec::new();
        while bytes.get(*pos) == Some(&b'(') {
            children.push(Self::parse_at(bytes, pos)?);
        }
        if bytes.get(*pos) != Some(&b')') {
            return Err(Error::BadParameters(format!("expected ')' at offset {}", *pos)));
        }
        *pos += 1;
        Ok(Self { children })
    }

    fn validate(&self) -> Result<()> {
        if self.children.len() == 1 {
            return Err(Error::BadParameters(
                "every internal node needs at least two partition elements".into(),
            ));
        }
        self.children.iter().try_for_each(Self::validate)
    }

    /// Appends ancestor–descendant edges, numbering nodes in preorder from
    /// `*next`. Returns the nodes of this subtree.
    fn emit(&self, next: &mut usize, edges: &mut Vec<(usize, usize)>) -> Vec<usize> {
        let me = *next;
        *next += 1;
        let mut subtree = vec![me];
        for child in &self.children {
            let below = child.emit(next, edges);
            edges.extend(below.iter().map(|&v| (me, v)));
            subtree.extend(below);
        }
        subtree
    }
}

/// Parameters for [`make_family`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Empty { n: usize },
    Pairs { n: usize, pairs: Vec<(usize, usize)> },
    Circle { n: usize },
    Star { n: usize },
    Stellar { shape: StellarShape },
    Halo { n: usize },
    Constellation { centers: usize, shape: StellarShape },
    Galaxy { sizes: Vec<usize> },
    Clusters { q: usize, p: usize },
    Complete { n: usize },
}

fn bad(msg: impl Into<String>) -> Error {
    Error::BadParameters(msg.into())
}

pub fn make_family(spec: &FamilySpec) -> Result<Network> {
    let (n, edges): (usize, Vec<(usize, usize)>) = match spec {
        FamilySpec::Empty { n } => (*n, vec![]),
        FamilySpec::Pairs { n, pairs } => {
            let mut used = vec![false; *n];
            for &(a, b) in pairs {
                if a >= *n || b >= *n || a == b || used[a] || used[b] {
                    return Err(bad("pairs must be disjoint and within range"));
                }
                used[a] = true;
                used[b] = true;
            }
            (*n, pairs.clone())
        }
        FamilySpec::Circle { n } => {
            if *n < 3 {
                return Err(bad("circle needs n >= 3"));
            }
            (*n, (0..*n).map(|i| (i, (i + 1) % n)).collect())
        }
        FamilySpec::Star { n } => {
            if *n < 3 {
                return Err(bad("star needs a center and at least two leaves"));
            }
            (*n, (1..*n).map(|i| (0, i)).collect())
        }
        FamilySpec::Stellar { shape } => {
            shape.validate()?;
            let mut edges = Vec::new();
            let mut next = 0;
            shape.emit(&mut next, &mut edges);
            (next, edges)
        }
        FamilySpec::Halo { n } => {
            if *n < 4 {
                return Err(bad("halo needs n >= 4"));
            }
            let m = n - 1;
            let mut edges: Vec<_> = (0..m).map(|i| (i, (i + 1) % m)).collect();
            edges.extend((0..m).map(|i| (i, m)));
            (*n, edges)
        }
        FamilySpec::Constellation { centers, shape } => {
            if *centers == 0 || shape.children.len() < 2 {
                return Err(bad("constellation needs a center and two partition elements"));
            }
            shape.validate()?;
            let mut edges = Vec::new();
            let mut next = *centers;
            let mut periphery = Vec::new();
            for child in &shape.children {
                periphery.extend(child.emit(&mut next, &mut edges));
            }
            for c in 0..*centers {
                edges.extend((c + 1..*centers).map(|d| (c, d)));
                edges.extend(periphery.iter().map(|&v| (c, v)));
            }
            (next, edges)
        }
        FamilySpec::Galaxy { sizes } => {
            if sizes.is_empty() || sizes.contains(&0) {
                return Err(bad("galaxy needs nonempty components"));
            }
            let mut edges = Vec::new();
            let mut start = 0;
            for &s in sizes {
                edges.extend((start + 1..start + s).map(|v| (start, v)));
                start += s;
            }
            (start, edges)
        }
        FamilySpec::Clusters { q, p } => {
            if *q < 2 || *p < 2 {
                return Err(bad("clusters need q >= 2 and p >= 2"));
            }
            let mut edges = Vec::new();
            for j in 0..*q {
                for a in 0..*p {
                    edges.extend((a + 1..*p).map(|b| (j * p + a, j * p + b)));
                }
            }
            (q * p, edges)
        }
        FamilySpec::Complete { n } => {
            (*n, (0..*n).flat_map(|a| (a + 1..*n).map(move |b| (a, b))).collect())
        }
    };
    if n == 0 {
        return Err(bad("network needs at least one receiver"));
    }
    Network::new(n, edges)
}

/// Witness that a (sub)network is stellar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StellarCertificate {
    pub root: usize,
    pub children: Vec<StellarCertificate>,
    pub depth: usize,
    /// Parent → child pairs of the domination tree `T^g`.
    pub tree_edges: Vec<(usize, usize)>,
}

impl StellarCertificate {
    pub fn nodes(&self) -> Vec<usize> {
        let mut out = vec![self.root];
        for c in &self.children {
            out.extend(c.nodes());
        }
        out.sort_unstable();
        out
    }

    /// Depth of every node (root 0), by node index.
    pub fn node_depths(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        self.fill_depths(0, &mut out);
        out
    }

    fn fill_depths(&self, d: usize, out: &mut BTreeMap<usize, usize>) {
        out.insert(self.root, d);
        for c in &self.children {
            c.fill_depths(d + 1, out);
        }
    }
}

fn mask_of(n: usize, nodes: &[usize]) -> FixedBitSet {
    let mut m = FixedBitSet::with_capacity(n);
    for &v in nodes {
        m.insert(v);
    }
    m
}

fn universal_within(g: &Network, nodes: &[usize], mask: &FixedBitSet) -> Vec<usize> {
    nodes
        .iter()
        .copied()
        .filter(|&v| g.neighbors(v).iter().filter(|&&w| mask.contains(w)).count() == nodes.len() - 1)
        .collect()
}

/// Recognizes the subnetwork induced by `nodes` as stellar.
pub fn recognize_stellar_within(g: &Network, nodes: &[usize]) -> Result<StellarCertificate> {
    let mut nodes = nodes.to_vec();
    nodes.sort_unstable();
    stellar_rec(g, &nodes).map_err(Error::NotStellar)
}

/// Recognizes the whole network as stellar.
pub fn recognize_stellar(g: &Network) -> Result<StellarCertificate> {
    recognize_stellar_within(g, &(0..g.n()).collect::<Vec<_>>())
}

fn stellar_rec(g: &Network, nodes: &[usize]) -> std::result::Result<StellarCertificate, String> {
    if nodes.len() == 1 {
        return Ok(StellarCertificate { root: nodes[0], children: vec![], depth: 0, tree_edges: vec![] });
    }
    let mask = mask_of(g.n(), nodes);
    let candidates = universal_within(g, nodes, &mask);
    if candidates.is_empty() {
        return Err(format!("no node of {nodes:?} is adjacent to all the others"));
    }
    let mut first_error = None;
    for r in candidates {
        let mut rest = mask.clone();
        rest.set(r, false);
        let comps = g.components_within(&rest);
        if comps.len() < 2 {
            first_error.get_or_insert(format!(
                "removing {r} from {nodes:?} leaves a single partition element"
            ));
            continue;
        }
        let subs: std::result::Result<Vec<_>, String> =
            comps.iter().map(|c| stellar_rec(g, c)).collect();
        match subs {
            Ok(children) => {
                let depth = 1 + children.iter().map(|c| c.depth).max().unwrap_or(0);
                let mut tree_edges: Vec<(usize, usize)> =
                    children.iter().map(|c| (r, c.root)).collect();
                for c in &children {
                    tree_edges.extend(c.tree_edges.iter().copied());
                }
                return Ok(StellarCertificate { root: r, children, depth, tree_edges });
            }
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    Err(first_error.unwrap_or_default())
}

/// Center, periphery cycle and size check for a halo.
pub fn recognize_halo(g: &Network) -> bool {
    halo_center(g, &(0..g.n()).collect::<Vec<_>>()).is_some()
}

/// The center of the halo induced by `nodes`, if it is one.
pub fn halo_center(g: &Network, nodes: &[usize]) -> Option<usize> {
    let m = nodes.len();
    if m < 4 {
        return None;
    }
    let mask = mask_of(g.n(), nodes);
    let inner_degree =
        |v: usize| g.neighbors(v).iter().filter(|&&w| mask.contains(w)).count();
    let edge_count: usize = nodes.iter().map(|&v| inner_degree(v)).sum::<usize>() / 2;
    if edge_count != 2 * (m - 1) {
        return None;
    }
    'center: for &c in nodes {
        if inner_degree(c) != m - 1 {
            continue;
        }
        let mut rest = mask.clone();
        rest.set(c, false);
        for &v in nodes {
            if v != c && inner_degree(v) != 3 {
                continue 'center;
            }
        }
        if g.components_within(&rest).len() == 1 {
            return Some(c);
        }
    }
    None
}

/// Centers and per-center stellar certificates of a constellation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstellationCertificate {
    pub centers: Vec<usize>,
    pub subnetworks: Vec<StellarCertificate>,
    pub depth: usize,
}

pub fn recognize_constellation(g: &Network) -> Result<ConstellationCertificate> {
    recognize_constellation_within(g, &(0..g.n()).collect::<Vec<_>>())
}

/// Centers are all universal nodes of the induced subnetwork.
pub fn recognize_constellation_within(
    g: &Network,
    nodes: &[usize],
) -> Result<ConstellationCertificate> {
    let mut nodes = nodes.to_vec();
    nodes.sort_unstable();
    let mask = mask_of(g.n(), &nodes);
    let centers = universal_within(g, &nodes, &mask);
    if centers.is_empty() {
        return Err(Error::NoUniversalNode);
    }
    if centers.len() == nodes.len() {
        return Err(Error::NotConstellation("every node is universal (M = N)".into()));
    }
    let periphery: Vec<usize> = nodes.iter().copied().filter(|v| !centers.contains(v)).collect();
    let mut subnetworks = Vec::new();
    for &c in &centers {
        let mut sub = periphery.clone();
        sub.push(c);
        sub.sort_unstable();
        let cert = stellar_rec(g, &sub)
            .map_err(|reason| Error::SubnetworkNotStellar { center: c, reason })?;
        subnetworks.push(cert);
    }
    let depth = subnetworks.iter().map(|c| c.depth).max().unwrap_or(0);
    Ok(ConstellationCertificate { centers, subnetworks, depth })
}

/// For each component (in [`Network::components`] order) its lowest-index
/// node adjacent to all other members.
pub fn recognize_galaxy(g: &Network) -> Result<Vec<usize>> {
    g.components()
        .into_iter()
        .map(|comp| {
            comp.iter()
                .copied()
                .find(|&v| g.degree(v) == comp.len() - 1)
                .ok_or(Error::ComponentWithoutCenter(comp))
        })
        .collect()
}

/// `(q, p)`: `q ≥ 2` disjoint cliques of common size `p ≥ 2`.
pub fn recognize_cluster_network(g: &Network) -> Result<(usize, usize)> {
    let comps = g.components();
    for c in &comps {
        if c.iter().any(|&v| g.degree(v) != c.len() - 1) {
            return Err(Error::NonCliqueComponent(c.clone()));
        }
    }
    let sizes: Vec<usize> = comps.iter().map(Vec::len).collect();
    if sizes.iter().any(|&s| s != sizes[0]) {
        return Err(Error::UnequalSizes(sizes));
    }
    let (q, p) = (comps.len(), sizes[0]);
    if q < 2 {
        return Err(Error::NotClusterNetwork("needs at least two clusters".into()));
    }
    if p < 2 {
        return Err(Error::NotClusterNetwork("clusters need at least two receivers".into()));
    }
    Ok((q, p))
}

/// Cyclic order of a circle network starting at 0 towards its smaller
/// neighbour, or `None` when the network is not a single cycle.
pub fn circle_order(g: &Network) -> Option<Vec<usize>> {
    let n = g.n();
    if n < 3 || (0..n).any(|v| g.degree(v) != 2) {
        return None;
    }
    let mut order = vec![0];
    let mut prev = 0;
    let mut cur = g.neighbors(0)[0];
    while cur != 0 {
        order.push(cur);
        let next = if g.neighbors(cur)[0] == prev { g.neighbors(cur)[1] } else { g.neighbors(cur)[0] };
        prev = cur;
        cur = next;
    }
    (order.len() == n).then_some(order)
}

/// Center of a star component (size ≥ 3, one hub, leaves of degree 1).
pub fn star_center(g: &Network, comp: &[usize]) -> Option<usize> {
    if comp.len() < 3 {
        return None;
    }
    let hub = comp.iter().copied().find(|&v| g.degree(v) == comp.len() - 1)?;
    comp.iter().all(|&v| v == hub || g.degree(v) == 1).then_some(hub)
}

/// Best-effort label for display; recognizers are tried from the most
/// specific family to the most general.
pub fn classify(g: &Network) -> FamilyLabel {
    let n = g.n();
    if g.edge_count() == 0 {
        return FamilyLabel::Empty;
    }
    if g.edge_count() == n * (n - 1) / 2 {
        return FamilyLabel::Complete;
    }
    if circle_order(g).is_some() {
        return FamilyLabel::Circle;
    }
    if (0..n).all(|v| g.degree(v) <= 1) {
        return FamilyLabel::Pairs { pairs: g.edges().to_vec() };
    }
    if let Some(center) = star_center(g, &(0..n).collect::<Vec<_>>()) {
        return FamilyLabel::Star { center };
    }
    if let Some(center) = halo_center(g, &(0..n).collect::<Vec<_>>()) {
        return FamilyLabel::Halo { center };
    }
    if let Ok(cert) = recognize_stellar(g) {
        return FamilyLabel::Stellar { root: cert.root, depth: cert.depth };
    }
    if let Ok(cert) = recognize_constellation(g) {
        return FamilyLabel::Constellation { centers: cert.centers, depth: cert.depth };
    }
    if let Ok((q, p)) = recognize_cluster_network(g) {
        return FamilyLabel::ClusterNetwork { q, p };
    }
    if let Ok(centers) = recognize_galaxy(g) {
        return FamilyLabel::Galaxy { centers };
    }
    FamilyLabel::Other
}
