//! Sender-beneficial extensions: link additions that remove every
//! information-dominating pair, after which `V^n_k` is attainable.
//!
//! Each builder checks its family's hypotheses, adds links following the
//! corresponding proof (ties broken by lowest index), records every choice
//! in a narrative, and refuses to return a plan whose extended network
//! still has dominating pairs.

mod sweep;

pub use sweep::{sweep_values, MonotonicityViolation, SweepOptions, SweepRecord, SweepReport, ValueSource};

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::domination::{dominating_pairs, DominationReport};
use crate::error::{Error, Result};
use crate::families::{
    halo_center, recognize_cluster_network, recognize_constellation_within, recognize_galaxy,
    recognize_stellar_within, StellarCertificate,
};
use crate::network::Network;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    PairsToCircle,
    Stellar,
    Halo,
    Constellation,
    Galaxy,
    Clusters,
}

impl Construction {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(match text.replace('-', "_").as_str() {
            "pairs_to_circle" | "pairs" => Self::PairsToCircle,
            "stellar" | "star" => Self::Stellar,
            "halo" => Self::Halo,
            "constellation" => Self::Constellation,
            "galaxy" => Self::Galaxy,
            "clusters" => Self::Clusters,
            other => return Err(Error::Parse(format!("unknown construction {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionPlan {
    pub base: Network,
    /// New links, in the order the construction added them.
    pub added_edges: Vec<(usize, usize)>,
    pub construction: Construction,
    /// Dominating pairs of the extended network; always empty.
    pub certificate: DominationReport,
    pub narrative: Vec<String>,
    pub extended: Network,
}

struct Builder<'a> {
    base: &'a Network,
    added: BTreeSet<(usize, usize)>,
    order: Vec<(usize, usize)>,
    narrative: Vec<String>,
}

impl<'a> Builder<'a> {
    fn new(base: &'a Network) -> Self {
        Self { base, added: BTreeSet::new(), order: Vec::new(), narrative: Vec::new() }
    }

    fn note(&mut self, line: impl Into<String>) {
        self.narrative.push(line.into());
    }

    fn linked(&self, a: usize, b: usize) -> bool {
        self.base.has_edge(a, b) || self.added.contains(&(a.min(b), a.max(b)))
    }

    /// Adds `a — b` unless present; returns whether it was new.
    fn link(&mut self, a: usize, b: usize) -> bool {
        if a == b || self.linked(a, b) {
            return false;
        }
        let e = (a.min(b), a.max(b));
        self.added.insert(e);
        self.order.push(e);
        true
    }

    fn clique(&mut self, nodes: &[usize]) {
        for (t, &a) in nodes.iter().enumerate() {
            for &b in &nodes[t + 1..] {
                self.link(a, b);
            }
        }
    }

    fn finish(mut self, construction: Construction) -> Result<ExtensionPlan> {
        if self.order.is_empty() {
            return Err(Error::PremiseViolated("construction added no links".into()));
        }
        let extended = self.base.with_edges(self.order.iter().copied())?;
        let certificate = dominating_pairs(&extended);
        if !certificate.is_empty() {
            return Err(Error::CertificateFailed(format!("{:?}", certificate.pairs)));
        }
        self.note(format!(
            "certificate: {} links added, extended network has no dominating pairs",
            self.order.len()
        ));
        Ok(ExtensionPlan {
            base: self.base.clone(),
            added_edges: self.order,
            construction,
            certificate,
            narrative: self.narrative,
            extended,
        })
    }
}

fn component(g: &Network, id: usize) -> Result<Vec<usize>> {
    let comps = g.components();
    comps
        .get(id)
        .cloned()
        .ok_or_else(|| Error::BadParameters(format!("no component {id}; there are {}", comps.len())))
}

fn outside(g: &Network, comp: &[usize]) -> Vec<usize> {
    (0..g.n()).filter(|v| !comp.contains(v)).collect()
}

/// Chains the pairs `u_i — v_i` (`u_i < v_i`, ordered by `u_i`) and the
/// singletons `w_1 < … < w_m` into the cycle
/// `u_1 v_1 u_2 v_2 … u_ℓ v_ℓ w_1 … w_m u_1`.
pub fn extend_pairs_to_circle(g: &Network) -> Result<ExtensionPlan> {
    let n = g.n();
    if n <= 3 {
        return Err(Error::TooSmall(format!("pairs-to-circle needs n > 3, got {n}")));
    }
    if let Some(v) = (0..n).find(|&v| g.degree(v) > 1) {
        return Err(Error::DegreeTooHigh(v));
    }
    let mut b = Builder::new(g);
    let pairs: Vec<(usize, usize)> = g.edges().to_vec();
    let singles: Vec<usize> = (0..n).filter(|&v| g.degree(v) == 0).collect();
    b.note(format!("pairs (u_i, v_i): {pairs:?}; singletons w: {singles:?}"));
    b.note(
        "base: communicating pairs hold equal posteriors, so a pair is persuaded together".to_string(),
    );
    let cycle: Vec<usize> = pairs.iter().flat_map(|&(u, v)| [u, v]).chain(singles).collect();
    for t in 0..n {
        b.link(cycle[t], cycle[(t + 1) % n]);
    }
    b.note(format!("cycle order: {cycle:?}"));
    b.finish(Construction::PairsToCircle)
}

fn depth_classes(cert: &StellarCertificate) -> BTreeMap<usize, Vec<usize>> {
    let mut by_depth: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, d) in cert.node_depths() {
        by_depth.entry(d).or_default().push(v);
    }
    by_depth
}

/// Depth-one step shared by stellar and halo components: `r` is the
/// center, `periphery` the rest of the component, `out` the outside
/// nodes (all sorted).
fn single_level(b: &mut Builder, periphery: &[usize], out: &[usize]) -> Result<()> {
    if periphery.len() == out.len() {
        b.note(format!("case (i): |P| = |N\\C| = {}; matching P to N\\C", out.len()));
        for (&o, &p) in out.iter().zip(periphery) {
            b.link(o, p);
        }
    } else if periphery.len() > out.len() {
        let j = out[0];
        b.note(format!("case (ii): |P| = {} > |N\\C| = {}; j = {j}", periphery.len(), out.len()));
        for (&o, &p) in out[1..].iter().zip(periphery) {
            b.link(o, p);
        }
        for &p in &periphery[out.len() - 1..] {
            b.link(j, p);
        }
    } else {
        return Err(Error::PremiseViolated(format!(
            "periphery of {} is smaller than the {} outside nodes",
            periphery.len(),
            out.len()
        )));
    }
    b.note(format!("clique on N\\C = {out:?}"));
    b.clique(out);
    Ok(())
}

/// Extension for a stellar component of depth `ℓ` with more than `k`
/// receivers and at least `ℓ` receivers outside it.
pub fn extend_stellar(g: &Network, k: usize, component_id: usize) -> Result<ExtensionPlan> {
    let comp = component(g, component_id)?;
    let cert = recognize_stellar_within(g, &comp)?;
    let depth = cert.depth;
    if depth == 0 {
        return Err(Error::NotStellar("a single receiver has depth 0".into()));
    }
    if comp.len() <= k {
        return Err(Error::ComponentTooSmall { size: comp.len(), k });
    }
    let out = outside(g, &comp);
    if out.len() < depth {
        return Err(Error::NotEnoughOutsideNodes { needed: depth, found: out.len() });
    }
    let mut b = Builder::new(g);
    stellar_steps(&mut b, &comp, &cert, &out, k)?;
    b.finish(Construction::Stellar)
}

fn stellar_steps(
    b: &mut Builder,
    comp: &[usize],
    cert: &StellarCertificate,
    out: &[usize],
    k: usize,
) -> Result<()> {
    let r = cert.root;
    let depth = cert.depth;
    b.note(format!(
        "premises: component {comp:?} is stellar with root r = {r}, depth l = {depth}; |C| = {} > k = {k}; |N\\C| = {} >= l",
        comp.len(),
        out.len()
    ));
    b.note("base: r observes all of C and |C| > k, so r can be ignored and the base value is at most V^{n-1}_k < V^n_k");
    let periphery: Vec<usize> = comp.iter().copied().filter(|&v| v != r).collect();
    if depth == 1 {
        return single_level(b, &periphery, out);
    }
    let layers = depth_classes(cert);
    let v: Vec<usize> = out[..depth].to_vec();
    let rest: Vec<usize> = out[depth..].to_vec();
    b.note(format!("l > 1: v_1..v_l = {v:?}; remaining outside R = {rest:?}"));
    for (i, &vi) in v.iter().enumerate() {
        for &w in &layers[&(i + 1)] {
            b.link(vi, w);
        }
    }
    if rest.len() >= 2 {
        b.note("|R| >= 2: linking every depth-1 node to every depth-2 node");
        for &a in &layers[&1] {
            for &c in &layers[&2] {
                b.link(a, c);
            }
        }
    }
    if !rest.is_empty() {
        b.note(format!("clique on R, and R linked to r = {r} and every v_i"));
        b.clique(&rest);
        for &x in &rest {
            b.link(x, r);
            for &vi in &v {
                b.link(x, vi);
            }
        }
        let partners: Vec<usize> =
            if rest.len() == 1 { vec![layers[&2][0]] } else { periphery[..rest.len()].to_vec() };
        b.note(format!("R partners in C\\{{r}}: {:?}", rest.iter().zip(&partners).collect::<Vec<_>>()));
        for (&x, &p) in rest.iter().zip(&partners) {
            b.link(x, p);
        }
    }
    Ok(())
}

/// Extension for a halo component with more than `k` and fewer than `n`
/// receivers, using the depth-one skeleton on center and periphery.
pub fn extend_halo(g: &Network, k: usize, component_id: usize) -> Result<ExtensionPlan> {
    let comp = component(g, component_id)?;
    let r = halo_center(g, &comp).ok_or(Error::NotHalo)?;
    let n = g.n();
    if comp.len() <= k || comp.len() >= n {
        return Err(Error::SizeOutOfRange(format!(
            "halo of {} receivers needs k = {k} < size < n = {n}",
            comp.len()
        )));
    }
    if comp.len() == 4 {
        // The halo on four receivers is the complete graph K4: its members
        // are twins, and any outside links that separate them leave one
        // of them dominated.
        return Err(Error::SizeOutOfRange(
            "a halo of 4 receivers is complete; no extension removes every dominating pair".into(),
        ));
    }
    let out = outside(g, &comp);
    let periphery: Vec<usize> = comp.iter().copied().filter(|&v| v != r).collect();
    let mut b = Builder::new(g);
    b.note(format!(
        "premises: component {comp:?} is a halo with center {r}; k = {k} < |C| = {} < n = {n}",
        comp.len()
    ));
    b.note("base: the center observes all of C and |C| > k, so it can be ignored as in the star case");
    single_level(&mut b, &periphery, &out)?;
    b.finish(Construction::Halo)
}

/// Extension for a constellation component with centers `M`, depth `ℓ`,
/// more than `k` receivers and `|N∖C| ≥ max{ℓ, |M|} + 1`.
///
/// With a single center this is the stellar construction. With several,
/// the outside nodes `u, v_1, …, v_μ` (plus any extras) form a clique;
/// center `m_i` gets the private contact `v_i`; periphery nodes are tied
/// to outside nodes by depth (depth `d` to `v_d`, and to `u` while
/// `d ≤ |M|`) or, at depth one, spread round-robin over the outside
/// nodes that are not center contacts. Extra outside nodes each take one
/// distinct periphery node and one center.
pub fn extend_constellation(g: &Network, k: usize, component_id: usize) -> Result<ExtensionPlan> {
    let comp = component(g, component_id)?;
    let cert = recognize_constellation_within(g, &comp).map_err(|e| match e {
        Error::NotConstellation(m) => Error::NotConstellation(m),
        other => Error::NotConstellation(other.to_string()),
    })?;
    let centers = cert.centers.clone();
    let depth = cert.depth;
    let t = centers.len();
    let mu = depth.max(t);
    let out = outside(g, &comp);
    if comp.len() <= k {
        return Err(Error::PremiseViolated(format!("|C| = {} must exceed k = {k}", comp.len())));
    }
    if out.len() < mu + 1 {
        return Err(Error::PremiseViolated(format!(
            "|N\\C| = {} must be at least max(l, |M|) + 1 = {}",
            out.len(),
            mu + 1
        )));
    }
    if t == 1 {
        let mut b = Builder::new(g);
        b.note(format!("single center {}: the component is stellar; delegating", centers[0]));
        stellar_steps(&mut b, &comp, &cert.subnetworks[0], &out, k)?;
        return b.finish(Construction::Constellation);
    }
    let depths = cert.subnetworks[0].node_depths();
    let periphery: Vec<usize> = comp.iter().copied().filter(|v| !centers.contains(v)).collect();
    let u = out[0];
    let v: Vec<usize> = out[1..=mu].to_vec();
    let extras: Vec<usize> = out[mu + 1..].to_vec();
    let mut b = Builder::new(g);
    b.note(format!(
        "premises: centers M = {centers:?}, depth l = {depth}, |C| = {} > k = {k}, |N\\C| = {} >= {}",
        comp.len(),
        out.len(),
        mu + 1
    ));
    b.note("base: every center observes all of C and |C| > k, so the base value is below V^n_k");
    b.note(format!("u = {u}; v_1..v_mu = {v:?}; extra outside nodes = {extras:?}"));
    b.clique(&out);
    for (m, &vi) in centers.iter().zip(&v) {
        b.link(*m, vi);
    }
    b.note(format!("center contacts: {:?}", centers.iter().zip(&v).collect::<Vec<_>>()));
    if depth == 1 {
        let targets: Vec<usize> = out.iter().copied().filter(|o| !v[..t].contains(o)).collect();
        if periphery.len() < targets.len() {
            return Err(Error::PremiseViolated(format!(
                "{} periphery nodes cannot cover the {} non-contact outside nodes",
                periphery.len(),
                targets.len()
            )));
        }
        b.note(format!("l = 1: periphery {periphery:?} spread round-robin over {targets:?}"));
        for (idx, &p) in periphery.iter().enumerate() {
            b.link(p, targets[idx % targets.len()]);
        }
    } else {
        for &p in &periphery {
            let d = depths[&p];
            b.link(p, v[d - 1]);
            if d <= t {
                b.link(p, u);
            }
        }
        b.note(format!("l > 1: depth-d periphery linked to v_d, and to u = {u} when d <= |M| = {t}"));
        if extras.len() > periphery.len() {
            return Err(Error::PremiseViolated("more extra outside nodes than periphery nodes".into()));
        }
        for (&o, &p) in extras.iter().zip(&periphery) {
            let m = if depths[&p] == 1 { centers[1] } else { centers[0] };
            b.link(o, p);
            b.link(o, m);
            b.note(format!("extra {o}: linked to periphery {p} and center {m}"));
        }
    }
    b.finish(Construction::Constellation)
}

/// Indices of some subset of `sizes` summing to `k`, if one exists.
fn subset_with_sum(sizes: &[usize], k: usize) -> Option<Vec<usize>> {
    // reach[i][s]: some subset of the first i sizes sums to s
    let mut reach = vec![vec![false; k + 1]; sizes.len() + 1];
    reach[0][0] = true;
    for (i, &sz) in sizes.iter().enumerate() {
        for s in 0..=k {
            reach[i + 1][s] = reach[i][s] || (s >= sz && reach[i][s - sz]);
        }
    }
    if !reach[sizes.len()][k] {
        return None;
    }
    let (mut s, mut picked) = (k, Vec::new());
    for i in (0..sizes.len()).rev() {
        if !reach[i][s] {
            picked.push(i);
            s -= sizes[i];
        }
    }
    picked.reverse();
    Some(picked)
}

/// Extension for a galaxy: components sorted by weakly decreasing size,
/// each node gets one link into the first available node of another
/// component; if the traversal gets stuck in the last component, that
/// component is matched into the one before it.
///
/// The traversal can also get stuck earlier (sizes 6, 6, 5, 4: the two
/// largest components absorb each other and the third outnumbers the
/// fourth). Then the links come from a cross-component matching instead:
/// list the nodes component by component and pair position `i` with
/// `i + ⌊n/2⌋`, which never pairs a component with itself because no
/// component holds more than `n/2` nodes. With `n` odd the leftover node
/// is linked to a matched node whose pair avoids its component.
pub fn extend_galaxy(g: &Network, k: usize) -> Result<ExtensionPlan> {
    let n = g.n();
    let comps = g.components();
    let centers = recognize_galaxy(g).map_err(|e| Error::NotGalaxy(e.to_string()))?;
    if comps.len() < 2 {
        return Err(Error::NotGalaxy("needs at least two components".into()));
    }
    let max = (k - 1).min(n / 2);
    for c in &comps {
        if c.len() < 3 || c.len() > max {
            return Err(Error::ComponentSizeOutOfRange { component: c.clone(), max });
        }
    }
    let sizes: Vec<usize> = comps.iter().map(Vec::len).collect();
    if let Some(subset) = subset_with_sum(&sizes, k) {
        return Err(Error::SubsetSumsToQuota(subset));
    }
    let mut b = Builder::new(g);
    b.note(format!(
        "premises: {} components of sizes {sizes:?} in [3, {max}], centers {centers:?}; no union has exactly k = {k} receivers",
        comps.len()
    ));
    b.note("base: centers share every zero posterior of their component, so exactly-k persuasion is impossible and the value is below V^n_k");

    let mut ranked: Vec<usize> = (0..comps.len()).collect();
    ranked.sort_by(|&a, &c| sizes[c].cmp(&sizes[a]).then(comps[a][0].cmp(&comps[c][0])));
    let order: Vec<usize> = ranked.iter().flat_map(|&c| comps[c].iter().copied()).collect();
    let mut comp_of = vec![0; n];
    for (rank, &c) in ranked.iter().enumerate() {
        for &v in &comps[c] {
            comp_of[v] = rank;
        }
    }
    b.note(format!("traversal order (weakly decreasing size): {order:?}"));
    match galaxy_traversal(&order, &comp_of, &comps, &ranked) {
        Ok((links, notes)) => {
            for line in notes {
                b.note(line);
            }
            for (x, y) in links {
                b.link(x, y);
            }
        }
        Err(reason) => {
            b.note(format!("{reason}; using the cross-component matching instead"));
            let h = n / 2;
            for i in 0..h {
                b.link(order[i], order[i + h]);
            }
            b.note(format!("matched position i with i + {h} in the traversal order"));
            if n % 2 == 1 {
                let w = order[n - 1];
                let z = (0..h)
                    .flat_map(|i| [(order[i], order[i + h]), (order[i + h], order[i])])
                    .find(|&(z, m)| comp_of[z] != comp_of[w] && comp_of[m] != comp_of[w])
                    .map(|(z, _)| z)
                    .expect("a component with at most n/2 nodes leaves a pair outside it");
                b.link(w, z);
                b.note(format!("leftover {w} linked to {z}"));
            }
        }
    }
    b.finish(Construction::Galaxy)
}

type Links = (Vec<(usize, usize)>, Vec<String>);

/// Greedy traversal with the last-component repair; `Err` explains where
/// it got stuck.
fn galaxy_traversal(
    order: &[usize],
    comp_of: &[usize],
    comps: &[Vec<usize>],
    ranked: &[usize],
) -> std::result::Result<Links, String> {
    let n = order.len();
    let mut links = Vec::new();
    let mut notes = Vec::new();
    let mut partner: Vec<Option<usize>> = vec![None; n];
    let mut stuck: Option<usize> = None;
    for &a in order {
        if partner[a].is_some() {
            continue;
        }
        match order.iter().copied().find(|&c| comp_of[c] != comp_of[a] && partner[c].is_none()) {
            Some(c) => {
                links.push((a, c));
                partner[a] = Some(c);
                partner[c] = Some(a);
            }
            None => {
                stuck = Some(comp_of[a]);
                break;
            }
        }
    }
    if let Some(rank) = stuck {
        let stuck_comp = &comps[ranked[rank]];
        if rank != ranked.len() - 1 {
            return Err(format!("traversal stuck in component {stuck_comp:?}, which is not the last"));
        }
        let previous = &comps[ranked[rank - 1]];
        notes.push(format!("stuck in the last component {stuck_comp:?}; repairing into {previous:?}"));
        let mut taken: BTreeSet<usize> =
            stuck_comp.iter().filter_map(|&x| partner[x]).filter(|p| previous.contains(p)).collect();
        for &x in stuck_comp {
            if partner[x].is_some() {
                continue;
            }
            let y = previous
                .iter()
                .copied()
                .find(|y| !taken.contains(y))
                .ok_or_else(|| format!("repair found no free partner for {x} in {previous:?}"))?;
            links.push((x, y));
            taken.insert(y);
            partner[x] = Some(y);
            notes.push(format!("repair: {x} -> {y}"));
        }
    }
    Ok((links, notes))
}

/// Extension for `q` clusters of size `p` with `n/2 < k < n`: receivers
/// with the same within-cluster index are joined in a ring across
/// clusters (a single link when `q = 2`).
pub fn extend_clusters(g: &Network, k: usize) -> Result<ExtensionPlan> {
    let (q, p) = recognize_cluster_network(g)?;
    let n = g.n();
    if 2 * k <= n || k >= n {
        return Err(Error::QuotaOutOfRange { k, n });
    }
    let comps = g.components();
    let mut b = Builder::new(g);
    b.note(format!("premises: {q} clusters of size {p}; n/2 < k = {k} < n = {n}"));
    b.note("base: clusters share zero posteriors, so p would have to divide k, which n/2 < k < n rules out");
    for i in 0..p {
        let ring: Vec<usize> = comps.iter().map(|c| c[i]).collect();
        for j in 0..q {
            if q == 2 && j == 1 {
                break;
            }
            b.link(ring[j], ring[(j + 1) % q]);
        }
        b.note(format!("index {i}: ring {ring:?}"));
    }
    b.finish(Construction::Clusters)
}

/// Dispatches on the construction name; `component` is ignored by the
/// whole-network constructions.
pub fn extend(construction: Construction, g: &Network, k: usize, component: usize) -> Result<ExtensionPlan> {
    match construction {
        Construction::PairsToCircle => extend_pairs_to_circle(g),
        Construction::Stellar => extend_stellar(g, k, component),
        Construction::Halo => extend_halo(g, k, component),
        Construction::Constellation => extend_constellation(g, k, component),
        Construction::Galaxy => extend_galaxy(g, k),
        Construction::Clusters => extend_clusters(g, k),
    }
}
