//! Hubs and chains, bridge decomposition, the ring-path formula and the
//! partition formula.

use crate::analytic::{path_general, ring_general};
use crate::error::{Error, Result};
use crate::exact::{self, factor, partition_distribution, terminal_distribution, DC_MAX_EDGES};
use crate::graph::{GEdge, Graph};
use crate::network::{EdgeId, Network, NodeId};
use crate::poly::{ReliabilityPolynomial, Value, Q};
use serde::Serialize;
use std::collections::HashMap;

/// A maximal run of degree-2 nodes between two hubs, in index form.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct RawChain {
    pub a: usize,
    pub b: usize,
    pub interior: Vec<usize>,
    /// edges from `a` to `b`; one more than `interior`
    pub edges: Vec<usize>,
}

impl RawChain {
    pub fn c(&self) -> usize {
        self.interior.len()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Decomp {
    pub hubs: Vec<usize>,
    /// graph node -> position in `hubs`
    pub hub_pos: Vec<Option<usize>>,
    pub chains: Vec<RawChain>,
    /// graph edge -> (chain, position along the chain)
    pub edge_chain: Vec<Option<(usize, usize)>>,
    /// graph node -> (chain, position in interior)
    pub node_chain: Vec<Option<(usize, usize)>>,
}

/// Split the source component into hubs (source and nodes of degree other
/// than 2) and chains. Self-loops and unreachable parts are ignored.
pub(crate) fn decompose<V>(g: &Graph<V>) -> Decomp {
    let seen = g.reachable(|_| true);
    let adj = g.adjacency();
    let n = g.n();
    let is_hub = |x: usize| seen[x] && (x == g.source || adj[x].len() != 2);
    let mut hub_pos = vec![None; n];
    let mut hubs = Vec::new();
    for x in 0..n {
        if is_hub(x) {
            hub_pos[x] = Some(hubs.len());
            hubs.push(x);
        }
    }
    let mut used = vec![false; g.m()];
    let mut chains = Vec::new();
    let mut edge_chain = vec![None; g.m()];
    let mut node_chain = vec![None; n];
    for &h in &hubs {
        for &(first, e0) in &adj[h] {
            if used[e0] {
                continue;
            }
            used[e0] = true;
            let mut interior = Vec::new();
            let mut edges = vec![e0];
            let (mut prev_e, mut cur) = (e0, first);
            while !is_hub(cur) {
                interior.push(cur);
                let &(next, ne) = adj[cur].iter().find(|&&(_, ei)| ei != prev_e).unwrap();
                used[ne] = true;
                edges.push(ne);
                prev_e = ne;
                cur = next;
            }
            let k = chains.len();
            for (i, &e) in edges.iter().enumerate() {
                edge_chain[e] = Some((k, i));
            }
            for (i, &v) in interior.iter().enumerate() {
                node_chain[v] = Some((k, i));
            }
            chains.push(RawChain { a: h, b: cur, interior, edges });
        }
    }
    Decomp { hubs, hub_pos, chains, edge_chain, node_chain }
}

impl Decomp {
    /// Structure graph: hubs as nodes, one edge per chain failing when any
    /// chain edge fails. Hub weights come from `g`.
    pub fn structure_graph<V: Value>(&self, g: &Graph<V>) -> Graph<V> {
        let weight = self.hubs.iter().map(|&h| g.weight[h].clone()).collect();
        let edges = self
            .chains
            .iter()
            .map(|c| GEdge {
                u: self.hub_pos[c.a].unwrap(),
                v: self.hub_pos[c.b].unwrap(),
                p: V::one() - self.chain_q(g, c),
            })
            .collect();
        Graph { weight, source: self.hub_pos[g.source].unwrap(), edges }
    }

    pub fn chain_q<V: Value>(&self, g: &Graph<V>, c: &RawChain) -> V {
        c.edges
            .iter()
            .fold(V::one(), |acc, &e| acc * (V::one() - g.edges[e].p.clone()))
    }
}

/// Boundary states of a chain: neither, only a, only b, both hubs joined
/// to the source without using the chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryProbs {
    pub p0: f64,
    pub p1_u: f64,
    pub p1_v: f64,
    pub p2: f64,
}

pub(crate) fn boundary_of<V: Value>(sg: &Graph<V>, d: &Decomp, k: usize) -> [V; 4] {
    let c = &d.chains[k];
    let (a, b) = (d.hub_pos[c.a].unwrap(), d.hub_pos[c.b].unwrap());
    let mut rest = sg.clone();
    rest.edges.remove(k);
    if a == b {
        let dist = terminal_distribution(&rest, &[a]);
        let [n0, n1] = [dist[0].clone(), dist[1].clone()];
        return [n0, V::zero(), V::zero(), n1];
    }
    let dist = terminal_distribution(&rest, &[a, b]);
    [dist[0].clone(), dist[1].clone(), dist[2].clone(), dist[3].clone()]
}

fn ring_path_generic<V: Value>(g: &Graph<V>, d: &Decomp) -> Result<V> {
    let sg = d.structure_graph(g);
    if sg.m() > FACTOR_MAX_CHAINS {
        // factoring is exponential in the chain count, the sweep only in
        // the frontier width
        return match exact::frontier_saidi(g) {
            Err(e) if e.is_size_guard() && sg.m() <= DC_MAX_EDGES => structure_factor(g, d, sg),
            r => r,
        };
    }
    structure_factor(g, d, sg)
}

/// Above this many chains a frontier sweep usually beats factoring.
const FACTOR_MAX_CHAINS: usize = 20;

fn structure_factor<V: Value>(g: &Graph<V>, d: &Decomp, sg: Graph<V>) -> Result<V> {
    let mut total = factor(sg.clone());
    for (k, c) in d.chains.iter().enumerate() {
        if c.interior.is_empty() {
            continue;
        }
        let w: Vec<V> = c.interior.iter().map(|&x| g.weight[x].clone()).collect();
        let q: Vec<V> = c.edges.iter().map(|&e| V::one() - g.edges[e].p.clone()).collect();
        let whole = w.iter().fold(V::zero(), |acc, x| acc + x);
        let [p0, p1a, p1b, p2] = boundary_of(&sg, d, k);
        total = total + p0 * &whole + p2 * &ring_general(&w, &q);
        if !p1a.is_zero() {
            total = total + p1a * &path_general(&w, &q);
        }
        if !p1b.is_zero() {
            let wr: Vec<V> = w.iter().rev().cloned().collect();
            let qr: Vec<V> = q.iter().rev().cloned().collect();
            total = total + p1b * &path_general(&wr, &qr);
        }
    }
    Ok(total)
}

/// Local copy of a subgraph given by node and edge lists, rooted at `root`.
fn subgraph<V: Value>(g: &Graph<V>, nodes: &[usize], edges: &[usize], root: usize) -> Graph<V> {
    let mut local = HashMap::new();
    for (i, &x) in nodes.iter().enumerate() {
        local.insert(x, i);
    }
    Graph {
        weight: nodes
            .iter()
            .map(|&x| if x == root { V::zero() } else { g.weight[x].clone() })
            .collect(),
        source: local[&root],
        edges: edges
            .iter()
            .map(|&e| GEdge {
                u: local[&g.edges[e].u],
                v: local[&g.edges[e].v],
                p: g.edges[e].p.clone(),
            })
            .collect(),
    }
}

/// One part of a bridge decomposition, in index form.
#[derive(Clone, Debug)]
pub(crate) struct RawPart<V> {
    pub nodes: Vec<usize>,
    pub root: usize,
    /// (bridge edge, anchor node on the source side)
    pub parent: Option<(usize, usize)>,
    pub absorbed: V,
    pub constant: V,
    pub saidi: V,
}

pub(crate) struct RawDecomposition<V> {
    pub parts: Vec<RawPart<V>>,
    pub unreachable: V,
}

/// Bridge decomposition: leaves first, every hanging part folds into its
/// anchor as extra weight plus a constant.
pub(crate) fn bridge_decompose_generic<V: Value>(g0: &Graph<V>) -> Result<RawDecomposition<V>> {
    let mut g = g0.clone();
    g.edges.retain(|e| !e.is_loop());
    let seen = g.reachable(|_| true);
    let mut unreachable = V::zero();
    for v in 0..g.n() {
        if !seen[v] && v != g.source {
            unreachable = unreachable + &g.weight[v];
        }
    }
    let bridges = g.bridges();
    let is_bridge = {
        let mut b = vec![false; g.m()];
        bridges.iter().for_each(|&i| b[i] = true);
        b
    };
    let (label, count) = g.components(|i| !is_bridge[i]);
    let mut comp_nodes = vec![Vec::new(); count];
    for v in 0..g.n() {
        if seen[v] {
            comp_nodes[label[v]].push(v);
        }
    }
    let mut comp_edges = vec![Vec::new(); count];
    for (i, e) in g.edges.iter().enumerate() {
        if !is_bridge[i] && seen[e.u] {
            comp_edges[label[e.u]].push(i);
        }
    }
    // orient the bridge tree from the source component
    let root_comp = label[g.source];
    let mut parent: Vec<Option<(usize, usize, usize)>> = vec![None; count];
    let mut order = vec![root_comp];
    let mut visited = vec![false; count];
    visited[root_comp] = true;
    let mut i = 0;
    while i < order.len() {
        let c = order[i];
        i += 1;
        for &b in &bridges {
            let e = &g.edges[b];
            for (near, far) in [(e.u, e.v), (e.v, e.u)] {
                if label[near] == c && !visited[label[far]] && seen[near] {
                    visited[label[far]] = true;
                    parent[label[far]] = Some((b, near, far));
                    order.push(label[far]);
                }
            }
        }
    }
    let mut parts = Vec::new();
    for &c in order.iter().rev() {
        let root = parent[c].map(|(_, _, far)| far).unwrap_or(g.source);
        let sub = subgraph(&g, &comp_nodes[c], &comp_edges[c], root);
        let d = decompose(&sub);
        let f = ring_path_generic(&sub, &d)?;
        let (absorbed, constant) = match parent[c] {
            Some((b, near, _)) => {
                let w_total = comp_nodes[c]
                    .iter()
                    .fold(V::zero(), |acc, &x| acc + &g.weight[x]);
                let q = V::one() - g.edges[b].p.clone();
                let a = q * (w_total.clone() - f.clone());
                let constant = w_total - a.clone();
                g.weight[near] = g.weight[near].clone() + &a;
                (a, constant)
            }
            None => (V::zero(), V::zero()),
        };
        parts.push(RawPart {
            nodes: comp_nodes[c].clone(),
            root,
            parent: parent[c].map(|(b, near, _)| (b, near)),
            absorbed,
            constant,
            saidi: f,
        });
    }
    parts.reverse();
    Ok(RawDecomposition { parts, unreachable })
}

impl<V: Value> RawDecomposition<V> {
    pub fn total(&self) -> V {
        self.parts
            .iter()
            .fold(self.unreachable.clone(), |acc, part| {
                let own = if part.parent.is_none() { part.saidi.clone() } else { V::zero() };
                acc + &part.constant + &own
            })
    }
}

/// Exact SAIDI via bridge decomposition and the ring-path formula.
pub(crate) fn saidi_modular(g: &Graph) -> Result<f64> {
    Ok(bridge_decompose_generic(g)?.total())
}

pub(crate) fn saidi_modular_poly(g: &Graph) -> Result<ReliabilityPolynomial> {
    Ok(bridge_decompose_generic(&exact::symbolic(g))?.total())
}

/// Public chain record.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Chain {
    pub id: String,
    pub endpoints: (NodeId, NodeId),
    pub interior: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
    pub c: usize,
    pub fail_prob: f64,
}

/// Hubs and chains of a bridgeless network.
#[derive(Clone, Debug, Serialize)]
pub struct StructureGraph {
    pub source: NodeId,
    pub hubs: Vec<NodeId>,
    pub chains: Vec<Chain>,
    #[serde(skip)]
    pub(crate) decomp: Decomp,
    #[serde(skip)]
    pub(crate) graph: Graph,
}

impl StructureGraph {
    /// m' = number of chains
    pub fn m_prime(&self) -> usize {
        self.chains.len()
    }

    /// n' = number of hubs other than the source
    pub fn n_prime(&self) -> usize {
        self.hubs.len() - 1
    }

    /// Degree of every hub in the structure graph (a self-loop counts twice).
    pub fn hub_degrees(&self) -> Vec<(NodeId, usize)> {
        let mut deg = vec![0; self.hubs.len()];
        for c in &self.decomp.chains {
            deg[self.decomp.hub_pos[c.a].unwrap()] += 1;
            deg[self.decomp.hub_pos[c.b].unwrap()] += 1;
        }
        self.hubs.iter().cloned().zip(deg).collect()
    }

    pub fn chain_lengths(&self) -> Vec<usize> {
        self.chains.iter().map(|c| c.c).collect()
    }

    /// The structure graph as a plain network (chains become single edges).
    pub fn as_network(&self) -> Network {
        let sg = self.decomp.structure_graph(&self.graph);
        let nodes = self
            .hubs
            .iter()
            .enumerate()
            .map(|(i, id)| crate::network::Node {
                id: id.clone(),
                weight: sg.weight[i],
                is_source: i == sg.source,
            })
            .collect();
        let edges = self
            .chains
            .iter()
            .map(|c| crate::network::Edge {
                id: EdgeId(c.id.clone()),
                u: c.endpoints.0.clone(),
                v: c.endpoints.1.clone(),
                p_fail: c.fail_prob,
            })
            .collect();
        Network::new(nodes, edges).expect("structure graph is a valid network")
    }

    /// (1/12) sum c(c+1)(c+2)(2n - (c+1)) over chains.
    pub fn pairwise_second_coeff(&self) -> Q {
        crate::analytic::pairwise_second_coeff(&self.chain_lengths(), self.graph.n())
    }

    pub fn chain(&self, id: &str) -> Option<(usize, &Chain)> {
        self.chains.iter().enumerate().find(|(_, c)| c.id == id)
    }
}

pub(crate) fn node_name(net: &Network, members: &[Vec<usize>], x: usize) -> NodeId {
    net.nodes()[members[x][0]].id.clone()
}

/// Build the structure graph. Bridged inputs are rejected.
pub fn build_structure(net: &Network) -> Result<StructureGraph> {
    let low = net.lower();
    let g = low.graph;
    let seen = g.reachable(|_| true);
    let live_bridges = g.bridges().into_iter().any(|b| seen[g.edges[b].u]);
    if live_bridges {
        return Err(Error::HasBridges);
    }
    Ok(structure_from_graph(net, &low.members, g))
}

/// Hubs and chains of any network, bridges allowed (bridge chains are
/// plain chains whose removal disconnects the structure graph).
pub fn chain_decomposition(net: &Network) -> StructureGraph {
    let low = net.lower();
    structure_from_graph(net, &low.members, low.graph)
}

pub(crate) fn structure_from_graph(net: &Network, members: &[Vec<usize>], g: Graph) -> StructureGraph {
    let decomp = decompose(&g);
    let name = |x: usize| node_name(net, members, x);
    let chains = decomp
        .chains
        .iter()
        .enumerate()
        .map(|(k, c)| Chain {
            id: format!("c{}", k + 1),
            endpoints: (name(c.a), name(c.b)),
            interior: c.interior.iter().map(|&x| name(x)).collect(),
            edges: c.edges.iter().map(|&e| net.edges()[e].id.clone()).collect(),
            c: c.c(),
            fail_prob: 1.0 - decomp.chain_q(&g, c),
        })
        .collect();
    StructureGraph {
        source: name(g.source),
        hubs: decomp.hubs.iter().map(|&h| name(h)).collect(),
        chains,
        decomp,
        graph: g,
    }
}

/// P0, P1_u, P1_v, P2 for chain `chain_id` of `build_structure(net)`.
/// P1_u means u = first endpoint is joined and v is not.
pub fn boundary_connection_probs(net: &Network, chain_id: &str) -> Result<BoundaryProbs> {
    let s = build_structure(net)?;
    let (k, _) = s
        .chain(chain_id)
        .ok_or_else(|| Error::arg(format!("unknown chain `{chain_id}`")))?;
    let sg = s.decomp.structure_graph(&s.graph);
    let [p0, p1_u, p1_v, p2] = boundary_of(&sg, &s.decomp, k);
    Ok(BoundaryProbs { p0, p1_u, p1_v, p2 })
}

/// Exact SAIDI of a bridgeless network by the ring-path formula.
pub fn ring_path_saidi(net: &Network) -> Result<f64> {
    let s = build_structure(net)?;
    let mut g = s.graph.clone();
    g.edges.retain(|e| !e.is_loop());
    let seen = g.reachable(|_| true);
    let lost: f64 = (0..g.n())
        .filter(|&v| !seen[v] && v != g.source)
        .map(|v| g.weight[v])
        .sum();
    let d = decompose(&g);
    Ok(ring_path_generic(&g, &d)? + lost)
}

/// Public view of a bridge decomposition part.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BridgePart {
    pub nodes: Vec<NodeId>,
    pub root: NodeId,
    pub bridge: Option<EdgeId>,
    pub anchor: Option<NodeId>,
    /// expected weight the part keeps connected given the anchor is connected
    pub absorbed_weight: f64,
    /// weight lost regardless of the anchor: W - absorbed
    pub constant: f64,
    /// SAIDI of the part rooted at `root`, with weights already absorbed
    pub rooted_saidi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BridgeDecomposition {
    pub parts: Vec<BridgePart>,
    pub unreachable_weight: f64,
}

impl BridgeDecomposition {
    /// Recombined SAIDI: root part + all constants + unreachable weight.
    pub fn total(&self) -> f64 {
        self.unreachable_weight
            + self
                .parts
                .iter()
                .map(|p| p.constant + if p.bridge.is_none() { p.rooted_saidi } else { 0.0 })
                .sum::<f64>()
    }
}

pub fn bridge_decompose(net: &Network) -> Result<BridgeDecomposition> {
    let low = net.lower();
    let raw = bridge_decompose_generic(&low.graph)?;
    let name = |x: usize| node_name(net, &low.members, x);
    let parts = raw
        .parts
        .iter()
        .map(|p| BridgePart {
            nodes: p.nodes.iter().map(|&x| name(x)).collect(),
            root: name(p.root),
            bridge: p.parent.map(|(b, _)| net.edges()[b].id.clone()),
            anchor: p.parent.map(|(_, a)| name(a)),
            absorbed_weight: p.absorbed,
            constant: p.constant,
            rooted_saidi: p.saidi,
        })
        .collect();
    Ok(BridgeDecomposition { parts, unreachable_weight: raw.unreachable })
}

/// Maximum separator size for the partition formula (Bell(5) = 52 partitions).
pub const PARTITION_MAX_SEPARATOR: usize = 4;

/// Exact SAIDI by conditioning on how each side connects the separator.
pub fn partition_saidi(net: &Network, cut_nodes: &[NodeId]) -> Result<f64> {
    partition_impl(net, cut_nodes, false)
}

/// Same as [`partition_saidi`] with the two sides' roles exchanged.
pub fn partition_saidi_swapped(net: &Network, cut_nodes: &[NodeId]) -> Result<f64> {
    partition_impl(net, cut_nodes, true)
}

fn partition_impl(net: &Network, cut_nodes: &[NodeId], swap: bool) -> Result<f64> {
    if cut_nodes.len() > PARTITION_MAX_SEPARATOR {
        return Err(Error::SizeGuard {
            what: "separator size",
            got: cut_nodes.len(),
            limit: PARTITION_MAX_SEPARATOR,
        });
    }
    let low = net.lower();
    let g = low.graph;
    let mut x: Vec<usize> = cut_nodes
        .iter()
        .map(|id| net.node_index(id).map(|i| low.node_map[i]))
        .collect::<Result<_>>()?;
    x.sort_unstable();
    x.dedup();
    let in_x = |v: usize| x.contains(&v);
    let (label, _) = g.components(|i| !in_x(g.edges[i].u) && !in_x(g.edges[i].v));
    let first_label = if in_x(g.source) {
        (0..g.n()).find(|&v| !in_x(v)).map(|v| label[v])
    } else {
        Some(label[g.source])
    };
    let Some(first_label) = first_label else {
        return exact::saidi(net);
    };
    // side[v]: 0 = first side interior, 1 = second side interior, 2 = separator
    let side: Vec<u8> = (0..g.n())
        .map(|v| if in_x(v) { 2 } else if label[v] == first_label { 0 } else { 1 })
        .collect();
    if !side.contains(&1) {
        return exact::saidi(net);
    }
    let edge_side = |e: &GEdge| -> u8 {
        match (side[e.u], side[e.v]) {
            (1, _) | (_, 1) => 1,
            _ => 0,
        }
    };
    let mut terms = x.clone();
    if !in_x(g.source) {
        terms.push(g.source);
    }
    let mut total = 0.0;
    let (one, two) = if swap { (1u8, 0u8) } else { (0u8, 1u8) };
    for (this, other) in [(one, two), (two, one)] {
        let other_edges: Vec<GEdge> = g.edges.iter().filter(|e| edge_side(e) == other).cloned().collect();
        let other_graph = Graph { weight: vec![0.0; g.n()], source: g.source, edges: other_edges };
        let own: Vec<GEdge> = g.edges.iter().filter(|e| edge_side(e) == this).cloned().collect();
        // separator weight is counted on the first-listed side only
        let count_sep = this == one;
        let weight: Vec<f64> = (0..g.n())
            .map(|v| {
                let s = side[v];
                if v == g.source || s == other || (s == 2 && !count_sep) {
                    0.0
                } else {
                    g.weight[v]
                }
            })
            .collect();
        for (chi, pr) in partition_distribution(&other_graph, &terms) {
            if pr == 0.0 {
                continue;
            }
            let src_block = chi[terms.iter().position(|&t| t == g.source).unwrap()];
            let rep = |v: usize| -> usize {
                match terms.iter().position(|&t| t == v) {
                    Some(i) if chi[i] == src_block => g.source,
                    Some(i) => terms[chi.iter().position(|&b| b == chi[i]).unwrap()],
                    None => v,
                }
            };
            let mut w = weight.clone();
            for (i, &t) in terms.iter().enumerate() {
                let r = rep(t);
                if r != t {
                    let wt = std::mem::replace(&mut w[t], 0.0);
                    if chi[i] != src_block {
                        w[r] += wt;
                    }
                }
            }
            w[g.source] = 0.0;
            let edges = own
                .iter()
                .map(|e| GEdge { u: rep(e.u), v: rep(e.v), p: e.p })
                .collect();
            let contracted = Graph { weight: w, source: g.source, edges };
            total += pr * saidi_modular(&contracted)?;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::saidi_bruteforce;
    use crate::network::NetworkBuilder;

    fn ring_with_tail(p: f64) -> Network {
        NetworkBuilder::new()
            .source("s")
            .node("a", 1.0)
            .node("b", 1.0)
            .node("c", 1.0)
            .node("t1", 1.0)
            .node("t2", 1.0)
            .edge("e1", "s", "a", p)
            .edge("e2", "a", "b", p)
            .edge("e3", "b", "c", p)
            .edge("e4", "c", "s", p)
            .edge("e5", "b", "t1", p)
            .edge("e6", "t1", "t2", p)
            .build()
            .unwrap()
    }

    fn three_chains(c: usize, p: f64) -> Network {
        // three chains of c nodes between s and hub h
        let mut b = NetworkBuilder::new();
        b.add_source("s");
        b.add_node("h", 1.0);
        for k in 0..3 {
            let mut prev = "s".to_string();
            for i in 0..c {
                let id = format!("x{k}_{i}");
                b.add_node(id.clone(), 1.0);
                b.add_edge(prev, id.clone(), p);
                prev = id;
            }
            b.add_edge(prev, "h", p);
        }
        b.build().unwrap()
    }

    #[test]
    fn single_ring_structure() {
        let ring = ring_with_tail(0.1).delete_edge(&"e5".into()).unwrap();
        let s = build_structure(&ring).unwrap();
        // t1-t2 are now a separate unreachable piece
        assert_eq!(s.hubs.len(), 1);
        assert_eq!(s.chains.len(), 1);
        assert_eq!(s.chains[0].c, 3);
    }

    #[test]
    fn bridged_rejected() {
        assert!(matches!(build_structure(&ring_with_tail(0.1)), Err(Error::HasBridges)));
    }

    #[test]
    fn ring_path_matches_oracle() {
        let net = three_chains(3, 0.1);
        let s = build_structure(&net).unwrap();
        assert_eq!((s.hubs.len(), s.chains.len()), (2, 3));
        let rp = ring_path_saidi(&net).unwrap();
        let bf = saidi_bruteforce(&net).unwrap();
        assert!((rp - bf).abs() < 1e-12, "{rp} vs {bf}");
    }

    #[test]
    fn bridge_decomposition_matches_oracle() {
        let net = ring_with_tail(0.05);
        let d = bridge_decompose(&net).unwrap();
        assert_eq!(d.parts.len(), 3);
        let bf = saidi_bruteforce(&net).unwrap();
        assert!((d.total() - bf).abs() < 1e-12);
    }

    #[test]
    fn partition_formula_matches_oracle() {
        let net = three_chains(2, 0.1);
        let bf = saidi_bruteforce(&net).unwrap();
        let x: Vec<NodeId> = vec!["h".into()];
        assert!((partition_saidi(&net, &x).unwrap() - bf).abs() < 1e-12);
        let x: Vec<NodeId> = vec!["x0_1".into(), "x1_1".into()];
        assert!((partition_saidi(&net, &x).unwrap() - bf).abs() < 1e-12);
        assert!((partition_saidi_swapped(&net, &x).unwrap() - bf).abs() < 1e-12);
    }

    #[test]
    fn boundary_probabilities() {
        let net = three_chains(3, 0.1);
        let b = boundary_connection_probs(&net, "c1").unwrap();
        assert!((b.p0 + b.p1_u + b.p1_v + b.p2 - 1.0).abs() < 1e-12);
        // one of the two other chains survives
        assert!((b.p2 - (1.0 - (1.0 - 0.9f64.powi(4)).powi(2))).abs() < 1e-12);
        let zero = boundary_connection_probs(&three_chains(3, 0.0), "c2").unwrap();
        assert_eq!(zero.p2, 1.0);
    }
}
