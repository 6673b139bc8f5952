//! Weighted multigraph with sources and the elementary surgeries.

use crate::error::{Error, Result};
use crate::graph::{GEdge, Graph};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

/// Compare ids so that `e2 < e10`: digit runs compare numerically.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut x, mut y) = (a.as_bytes(), b.as_bytes());
    loop {
        match (x.first(), y.first()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(c), Some(d)) if c.is_ascii_digit() && d.is_ascii_digit() => {
                let i = x.iter().take_while(|c| c.is_ascii_digit()).count();
                let j = y.iter().take_while(|c| c.is_ascii_digit()).count();
                let (dx, dy) = (trim_zeros(&x[..i]), trim_zeros(&y[..j]));
                let ord = dx.len().cmp(&dy.len()).then_with(|| dx.cmp(dy));
                if ord != Ordering::Equal {
                    return ord;
                }
                x = &x[i..];
                y = &y[j..];
            }
            (Some(c), Some(d)) => {
                if c != d {
                    return c.cmp(d);
                }
                x = &x[1..];
                y = &y[1..];
            }
        }
    }
}

fn trim_zeros(s: &[u8]) -> &[u8] {
    let k = s.iter().take_while(|&&c| c == b'0').count();
    &s[k..]
}

macro_rules! id_type {
    ($name:ident) => {
        #[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub String);

        impl $name {
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl Ord for $name {
            fn cmp(&self, other: &Self) -> Ordering {
                natural_cmp(&self.0, &other.0)
            }
        }

        impl PartialOrd for $name {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_string())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(s)
            }
        }
    };
}

id_type!(NodeId);
id_type!(EdgeId);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub weight: f64,
    #[serde(default)]
    pub is_source: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub u: NodeId,
    pub v: NodeId,
    pub p_fail: f64,
}

impl Edge {
    pub fn q(&self) -> f64 {
        1.0 - self.p_fail
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

/// An immutable network snapshot. Nodes and edges are kept sorted by id.
#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    index: HashMap<NodeId, usize>,
}

/// The index-level view: sources merged into `graph.source`, edge `i` of
/// the graph is edge `i` of the network.
#[derive(Clone, Debug)]
pub struct Lowered {
    pub graph: Graph,
    /// network node index -> graph node index
    pub node_map: Vec<usize>,
    /// graph node index -> network node indices merged into it
    pub members: Vec<Vec<usize>>,
}

impl Network {
    pub fn new(mut nodes: Vec<Node>, mut edges: Vec<Edge>) -> Result<Self> {
        nodes.sort_by(|a, b| a.id.cmp(&b.id));
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            if !(n.weight.is_finite() && n.weight >= 0.0) {
                return Err(Error::InvalidNetwork(format!(
                    "node `{}` has weight {}; weights must be finite and >= 0",
                    n.id, n.weight
                )));
            }
            if index.insert(n.id.clone(), i).is_some() {
                return Err(Error::InvalidNetwork(format!("duplicate node id `{}`", n.id)));
            }
        }
        if !nodes.iter().any(|n| n.is_source) {
            return Err(Error::InvalidNetwork("no source node".into()));
        }
        for w in edges.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::InvalidNetwork(format!("duplicate edge id `{}`", w[0].id)));
            }
        }
        for e in &edges {
            if !(0.0..=1.0).contains(&e.p_fail) {
                return Err(Error::InvalidNetwork(format!(
                    "edge `{}` has p_fail {}; must lie in [0, 1]",
                    e.id, e.p_fail
                )));
            }
            for end in [&e.u, &e.v] {
                if !index.contains_key(end) {
                    return Err(Error::InvalidNetwork(format!(
                        "edge `{}` references unknown node `{}`",
                        e.id, end
                    )));
                }
            }
        }
        Ok(Network { nodes, edges, index })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, id: &NodeId) -> Option<&Node> {
        self.index.get(id).map(|&i| &self.nodes[i])
    }

    pub fn node_index(&self, id: &NodeId) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownNode(id.0.clone()))
    }

    pub fn edge_index(&self, id: &EdgeId) -> Result<usize> {
        self.edges
            .binary_search_by(|e| e.id.cmp(id))
            .map_err(|_| Error::UnknownEdge(id.0.clone()))
    }

    pub fn edge(&self, id: &EdgeId) -> Option<&Edge> {
        self.edge_index(id).ok().map(|i| &self.edges[i])
    }

    /// edge count
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// non-source node count
    pub fn n(&self) -> usize {
        self.nodes.iter().filter(|n| !n.is_source).count()
    }

    pub fn sources(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter().filter(|n| n.is_source)
    }

    /// Total weight of non-source nodes.
    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().filter(|n| !n.is_source).map(|n| n.weight).sum()
    }

    pub fn self_loops(&self) -> Vec<EdgeId> {
        self.edges.iter().filter(|e| e.is_loop()).map(|e| e.id.clone()).collect()
    }

    /// Same topology with every edge failing with probability `p`.
    pub fn with_uniform_p(&self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::arg(format!("p = {p} outside [0, 1]")));
        }
        let mut out = self.clone();
        out.edges.iter_mut().for_each(|e| e.p_fail = p);
        Ok(out)
    }

    /// A fresh edge id of the form `{prefix}{k}` not used yet.
    pub fn fresh_edge_id(&self, prefix: &str) -> EdgeId {
        (0..)
            .map(|k| EdgeId(format!("{prefix}{k}")))
            .find(|id| self.edge(id).is_none())
            .unwrap()
    }

    pub fn with_edge(&self, edge: Edge) -> Result<Self> {
        let mut edges = self.edges.clone();
        edges.push(edge);
        Network::new(self.nodes.clone(), edges)
    }

    pub fn delete_edge(&self, id: &EdgeId) -> Result<Self> {
        let i = self.edge_index(id)?;
        let mut edges = self.edges.clone();
        edges.remove(i);
        Network::new(self.nodes.clone(), edges)
    }

    /// Merge the endpoints of `id`. The merged node keeps the smaller id,
    /// sums the weights and is a source if either endpoint was. Other edges
    /// between the two endpoints turn into self-loops and are kept.
    pub fn contract_edge(&self, id: &EdgeId) -> Result<Self> {
        let e = &self.edges[self.edge_index(id)?];
        let keep = e.u.clone().min(e.v.clone());
        let gone = e.u.clone().max(e.v.clone());
        self.merge_nodes(&[keep, gone], Some(id))
    }

    /// Merge two nodes into the smaller id (weights add, edges between
    /// them become self-loops).
    pub fn identify_nodes(&self, a: &NodeId, b: &NodeId) -> Result<Self> {
        if a == b {
            self.node_index(a)?;
            return Ok(self.clone());
        }
        self.merge_nodes(&[a.clone(), b.clone()], None)
    }

    /// Merge all sources into the smallest source id. Edges between
    /// sources vanish.
    pub fn contract_sources(&self) -> Result<Self> {
        let ids: Vec<NodeId> = self.sources().map(|n| n.id.clone()).collect();
        if ids.is_empty() {
            return Err(Error::InvalidNetwork("no source node".into()));
        }
        if ids.len() == 1 {
            return Ok(self.clone());
        }
        let merged = self.merge_nodes(&ids, None)?;
        let keep = &ids[0];
        let edges = merged
            .edges
            .iter()
            .filter(|e| !(e.is_loop() && &e.u == keep))
            .cloned()
            .collect();
        Network::new(merged.nodes, edges)
    }

    fn merge_nodes(&self, ids: &[NodeId], drop_edge: Option<&EdgeId>) -> Result<Self> {
        let keep = ids.iter().min().unwrap().clone();
        let mut weight = 0.0;
        let mut is_source = false;
        for id in ids {
            let n = self.node(id).ok_or_else(|| Error::UnknownNode(id.0.clone()))?;
            weight += n.weight;
            is_source |= n.is_source;
        }
        let nodes = self
            .nodes
            .iter()
            .filter(|n| !ids.contains(&n.id))
            .cloned()
            .chain(std::iter::once(Node { id: keep.clone(), weight, is_source }))
            .collect();
        let rename = |x: &NodeId| if ids.contains(x) { keep.clone() } else { x.clone() };
        let edges = self
            .edges
            .iter()
            .filter(|e| Some(&e.id) != drop_edge)
            .map(|e| Edge { u: rename(&e.u), v: rename(&e.v), ..e.clone() })
            .collect();
        Network::new(nodes, edges)
    }

    /// Index-level view with all sources merged.
    pub fn lower(&self) -> Lowered {
        let mut node_map = vec![usize::MAX; self.nodes.len()];
        let mut members: Vec<Vec<usize>> = vec![Vec::new()];
        let mut weight = vec![0.0];
        for (i, n) in self.nodes.iter().enumerate() {
            if n.is_source {
                node_map[i] = 0;
                members[0].push(i);
            } else {
                node_map[i] = weight.len();
                members.push(vec![i]);
                weight.push(n.weight);
            }
        }
        let edges = self
            .edges
            .iter()
            .map(|e| GEdge {
                u: node_map[self.index[&e.u]],
                v: node_map[self.index[&e.v]],
                p: e.p_fail,
            })
            .collect();
        Lowered {
            graph: Graph { weight, source: 0, edges },
            node_map,
            members,
        }
    }

    pub fn graph(&self) -> Graph {
        self.lower().graph
    }

    /// Bridges by edge id (edges whose removal adds a component).
    pub fn bridges(&self) -> Vec<EdgeId> {
        self.raw_graph()
            .bridges()
            .into_iter()
            .map(|i| self.edges[i].id.clone())
            .collect()
    }

    /// Graph with one node per network node (no source merging).
    pub fn raw_graph(&self) -> Graph {
        Graph {
            weight: self.nodes.iter().map(|n| n.weight).collect(),
            source: self.nodes.iter().position(|n| n.is_source).unwrap_or(0),
            edges: self
                .edges
                .iter()
                .map(|e| GEdge { u: self.index[&e.u], v: self.index[&e.v], p: e.p_fail })
                .collect(),
        }
    }

    pub fn is_connected(&self) -> bool {
        self.raw_graph().is_connected()
    }

    /// Non-source nodes that no edge path joins to a source.
    pub fn unreachable_nodes(&self) -> Vec<NodeId> {
        let low = self.lower();
        let seen = low.graph.reachable(|_| true);
        self.nodes
            .iter()
            .enumerate()
            .filter(|(i, n)| !n.is_source && !seen[low.node_map[*i]])
            .map(|(_, n)| n.id.clone())
            .collect()
    }

    /// Edge connectivity of the raw multigraph; 0 when disconnected.
    pub fn connectivity(&self) -> usize {
        self.raw_graph().edge_connectivity()
    }

    /// k-connected and every minimal cut of size k isolates one node.
    pub fn is_super_k_connected(&self, k: usize) -> bool {
        is_super_k_connected(&self.raw_graph(), k)
    }
}

pub(crate) fn is_super_k_connected(g: &Graph, k: usize) -> bool {
    if g.edge_connectivity() < k {
        return false;
    }
    let real: Vec<usize> = (0..g.m()).filter(|&i| !g.edges[i].is_loop()).collect();
    crate::graph::subsets(real.len(), k).all(|sub| {
        let cut: Vec<usize> = sub.iter().map(|&i| real[i]).collect();
        match g.bond_side(&cut) {
            None => true,
            Some(far) => {
                let far_count = far.iter().filter(|&&f| f).count();
                far_count == 1 || far_count == g.n() - 1
            }
        }
    })
}

/// Small helper for building networks in code.
#[derive(Default, Clone, Debug)]
pub struct NetworkBuilder {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn source(mut self, id: impl Into<NodeId>) -> Self {
        self.nodes.push(Node { id: id.into(), weight: 0.0, is_source: true });
        self
    }

    pub fn node(mut self, id: impl Into<NodeId>, weight: f64) -> Self {
        self.nodes.push(Node { id: id.into(), weight, is_source: false });
        self
    }

    pub fn edge(
        mut self,
        id: impl Into<EdgeId>,
        u: impl Into<NodeId>,
        v: impl Into<NodeId>,
        p_fail: f64,
    ) -> Self {
        self.edges.push(Edge { id: id.into(), u: u.into(), v: v.into(), p_fail });
        self
    }

    pub fn add_source(&mut self, id: impl Into<NodeId>) {
        self.nodes.push(Node { id: id.into(), weight: 0.0, is_source: true });
    }

    pub fn add_node(&mut self, id: impl Into<NodeId>, weight: f64) {
        self.nodes.push(Node { id: id.into(), weight, is_source: false });
    }

    /// Adds an edge with an automatic id `e{k}`.
    pub fn add_edge(&mut self, u: impl Into<NodeId>, v: impl Into<NodeId>, p_fail: f64) {
        let id = EdgeId(format!("e{}", self.edges.len() + 1));
        self.edges.push(Edge { id, u: u.into(), v: v.into(), p_fail });
    }

    pub fn build(self) -> Result<Network> {
        Network::new(self.nodes, self.edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path2() -> Network {
        NetworkBuilder::new()
            .source("s")
            .node("a", 1.0)
            .node("b", 1.0)
            .edge("e1", "s", "a", 0.1)
            .edge("e2", "a", "b", 0.1)
            .build()
            .unwrap()
    }

    #[test]
    fn natural_order() {
        let mut v = vec!["e10", "e2", "e1", "a", "e02"];
        v.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(v, vec!["a", "e1", "e02", "e2", "e10"]);
    }

    #[test]
    fn validation_errors() {
        let bad_p = NetworkBuilder::new().source("s").node("a", 1.0).edge("e", "s", "a", 1.2).build();
        assert!(matches!(bad_p, Err(Error::InvalidNetwork(_))));
        let no_src = NetworkBuilder::new().node("a", 1.0).build();
        assert!(no_src.is_err());
        let dangling = NetworkBuilder::new().source("s").edge("e", "s", "x", 0.1).build();
        assert!(dangling.is_err());
        let neg = NetworkBuilder::new().source("s").node("a", -1.0).build();
        assert!(neg.is_err());
    }

    #[test]
    fn contract_path_edge() {
        let c = path2().contract_edge(&"e1".into()).unwrap();
        assert_eq!(c.nodes().len(), 2);
        let merged = c.node(&"a".into()).unwrap();
        assert!(merged.is_source);
        assert_eq!(merged.weight, 1.0);
        assert_eq!(c.m(), 1);
    }

    #[test]
    fn contract_triangle_gives_parallel_pair() {
        let t = NetworkBuilder::new()
            .source("s")
            .node("a", 1.0)
            .node("b", 1.0)
            .edge("e1", "s", "a", 0.1)
            .edge("e2", "a", "b", 0.1)
            .edge("e3", "b", "s", 0.1)
            .build()
            .unwrap();
        let c = t.contract_edge(&"e2".into()).unwrap();
        assert_eq!(c.nodes().len(), 2);
        assert_eq!(c.m(), 2);
        assert!(c.edges().iter().all(|e| !e.is_loop()));
    }

    #[test]
    fn delete_edges() {
        let one = NetworkBuilder::new().source("s").node("a", 1.0).edge("e", "s", "a", 0.1).build().unwrap();
        let d = one.delete_edge(&"e".into()).unwrap();
        assert!(!d.is_connected());
        let twin = NetworkBuilder::new()
            .source("s")
            .node("a", 1.0)
            .edge("e1", "s", "a", 0.1)
            .edge("e2", "s", "a", 0.1)
            .build()
            .unwrap();
        let d = twin.delete_edge(&"e1".into()).unwrap();
        assert_eq!(d.m(), 1);
        assert!(d.is_connected());
        assert!(matches!(twin.delete_edge(&"zz".into()), Err(Error::UnknownEdge(_))));
    }

    #[test]
    fn contract_sources_merges() {
        let n = NetworkBuilder::new()
            .source("s1")
            .source("s2")
            .node("a", 1.0)
            .edge("e1", "s1", "a", 0.1)
            .edge("e2", "a", "s2", 0.1)
            .edge("e3", "s1", "s2", 0.1)
            .build()
            .unwrap();
        let c = n.contract_sources().unwrap();
        assert_eq!(c.sources().count(), 1);
        assert_eq!(c.m(), 2);
        assert_eq!(path2().contract_sources().unwrap(), path2());
    }

    #[test]
    fn bridges_and_connectivity() {
        assert_eq!(path2().bridges(), vec![EdgeId::from("e1"), EdgeId::from("e2")]);
        assert_eq!(path2().connectivity(), 1);
    }
}
