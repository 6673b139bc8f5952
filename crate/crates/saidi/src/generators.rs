//! Deterministic constructors for the topology families.
//!
//! Sources are named `s` (grids: `s1`, `s2`), consumers carry weight 1,
//! edges get ids `e1, e2, ...` in construction order and all share `p`.

use crate::analytic::balanced_partition;
use crate::error::{Error, Result};
use crate::network::{Network, NetworkBuilder, NodeId};
use crate::structure::{build_structure, StructureGraph};
use serde::{Deserialize, Serialize};

fn need(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::arg(msg))
    }
}

fn v(i: usize) -> String {
    format!("v{i}")
}

pub fn star(n: usize, p: f64) -> Result<Network> {
    need(n >= 1, "star needs n >= 1")?;
    let mut b = NetworkBuilder::new();
    b.add_source("s");
    for i in 1..=n {
        b.add_node(v(i), 1.0);
        b.add_edge("s", v(i), p);
    }
    b.build()
}

pub fn path(n: usize, p: f64) -> Result<Network> {
    need(n >= 1, "path needs n >= 1")?;
    let mut b = NetworkBuilder::new();
    b.add_source("s");
    for i in 1..=n {
        b.add_node(v(i), 1.0);
        b.add_edge(if i == 1 { "s".into() } else { v(i - 1) }, v(i), p);
    }
    b.build()
}

/// Heap-shaped tree: node i hangs from node (i-1)/2, node 0 being the source.
pub fn balanced_binary_tree(n: usize, p: f64) -> Result<Network> {
    need(n >= 1, "tree needs n >= 1")?;
    let mut b = NetworkBuilder::new();
    b.add_source("s");
    let name = |i: usize| if i == 0 { "s".to_string() } else { v(i) };
    for i in 1..=n {
        b.add_node(v(i), 1.0);
        b.add_edge(name((i - 1) / 2), v(i), p);
    }
    b.build()
}

/// s - v1 - ... - vn - s, edges e1..e(n+1) in cyclic order.
pub fn ring(n: usize, p: f64) -> Result<Network> {
    need(n >= 1, "ring needs n >= 1")?;
    let mut b = NetworkBuilder::new();
    b.add_source("s");
    for i in 1..=n {
        b.add_node(v(i), 1.0);
    }
    let name = |i: usize| if i == 0 || i == n + 1 { "s".to_string() } else { v(i) };
    for i in 1..=n + 1 {
        b.add_edge(name(i - 1), name(i), p);
    }
    b.build()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KRingVariant {
    /// k rings sharing only the source
    AtSource,
    /// k chains between the source and one consumer hub
    Hub,
}

/// n consumers in k balanced rings. The hub variant spends one consumer
/// on the hub and spreads n - 1 over the chains.
pub fn k_rings(n: usize, k: usize, variant: KRingVariant, p: f64) -> Result<Network> {
    need(k >= 1 && n >= k, "k-rings needs 1 <= k <= n")?;
    let mut b = NetworkBuilder::new();
    b.add_source("s");
    let mut next = 1;
    let (sizes, end) = match variant {
        KRingVariant::AtSource => (balanced_partition(n, k)?, "s".to_string()),
        KRingVariant::Hub => {
            b.add_node("h", 1.0);
            (balanced_partition(n - 1, k)?, "h".to_string())
        }
    };
    for c in sizes {
        let mut prev = "s".to_string();
        for _ in 0..c {
            b.add_node(v(next), 1.0);
            b.add_edge(prev, v(next), p);
            prev = v(next);
            next += 1;
        }
        b.add_edge(prev, end.clone(), p);
    }
    b.build()
}

/// Source-centred star on n leaves with m edges, multiplicities
/// balanced (larger first).
pub fn multi_star(n: usize, m: usize, p: f64) -> Result<Network> {
    need(n >= 1 && m >= n, "multi-star needs m >= n >= 1")?;
    let mut b = NetworkBuilder::new();
    b.add_source("s");
    for i in 1..=n {
        b.add_node(v(i), 1.0);
    }
    for (i, r) in balanced_partition(m, n)?.into_iter().enumerate() {
        for _ in 0..r {
            b.add_edge("s", v(i + 1), p);
        }
    }
    b.build()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum CubicFamily {
    /// two h/2-cycles joined by rungs (prism), h even >= 4
    TwoConnectedRings { h: usize },
    /// complete graph on 4 hubs
    K4,
    Petersen,
}

fn cubic_edges(family: CubicFamily) -> Result<(usize, Vec<(usize, usize)>)> {
    match family {
        CubicFamily::TwoConnectedRings { h } => {
            need(h >= 4 && h % 2 == 0, "two connected rings needs an even h >= 4")?;
            let r = h / 2;
            let mut e = Vec::new();
            for i in 0..r {
                e.push((i, (i + 1) % r));
            }
            for i in 0..r {
                e.push((r + i, r + (i + 1) % r));
            }
            for i in 0..r {
                e.push((i, r + i));
            }
            Ok((h, e))
        }
        CubicFamily::K4 => Ok((4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])),
        CubicFamily::Petersen => {
            let mut e = Vec::new();
            for i in 0..5 {
                e.push((i, (i + 1) % 5));
                e.push((i, i + 5));
                e.push((5 + i, 5 + (i + 2) % 5));
            }
            Ok((10, e))
        }
    }
}

fn hub(i: usize) -> String {
    if i == 0 {
        "s".into()
    } else {
        format!("h{i}")
    }
}

/// Hub-only cubic network; hub 0 is the source.
pub fn cubic_network(family: CubicFamily, p: f64) -> Result<Network> {
    let (h, edges) = cubic_edges(family)?;
    let mut b = NetworkBuilder::new();
    b.add_source("s");
    for i in 1..h {
        b.add_node(hub(i), 1.0);
    }
    for (u, w) in edges {
        b.add_edge(hub(u), hub(w), p);
    }
    b.build()
}

pub fn cubic_structure(family: CubicFamily) -> Result<StructureGraph> {
    build_structure(&cubic_network(family, 0.0)?)
}

/// Place `total_nodes - hubs` consumers on the chains, balanced, in chain
/// order. Every chain edge gets `p`.
pub fn subdivide_equal(structure: &StructureGraph, total_nodes: usize, p: f64) -> Result<Network> {
    need(total_nodes >= structure.hubs.len(), "total_nodes must cover the hubs")?;
    let sizes = balanced_partition(total_nodes - structure.hubs.len(), structure.chains.len())?;
    let net = structure.as_network();
    let mut b = NetworkBuilder::new();
    for n in net.nodes() {
        if n.is_source {
            b.add_source(n.id.clone());
        } else {
            b.add_node(n.id.clone(), 1.0);
        }
    }
    let mut next = 1;
    for (chain, c) in structure.chains.iter().zip(sizes) {
        let mut prev: NodeId = chain.endpoints.0.clone();
        for _ in 0..c {
            let id = NodeId(format!("x{next}"));
            next += 1;
            b.add_node(id.clone(), 1.0);
            b.add_edge(prev, id.clone(), p);
            prev = id;
        }
        b.add_edge(prev, chain.endpoints.1.clone(), p);
    }
    b.build()
}

/// Redundant horizontal edges of a grid: one row list per column gap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridPattern {
    Basic,
    /// one edge per gap at the middle row
    MiddleRow,
    /// gaps alternate between the rows at one and two thirds
    ThirdRow,
    Custom(Vec<Vec<usize>>),
}

pub fn grid_node(r: usize, c: usize) -> String {
    format!("r{r}c{c}")
}

impl GridPattern {
    /// Rows carrying a redundant edge, per gap.
    pub fn placements(&self, rows: usize, cols: usize) -> Result<Vec<Vec<usize>>> {
        let gaps = cols - 1;
        let out = match self {
            GridPattern::Basic => vec![Vec::new(); gaps],
            GridPattern::MiddleRow => vec![vec![(rows - 1) / 2]; gaps],
            GridPattern::ThirdRow => {
                let a = ((rows - 1) as f64 / 3.0).round() as usize;
                let b = ((rows - 1) as f64 * 2.0 / 3.0).round() as usize;
                (0..gaps).map(|i| vec![if i % 2 == 0 { a } else { b }]).collect()
            }
            GridPattern::Custom(v) => {
                need(v.len() == gaps, "custom pattern needs one row list per column gap")?;
                v.clone()
            }
        };
        for gap in &out {
            for &r in gap {
                need(r >= 1 && r + 1 < rows, "redundant edges go on interior rows")?;
            }
        }
        Ok(out)
    }
}

/// `cols` vertical feeders of `rows` nodes joined along the top and
/// bottom rows, sources at the top-left and bottom-right corners.
pub fn grid(rows: usize, cols: usize, pattern: &GridPattern, p: f64) -> Result<Network> {
    need(rows >= 3 && cols >= 2, "grid needs rows >= 3 and cols >= 2")?;
    let placements = pattern.placements(rows, cols)?;
    let corner = |r: usize, c: usize| (r, c) == (0, 0) || (r, c) == (rows - 1, cols - 1);
    let name = |r: usize, c: usize| {
        if (r, c) == (0, 0) {
            "s1".to_string()
        } else if (r, c) == (rows - 1, cols - 1) {
            "s2".to_string()
        } else {
            grid_node(r, c)
        }
    };
    let mut b = NetworkBuilder::new();
    b.add_source("s1");
    b.add_source("s2");
    for c in 0..cols {
        for r in 0..rows {
            if !corner(r, c) {
                b.add_node(name(r, c), 1.0);
            }
        }
    }
    for c in 0..cols {
        for r in 0..rows - 1 {
            b.add_edge(name(r, c), name(r + 1, c), p);
        }
    }
    for c in 0..cols - 1 {
        b.add_edge(name(0, c), name(0, c + 1), p);
        b.add_edge(name(rows - 1, c), name(rows - 1, c + 1), p);
        for &r in &placements[c] {
            b.add_edge(name(r, c), name(r, c + 1), p);
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{saidi, saidi_polynomial};
    use crate::poly::ReliabilityPolynomial;

    #[test]
    fn small_families() {
        assert_eq!(saidi_polynomial(&star(3, 0.1).unwrap()).unwrap(), ReliabilityPolynomial::from_ints(&[0, 3]));
        assert_eq!(saidi_polynomial(&path(2, 0.1).unwrap()).unwrap(), ReliabilityPolynomial::from_ints(&[0, 3, -1]));
        assert_eq!(balanced_binary_tree(6, 0.1).unwrap().m(), 6);
    }

    #[test]
    fn k_rings_shapes() {
        let one = k_rings(5, 1, KRingVariant::AtSource, 0.1).unwrap();
        assert_eq!(saidi(&one).unwrap(), saidi(&ring(5, 0.1).unwrap()).unwrap());
        let s = build_structure(&k_rings(10, 3, KRingVariant::Hub, 0.1).unwrap()).unwrap();
        assert_eq!((s.hubs.len(), s.chains.len()), (2, 3));
        let mut c = s.chain_lengths();
        c.sort();
        assert_eq!(c, vec![3, 3, 3]);
    }

    #[test]
    fn multi_star_multiplicity() {
        let net = multi_star(4, 6, 0.1).unwrap();
        let count = |id: &str| net.edges().iter().filter(|e| e.v.as_str() == id).count();
        assert_eq!([count("v1"), count("v2"), count("v3"), count("v4")], [2, 2, 1, 1]);
    }

    #[test]
    fn cubic_families() {
        let p = cubic_structure(CubicFamily::Petersen).unwrap();
        assert_eq!(p.chains.len(), 15);
        assert!(p.hub_degrees().iter().all(|(_, d)| *d == 3));
        let prism = cubic_structure(CubicFamily::TwoConnectedRings { h: 6 }).unwrap();
        assert_eq!(prism.chains.len(), 9);
        assert!(cubic_structure(CubicFamily::TwoConnectedRings { h: 5 }).is_err());
        let net = subdivide_equal(&p, 40, 0.1).unwrap();
        assert_eq!(net.n(), 39);
        assert_eq!(net.m() as i64 - net.n() as i64, 15 - 9);
    }

    #[test]
    fn grid_shapes() {
        let g = grid(6, 3, &GridPattern::Basic, 0.1).unwrap();
        assert_eq!(g.n(), 16);
        assert!(g.is_connected());
        let mid = grid(7, 4, &GridPattern::MiddleRow, 0.1).unwrap();
        assert_eq!(mid.m(), 24 + 6 + 3);
        let third = GridPattern::ThirdRow.placements(7, 4).unwrap();
        assert_eq!(third, vec![vec![2], vec![4], vec![2]]);
    }
}
