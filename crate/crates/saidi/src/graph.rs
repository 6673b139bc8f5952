//! Index-level multigraph used by the engines.
//!
//! Node 0..n, one merged source, edges addressed by position. Self-loops
//! may be present and are skipped by every connectivity routine.

use petgraph::unionfind::UnionFind;
use std::collections::VecDeque;

#[derive(Clone, Debug, PartialEq)]
pub struct GEdge<V = f64> {
    pub u: usize,
    pub v: usize,
    pub p: V,
}

impl<V> GEdge<V> {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Graph<V = f64> {
    pub weight: Vec<V>,
    pub source: usize,
    pub edges: Vec<GEdge<V>>,
}

impl<V> Graph<V> {
    pub fn n(&self) -> usize {
        self.weight.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn map<W>(&self, mut wf: impl FnMut(&V) -> W, mut pf: impl FnMut(&V) -> W) -> Graph<W> {
        Graph {
            weight: self.weight.iter().map(&mut wf).collect(),
            source: self.source,
            edges: self
                .edges
                .iter()
                .map(|e| GEdge { u: e.u, v: e.v, p: pf(&e.p) })
                .collect(),
        }
    }

    /// adjacency lists of (neighbor, edge index), self-loops omitted
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n()];
        for (i, e) in self.edges.iter().enumerate() {
            if !e.is_loop() {
                adj[e.u].push((e.v, i));
                adj[e.v].push((e.u, i));
            }
        }
        adj
    }

    pub fn degree(&self) -> Vec<usize> {
        let mut d = vec![0; self.n()];
        for e in self.edges.iter().filter(|e| !e.is_loop()) {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    }

    /// nodes reachable from `from` using only edges for which `alive` holds
    pub fn reach_from(&self, from: usize, alive: impl Fn(usize) -> bool) -> Vec<bool> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(x) = queue.pop_front() {
            for &(y, ei) in &adj[x] {
                if !seen[y] && alive(ei) {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    pub fn reachable(&self, alive: impl Fn(usize) -> bool) -> Vec<bool> {
        self.reach_from(self.source, alive)
    }

    /// component label per node and the number of components
    pub fn components(&self, alive: impl Fn(usize) -> bool) -> (Vec<usize>, usize) {
        let mut uf = UnionFind::new(self.n());
        for (i, e) in self.edges.iter().enumerate() {
            if !e.is_loop() && alive(i) {
                uf.union(e.u, e.v);
            }
        }
        let labels = uf.into_labeling();
        let mut remap = vec![usize::MAX; self.n()];
        let mut count = 0;
        let out = labels
            .into_iter()
            .map(|l| {
                if remap[l] == usize::MAX {
                    remap[l] = count;
                    count += 1;
                }
                remap[l]
            })
            .collect();
        (out, count)
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.components(|_| true).1 == 1
    }

    /// Bridge edge indices in ascending order. Parallel edges are never bridges.
    pub fn bridges(&self) -> Vec<usize> {
        let n = self.n();
        let adj = self.adjacency();
        let mut ord = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut out = Vec::new();
        let mut clock = 0;
        for root in 0..n {
            if ord[root] != usize::MAX {
                continue;
            }
            // (node, parent edge, next adjacency slot)
            let mut stack = vec![(root, usize::MAX, 0usize)];
            ord[root] = clock;
            low[root] = clock;
            clock += 1;
            while let Some(top) = stack.last_mut() {
                let (x, pe, slot) = *top;
                if slot < adj[x].len() {
                    top.2 += 1;
                    let (y, ei) = adj[x][slot];
                    if ei == pe {
                        continue;
                    }
                    if ord[y] == usize::MAX {
                        ord[y] = clock;
                        low[y] = clock;
                        clock += 1;
                        stack.push((y, ei, 0));
                    } else {
                        low[x] = low[x].min(ord[y]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(parent, _, _)) = stack.last() {
                        low[parent] = low[parent].min(low[x]);
                        if low[x] > ord[parent] {
                            out.push(pe);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// True when removing `cut` leaves the graph in exactly two components
    /// with every edge of `cut` running between them. Returns the side
    /// without the source.
    pub fn bond_side(&self, cut: &[usize]) -> Option<Vec<bool>> {
        if cut.iter().any(|&i| self.edges[i].is_loop()) {
            return None;
        }
        let (label, count) = self.components(|i| !cut.contains(&i));
        if count != 2 {
            return None;
        }
        let s = label[self.source];
        let far: Vec<bool> = label.iter().map(|&l| l != s).collect();
        cut.iter()
            .all(|&i| far[self.edges[i].u] != far[self.edges[i].v])
            .then_some(far)
    }

    /// Maximum number of edge-disjoint paths between a and b.
    pub fn local_edge_connectivity(&self, a: usize, b: usize) -> usize {
        let adj = self.adjacency();
        // flow per edge in direction u->v (+1) or v->u (-1)
        let mut flow = vec![0i8; self.m()];
        let mut total = 0;
        loop {
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.n()];
            let mut seen = vec![false; self.n()];
            seen[a] = true;
            let mut queue = VecDeque::from([a]);
            while let Some(x) = queue.pop_front() {
                if x == b {
                    break;
                }
                for &(y, ei) in &adj[x] {
                    let e = &self.edges[ei];
                    let dir: i8 = if e.u == x { 1 } else { -1 };
                    if !seen[y] && flow[ei] != dir {
                        seen[y] = true;
                        prev[y] = Some((x, ei));
                        queue.push_back(y);
                    }
                }
            }
            if !seen[b] {
                return total;
            }
            let mut y = b;
            while let Some((x, ei)) = prev[y] {
                let dir: i8 = if self.edges[ei].u == x { 1 } else { -1 };
                flow[ei] += dir;
                y = x;
            }
            total += 1;
        }
    }

    /// Global edge connectivity; 0 when disconnected.
    pub fn edge_connectivity(&self) -> usize {
        if self.n() < 2 {
            return 0;
        }
        if !self.is_connected() {
            return 0;
        }
        (0..self.n())
            .filter(|&t| t != self.source)
            .map(|t| self.local_edge_connectivity(self.source, t))
            .min()
            .unwrap_or(0)
    }
}

/// All k-subsets of 0..m in lexicographic order.
pub fn subsets(m: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = if k <= m { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let c = cur.as_mut().unwrap();
        let mut i = k;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if c[i] < m - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph {
            weight: vec![1.0; n],
            source: 0,
            edges: edges.iter().map(|&(u, v)| GEdge { u, v, p: 0.1 }).collect(),
        }
    }

    #[test]
    fn subsets_count() {
        assert_eq!(subsets(5, 2).count(), 10);
        assert_eq!(subsets(4, 0).count(), 1);
        assert_eq!(subsets(2, 3).count(), 0);
        assert_eq!(subsets(3, 3).collect::<Vec<_>>(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn bridges_tree_ring_parallel() {
        assert_eq!(g(3, &[(0, 1), (1, 2)]).bridges(), vec![0, 1]);
        assert!(g(3, &[(0, 1), (1, 2), (2, 0)]).bridges().is_empty());
        assert!(g(2, &[(0, 1), (0, 1)]).bridges().is_empty());
        assert_eq!(g(4, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 3)]).bridges(), vec![3]);
    }

    #[test]
    fn connectivity_values() {
        assert_eq!(g(3, &[(0, 1), (1, 2), (2, 0)]).edge_connectivity(), 2);
        assert_eq!(g(3, &[(0, 1), (1, 2)]).edge_connectivity(), 1);
        assert_eq!(g(3, &[(0, 1)]).edge_connectivity(), 0);
        let k4 = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(k4.edge_connectivity(), 3);
    }

    #[test]
    fn bond_detection() {
        let ring = g(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(ring.bond_side(&[0, 1]).is_some());
        assert!(ring.bond_side(&[0]).is_none());
        let side = ring.bond_side(&[0, 2]).unwrap();
        assert_eq!(side, vec![false, true, true]);
    }
}
