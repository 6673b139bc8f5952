//! Exact SAIDI: brute-force oracle, deletion-contraction, connection
//! distributions, k-order truncation and approximation thresholds.

use crate::error::{Error, Result};
use crate::graph::{GEdge, Graph};
use crate::network::Network;
use crate::poly::{q_from_f64, BinomialPolynomial, ReliabilityPolynomial, Value, Q};
use num_traits::Zero;
use petgraph::unionfind::UnionFind;
use std::collections::HashMap;

/// Hard limit for the 2^m oracle.
pub const BRUTEFORCE_MAX_EDGES: usize = 24;
/// Limit for exact binomial coefficients from the oracle.
pub const BRUTEFORCE_POLY_MAX_EDGES: usize = 20;
/// Limit for exact deletion-contraction.
pub const DC_MAX_EDGES: usize = 40;
/// Degree cap for exact polynomials.
pub const POLY_MAX_DEGREE: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    ExactPolynomial,
    Numeric,
    KOrder(usize),
}

/// What to compute. `p = None` uses each edge's own p_fail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalRequest {
    pub mode: Mode,
    pub p: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum EvalResult {
    Polynomial(ReliabilityPolynomial),
    Value(f64),
}

impl EvalResult {
    /// Numeric value; polynomials are evaluated at `p`.
    pub fn value_at(&self, p: f64) -> f64 {
        match self {
            EvalResult::Polynomial(f) => f.eval(p),
            EvalResult::Value(v) => *v,
        }
    }
}

fn guard(what: &'static str, got: usize, limit: usize) -> Result<()> {
    if got > limit {
        Err(Error::SizeGuard { what, got, limit })
    } else {
        Ok(())
    }
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::arg(format!("p = {p} outside [0, 1]")))
    }
}

/// Disconnected weight when exactly the edges in `failed` (bitmask) are down.
fn disconnected_weight(g: &Graph, failed: u64) -> f64 {
    let mut uf = UnionFind::new(g.n());
    for (i, e) in g.edges.iter().enumerate() {
        if failed >> i & 1 == 0 && !e.is_loop() {
            uf.union(e.u, e.v);
        }
    }
    let root = uf.find(g.source);
    (0..g.n())
        .filter(|&v| v != g.source && uf.find(v) != root)
        .map(|v| g.weight[v])
        .sum()
}

/// Sum over all 2^m edge states of probability times disconnected weight.
pub fn saidi_bruteforce(net: &Network) -> Result<f64> {
    guard("edge count for brute force", net.m(), BRUTEFORCE_MAX_EDGES)?;
    Ok(bruteforce_graph(&net.graph()))
}

pub(crate) fn bruteforce_graph(g: &Graph) -> f64 {
    let m = g.m();
    let mut total = 0.0;
    for mask in 0u64..(1u64 << m) {
        let d = disconnected_weight(g, mask);
        if d == 0.0 {
            continue;
        }
        let pr: f64 = g
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| if mask >> i & 1 == 1 { e.p } else { 1.0 - e.p })
            .product();
        total += pr * d;
    }
    total
}

/// Exact binomial coefficients b_k: disconnected weight summed over all
/// k-subsets of failed edges.
pub fn bruteforce_binomial(net: &Network) -> Result<BinomialPolynomial> {
    guard("edge count for exact brute force", net.m(), BRUTEFORCE_POLY_MAX_EDGES)?;
    let g = net.graph();
    let m = g.m();
    let mut b = vec![Q::zero(); m + 1];
    for mask in 0u64..(1u64 << m) {
        let d = disconnected_weight(&g, mask);
        if d != 0.0 {
            b[mask.count_ones() as usize] += q_from_f64(d);
        }
    }
    Ok(BinomialPolynomial::new(b))
}

/// Equal-model SAIDI polynomial from the oracle.
pub fn bruteforce_polynomial(net: &Network) -> Result<ReliabilityPolynomial> {
    Ok(bruteforce_binomial(net)?.to_power())
}

fn remove_loops<V>(edges: &mut Vec<GEdge<V>>) -> bool {
    let before = edges.len();
    edges.retain(|e| !e.is_loop());
    edges.len() != before
}

/// Parallel edges are equivalent to one edge failing with the product.
fn merge_parallel<V: Value>(edges: &mut Vec<GEdge<V>>) -> bool {
    let mut first: HashMap<(usize, usize), usize> = HashMap::new();
    let mut out: Vec<GEdge<V>> = Vec::with_capacity(edges.len());
    let mut merged = false;
    for e in edges.drain(..) {
        let key = (e.u.min(e.v), e.u.max(e.v));
        match first.get(&key) {
            Some(&i) => {
                out[i].p = out[i].p.clone() * &e.p;
                merged = true;
            }
            None => {
                first.insert(key, out.len());
                out.push(e);
            }
        }
    }
    *edges = out;
    merged
}

fn degrees<V>(n: usize, edges: &[GEdge<V>]) -> Vec<usize> {
    let mut d = vec![0; n];
    for e in edges {
        d[e.u] += 1;
        d[e.v] += 1;
    }
    d
}

fn reach<V>(n: usize, source: usize, edges: &[GEdge<V>]) -> Vec<bool> {
    let mut uf = UnionFind::new(n);
    for e in edges {
        uf.union(e.u, e.v);
    }
    let r = uf.find(source);
    (0..n).map(|v| uf.find(v) == r).collect()
}

/// Shrink the graph without changing SAIDI; constants go into `acc`.
fn reduce<V: Value>(g: &mut Graph<V>, acc: &mut V) {
    loop {
        let mut changed = remove_loops(&mut g.edges);
        changed |= merge_parallel(&mut g.edges);
        let seen = reach(g.n(), g.source, &g.edges);
        for v in 0..g.n() {
            if !seen[v] && v != g.source && !g.weight[v].is_zero() {
                *acc = acc.clone() + &g.weight[v];
                g.weight[v] = V::zero();
            }
        }
        let before = g.edges.len();
        g.edges.retain(|e| seen[e.u]);
        changed |= g.edges.len() != before;

        let deg = degrees(g.n(), &g.edges);
        // pendant: Pr(x lost) = p_e + q_e Pr(y lost)
        let mut i = 0;
        while i < g.edges.len() {
            let e = &g.edges[i];
            let pend = [(e.u, e.v), (e.v, e.u)]
                .into_iter()
                .find(|&(x, _)| x != g.source && deg[x] == 1);
            if let Some((x, y)) = pend {
                let e = g.edges.remove(i);
                let wx = std::mem::replace(&mut g.weight[x], V::zero());
                *acc = acc.clone() + e.p.clone() * &wx;
                g.weight[y] = g.weight[y].clone() + (V::one() - e.p) * &wx;
                changed = true;
                break;
            }
            i += 1;
        }
        if changed {
            continue;
        }
        // weightless relay: two edges in series
        let mut relay = None;
        for x in 0..g.n() {
            if x != g.source && deg[x] == 2 && g.weight[x].is_zero() {
                relay = Some(x);
                break;
            }
        }
        if let Some(x) = relay {
            let idx: Vec<usize> = (0..g.edges.len()).filter(|&i| g.edges[i].touches(x)).collect();
            let (i, j) = (idx[0], idx[1]);
            let (a, b) = (g.edges[i].other(x), g.edges[j].other(x));
            let q = (V::one() - g.edges[i].p.clone()) * (V::one() - g.edges[j].p.clone());
            g.edges[i] = GEdge { u: a, v: b, p: V::one() - q };
            g.edges.remove(j);
            continue;
        }
        break;
    }
}

/// Deletion-contraction over edges at the source.
pub(crate) fn factor<V: Value>(mut g: Graph<V>) -> V {
    let mut acc = V::zero();
    reduce(&mut g, &mut acc);
    let Some(pi) = g.edges.iter().position(|e| e.touches(g.source)) else {
        return acc;
    };
    let pivot = g.edges[pi].clone();
    let y = pivot.other(g.source);

    let mut deleted = g.clone();
    deleted.edges.remove(pi);

    let mut contracted = g;
    contracted.edges.remove(pi);
    contracted.weight[y] = V::zero();
    let s = contracted.source;
    for e in contracted.edges.iter_mut() {
        if e.u == y {
            e.u = s;
        }
        if e.v == y {
            e.v = s;
        }
    }
    let q = V::one() - pivot.p.clone();
    acc + pivot.p * factor(deleted) + q * factor(contracted)
}

/// Graph with symbolic p on every edge.
pub(crate) fn symbolic(g: &Graph) -> Graph<ReliabilityPolynomial> {
    g.map(|w| ReliabilityPolynomial::from_f64(*w), |_| ReliabilityPolynomial::p())
}

pub fn saidi_deletion_contraction(net: &Network, req: EvalRequest) -> Result<EvalResult> {
    guard("edge count for deletion-contraction", net.m(), DC_MAX_EDGES)?;
    let g = match req.p {
        Some(p) => {
            check_p(p)?;
            net.with_uniform_p(p)?.graph()
        }
        None => net.graph(),
    };
    match req.mode {
        Mode::Numeric => Ok(EvalResult::Value(factor(g))),
        Mode::ExactPolynomial => {
            guard("polynomial degree", net.m(), POLY_MAX_DEGREE)?;
            Ok(EvalResult::Polynomial(factor(symbolic(&g))))
        }
        Mode::KOrder(k) => {
            let mut g = g;
            if let Some(p) = req.p {
                g.edges.iter_mut().for_each(|e| e.p = p);
            }
            Ok(EvalResult::Value(crate::risk::korder_graph(&g, k)?))
        }
    }
}

/// Widest frontier the sweep will carry.
pub const FRONTIER_MAX_WIDTH: usize = 12;

/// One partition of the frontier. `pend[c - 1]` is the expected weight
/// waiting in component `c`; label 0 is the source's component.
#[derive(Clone)]
struct Sweep<V> {
    p: V,
    lost: V,
    pend: Vec<V>,
}

impl<V: Value> Sweep<V> {
    fn scaled(&self, f: &V) -> Self {
        Sweep {
            p: self.p.clone() * f,
            lost: self.lost.clone() * f,
            pend: self.pend.iter().map(|x| x.clone() * f).collect(),
        }
    }

    fn absorb(&mut self, o: Sweep<V>) {
        self.p = self.p.clone() + o.p;
        self.lost = self.lost.clone() + o.lost;
        for (a, b) in self.pend.iter_mut().zip(o.pend) {
            *a = a.clone() + b;
        }
    }
}

/// Relabel by first appearance and drop pending weight of components that
/// no longer touch the frontier, booking it as lost.
fn canonical<V: Value>(key: &[u8], mut s: Sweep<V>) -> (Vec<u8>, Sweep<V>) {
    let mut map = vec![0u8; s.pend.len() + 1];
    let mut pend = Vec::new();
    let mut old = std::mem::take(&mut s.pend);
    let out = key
        .iter()
        .map(|&l| {
            if l == 0 {
                return 0;
            }
            if map[l as usize] == 0 {
                pend.push(std::mem::replace(&mut old[l as usize - 1], V::zero()));
                map[l as usize] = pend.len() as u8;
            }
            map[l as usize]
        })
        .collect();
    for x in old {
        s.lost = s.lost + x;
    }
    s.pend = pend;
    (out, s)
}

/// Widest frontier and node positions for the sweep, `usize::MAX` where the source cannot
/// reach. Breadth-first and greedy orders are both tried and the narrower
/// one kept; greedy walks chains end to end, which breadth-first does not.
fn sweep_order(adj: &[Vec<usize>], source: usize) -> (usize, Vec<usize>) {
    let n = adj.len();
    let mut bfs = vec![source];
    let mut seen = vec![false; n];
    seen[source] = true;
    let mut head = 0;
    while head < bfs.len() {
        let x = bfs[head];
        head += 1;
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                bfs.push(y);
            }
        }
    }
    // greedy: add the reachable node that leaves the fewest open nodes
    let mut greedy = vec![source];
    let mut done = vec![false; n];
    done[source] = true;
    let mut open_deg: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    for &y in &adj[source] {
        open_deg[y] -= 1;
    }
    let mut cand: Vec<usize> = adj[source].clone();
    while greedy.len() < bfs.len() {
        cand.retain(|&x| !done[x]);
        cand.sort_unstable();
        cand.dedup();
        let &x = cand
            .iter()
            .min_by_key(|&&x| {
                let closes = adj[x].iter().filter(|&&y| done[y] && open_deg[y] == 1).count();
                (open_deg[x] as isize - closes as isize, x)
            })
            .unwrap();
        done[x] = true;
        greedy.push(x);
        for &y in &adj[x] {
            open_deg[y] -= 1;
            if !done[y] {
                cand.push(y);
            }
        }
    }
    let width = |order: &[usize]| {
        let mut pos = vec![usize::MAX; n];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i;
        }
        // a node is open from its first to its last incident edge
        let mut first = vec![usize::MAX; n];
        let mut last = vec![0; n];
        for x in 0..n {
            for &y in &adj[x] {
                if pos[x] == usize::MAX {
                    continue;
                }
                let t = pos[x].max(pos[y]);
                first[x] = first[x].min(t);
                last[x] = last[x].max(t);
            }
        }
        let mut delta = vec![0isize; order.len() + 1];
        for x in 0..n {
            if first[x] != usize::MAX {
                delta[first[x]] += 1;
                delta[last[x] + 1] -= 1;
            }
        }
        let (mut cur, mut best) = (0isize, 0usize);
        for d in delta {
            cur += d;
            best = best.max(cur as usize);
        }
        (best, pos)
    };
    let (wb, pb) = width(&bfs);
    let (wg, pg) = width(&greedy);
    if wg < wb {
        (wg, pg)
    } else {
        (wb, pb)
    }
}

/// Expected lost weight by sweeping edges in a narrow node order and
/// tracking how the frontier nodes are joined. Cost grows with the
/// number of frontier partitions rather than with 2^m.
pub(crate) fn frontier_saidi<V: Value>(g: &Graph<V>) -> Result<V> {
    let n = g.n();
    let mut adj = vec![Vec::new(); n];
    for e in g.edges.iter().filter(|e| !e.is_loop()) {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let (width, pos) = sweep_order(&adj, g.source);
    guard("frontier width", width, FRONTIER_MAX_WIDTH)?;
    let mut isolated = V::zero();
    for x in 0..n {
        if pos[x] == usize::MAX {
            isolated = isolated + &g.weight[x];
        }
    }
    // parts not joined to the source never matter beyond their weight
    let mut edges: Vec<&GEdge<V>> = g.edges.iter().filter(|e| !e.is_loop() && pos[e.u] != usize::MAX).collect();
    edges.sort_by_key(|e| (pos[e.u].max(pos[e.v]), pos[e.u].min(pos[e.v])));
    let mut last = vec![usize::MAX; n];
    for (i, e) in edges.iter().enumerate() {
        last[e.u] = i;
        last[e.v] = i;
    }

    let mut frontier: Vec<usize> = Vec::new();
    let mut states: HashMap<Vec<u8>, Sweep<V>> = HashMap::new();
    states.insert(Vec::new(), Sweep { p: V::one(), lost: V::zero(), pend: Vec::new() });
    for (i, e) in edges.iter().enumerate() {
        let entering: Vec<usize> = [e.u, e.v]
            .into_iter()
            .filter(|x| !frontier.contains(x))
            .fold(Vec::new(), |mut acc, x| {
                if !acc.contains(&x) {
                    acc.push(x);
                }
                acc
            });
        frontier.extend(&entering);
        guard("frontier width", frontier.len(), FRONTIER_MAX_WIDTH)?;
        let iu = frontier.iter().position(|&x| x == e.u).unwrap();
        let iv = frontier.iter().position(|&x| x == e.v).unwrap();
        let keep: Vec<bool> = frontier.iter().map(|&x| last[x] != i).collect();
        let q = V::one() - e.p.clone();

        let mut next: HashMap<Vec<u8>, Sweep<V>> = HashMap::with_capacity(states.len() * 2);
        let mut put = |key: Vec<u8>, s: Sweep<V>| {
            let key: Vec<u8> = key.iter().zip(&keep).filter(|(_, &k)| k).map(|(&l, _)| l).collect();
            let (key, s) = canonical(&key, s);
            match next.get_mut(&key) {
                Some(t) => t.absorb(s),
                None => {
                    next.insert(key, s);
                }
            }
        };
        for (key, mut s) in states {
            let mut key = key;
            for &x in &entering {
                if x == g.source {
                    key.push(0);
                } else {
                    s.pend.push(s.p.clone() * &g.weight[x]);
                    key.push(s.pend.len() as u8);
                }
            }
            put(key.clone(), s.scaled(&e.p));
            let mut up = s.scaled(&q);
            let (a, b) = (key[iu], key[iv]);
            if a != b {
                let (keep_l, gone) = if a == 0 || (b != 0 && a < b) { (a, b) } else { (b, a) };
                let moved = std::mem::replace(&mut up.pend[gone as usize - 1], V::zero());
                if keep_l != 0 {
                    let t = &mut up.pend[keep_l as usize - 1];
                    *t = t.clone() + moved;
                }
                for l in key.iter_mut().filter(|l| **l == gone) {
                    *l = keep_l;
                }
            }
            put(key, up);
        }
        frontier = frontier.into_iter().zip(&keep).filter(|(_, &k)| k).map(|(x, _)| x).collect();
        states = next;
    }
    Ok(states.into_values().fold(isolated, |acc, s| acc + s.lost))
}

/// Probability of each set of terminals being exactly the set connected
/// to the source. Index bit i stands for `terms[i]`.
pub(crate) fn terminal_distribution<V: Value>(g: &Graph<V>, terms: &[usize]) -> Vec<V> {
    assert!(terms.len() <= 16);
    let mut bits = vec![0u32; g.n()];
    for (i, &t) in terms.iter().enumerate() {
        bits[t] |= 1 << i;
    }
    let mut out = vec![V::zero(); 1 << terms.len()];
    terminal_rec(g.clone(), bits, V::one(), &mut out);
    out
}

fn terminal_rec<V: Value>(mut g: Graph<V>, mut bits: Vec<u32>, pr: V, out: &mut [V]) {
    loop {
        let mut changed = remove_loops(&mut g.edges);
        changed |= merge_parallel(&mut g.edges);
        let seen = reach(g.n(), g.source, &g.edges);
        let before = g.edges.len();
        g.edges.retain(|e| seen[e.u]);
        changed |= before != g.edges.len();
        let deg = degrees(g.n(), &g.edges);
        let free = |x: usize| x != g.source && bits[x] == 0;
        if let Some(i) = g
            .edges
            .iter()
            .position(|e| (free(e.u) && deg[e.u] == 1) || (free(e.v) && deg[e.v] == 1))
        {
            g.edges.remove(i);
            continue;
        }
        if let Some(x) = (0..g.n()).find(|&x| free(x) && deg[x] == 2) {
            let idx: Vec<usize> = (0..g.edges.len()).filter(|&i| g.edges[i].touches(x)).collect();
            let (i, j) = (idx[0], idx[1]);
            let (a, b) = (g.edges[i].other(x), g.edges[j].other(x));
            let q = (V::one() - g.edges[i].p.clone()) * (V::one() - g.edges[j].p.clone());
            g.edges[i] = GEdge { u: a, v: b, p: V::one() - q };
            g.edges.remove(j);
            continue;
        }
        if !changed {
            break;
        }
    }
    let Some(pi) = g.edges.iter().position(|e| e.touches(g.source)) else {
        let k = bits[g.source] as usize;
        out[k] = out[k].clone() + &pr;
        return;
    };
    let pivot = g.edges.remove(pi);
    let y = pivot.other(g.source);
    let q = V::one() - pivot.p.clone();
    terminal_rec(g.clone(), bits.clone(), pr.clone() * &pivot.p, out);
    let s = g.source;
    bits[s] |= bits[y];
    bits[y] = 0;
    for e in g.edges.iter_mut() {
        if e.u == y {
            e.u = s;
        }
        if e.v == y {
            e.v = s;
        }
    }
    terminal_rec(g, bits, pr * &q, out);
}

/// Probability that every terminal is joined to the source.
pub(crate) fn all_connected<V: Value>(g: &Graph<V>, terms: &[usize]) -> V {
    let mut uniq: Vec<usize> = terms.iter().copied().filter(|&t| t != g.source).collect();
    uniq.sort_unstable();
    uniq.dedup();
    if uniq.is_empty() {
        return V::one();
    }
    terminal_distribution(g, &uniq).pop().unwrap()
}

/// Distribution over set partitions of `terms` induced by working edges.
/// Keys are restricted-growth strings over `terms` in the given order.
pub(crate) fn partition_distribution<V: Value>(g: &Graph<V>, terms: &[usize]) -> Vec<(Vec<u8>, V)> {
    let mut out: HashMap<Vec<u8>, V> = HashMap::new();
    let label: Vec<usize> = (0..g.n()).collect();
    let is_term: Vec<bool> = (0..g.n()).map(|v| terms.contains(&v)).collect();
    partition_rec(g.edges.clone(), label, &is_term, terms, V::one(), &mut out);
    let mut v: Vec<(Vec<u8>, V)> = out.into_iter().collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

fn partition_rec<V: Value>(
    mut edges: Vec<GEdge<V>>,
    mut label: Vec<usize>,
    is_term: &[bool],
    terms: &[usize],
    pr: V,
    out: &mut HashMap<Vec<u8>, V>,
) {
    // nodes that carry a terminal after merging
    let n = label.len();
    let mut carries = vec![false; n];
    for &t in terms {
        carries[label[t]] = true;
    }
    let _ = is_term;
    loop {
        let mut changed = remove_loops(&mut edges);
        changed |= merge_parallel(&mut edges);
        let deg = degrees(n, &edges);
        if let Some(i) = edges
            .iter()
            .position(|e| (!carries[e.u] && deg[e.u] == 1) || (!carries[e.v] && deg[e.v] == 1))
        {
            edges.remove(i);
            continue;
        }
        if let Some(x) = (0..n).find(|&x| !carries[x] && deg[x] == 2) {
            let idx: Vec<usize> = (0..edges.len()).filter(|&i| edges[i].touches(x)).collect();
            let (i, j) = (idx[0], idx[1]);
            let (a, b) = (edges[i].other(x), edges[j].other(x));
            let q = (V::one() - edges[i].p.clone()) * (V::one() - edges[j].p.clone());
            edges[i] = GEdge { u: a, v: b, p: V::one() - q };
            edges.remove(j);
            continue;
        }
        if !changed {
            break;
        }
    }
    let Some(pivot) = edges.pop() else {
        let key = rgs(terms.iter().map(|&t| label[t]));
        let slot = out.entry(key).or_insert_with(V::zero);
        *slot = slot.clone() + &pr;
        return;
    };
    let q = V::one() - pivot.p.clone();
    partition_rec(edges.clone(), label.clone(), is_term, terms, pr.clone() * &pivot.p, out);
    let (keep, gone) = (pivot.u, pivot.v);
    for l in label.iter_mut() {
        if *l == gone {
            *l = keep;
        }
    }
    for e in edges.iter_mut() {
        if e.u == gone {
            e.u = keep;
        }
        if e.v == gone {
            e.v = keep;
        }
    }
    partition_rec(edges, label, is_term, terms, pr * &q, out);
}

/// Restricted-growth string of a labelling.
pub(crate) fn rgs(labels: impl Iterator<Item = usize>) -> Vec<u8> {
    let mut seen: Vec<usize> = Vec::new();
    labels
        .map(|l| match seen.iter().position(|&s| s == l) {
            Some(i) => i as u8,
            None => {
                seen.push(l);
                (seen.len() - 1) as u8
            }
        })
        .collect()
}

/// All set partitions of k items as restricted-growth strings.
pub fn set_partitions(k: usize) -> Vec<Vec<u8>> {
    fn rec(cur: &mut Vec<u8>, max: u8, k: usize, out: &mut Vec<Vec<u8>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            cur.push(b);
            rec(cur, max.max(b), k, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut cur = vec![0u8];
    rec(&mut cur, 0, k, &mut out);
    out
}

/// Exact SAIDI with each edge's own p_fail, by whichever exact engine fits.
pub fn saidi(net: &Network) -> Result<f64> {
    crate::structure::saidi_modular(&net.graph())
}

/// SAIDI at uniform p.
pub fn saidi_at(net: &Network, p: f64) -> Result<f64> {
    check_p(p)?;
    saidi(&net.with_uniform_p(p)?)
}

/// Exact equal-model polynomial.
pub fn saidi_polynomial(net: &Network) -> Result<ReliabilityPolynomial> {
    guard("polynomial degree", net.m(), POLY_MAX_DEGREE)?;
    crate::structure::saidi_modular_poly(&net.graph())
}

/// k-order truncated SAIDI at each edge's own p_fail.
pub fn saidi_korder(net: &Network, k: usize) -> Result<f64> {
    crate::risk::korder_graph(&net.graph(), k)
}

/// Default truncation order.
pub const DEFAULT_K: usize = 3;

/// Smallest p (to 1e-4) where |exact - k-order| reaches `eps`; 1 if never.
pub fn approx_threshold(net: &Network, k: usize, eps: f64) -> Result<f64> {
    let g = net.graph();
    let prepared = crate::risk::KOrder::prepare(&g, k)?;
    let diff = |p: f64| -> Result<f64> {
        let mut gp = g.clone();
        gp.edges.iter_mut().for_each(|e| e.p = p);
        let exact = crate::structure::saidi_modular(&gp)?;
        Ok((exact - prepared.eval(&gp)).abs())
    };
    if diff(0.0)? >= eps {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut p = 1e-4;
    loop {
        if diff(p)? >= eps {
            break;
        }
        if p >= 1.0 {
            return Ok(1.0);
        }
        lo = p;
        p = (p * 1.25).min(1.0);
    }
    let mut hi = p;
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if diff(mid)? >= eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
