//! Minimal cut sets and their risks.
//!
//! A minimal cut set X (a bond) splits the source component in two. Its
//! risk is Pr(X fails) * Pr(the near endpoints of X reach the source) *
//! weight of the far side, and the risks of all bonds sum to SAIDI.

use crate::analytic::{path_general, ring_general, ring_second_coefficient};
use crate::error::{Error, Result};
use crate::exact::all_connected;
use crate::graph::{subsets, GEdge, Graph};
use crate::network::{EdgeId, Lowered, Network, NodeId};
use crate::poly::{q_from_f64, q_int, Q};
use crate::structure::{decompose, Decomp, StructureGraph};
use serde::Serialize;
use std::cmp::Ordering;

/// Enumeration is capped at this order.
pub const MAX_ORDER: usize = 3;
/// Highest truncation order accepted by the k-order engine.
pub const MAX_K: usize = 5;
/// Reduced residual size up to which reach probabilities are exact.
pub const REACH_EXACT_MAX_EDGES: usize = 24;
/// Structure-graph size limit for enumerating bonds of every order.
pub const ALL_ORDERS_MAX_CHAINS: usize = 20;

#[cfg(feature = "parallel")]
macro_rules! par_map {
    ($v:expr, $f:expr) => {{
        use rayon::prelude::*;
        $v.par_iter().map($f).collect::<Vec<_>>()
    }};
}

#[cfg(not(feature = "parallel"))]
macro_rules! par_map {
    ($v:expr, $f:expr) => {
        $v.iter().map($f).collect::<Vec<_>>()
    };
}

/// The source component with loops dropped, reindexed.
#[derive(Clone, Debug)]
pub(crate) struct Live {
    pub g: Graph,
    /// local node -> node of the input graph
    pub node: Vec<usize>,
    /// local edge -> edge of the input graph
    pub edge: Vec<usize>,
    /// weight of nodes the source can never reach
    pub lost: f64,
}

pub(crate) fn live(g: &Graph) -> Live {
    let seen = g.reachable(|_| true);
    let mut local = vec![usize::MAX; g.n()];
    let mut node = Vec::new();
    let mut lost = 0.0;
    for v in 0..g.n() {
        if seen[v] {
            local[v] = node.len();
            node.push(v);
        } else {
            lost += g.weight[v];
        }
    }
    let mut edges = Vec::new();
    let mut edge = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        if seen[e.u] && !e.is_loop() {
            edges.push(GEdge { u: local[e.u], v: local[e.v], p: e.p });
            edge.push(i);
        }
    }
    let weight = node.iter().map(|&v| if v == g.source { 0.0 } else { g.weight[v] }).collect();
    Live { g: Graph { weight, source: local[g.source], edges }, node, edge, lost }
}

/// A bond of a connected loop-free graph.
#[derive(Clone, Debug)]
pub(crate) struct Bond {
    pub edges: Vec<usize>,
    pub far: Vec<bool>,
}

impl Bond {
    pub fn weight(&self, g: &Graph) -> f64 {
        (0..g.n()).filter(|&v| self.far[v]).map(|v| g.weight[v]).sum()
    }

    pub fn fail_prob(&self, g: &Graph) -> f64 {
        self.edges.iter().map(|&e| g.edges[e].p).product()
    }

    /// endpoints of the bond on the source side
    pub fn near_ends(&self, g: &Graph) -> Vec<usize> {
        let mut t: Vec<usize> = self
            .edges
            .iter()
            .map(|&e| {
                let e = &g.edges[e];
                if self.far[e.u] {
                    e.v
                } else {
                    e.u
                }
            })
            .collect();
        t.sort_unstable();
        t.dedup();
        t
    }
}

fn cmp_bonds(a: &[usize], b: &[usize]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Bond index sets of S(g) (chains as edges) of size <= max.
fn structure_bonds(sg: &Graph, max: usize) -> Vec<Vec<usize>> {
    let cand: Vec<usize> = (0..sg.m()).filter(|&i| !sg.edges[i].is_loop()).collect();
    let mut out = Vec::new();
    for size in 1..=max.min(cand.len()) {
        for pick in subsets(cand.len(), size) {
            let x: Vec<usize> = pick.iter().map(|&i| cand[i]).collect();
            if sg.bond_side(&x).is_some() {
                out.push(x);
            }
        }
    }
    out
}

/// All bonds of a connected loop-free graph with at most `max` edges,
/// built from the chain decomposition: two edges of one non-bridge chain,
/// or one edge from each chain of a bond of the structure graph.
pub(crate) fn bonds(g: &Graph, max: usize) -> Vec<Bond> {
    let d = decompose(g);
    let sg = d.structure_graph(g);
    let sbonds = structure_bonds(&sg, max);
    let bridge_chain: Vec<bool> = {
        let mut b = vec![false; d.chains.len()];
        sbonds.iter().filter(|x| x.len() == 1).for_each(|x| b[x[0]] = true);
        b
    };
    let mut sets: Vec<Vec<usize>> = Vec::new();
    if max >= 2 {
        for (k, c) in d.chains.iter().enumerate() {
            if bridge_chain[k] {
                continue;
            }
            for pair in subsets(c.edges.len(), 2) {
                sets.push(vec![c.edges[pair[0]], c.edges[pair[1]]]);
            }
        }
    }
    for x in &sbonds {
        let mut picks: Vec<Vec<usize>> = vec![Vec::new()];
        for &k in x {
            picks = picks
                .into_iter()
                .flat_map(|p| {
                    d.chains[k].edges.iter().map(move |&e| {
                        let mut q = p.clone();
                        q.push(e);
                        q
                    })
                })
                .collect();
        }
        sets.extend(picks);
    }
    for s in sets.iter_mut() {
        s.sort_unstable();
    }
    sets.sort_by(|a, b| cmp_bonds(a, b));
    par_map!(sets, |s: &Vec<usize>| {
        let far = g.bond_side(s).expect("chain expansion yields bonds");
        Bond { edges: s.clone(), far }
    })
}

/// Reference enumeration: every edge subset of size <= max that is a bond.
pub(crate) fn bonds_naive(g: &Graph, max: usize) -> Vec<Bond> {
    let mut out = Vec::new();
    for size in 1..=max.min(g.m()) {
        for x in subsets(g.m(), size) {
            if let Some(far) = g.bond_side(&x) {
                out.push(Bond { edges: x, far });
            }
        }
    }
    out
}

/// Source-side residual: the near side of a bond with its own indexing.
struct Residual {
    g: Graph,
    /// local edge -> edge of the bonded graph
    edge: Vec<usize>,
    terms: Vec<usize>,
}

fn residual(g: &Graph, bond: &Bond) -> Residual {
    let mut local = vec![usize::MAX; g.n()];
    let mut weight = Vec::new();
    for v in 0..g.n() {
        if !bond.far[v] {
            local[v] = weight.len();
            weight.push(0.0);
        }
    }
    let mut edges = Vec::new();
    let mut edge = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        if !bond.far[e.u] && !bond.far[e.v] {
            edges.push(GEdge { u: local[e.u], v: local[e.v], p: e.p });
            edge.push(i);
        }
    }
    let terms = bond.near_ends(g).into_iter().map(|t| local[t]).collect();
    Residual { g: Graph { weight, source: local[g.source], edges }, edge, terms }
}

/// Near-side bonds of size <= r that cut off at least one near endpoint.
/// These are the minimal cut sets of the reach event.
fn reach_cuts(g: &Graph, bond: &Bond, r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return Vec::new();
    }
    let res = residual(g, bond);
    if res.terms.iter().all(|&t| t == res.g.source) {
        return Vec::new();
    }
    bonds(&res.g, r)
        .into_iter()
        .filter(|b| res.terms.iter().any(|&t| b.far[t]))
        .map(|b| b.edges.iter().map(|&e| res.edge[e]).collect())
        .collect()
}

/// Inclusion-exclusion over cut families whose union has at most r edges.
fn truncated_reach(cuts: &[Vec<usize>], r: usize, p: &dyn Fn(usize) -> f64) -> f64 {
    fn rec(
        cuts: &[Vec<usize>],
        start: usize,
        union: &[usize],
        size: usize,
        r: usize,
        p: &dyn Fn(usize) -> f64,
        total: &mut f64,
    ) {
        for i in start..cuts.len() {
            let mut u = union.to_vec();
            for &e in &cuts[i] {
                if !u.contains(&e) {
                    u.push(e);
                }
            }
            if u.len() > r {
                continue;
            }
            let pr: f64 = u.iter().map(|&e| p(e)).product();
            // a family of `size + 1` cuts enters with sign (-1)^(size+1)
            *total += if size.is_multiple_of(2) { -pr } else { pr };
            rec(cuts, i + 1, &u, size + 1, r, p, total);
        }
    }
    let mut total = 1.0;
    rec(cuts, 0, &[], 0, r, p, &mut total);
    total
}

/// Exact reach when the residual is small after series reduction, else
/// truncated to order r.
fn reach_exact_or(g: &Graph, bond: &Bond, fallback_r: usize) -> f64 {
    let res = residual(g, bond);
    let reduced = decompose(&res.g).chains.len();
    if reduced <= REACH_EXACT_MAX_EDGES {
        all_connected(&res.g, &res.terms)
    } else {
        let cuts = reach_cuts(g, bond, fallback_r);
        truncated_reach(&cuts, fallback_r, &|e| g.edges[e].p)
    }
}

/// Which part of the chain calculus a bond belongs to.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RiskKind {
    /// one edge from each listed chain
    Structural { chains: Vec<String> },
    /// two edges of one chain
    InterChain { chain: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CutSet {
    pub edges: Vec<EdgeId>,
    pub order: usize,
}

impl CutSet {
    pub fn new(edges: Vec<EdgeId>) -> Self {
        CutSet { order: edges.len(), edges }
    }

    /// Stable textual id, e.g. "e1+e4".
    pub fn id(&self) -> String {
        self.edges.iter().map(|e| e.as_str()).collect::<Vec<_>>().join("+")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RiskRecord {
    pub cutset: CutSet,
    pub kind: RiskKind,
    pub reach_prob: f64,
    pub fail_prob: f64,
    pub disconnected_weight: f64,
    pub risk: f64,
    pub order: usize,
    /// nodes lost when the cut set fails, for highlighting
    pub disconnected_nodes: Vec<NodeId>,
}

/// Network-level context: lowered graph, its source component and chains.
struct Ctx<'a> {
    net: &'a Network,
    low: Lowered,
    live: Live,
    decomp: Decomp,
}

impl<'a> Ctx<'a> {
    fn new(net: &'a Network) -> Self {
        let low = net.lower();
        let live = live(&low.graph);
        let decomp = decompose(&live.g);
        Ctx { net, low, live, decomp }
    }

    fn edge_id(&self, e: usize) -> EdgeId {
        self.net.edges()[self.live.edge[e]].id.clone()
    }

    fn cutset(&self, edges: &[usize]) -> CutSet {
        let mut ids: Vec<EdgeId> = edges.iter().map(|&e| self.edge_id(e)).collect();
        ids.sort();
        CutSet::new(ids)
    }

    fn local_edges(&self, ids: &[EdgeId]) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for id in ids {
            let i = self.net.edge_index(id)?;
            let e = self.live.edge.iter().position(|&x| x == i).ok_or_else(|| {
                Error::arg(format!("edge `{id}` is a self-loop or outside the source component"))
            })?;
            out.push(e);
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    fn bond(&self, ids: &[EdgeId]) -> Result<Bond> {
        let edges = self.local_edges(ids)?;
        let far = self
            .live
            .g
            .bond_side(&edges)
            .ok_or_else(|| Error::arg("edge set is not a minimal cut set"))?;
        Ok(Bond { edges, far })
    }

    fn chain_name(k: usize) -> String {
        format!("c{}", k + 1)
    }

    fn kind(&self, bond: &Bond) -> RiskKind {
        let ch: Vec<usize> = bond
            .edges
            .iter()
            .map(|&e| self.decomp.edge_chain[e].expect("bond edges lie on chains").0)
            .collect();
        if ch.len() == 2 && ch[0] == ch[1] {
            RiskKind::InterChain { chain: Self::chain_name(ch[0]) }
        } else {
            let mut names: Vec<usize> = ch;
            names.sort_unstable();
            names.dedup();
            RiskKind::Structural { chains: names.into_iter().map(Self::chain_name).collect() }
        }
    }

    fn far_nodes(&self, bond: &Bond) -> Vec<NodeId> {
        let mut ids: Vec<NodeId> = (0..self.live.g.n())
            .filter(|&v| bond.far[v])
            .flat_map(|v| self.low.members[self.live.node[v]].iter())
            .map(|&i| self.net.nodes()[i].id.clone())
            .collect();
        ids.sort();
        ids
    }

    fn record(&self, bond: &Bond, reach: f64) -> RiskRecord {
        let g = &self.live.g;
        let fail = bond.fail_prob(g);
        let d = bond.weight(g);
        RiskRecord {
            cutset: self.cutset(&bond.edges),
            kind: self.kind(bond),
            reach_prob: reach,
            fail_prob: fail,
            disconnected_weight: d,
            risk: fail * reach * d,
            order: bond.edges.len(),
            disconnected_nodes: self.far_nodes(bond),
        }
    }
}

fn check_order(max_order: usize) -> Result<()> {
    if max_order > MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "cut-set order {max_order} exceeds the supported maximum of {MAX_ORDER}"
        )));
    }
    Ok(())
}

/// Minimal cut sets of order <= max_order (at most 3), sorted by order
/// then edge ids.
pub fn enumerate_min_cutsets(net: &Network, max_order: usize) -> Result<Vec<CutSet>> {
    check_order(max_order)?;
    let ctx = Ctx::new(net);
    let mut out: Vec<CutSet> = bonds(&ctx.live.g, max_order).iter().map(|b| ctx.cutset(&b.edges)).collect();
    out.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.edges.cmp(&b.edges)));
    Ok(out)
}

/// Same result by checking every edge subset; slow, for cross-checks.
pub fn enumerate_min_cutsets_naive(net: &Network, max_order: usize) -> Result<Vec<CutSet>> {
    check_order(max_order)?;
    let ctx = Ctx::new(net);
    let mut out: Vec<CutSet> =
        bonds_naive(&ctx.live.g, max_order).iter().map(|b| ctx.cutset(&b.edges)).collect();
    out.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.edges.cmp(&b.edges)));
    Ok(out)
}

/// Minimal cut sets of the structure graph, as chain ids.
pub fn enumerate_structural_cutsets(s: &StructureGraph, max_order: usize) -> Result<Vec<CutSet>> {
    check_order(max_order)?;
    let sg = s.decomp.structure_graph(&s.graph);
    Ok(structure_bonds(&sg, max_order)
        .into_iter()
        .map(|x| CutSet::new(x.into_iter().map(|k| EdgeId(s.chains[k].id.clone())).collect()))
        .collect())
}

/// Pr(every near endpoint of X reaches the source without X). `order =
/// None` is exact; `Some(r)` keeps inclusion-exclusion terms with at
/// most r edges.
pub fn reach_probability(net: &Network, x: &[EdgeId], order: Option<usize>) -> Result<f64> {
    let ctx = Ctx::new(net);
    let bond = ctx.bond(x)?;
    let g = &ctx.live.g;
    Ok(match order {
        None => {
            let res = residual(g, &bond);
            all_connected(&res.g, &res.terms)
        }
        Some(r) => truncated_reach(&reach_cuts(g, &bond, r), r, &|e| g.edges[e].p),
    })
}

/// Risk record of one minimal cut set, reach exact when feasible.
pub fn ric(net: &Network, x: &[EdgeId]) -> Result<RiskRecord> {
    let ctx = Ctx::new(net);
    let bond = ctx.bond(x)?;
    let reach = reach_exact_or(&ctx.live.g, &bond, MAX_ORDER.saturating_sub(bond.edges.len()));
    Ok(ctx.record(&bond, reach))
}

/// Sum of risks: all orders with exact reach (`None`), or the k-order
/// truncation.
pub fn saidi_via_risks(net: &Network, max_order: Option<usize>) -> Result<f64> {
    match max_order {
        Some(k) => crate::exact::saidi_korder(net, k),
        None => {
            let ctx = Ctx::new(net);
            let g = &ctx.live.g;
            if ctx.decomp.chains.len() > ALL_ORDERS_MAX_CHAINS {
                return Err(Error::SizeGuard {
                    what: "chains for all-order cut-set enumeration",
                    got: ctx.decomp.chains.len(),
                    limit: ALL_ORDERS_MAX_CHAINS,
                });
            }
            let all = bonds(g, usize::MAX);
            let risks = par_map!(all, |b: &Bond| {
                let res = residual(g, b);
                b.fail_prob(g) * all_connected(&res.g, &res.terms) * b.weight(g)
            });
            Ok(ctx.live.lost + risks.iter().sum::<f64>())
        }
    }
}

/// Precomputed k-order truncation: bonds of order <= k with the cut sets
/// of their reach events up to order k - |X|. Evaluate at any edge
/// probabilities on the same topology.
#[derive(Clone, Debug)]
pub struct KOrder {
    k: usize,
    lost: f64,
    terms: Vec<KTerm>,
}

#[derive(Clone, Debug)]
struct KTerm {
    /// edges of the input graph
    x: Vec<usize>,
    d: f64,
    cuts: Vec<Vec<usize>>,
    r: usize,
}

impl KOrder {
    pub(crate) fn prepare(g: &Graph, k: usize) -> Result<Self> {
        if k > MAX_K {
            return Err(Error::InvalidArgument(format!("k = {k} exceeds {MAX_K}")));
        }
        let lv = live(g);
        let all = bonds(&lv.g, k);
        let terms = par_map!(all, |b: &Bond| {
            let r = k - b.edges.len();
            KTerm {
                x: b.edges.iter().map(|&e| lv.edge[e]).collect(),
                d: b.weight(&lv.g),
                cuts: reach_cuts(&lv.g, b, r)
                    .into_iter()
                    .map(|c| c.into_iter().map(|e| lv.edge[e]).collect())
                    .collect(),
                r,
            }
        });
        Ok(KOrder { k, lost: lv.lost, terms })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of cut sets included.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn eval(&self, g: &Graph) -> f64 {
        let p = |e: usize| g.edges[e].p;
        self.lost
            + self
                .terms
                .iter()
                .map(|t| {
                    let fail: f64 = t.x.iter().map(|&e| p(e)).product();
                    if fail == 0.0 {
                        return 0.0;
                    }
                    fail * truncated_reach(&t.cuts, t.r, &p) * t.d
                })
                .sum::<f64>()
    }
}

pub(crate) fn korder_graph(g: &Graph, k: usize) -> Result<f64> {
    Ok(KOrder::prepare(g, k)?.eval(g))
}

/// All cut-set risks of order <= max_order at uniform `p` (or each edge's
/// own p_fail), descending, ties by cut-set id; first `n` entries.
pub fn top_risks(net: &Network, n: usize, p: Option<f64>, max_order: usize) -> Result<Vec<RiskRecord>> {
    check_order(max_order)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let net = match p {
        Some(p) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::arg(format!("p = {p} outside [0, 1]")));
            }
            net.with_uniform_p(p)?
        }
        None => net.clone(),
    };
    let ctx = Ctx::new(&net);
    let g = &ctx.live.g;
    let all = bonds(g, max_order);
    let mut recs = par_map!(all, |b: &Bond| {
        let reach = reach_exact_or(g, b, MAX_ORDER.saturating_sub(b.edges.len()));
        ctx.record(b, reach)
    });
    recs.sort_by(|a, b| {
        b.risk
            .partial_cmp(&a.risk)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.cutset.id().cmp(&b.cutset.id()))
    });
    recs.truncate(n);
    Ok(recs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RiskMode {
    Exact,
    Approx,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InterMode {
    Exact,
    Approx,
    BridgeCorrected,
}

/// Weights and survival probabilities of a chain read from hub `from`.
fn chain_arrays(s: &StructureGraph, k: usize, from: usize) -> (Vec<f64>, Vec<f64>) {
    let c = &s.decomp.chains[k];
    let mut w: Vec<f64> = c.interior.iter().map(|&x| s.graph.weight[x]).collect();
    let mut q: Vec<f64> = c.edges.iter().map(|&e| 1.0 - s.graph.edges[e].p).collect();
    if from != c.a {
        w.reverse();
        q.reverse();
    }
    (w, q)
}

fn chain_index(s: &StructureGraph, id: &str) -> Result<usize> {
    s.chain(id)
        .map(|(k, _)| k)
        .ok_or_else(|| Error::arg(format!("unknown chain `{id}`")))
}

/// Risk of a minimal cut set of the structure graph, chains given by id.
/// Exact mode sums the risks of every network cut set taking one edge
/// per chain; approx mode keeps the leading term of each factor.
pub fn structural_risk(s: &StructureGraph, chains: &[String], mode: RiskMode) -> Result<RiskRecord> {
    let mut ks: Vec<usize> = chains.iter().map(|id| chain_index(s, id)).collect::<Result<_>>()?;
    ks.sort_unstable();
    ks.dedup();
    let sg = s.decomp.structure_graph(&s.graph);
    let far = sg
        .bond_side(&ks)
        .ok_or_else(|| Error::arg("chains do not form a minimal cut set of the structure graph"))?;
    let d = &s.decomp;
    // far-side weight: hubs plus chains lying entirely on the far side
    let mut weight: f64 = (0..sg.n()).filter(|&h| far[h]).map(|h| sg.weight[h]).sum();
    for c in &d.chains {
        if far[d.hub_pos[c.a].unwrap()] && far[d.hub_pos[c.b].unwrap()] {
            weight += c.interior.iter().map(|&x| s.graph.weight[x]).sum::<f64>();
        }
    }
    let near_hub = |k: usize| {
        let c = &d.chains[k];
        if far[d.hub_pos[c.a].unwrap()] {
            c.b
        } else {
            c.a
        }
    };
    let (fail, reach, risk) = match mode {
        RiskMode::Exact => {
            let pc: Vec<f64> = ks.iter().map(|&k| sg.edges[k].p).collect();
            let fpath: Vec<f64> = ks
                .iter()
                .map(|&k| {
                    let (w, q) = chain_arrays(s, k, near_hub(k));
                    path_general(&w, &q)
                })
                .collect();
            let fail: f64 = pc.iter().product();
            let mut inner = fail * weight;
            for i in 0..ks.len() {
                let others: f64 = (0..ks.len()).filter(|&j| j != i).map(|j| pc[j]).product();
                inner += others * fpath[i];
            }
            let bond = Bond { edges: ks.clone(), far: far.clone() };
            let res = residual(&sg, &bond);
            let reach = all_connected(&res.g, &res.terms);
            (fail, reach, reach * inner)
        }
        RiskMode::Approx => {
            let sums: Vec<f64> = ks
                .iter()
                .map(|&k| d.chains[k].edges.iter().map(|&e| s.graph.edges[e].p).sum())
                .collect();
            let tails: Vec<f64> = ks
                .iter()
                .map(|&k| {
                    let (w, q) = chain_arrays(s, k, near_hub(k));
                    // sum_i p_i * weight after edge i
                    let mut after: f64 = w.iter().sum();
                    let mut t = 0.0;
                    for (i, qi) in q.iter().enumerate() {
                        t += (1.0 - qi) * after;
                        if i < w.len() {
                            after -= w[i];
                        }
                    }
                    t
                })
                .collect();
            let fail: f64 = sums.iter().product();
            let mut r = fail * weight;
            for i in 0..ks.len() {
                let others: f64 = (0..ks.len()).filter(|&j| j != i).map(|j| sums[j]).product();
                r += others * tails[i];
            }
            (fail, 1.0, r)
        }
    };
    let mut lost: Vec<NodeId> = (0..sg.n()).filter(|&h| far[h]).map(|h| s.hubs[h].clone()).collect();
    lost.sort();
    Ok(RiskRecord {
        cutset: CutSet::new(ks.iter().map(|&k| EdgeId(s.chains[k].id.clone())).collect()),
        kind: RiskKind::Structural { chains: ks.iter().map(|&k| s.chains[k].id.clone()).collect() },
        reach_prob: reach,
        fail_prob: fail,
        disconnected_weight: weight,
        risk,
        order: ks.len(),
        disconnected_nodes: lost,
    })
}

/// Expected loss from failures inside one chain while both its hubs are
/// fed. Exact: P2 * F_ring. Approx: sum over edge pairs p_i p_j W(between).
/// Bridge-corrected: approx times (1 - sum of p over structure bridges,
/// chain removed, that cut a hub of the chain off the source).
pub fn inter_risk(s: &StructureGraph, chain: &str, mode: InterMode) -> Result<RiskRecord> {
    let k = chain_index(s, chain)?;
    let c = &s.decomp.chains[k];
    let (w, q) = chain_arrays(s, k, c.a);
    let p: Vec<f64> = q.iter().map(|q| 1.0 - q).collect();
    let approx = || {
        let mut total = 0.0;
        for i in 0..p.len() {
            let mut seg = 0.0;
            for j in i + 1..p.len() {
                seg += w[j - 1];
                total += p[i] * p[j] * seg;
            }
        }
        total
    };
    let sg = s.decomp.structure_graph(&s.graph);
    let (reach, risk) = match mode {
        InterMode::Exact => {
            let b = crate::structure::boundary_of(&sg, &s.decomp, k);
            (b[3], b[3] * ring_general(&w, &q))
        }
        InterMode::Approx => (1.0, approx()),
        InterMode::BridgeCorrected => {
            let mut rest = sg.clone();
            rest.edges.remove(k);
            let hubs = [s.decomp.hub_pos[c.a].unwrap(), s.decomp.hub_pos[c.b].unwrap()];
            let lv = live(&rest);
            let mut loss = 0.0;
            for b in lv.g.bridges() {
                let far = lv.g.bond_side(&[b]).expect("bridge is a bond");
                if hubs.iter().any(|&h| lv.node.iter().position(|&x| x == h).is_some_and(|l| far[l])) {
                    loss += lv.g.edges[b].p;
                }
            }
            (1.0 - loss, (1.0 - loss) * approx())
        }
    };
    let mut nodes: Vec<NodeId> = s.chains[k].interior.clone();
    nodes.sort();
    Ok(RiskRecord {
        cutset: CutSet { edges: vec![EdgeId(s.chains[k].id.clone())], order: 2 },
        kind: RiskKind::InterChain { chain: s.chains[k].id.clone() },
        reach_prob: reach,
        fail_prob: 1.0 - q.iter().product::<f64>(),
        disconnected_weight: w.iter().sum(),
        risk,
        order: 2,
        disconnected_nodes: nodes,
    })
}

/// Structural risks over the structure graph's minimal cut sets of order
/// <= max_order (all when `None`) plus every chain's inter-risk, exact
/// components throughout. Requires a bridgeless network.
pub fn saidi_structural(net: &Network, max_order: Option<usize>) -> Result<f64> {
    let s = crate::structure::build_structure(net)?;
    let sg = s.decomp.structure_graph(&s.graph);
    let max = match max_order {
        Some(k) => k,
        None => {
            if sg.m() > ALL_ORDERS_MAX_CHAINS {
                return Err(Error::SizeGuard {
                    what: "chains for all-order cut-set enumeration",
                    got: sg.m(),
                    limit: ALL_ORDERS_MAX_CHAINS,
                });
            }
            sg.m()
        }
    };
    let lost: f64 = {
        let seen = s.graph.reachable(|_| true);
        (0..s.graph.n()).filter(|&v| !seen[v]).map(|v| s.graph.weight[v]).sum()
    };
    let mut total = lost;
    for x in structure_bonds(&sg, max) {
        let ids: Vec<String> = x.iter().map(|&k| s.chains[k].id.clone()).collect();
        total += structural_risk(&s, &ids, RiskMode::Exact)?.risk;
    }
    for c in &s.chains {
        total += inter_risk(&s, &c.id, InterMode::Exact)?.risk;
    }
    Ok(total)
}

/// Coefficient of p^2 in the equal-model SAIDI of a bridgeless network:
/// every chain's ring term plus (c1+1)(c2+1)(D + (c1+c2)/2) for each
/// two-chain cut set of the structure graph.
pub fn second_order_coefficient(s: &StructureGraph) -> Q {
    let sg = s.decomp.structure_graph(&s.graph);
    let d = &s.decomp;
    let mut total: Q = d.chains.iter().map(|c| ring_second_coefficient(c.c())).sum();
    for x in structure_bonds(&sg, 2).into_iter().filter(|x| x.len() == 2) {
        let far = sg.bond_side(&x).unwrap();
        let mut weight = Q::from_integer(0.into());
        for h in 0..sg.n() {
            if far[h] {
                weight += q_from_f64(sg.weight[h]);
            }
        }
        for c in &d.chains {
            if far[d.hub_pos[c.a].unwrap()] && far[d.hub_pos[c.b].unwrap()] {
                for &v in &c.interior {
                    weight += q_from_f64(s.graph.weight[v]);
                }
            }
        }
        let (c1, c2) = (d.chains[x[0]].c() as i64, d.chains[x[1]].c() as i64);
        total += q_int((c1 + 1) * (c2 + 1)) * (weight + Q::new((c1 + c2).into(), 2.into()));
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{saidi, saidi_bruteforce};
    use crate::network::NetworkBuilder;

    fn ring(n: usize, p: f64) -> Network {
        let mut b = NetworkBuilder::new();
        b.add_source("s");
        for i in 1..=n {
            b.add_node(format!("v{i}"), 1.0);
        }
        let name = |i: usize| if i == 0 || i == n + 1 { "s".to_string() } else { format!("v{i}") };
        for i in 1..=n + 1 {
            b.add_edge(name(i - 1), name(i), p);
        }
        b.build().unwrap()
    }

    fn ids(v: &[&str]) -> Vec<EdgeId> {
        v.iter().map(|s| EdgeId::from(*s)).collect()
    }

    #[test]
    fn ring_cutsets_are_all_pairs() {
        let cs = enumerate_min_cutsets(&ring(4, 0.1), 3).unwrap();
        assert_eq!(cs.len(), 10);
        assert!(cs.iter().all(|c| c.order == 2));
        assert_eq!(cs, enumerate_min_cutsets_naive(&ring(4, 0.1), 3).unwrap());
    }

    #[test]
    fn ring2_risks() {
        let p = 0.1;
        let net = ring(2, p);
        let r = ric(&net, &ids(&["e1", "e3"])).unwrap();
        assert!((r.risk - 2.0 * p * p).abs() < 1e-15);
        let r = ric(&net, &ids(&["e1", "e2"])).unwrap();
        assert!((r.reach_prob - (1.0 - p)).abs() < 1e-15);
        assert!((r.risk - (1.0 - p) * p * p).abs() < 1e-15);
        let total = saidi_via_risks(&net, None).unwrap();
        assert!((total - 2.0 * p * p * (2.0 - p)).abs() < 1e-15);
    }

    #[test]
    fn order_cap() {
        assert!(enumerate_min_cutsets(&ring(3, 0.1), 4).is_err());
    }

    #[test]
    fn korder_on_ring() {
        let net = ring(3, 0.01);
        let exact = saidi(&net).unwrap();
        let k2 = saidi_via_risks(&net, Some(2)).unwrap();
        let k3 = saidi_via_risks(&net, Some(3)).unwrap();
        assert!((exact - k3).abs() < (exact - k2).abs());
        assert_eq!(saidi_via_risks(&net, Some(1)).unwrap(), 0.0);
        assert!((saidi_bruteforce(&net).unwrap() - exact).abs() < 1e-15);
    }

    #[test]
    fn inter_risk_c2() {
        let net = ring(2, 1e-3);
        let s = crate::structure::build_structure(&net).unwrap();
        let a = inter_risk(&s, "c1", InterMode::Approx).unwrap();
        assert!((a.risk - 4e-6).abs() < 1e-18);
        let e = inter_risk(&s, "c1", InterMode::Exact).unwrap();
        assert!((e.risk - saidi(&net).unwrap()).abs() < 1e-18);
    }
}
