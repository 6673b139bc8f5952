//! Candidate redundant edges: risk differences, greedy selection under a
//! budget, the grid program and the design-rule audit.

use crate::analytic::{path_general, ring_second_coefficient};
use crate::error::{Error, Result};
use crate::exact;
use crate::graph::subsets;
use crate::network::{Edge, EdgeId, Network, NodeId};
use crate::poly::q_to_f64;
use crate::risk::{self, CutSet, RiskMode};
use crate::structure::{chain_decomposition, StructureGraph};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    ChainToChain,
    InterChain,
    HubToChain,
    HubToHub,
}

impl std::fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EdgeKind::ChainToChain => "chain-to-chain",
            EdgeKind::InterChain => "inter-chain",
            EdgeKind::HubToChain => "hub-to-chain",
            EdgeKind::HubToHub => "hub-to-hub",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateEdge {
    pub id: String,
    pub u: NodeId,
    pub v: NodeId,
    pub p_fail: f64,
    #[serde(default = "one")]
    pub cost: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Hub(usize),
    /// chain, 0-based position in its interior
    Chain(usize, usize),
}

fn role(s: &StructureGraph, x: usize) -> Role {
    match (s.decomp.hub_pos[x], s.decomp.node_chain[x]) {
        (_, Some((k, i))) => Role::Chain(k, i),
        (Some(h), _) => Role::Hub(h),
        // outside the source component: behaves like a hub of its own
        (None, None) => Role::Hub(usize::MAX - x),
    }
}

impl CandidateEdge {
    pub fn new(id: impl Into<String>, u: impl Into<NodeId>, v: impl Into<NodeId>, p_fail: f64, cost: f64) -> Self {
        CandidateEdge { id: id.into(), u: u.into(), v: v.into(), p_fail, cost }
    }

    pub fn validate(&self, net: &Network) -> Result<()> {
        net.node_index(&self.u)?;
        net.node_index(&self.v)?;
        if !(0.0..=1.0).contains(&self.p_fail) {
            return Err(Error::arg(format!("candidate `{}`: p_fail {} outside [0, 1]", self.id, self.p_fail)));
        }
        if !(self.cost >= 0.0 && self.cost.is_finite()) {
            return Err(Error::arg(format!("candidate `{}`: cost must be finite and >= 0", self.id)));
        }
        Ok(())
    }

    fn roles(&self, net: &Network, s: &StructureGraph) -> Result<(Role, Role)> {
        let low = net.lower();
        let ru = role(s, low.node_map[net.node_index(&self.u)?]);
        let rv = role(s, low.node_map[net.node_index(&self.v)?]);
        Ok((ru, rv))
    }

    /// Kind from the endpoints' roles in the chain decomposition.
    pub fn kind(&self, net: &Network) -> Result<EdgeKind> {
        let s = chain_decomposition(net);
        Ok(kind_of(self.roles(net, &s)?))
    }

    /// The candidate as a network edge with an id unused in `net`.
    pub fn as_edge(&self, net: &Network) -> Edge {
        let id = EdgeId(self.id.clone());
        let id = if net.edge(&id).is_some() { net.fresh_edge_id(&format!("{}_", self.id)) } else { id };
        Edge { id, u: self.u.clone(), v: self.v.clone(), p_fail: self.p_fail }
    }

    pub fn add_to(&self, net: &Network) -> Result<Network> {
        self.validate(net)?;
        net.with_edge(self.as_edge(net))
    }
}

fn kind_of(roles: (Role, Role)) -> EdgeKind {
    match roles {
        (Role::Hub(_), Role::Hub(_)) => EdgeKind::HubToHub,
        (Role::Hub(_), Role::Chain(..)) | (Role::Chain(..), Role::Hub(_)) => EdgeKind::HubToChain,
        (Role::Chain(a, _), Role::Chain(b, _)) if a == b => EdgeKind::InterChain,
        _ => EdgeKind::ChainToChain,
    }
}

/// R_G(X) - R_{G+e}(X). With both ends of e on one side of X this is
/// q_e (R_G(X) - R_{G/e}(X)), G/e being G with the ends identified. When
/// e joins the two sides, X grows into X + e and the difference is taken
/// directly; it is q_e R_G(X) whenever the near end of e is always
/// connected to the source (for instance, is a source).
pub fn risk_difference(net: &Network, x: &[EdgeId], e: &CandidateEdge) -> Result<f64> {
    e.validate(net)?;
    let before = risk::ric(net, x)?;
    let q = 1.0 - e.p_fail;
    if q == 0.0 || before.risk == 0.0 {
        return Ok(0.0);
    }
    let far: HashSet<&NodeId> = before.disconnected_nodes.iter().collect();
    if far.contains(&e.u) != far.contains(&e.v) {
        let edge = e.as_edge(net);
        let with = net.with_edge(edge.clone())?;
        let mut grown = x.to_vec();
        grown.push(edge.id);
        return Ok(before.risk - risk::ric(&with, &grown)?.risk);
    }
    let contracted = net.identify_nodes(&e.u, &e.v)?;
    let after = match risk::ric(&contracted, x) {
        Ok(r) => r.risk,
        Err(Error::InvalidArgument(_)) => 0.0,
        Err(err) => return Err(err),
    };
    Ok(q * (before.risk - after))
}

fn f2(c: usize) -> f64 {
    q_to_f64(&ring_second_coefficient(c))
}

fn chain_len(s: &StructureGraph, id: &str) -> Result<usize> {
    s.chain(id).map(|(_, c)| c.c).ok_or_else(|| Error::arg(format!("unknown chain `{id}`")))
}

/// Order-2 inter-risk reduction (coefficient of p^2, equal model) on each
/// of two chains when a new edge joins them; `i_k` in 0..=c_k splits chain
/// k into parts of i_k and c_k - i_k nodes.
pub fn inter_risk_delta_chain_to_chain(
    net: &Network,
    chain1: &str,
    i1: usize,
    chain2: &str,
    i2: usize,
) -> Result<(f64, f64)> {
    let s = chain_decomposition(net);
    let (c1, c2) = (chain_len(&s, chain1)?, chain_len(&s, chain2)?);
    if i1 > c1 || i2 > c2 {
        return Err(Error::arg("split position beyond the chain length"));
    }
    Ok((f2(c1) - f2(i1) - f2(c1 - i1), f2(c2) - f2(i2) - f2(c2 - i2)))
}

/// Order-2 inter-risk reduction (coefficient of p^2, equal model) of a
/// new edge between positions i < j of one chain (0 and c+1 are its hubs):
/// F(c) - F(c - |C3|) - F(|C3|) - i (c+1-j) |C3|, C3 the enclosed nodes.
pub fn inter_risk_delta_inter_chain(net: &Network, chain: &str, i: usize, j: usize) -> Result<f64> {
    let s = chain_decomposition(net);
    let c = chain_len(&s, chain)?;
    if i > j || j > c + 1 {
        return Err(Error::arg(format!("need 0 <= i <= j <= {}", c + 1)));
    }
    if j - i <= 1 {
        return Ok(0.0);
    }
    let c3 = j - i - 1;
    Ok(f2(c) - f2(c - c3) - f2(c3) - (i * (c + 1 - j) * c3) as f64)
}

/// Reduction of a structural cut set's risk (chains by id) from adding
/// `e`: the exact sum of [`risk_difference`] over the network cut sets
/// taking one edge from each chain.
pub fn structural_risk_delta(net: &Network, chains: &[String], e: &CandidateEdge) -> Result<f64> {
    let s = chain_decomposition(net);
    // validates that the chains form a structural cut set
    risk::structural_risk(&s, chains, RiskMode::Exact)?;
    let mut picks: Vec<Vec<EdgeId>> = vec![Vec::new()];
    for id in chains {
        let (_, c) = s.chain(id).unwrap();
        picks = picks
            .into_iter()
            .flat_map(|p| {
                c.edges.iter().map(move |e| {
                    let mut q = p.clone();
                    q.push(e.clone());
                    q
                })
            })
            .collect();
    }
    picks.iter().map(|x| risk_difference(net, x, e)).sum()
}

/// A piece of a chain as seen from the source side.
struct Piece {
    w: Vec<f64>,
    q: Vec<f64>,
}

impl Piece {
    fn p(&self) -> f64 {
        1.0 - self.q.iter().product::<f64>()
    }

    fn weight(&self) -> f64 {
        self.w.iter().sum()
    }

    fn f_path(&self) -> f64 {
        path_general(&self.w, &self.q)
    }
}

fn rho(x: &[&Piece], d: f64) -> f64 {
    let ps: Vec<f64> = x.iter().map(|c| c.p()).collect();
    let mut out = ps.iter().product::<f64>() * d;
    for (i, c) in x.iter().enumerate() {
        let others: f64 = (0..x.len()).filter(|&j| j != i).map(|j| ps[j]).product();
        out += others * c.f_path();
    }
    out
}

/// Chain k read from its source-side hub: weights and survival probs.
fn oriented(s: &StructureGraph, k: usize, far: &[bool]) -> (Vec<f64>, Vec<f64>, bool) {
    let c = &s.decomp.chains[k];
    let mut w: Vec<f64> = c.interior.iter().map(|&x| s.graph.weight[x]).collect();
    let mut q: Vec<f64> = c.edges.iter().map(|&e| 1.0 - s.graph.edges[e].p).collect();
    let flipped = far[s.decomp.hub_pos[c.a].unwrap()];
    if flipped {
        w.reverse();
        q.reverse();
    }
    (w, q, flipped)
}

/// 1-based position of interior node `pos` counted from the source side.
fn near_pos(c: usize, pos: usize, flipped: bool) -> usize {
    if flipped {
        c - pos
    } else {
        pos + 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedForm {
    /// chain-to-chain: reach (rho(X1, D1) + (1 - p_{C1,1} p_{C2,1}) rho(X2, D))
    Corrected,
    /// chain-to-chain with an extra Pr(X') factor and (1 - p_{C1,1} p_{C1,2});
    /// about twice the true reduction, kept for comparison
    Uncorrected,
}

/// Structural risk difference from the per-kind closed forms built on
/// rho(X, D) = Pr(X) D + sum_C Pr(X - C) F_path(C). Edges that touch none
/// of the chains and do not join the two sides give zero to leading order.
pub fn structural_risk_delta_closed(
    net: &Network,
    chains: &[String],
    e: &CandidateEdge,
    form: ClosedForm,
) -> Result<f64> {
    e.validate(net)?;
    let s = chain_decomposition(net);
    let rec = risk::structural_risk(&s, chains, RiskMode::Exact)?;
    let q_e = 1.0 - e.p_fail;
    let ks: Vec<usize> = chains.iter().map(|id| s.chain(id).unwrap().0).collect();
    let sg = s.decomp.structure_graph(&s.graph);
    let far = sg.bond_side(&ks).unwrap();
    let reach = rec.reach_prob;
    let d = rec.disconnected_weight;
    let (ru, rv) = e.roles(net, &s)?;
    let hub_far = |h: usize| h < far.len() && far[h];
    let pieces: Vec<(usize, Piece)> = ks
        .iter()
        .map(|&k| {
            let (w, q, _) = oriented(&s, k, &far);
            (k, Piece { w, q })
        })
        .collect();
    let others = |skip: &[usize]| -> Vec<&Piece> {
        pieces.iter().filter(|(k, _)| !skip.contains(k)).map(|(_, p)| p).collect()
    };
    let split = |k: usize, t: usize| -> (Piece, f64, Piece) {
        // nodes 1..t-1 | node t | nodes t+1..c, edges 1..t | t+1..c+1
        let (w, q, _) = oriented(&s, k, &far);
        let near = Piece { w: w[..t - 1].to_vec(), q: q[..t].to_vec() };
        let rest = Piece { w: w[t..].to_vec(), q: q[t..].to_vec() };
        (near, w[t - 1], rest)
    };
    let after = match (ru, rv) {
        (Role::Hub(a), Role::Hub(b)) => {
            return Ok(if hub_far(a) != hub_far(b) { q_e * rec.risk } else { 0.0 });
        }
        (Role::Chain(k1, i1), Role::Chain(k2, i2)) if k1 != k2 && ks.contains(&k1) && ks.contains(&k2) => {
            let c1 = &s.decomp.chains[k1];
            let c2 = &s.decomp.chains[k2];
            let t1 = near_pos(c1.c(), i1, oriented(&s, k1, &far).2);
            let t2 = near_pos(c2.c(), i2, oriented(&s, k2, &far).2);
            let (c11, w1, c12) = split(k1, t1);
            let (c21, w2, c22) = split(k2, t2);
            let rest = others(&[k1, k2]);
            let mut x1 = rest.clone();
            x1.extend([&c11, &c21]);
            let mut x2 = rest.clone();
            x2.extend([&c12, &c22]);
            let d1 = d + c12.weight() + c22.weight() + w1 + w2;
            match form {
                ClosedForm::Corrected => reach * (rho(&x1, d1) + (1.0 - c11.p() * c21.p()) * rho(&x2, d)),
                ClosedForm::Uncorrected => {
                    let pr_rest: f64 = rest.iter().map(|c| c.p()).product();
                    reach * pr_rest * (rho(&x1, d1) + rho(&x2, d) * (1.0 - c11.p() * c12.p()))
                }
            }
        }
        (Role::Chain(k1, i1), Role::Chain(k2, i2)) if k1 == k2 && ks.contains(&k1) => {
            let c = &s.decomp.chains[k1];
            let flipped = oriented(&s, k1, &far).2;
            let (ti, tj) = {
                let (a, b) = (near_pos(c.c(), i1, flipped), near_pos(c.c(), i2, flipped));
                (a.min(b), a.max(b))
            };
            inter_closed(&s, k1, ti, tj, &far, &others(&[k1]), reach, d)
        }
        (Role::Hub(h), Role::Chain(k, i)) | (Role::Chain(k, i), Role::Hub(h)) if ks.contains(&k) => {
            let c = &s.decomp.chains[k];
            let flipped = oriented(&s, k, &far).2;
            let t = near_pos(c.c(), i, flipped);
            let near_hub = if flipped { c.b } else { c.a };
            let far_hub = if flipped { c.a } else { c.b };
            if Some(h) == s.decomp.hub_pos[near_hub] {
                inter_closed(&s, k, 0, t, &far, &others(&[k]), reach, d)
            } else if Some(h) == s.decomp.hub_pos[far_hub] {
                inter_closed(&s, k, t, c.c() + 1, &far, &others(&[k]), reach, d)
            } else {
                return Err(Error::arg("no closed form for a hub-to-chain edge away from the chain's own hubs"));
            }
        }
        _ => return Ok(0.0),
    };
    Ok(q_e * (rec.risk - after))
}

/// Inter-chain case: the edge joins positions ti < tj (0 and c+1 are the
/// hubs), leaving C1 = nodes before ti, C3 between, C2 after tj.
#[allow(clippy::too_many_arguments)]
fn inter_closed(
    s: &StructureGraph,
    k: usize,
    ti: usize,
    tj: usize,
    far: &[bool],
    rest: &[&Piece],
    reach: f64,
    d: f64,
) -> f64 {
    let (w, q, _) = oriented(s, k, far);
    let c = w.len();
    let node_w = |t: usize| if t == 0 || t == c + 1 { 0.0 } else { w[t - 1] };
    let c1 = Piece { w: w[..ti.saturating_sub(1)].to_vec(), q: q[..ti].to_vec() };
    let c3w: f64 = w[ti.min(c)..(tj.max(1) - 1).min(c)].iter().sum();
    let c2 = Piece { w: w[tj.min(c)..].to_vec(), q: q[tj.min(c + 1)..].to_vec() };
    let mut x1: Vec<&Piece> = rest.to_vec();
    x1.push(&c1);
    let mut x2: Vec<&Piece> = rest.to_vec();
    x2.push(&c2);
    let d1 = d + c3w + c2.weight() + node_w(ti) + node_w(tj);
    reach * (rho(&x1, d1) + (1.0 - c1.p()) * rho(&x2, d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode", content = "k")]
pub enum EvalMode {
    /// exact SAIDI before and after
    Exact,
    /// k-order truncation before and after
    KOrder(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutsetDelta {
    pub cutset: CutSet,
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterDelta {
    pub chain: String,
    /// order-2 value at the evaluation p
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RiskDelta {
    pub candidate: CandidateEdge,
    pub kind: EdgeKind,
    #[serde(flatten)]
    pub mode: EvalMode,
    pub saidi_before: f64,
    pub saidi_after: f64,
    /// saidi_before - saidi_after
    pub total: f64,
    /// largest per-cut-set reductions among cut sets of order <= 2
    pub per_cutset: Vec<CutsetDelta>,
    pub inter: Vec<InterDelta>,
    /// total / cost; `None` for zero cost
    pub effectiveness: Option<f64>,
    /// zero cost with a positive total
    pub unbounded: bool,
}

impl RiskDelta {
    fn rank(&self) -> f64 {
        if self.unbounded {
            f64::INFINITY
        } else {
            self.effectiveness.unwrap_or(0.0)
        }
    }
}

/// Per-cut-set detail is skipped above this many low-order cut sets.
const PER_CUTSET_LIMIT: usize = 400;
const PER_CUTSET_KEEP: usize = 20;

fn value(net: &Network, mode: EvalMode) -> Result<f64> {
    match mode {
        EvalMode::Exact => exact::saidi(net),
        EvalMode::KOrder(k) => exact::saidi_korder(net, k),
    }
}

/// Effect of adding `e` at uniform `p` (or the network's own p_fail).
pub fn evaluate_candidate(net: &Network, e: &CandidateEdge, p: Option<f64>, mode: EvalMode) -> Result<RiskDelta> {
    e.validate(net)?;
    let net = match p {
        Some(p) => net.with_uniform_p(p)?,
        None => net.clone(),
    };
    let s = chain_decomposition(&net);
    let roles = e.roles(&net, &s)?;
    let kind = kind_of(roles);
    let with = e.add_to(&net)?;
    let before = value(&net, mode)?;
    let after = value(&with, mode)?;
    let total = before - after;

    let low_order = risk::enumerate_min_cutsets(&net, 2)?;
    let mut per_cutset = Vec::new();
    if low_order.len() <= PER_CUTSET_LIMIT {
        for cs in low_order {
            let delta = risk_difference(&net, &cs.edges, e)?;
            if delta != 0.0 {
                per_cutset.push(CutsetDelta { cutset: cs, delta });
            }
        }
        per_cutset.sort_by(|a, b| b.delta.total_cmp(&a.delta).then_with(|| a.cutset.cmp(&b.cutset)));
        per_cutset.truncate(PER_CUTSET_KEEP);
    }

    let mean_p = |k: usize| -> f64 {
        let c = &s.decomp.chains[k];
        c.edges.iter().map(|&i| s.graph.edges[i].p).sum::<f64>() / c.edges.len() as f64
    };
    let mut inter = Vec::new();
    match roles {
        (Role::Chain(k1, i1), Role::Chain(k2, i2)) if k1 != k2 => {
            for (k, i) in [(k1, i1), (k2, i2)] {
                let c = s.decomp.chains[k].c();
                let coeff = f2(c) - f2(i + 1) - f2(c - i - 1);
                inter.push(InterDelta { chain: s.chains[k].id.clone(), delta: coeff * mean_p(k).powi(2) });
            }
        }
        (Role::Chain(k, i1), Role::Chain(_, i2)) => {
            let (i, j) = (i1.min(i2) + 1, i1.max(i2) + 1);
            let coeff = inter_risk_delta_inter_chain(&net, &s.chains[k].id, i, j)?;
            inter.push(InterDelta { chain: s.chains[k].id.clone(), delta: coeff * mean_p(k).powi(2) });
        }
        _ => {}
    }
    let (effectiveness, unbounded) = if e.cost > 0.0 { (Some(total / e.cost), false) } else { (None, total > 0.0) };
    Ok(RiskDelta {
        candidate: e.clone(),
        kind,
        mode,
        saidi_before: before,
        saidi_after: after,
        total,
        per_cutset,
        inter,
        effectiveness,
        unbounded,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlanStep {
    pub delta: RiskDelta,
    pub spent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Plan {
    pub steps: Vec<PlanStep>,
    pub saidi_before: f64,
    pub saidi_after: f64,
    pub budget: f64,
    pub spent: f64,
}

/// Greedy selection: take the most cost-effective affordable candidate
/// with a positive reduction, commit it, re-evaluate the rest, repeat.
/// Ties go to the smaller candidate id.
pub fn suggest_edges(
    net: &Network,
    candidates: &[CandidateEdge],
    budget: f64,
    p: Option<f64>,
    mode: EvalMode,
) -> Result<Plan> {
    for c in candidates {
        c.validate(net)?;
    }
    if budget.is_nan() || budget < 0.0 {
        return Err(Error::arg("budget must be >= 0"));
    }
    let mut cur = match p {
        Some(p) => net.with_uniform_p(p)?,
        None => net.clone(),
    };
    let start = value(&cur, mode)?;
    let mut left: Vec<CandidateEdge> = candidates.to_vec();
    left.sort_by(|a, b| a.id.cmp(&b.id));
    let mut steps = Vec::new();
    let mut spent = 0.0;
    loop {
        let affordable: Vec<&CandidateEdge> = left.iter().filter(|c| spent + c.cost <= budget).collect();
        if affordable.is_empty() {
            break;
        }
        let mut best: Option<RiskDelta> = None;
        for c in affordable {
            let d = quick_delta(&cur, c, mode)?;
            if d.total <= 0.0 {
                continue;
            }
            if best.as_ref().is_none_or(|b| d.rank() > b.rank()) {
                best = Some(d);
            }
        }
        let Some(chosen) = best else { break };
        spent += chosen.candidate.cost;
        cur = chosen.candidate.add_to(&cur)?;
        left.retain(|c| c.id != chosen.candidate.id);
        steps.push(PlanStep { delta: chosen, spent });
    }
    let end = value(&cur, mode)?;
    Ok(Plan { steps, saidi_before: start, saidi_after: end, budget, spent })
}

/// evaluate_candidate without the per-cut-set breakdown
fn quick_delta(net: &Network, e: &CandidateEdge, mode: EvalMode) -> Result<RiskDelta> {
    let before = value(net, mode)?;
    let after = value(&e.add_to(net)?, mode)?;
    let total = before - after;
    let (effectiveness, unbounded) = if e.cost > 0.0 { (Some(total / e.cost), false) } else { (None, total > 0.0) };
    Ok(RiskDelta {
        candidate: e.clone(),
        kind: e.kind(net)?,
        mode,
        saidi_before: before,
        saidi_after: after,
        total,
        per_cutset: Vec::new(),
        inter: Vec::new(),
        effectiveness,
        unbounded,
    })
}

/// Best single candidate by exhaustive evaluation.
pub fn optimal_edge(net: &Network, candidates: &[CandidateEdge], p: Option<f64>, mode: EvalMode) -> Result<Option<RiskDelta>> {
    let mut best: Option<RiskDelta> = None;
    for c in candidates {
        let d = evaluate_candidate(net, c, p, mode)?;
        if best.as_ref().is_none_or(|b| d.total > b.total) {
            best = Some(d);
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridPlan {
    pub rows: usize,
    pub cols: usize,
    /// rows of the redundant edges in each column gap
    pub placements: Vec<Vec<usize>>,
    /// sum over chains of c(c+1)(c+2)/6
    pub score: u128,
}

fn tri(c: i64) -> u128 {
    let c = c as u128;
    c * (c + 1) * (c + 2) / 6
}

/// Score of one column given the rows where redundant edges attach.
fn column_score(rows: usize, cols: usize, col: usize, attach: &mut Vec<usize>) -> u128 {
    attach.sort_unstable();
    attach.dedup();
    // the corner columns continue around their non-source corner
    let lo: i64 = if col == cols - 1 && col != 0 { -1 } else { 0 };
    let hi: i64 = if col == 0 && cols > 1 { rows as i64 } else { rows as i64 - 1 };
    let mut prev = lo;
    let mut total = 0;
    for &r in attach.iter() {
        total += tri(r as i64 - prev - 1);
        prev = r as i64;
    }
    total + tri(hi - prev - 1)
}

fn check_grid(rows: usize, cols: usize, edges_per_gap: &[usize]) -> Result<()> {
    if rows < 3 || cols < 2 {
        return Err(Error::arg("grid needs rows >= 3 and cols >= 2"));
    }
    if edges_per_gap.len() != cols - 1 {
        return Err(Error::arg(format!("need {} gap budgets, got {}", cols - 1, edges_per_gap.len())));
    }
    if let Some(&k) = edges_per_gap.iter().find(|&&k| k > rows - 2) {
        return Err(Error::arg(format!("{k} edges do not fit in {} interior rows", rows - 2)));
    }
    Ok(())
}

/// Sum of ring second coefficients over the grid's chains for the given
/// redundant-edge rows. Horizontal chains have no interior and add 0.
pub fn grid_score(rows: usize, cols: usize, placements: &[Vec<usize>]) -> Result<u128> {
    let k: Vec<usize> = placements.iter().map(|g| g.len()).collect();
    check_grid(rows, cols, &k)?;
    for &r in placements.iter().flatten() {
        if r == 0 || r + 1 >= rows {
            return Err(Error::arg("redundant edges go on interior rows"));
        }
    }
    Ok((0..cols)
        .map(|c| {
            let mut a: Vec<usize> = Vec::new();
            if c > 0 {
                a.extend(&placements[c - 1]);
            }
            if c + 1 < cols {
                a.extend(&placements[c]);
            }
            column_score(rows, cols, c, &mut a)
        })
        .sum())
}

fn gap_configs(rows: usize, k: usize) -> Vec<Vec<usize>> {
    subsets(rows - 2, k).map(|s| s.into_iter().map(|r| r + 1).collect()).collect()
}

/// Dynamic program over column gaps: the state is the edge configuration
/// of the current gap, and each column's score depends only on its two
/// neighbouring gaps.
pub fn grid_dp(rows: usize, cols: usize, edges_per_gap: &[usize]) -> Result<GridPlan> {
    check_grid(rows, cols, edges_per_gap)?;
    let confs: Vec<Vec<Vec<usize>>> = edges_per_gap.iter().map(|&k| gap_configs(rows, k)).collect();
    let gaps = cols - 1;
    let mut best: Vec<u128> = confs[0]
        .iter()
        .map(|c| column_score(rows, cols, 0, &mut c.clone()))
        .collect();
    let mut back: Vec<Vec<usize>> = Vec::with_capacity(gaps);
    for g in 1..gaps {
        let mut next = Vec::with_capacity(confs[g].len());
        let mut arg = Vec::with_capacity(confs[g].len());
        for cur in &confs[g] {
            let (i, v) = confs[g - 1]
                .iter()
                .enumerate()
                .map(|(i, prev)| {
                    let mut a: Vec<usize> = prev.iter().chain(cur).copied().collect();
                    (i, best[i] + column_score(rows, cols, g, &mut a))
                })
                .min_by_key(|&(i, v)| (v, i))
                .unwrap();
            next.push(v);
            arg.push(i);
        }
        back.push(arg);
        best = next;
    }
    let (mut at, score) = confs[gaps - 1]
        .iter()
        .enumerate()
        .map(|(i, c)| (i, best[i] + column_score(rows, cols, cols - 1, &mut c.clone())))
        .min_by_key(|&(i, v)| (v, i))
        .unwrap();
    let mut placements = vec![Vec::new(); gaps];
    for g in (0..gaps).rev() {
        placements[g] = confs[g][at].clone();
        if g > 0 {
            at = back[g - 1][at];
        }
    }
    Ok(GridPlan { rows, cols, placements, score })
}

/// Minimum over every placement; for checking the program.
pub fn grid_exhaustive(rows: usize, cols: usize, edges_per_gap: &[usize]) -> Result<GridPlan> {
    check_grid(rows, cols, edges_per_gap)?;
    let confs: Vec<Vec<Vec<usize>>> = edges_per_gap.iter().map(|&k| gap_configs(rows, k)).collect();
    let mut idx = vec![0usize; confs.len()];
    let mut best: Option<GridPlan> = None;
    loop {
        let placements: Vec<Vec<usize>> = idx.iter().zip(&confs).map(|(&i, c)| c[i].clone()).collect();
        let score = grid_score(rows, cols, &placements)?;
        if best.as_ref().is_none_or(|b| score < b.score) {
            best = Some(GridPlan { rows, cols, placements, score });
        }
        let mut g = 0;
        loop {
            if g == idx.len() {
                return Ok(best.unwrap());
            }
            idx[g] += 1;
            if idx[g] < confs[g].len() {
                break;
            }
            idx[g] = 0;
            g += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub bridges: Vec<EdgeId>,
    pub hubs: usize,
    pub chains: usize,
    /// structure-graph degree -> number of hubs
    pub degree_histogram: BTreeMap<usize, usize>,
    pub three_regular: bool,
    pub three_connected: bool,
    pub super_three_connected: bool,
    pub chain_length_min: Option<usize>,
    pub chain_length_max: Option<usize>,
    pub chain_length_spread: Option<usize>,
    pub violations: Vec<Violation>,
    pub passed: bool,
}

/// Check a network against the design rules: bridgeless, 3-regular and
/// super 3-connected structure graph, chain lengths within one.
pub fn design_rule_audit(net: &Network) -> Result<AuditReport> {
    let s = chain_decomposition(net);
    let bridges = net.bridges();
    let degrees = s.hub_degrees();
    let mut degree_histogram = BTreeMap::new();
    for (_, d) in &degrees {
        *degree_histogram.entry(*d).or_insert(0) += 1;
    }
    let three_regular = !degrees.is_empty() && degrees.iter().all(|(_, d)| *d == 3);
    let sn = s.as_network();
    let three_connected = sn.connectivity() >= 3;
    let super_three_connected = three_connected && sn.is_super_k_connected(3);
    let lens = s.chain_lengths();
    let (lo, hi) = (lens.iter().min().copied(), lens.iter().max().copied());
    let spread = lo.zip(hi).map(|(a, b)| b - a);

    let mut violations = Vec::new();
    let mut flag = |ok: bool, rule: &str, detail: String| {
        if !ok {
            violations.push(Violation { rule: rule.into(), detail });
        }
    };
    flag(
        bridges.is_empty(),
        "bridgeless",
        format!("{} bridge(s): {}", bridges.len(), bridges.iter().map(|b| b.as_str()).collect::<Vec<_>>().join(", ")),
    );
    flag(three_regular, "3-regular structure graph", format!("hub degrees {degree_histogram:?}"));
    flag(three_connected, "3-connected structure graph", format!("edge connectivity {}", sn.connectivity()));
    flag(
        super_three_connected,
        "super 3-connected structure graph",
        "some 3-edge cut separates more than one hub".into(),
    );
    flag(
        spread.is_some_and(|d| d <= 1),
        "equal chain lengths",
        match (lo, hi) {
            (Some(lo), Some(hi)) => format!("chain lengths range {lo}..{hi}"),
            _ => "no chains".into(),
        },
    );
    let passed = violations.is_empty();
    Ok(AuditReport {
        bridges,
        hubs: s.hubs.len(),
        chains: s.chains.len(),
        degree_histogram,
        three_regular,
        three_connected,
        super_three_connected,
        chain_length_min: lo,
        chain_length_max: hi,
        chain_length_spread: spread,
        violations,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{grid, k_rings, ring, GridPattern, KRingVariant};

    #[test]
    fn chain_to_chain_midpoint() {
        let net = k_rings(20, 2, KRingVariant::AtSource, 0.01).unwrap();
        let (a, b) = inter_risk_delta_chain_to_chain(&net, "c1", 5, "c2", 5).unwrap();
        assert_eq!((a, b), (150.0, 150.0));
        assert_eq!(inter_risk_delta_chain_to_chain(&net, "c1", 10, "c2", 0).unwrap(), (0.0, 0.0));
        assert_eq!(inter_risk_delta_inter_chain(&net, "c1", 0, 6).unwrap(), 150.0);
        assert_eq!(inter_risk_delta_inter_chain(&net, "c1", 3, 3).unwrap(), 0.0);
    }

    #[test]
    fn kinds() {
        let net = ring(4, 0.1).unwrap();
        let e = CandidateEdge::new("x", "v1", "v3", 0.1, 1.0);
        assert_eq!(e.kind(&net).unwrap(), EdgeKind::InterChain);
        let e = CandidateEdge::new("x", "s", "v2", 0.1, 1.0);
        assert_eq!(e.kind(&net).unwrap(), EdgeKind::HubToChain);
    }

    #[test]
    fn grid_score_matches_structure() {
        for (rows, cols) in [(5, 2), (6, 3), (7, 4), (9, 5)] {
            for pat in [GridPattern::Basic, GridPattern::MiddleRow, GridPattern::ThirdRow] {
                let net = grid(rows, cols, &pat, 0.1).unwrap();
                let s = chain_decomposition(&net);
                let direct: u128 = s.chain_lengths().iter().map(|&c| tri(c as i64)).sum();
                let pl = pat.placements(rows, cols).unwrap();
                assert_eq!(grid_score(rows, cols, &pl).unwrap(), direct, "{rows}x{cols} {pat:?}");
            }
        }
    }

    #[test]
    fn grid_dp_small() {
        let dp = grid_dp(6, 4, &[1, 1, 1]).unwrap();
        let ex = grid_exhaustive(6, 4, &[1, 1, 1]).unwrap();
        assert_eq!(dp.score, ex.score);
        assert_eq!(grid_score(6, 4, &dp.placements).unwrap(), dp.score);
        assert!(grid_dp(4, 3, &[3, 0]).is_err());
    }

    #[test]
    fn audit_ring_and_tree() {
        let r = design_rule_audit(&ring(6, 0.1).unwrap()).unwrap();
        assert!(!r.three_regular && !r.passed);
        let t = design_rule_audit(&crate::generators::path(3, 0.1).unwrap()).unwrap();
        assert_eq!(t.bridges.len(), 3);
    }
}
