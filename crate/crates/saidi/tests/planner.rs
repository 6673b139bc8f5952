mod common;

use common::{close, random_net, rng};
use rand::Rng;
use saidi::generators::{cubic_structure, grid, k_rings, subdivide_equal, CubicFamily, GridPattern, KRingVariant};
use saidi::planner::*;
use saidi::risk::ric;
use saidi::structure::chain_decomposition;
use saidi::{EdgeId, Network, NodeId};

fn all_bonds(net: &Network) -> Vec<Vec<EdgeId>> {
    let ids: Vec<EdgeId> = net.edges().iter().map(|e| e.id.clone()).collect();
    (1u32..1 << ids.len())
        .map(|mask| (0..ids.len()).filter(|i| mask >> i & 1 == 1).map(|i| ids[i].clone()).collect::<Vec<_>>())
        .filter(|x| ric(net, x).is_ok())
        .collect()
}

fn random_candidate(r: &mut impl Rng, net: &Network) -> CandidateEdge {
    let nodes: Vec<NodeId> = net.nodes().iter().map(|n| n.id.clone()).collect();
    let u = nodes[r.gen_range(0..nodes.len())].clone();
    let v = nodes[r.gen_range(0..nodes.len())].clone();
    CandidateEdge::new("new", u, v, r.gen_range(0.0..0.6), 1.0)
}

#[test]
fn risk_difference_matches_recomputation() {
    let mut r = rng(11);
    for case in 0..60 {
        let net = random_net(&mut r, 6, 10);
        let e = random_candidate(&mut r, &net);
        let with = e.add_to(&net).unwrap();
        let new_id = with.edges().iter().find(|x| net.edge(&x.id).is_none()).unwrap().id.clone();
        for x in all_bonds(&net) {
            let d = risk_difference(&net, &x, &e).unwrap();
            let before = ric(&net, &x).unwrap().risk;
            let after = match ric(&with, &x) {
                Ok(rec) => rec.risk,
                Err(_) => {
                    let mut y = x.clone();
                    y.push(new_id.clone());
                    ric(&with, &y).unwrap().risk
                }
            };
            assert!(close(d, before - after, 1e-10), "case {case} {x:?}: {d} vs {}\n{net:?}\n{e:?}", before - after);
        }
    }
}

fn prism(p: f64) -> Network {
    let s = cubic_structure(CubicFamily::TwoConnectedRings { h: 6 }).unwrap();
    subdivide_equal(&s, 6 + 9 * 3, p).unwrap()
}

fn hub_cut(net: &Network, hub: &str) -> Vec<String> {
    let s = chain_decomposition(net);
    s.chains
        .iter()
        .filter(|c| c.endpoints.0.as_str() == hub || c.endpoints.1.as_str() == hub)
        .map(|c| c.id.clone())
        .collect()
}

#[test]
fn closed_forms_against_exact() {
    let net = prism(1e-3);
    let cut = hub_cut(&net, "h1");
    // c1 = s..h1 over x1..x3, c4 = h1..h2 over x10..x12
    let cases = [("x1", "x3", EdgeKind::InterChain), ("x2", "x11", EdgeKind::ChainToChain), ("x1", "x12", EdgeKind::ChainToChain), ("x2", "h1", EdgeKind::HubToChain)];
    for (u, v, kind) in cases {
        let e = CandidateEdge::new("new", u, v, 1e-3, 1.0);
        assert_eq!(e.kind(&net).unwrap(), kind);
        let exact = structural_risk_delta(&net, &cut, &e).unwrap();
        let closed = structural_risk_delta_closed(&net, &cut, &e, ClosedForm::Corrected).unwrap();
        assert!(close(exact, closed, 1e-3), "{u}-{v}: {closed} vs {exact}");
        if kind == EdgeKind::ChainToChain {
            let unc = structural_risk_delta_closed(&net, &cut, &e, ClosedForm::Uncorrected).unwrap();
            assert!(unc > 1.8 * exact, "{u}-{v}: {unc} vs {exact}");
        }
    }
    // hub to hub across the cut
    let e = CandidateEdge::new("new", "s", "h1", 1e-3, 1.0);
    let exact = structural_risk_delta(&net, &cut, &e).unwrap();
    let closed = structural_risk_delta_closed(&net, &cut, &e, ClosedForm::Corrected).unwrap();
    assert!(close(exact, closed, 1e-9));
}

#[test]
fn inter_chain_midpoint_is_best() {
    let net = k_rings(20, 2, KRingVariant::AtSource, 1e-3).unwrap();
    let best = (0..=11)
        .flat_map(|i| (i..=11).map(move |j| (i, j)))
        .max_by(|a, b| {
            let fa = inter_risk_delta_inter_chain(&net, "c1", a.0, a.1).unwrap();
            let fb = inter_risk_delta_inter_chain(&net, "c1", b.0, b.1).unwrap();
            fa.total_cmp(&fb)
        })
        .unwrap();
    assert!(best == (0, 6) || best == (5, 11), "{best:?}");
}

#[test]
fn greedy_respects_budget() {
    let net = k_rings(9, 2, KRingVariant::AtSource, 0.05).unwrap();
    let cands = vec![
        CandidateEdge::new("a", "v2", "v7", 0.05, 2.0),
        CandidateEdge::new("b", "v1", "v4", 0.05, 1.0),
        CandidateEdge::new("c", "s", "v5", 0.05, 5.0),
        CandidateEdge::new("d", "v3", "v3", 0.05, 0.5),
    ];
    let plan = suggest_edges(&net, &cands, 3.0, None, EvalMode::Exact).unwrap();
    assert!(plan.spent <= 3.0);
    assert!(plan.steps.iter().all(|s| s.delta.total > 0.0));
    assert!(plan.steps.iter().all(|s| s.delta.candidate.id != "d"));
    assert!(plan.saidi_after < plan.saidi_before);
    let zero = suggest_edges(&net, &cands, 0.0, None, EvalMode::Exact).unwrap();
    assert!(zero.steps.is_empty());
    let free = [CandidateEdge::new("f", "v2", "v7", 0.05, 0.0)];
    let d = evaluate_candidate(&net, &free[0], None, EvalMode::Exact).unwrap();
    assert!(d.unbounded && d.effectiveness.is_none());
    let approx = evaluate_candidate(&net, &cands[0], None, EvalMode::KOrder(3)).unwrap();
    assert!(close(approx.total, evaluate_candidate(&net, &cands[0], None, EvalMode::Exact).unwrap().total, 0.05));
}

#[test]
fn grid_program_matches_exhaustive() {
    for rows in 4..=7 {
        for cols in 2..=5 {
            for k in 0..=2.min(rows - 2) {
                let gaps = vec![k; cols - 1];
                let dp = grid_dp(rows, cols, &gaps).unwrap();
                let ex = grid_exhaustive(rows, cols, &gaps).unwrap();
                assert_eq!(dp.score, ex.score, "{rows}x{cols} k={k}");
            }
        }
    }
}

#[test]
fn audit_flags_rules() {
    let ok = prism(0.01);
    let report = design_rule_audit(&ok).unwrap();
    assert!(report.three_regular && report.three_connected);
    assert_eq!(report.chain_length_spread, Some(0));
    let g = grid(7, 4, &GridPattern::Basic, 0.01).unwrap();
    let report = design_rule_audit(&g).unwrap();
    assert!(!report.passed);
    assert!(report.violations.iter().any(|v| v.rule == "equal chain lengths"));
}
