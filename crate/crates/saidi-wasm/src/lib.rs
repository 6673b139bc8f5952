//! Three calls for the demo page. Each takes and returns JSON text; the
//! plain functions are what the tests use, the exported ones wrap them.

use saidi::generators::{k_rings, ring, KRingVariant};
use saidi::io::{to_report_json, NetworkDocument};
use saidi::planner::{evaluate_candidate, CandidateEdge, EvalMode};
use saidi::report::{curve, risks};
use serde_json::json;
use wasm_bindgen::prelude::*;

type Out = Result<String, String>;

fn err(e: saidi::Error) -> String {
    e.to_string()
}

/// Exact and third-order SAIDI of `k` rings sharing the source, `n`
/// consumers in all, at `points` values of p up to `p_max`.
pub fn ring_curve_json(n: usize, k: usize, p_max: f64, points: usize) -> Out {
    let net = if k <= 1 { ring(n, 0.0) } else { k_rings(n, k, KRingVariant::AtSource, 0.0) }.map_err(err)?;
    let exact = curve(&net, 0.0, p_max, points, EvalMode::Exact).map_err(err)?;
    let approx = curve(&net, 0.0, p_max, points, EvalMode::KOrder(3)).map_err(err)?;
    let rows: Vec<_> = exact
        .iter()
        .zip(&approx)
        .map(|(e, a)| json!({ "p": e.p, "exact": e.normalized, "third_order": a.normalized }))
        .collect();
    Ok(to_report_json(&rows).to_string())
}

fn network(doc: &str) -> Result<saidi::Network, String> {
    NetworkDocument::from_json(doc).and_then(|d| d.to_network()).map_err(err)
}

/// Largest cut-set risks at uniform `p`.
pub fn top_risks_json(doc: &str, p: f64, top: usize) -> Out {
    let rows = risks(&network(doc)?, Some(p), top, 3).map_err(err)?;
    Ok(to_report_json(&rows).to_string())
}

/// Effect of one extra edge at uniform `p`.
pub fn what_if_json(doc: &str, u: &str, v: &str, p: f64) -> Out {
    let net = network(doc)?;
    let cand = CandidateEdge::new(net.fresh_edge_id("new").0, u, v, p, 1.0);
    let d = evaluate_candidate(&net, &cand, Some(p), EvalMode::Exact).map_err(err)?;
    Ok(to_report_json(&d).to_string())
}

#[wasm_bindgen]
pub fn ring_curve(n: usize, k: usize, p_max: f64, points: usize) -> Result<String, JsError> {
    ring_curve_json(n, k, p_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn top_risks(doc: &str, p: f64, top: usize) -> Result<String, JsError> {
    top_risks_json(doc, p, top).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn what_if(doc: &str, u: &str, v: &str, p: f64) -> Result<String, JsError> {
    what_if_json(doc, u, v, p).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    const RING3: &str = include_str!("../../../data/ring3.json");

    #[test]
    fn curve_rows() {
        let v: Value = serde_json::from_str(&ring_curve_json(3, 1, 0.2, 3).unwrap()).unwrap();
        assert_eq!(v[1]["exact"], 0.0301);
        assert_eq!(v[0]["third_order"], 0.0);
        let v: Value = serde_json::from_str(&ring_curve_json(12, 3, 0.1, 5).unwrap()).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 5);
        assert!(ring_curve_json(2, 3, 0.1, 5).is_err());
    }

    #[test]
    fn risks_and_what_if() {
        let v: Value = serde_json::from_str(&top_risks_json(RING3, 0.1, 2).unwrap()).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 2);
        let v: Value = serde_json::from_str(&what_if_json(RING3, "s", "v2", 0.1).unwrap()).unwrap();
        assert!(v["total"].as_f64().unwrap() > 0.0);
        assert!(what_if_json(RING3, "s", "nope", 0.1).unwrap_err().contains("nope"));
        assert!(top_risks_json("{}", 0.1, 2).is_err());
    }
}
