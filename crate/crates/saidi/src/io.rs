//! JSON network documents. Unknown fields at any level are kept so a
//! document survives load and save unchanged.

use crate::error::{Error, Result};
use crate::network::{Edge, EdgeId, Network, Node, NodeId};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::collections::HashSet;
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: String,
    #[serde(default = "unit")]
    pub weight: f64,
    #[serde(default)]
    pub is_source: bool,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

fn unit() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: String,
    pub u: String,
    pub v: String,
    pub p_fail: f64,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// display positions by node id
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Map<String, Value>>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkDocument {
    pub schema_version: u32,
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<EdgeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

fn doc_err(path: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::Document { path: path.into(), msg: msg.into() }
}

impl NetworkDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: NetworkDocument = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            doc_err(if path == "." { "$".into() } else { path }, e.into_inner().to_string())
        })?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    /// Field-level checks with the offending path in the error.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(doc_err(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        let mut ids = HashSet::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if !ids.insert(n.id.as_str()) {
                return Err(doc_err(format!("nodes[{i}].id"), format!("duplicate node id `{}`", n.id)));
            }
            if !(n.weight.is_finite() && n.weight >= 0.0) {
                return Err(doc_err(format!("nodes[{i}].weight"), format!("{} is not a finite weight >= 0", n.weight)));
            }
        }
        if !self.nodes.iter().any(|n| n.is_source) {
            return Err(doc_err("nodes", "no node has is_source = true"));
        }
        let mut edge_ids = HashSet::new();
        for (i, e) in self.edges.iter().enumerate() {
            if !edge_ids.insert(e.id.as_str()) {
                return Err(doc_err(format!("edges[{i}].id"), format!("duplicate edge id `{}`", e.id)));
            }
            if !(0.0..=1.0).contains(&e.p_fail) {
                return Err(doc_err(format!("edges[{i}].p_fail"), format!("{} outside [0, 1]", e.p_fail)));
            }
            for (field, end) in [("u", &e.u), ("v", &e.v)] {
                if !ids.contains(end.as_str()) {
                    return Err(doc_err(format!("edges[{i}].{field}"), format!("unknown node `{end}`")));
                }
            }
        }
        Ok(())
    }

    pub fn to_network(&self) -> Result<Network> {
        self.validate()?;
        let nodes = self
            .nodes
            .iter()
            .map(|n| Node { id: NodeId(n.id.clone()), weight: n.weight, is_source: n.is_source })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { id: EdgeId(e.id.clone()), u: NodeId(e.u.clone()), v: NodeId(e.v.clone()), p_fail: e.p_fail })
            .collect();
        Network::new(nodes, edges)
    }

    pub fn from_network(net: &Network) -> Self {
        NetworkDocument {
            schema_version: SCHEMA_VERSION,
            nodes: net
                .nodes()
                .iter()
                .map(|n| NodeDoc { id: n.id.0.clone(), weight: n.weight, is_source: n.is_source, extra: Map::new() })
                .collect(),
            edges: net
                .edges()
                .iter()
                .map(|e| EdgeDoc { id: e.id.0.clone(), u: e.u.0.clone(), v: e.v.0.clone(), p_fail: e.p_fail, extra: Map::new() })
                .collect(),
            metadata: None,
            extra: Map::new(),
        }
    }

    /// Replace the topology with `net`, keeping document-level fields and
    /// the extras of nodes and edges whose ids survive.
    pub fn with_network(&self, net: &Network) -> Self {
        let mut out = NetworkDocument::from_network(net);
        out.metadata = self.metadata.clone();
        out.extra = self.extra.clone();
        for n in &mut out.nodes {
            if let Some(old) = self.nodes.iter().find(|o| o.id == n.id) {
                n.extra = old.extra.clone();
            }
        }
        for e in &mut out.edges {
            if let Some(old) = self.edges.iter().find(|o| o.id == e.id) {
                e.extra = old.extra.clone();
            }
        }
        out
    }
}

pub fn load_document(path: impl AsRef<Path>) -> Result<NetworkDocument> {
    NetworkDocument::from_json(&std::fs::read_to_string(path)?)
}

pub fn load(path: impl AsRef<Path>) -> Result<Network> {
    load_document(path)?.to_network()
}

pub fn save_document(doc: &NetworkDocument, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, doc.to_json())?;
    Ok(())
}

pub fn save(net: &Network, path: impl AsRef<Path>) -> Result<()> {
    save_document(&NetworkDocument::from_network(net), path)
}

/// Significant digits in every printed number.
pub const SIG_DIGITS: usize = 12;

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// `x` with [`SIG_DIGITS`] significant digits, like C's `%.12g`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mant, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-4..SIG_DIGITS as i32).contains(&exp) {
        trim_zeros(format!("{:.*}", (SIG_DIGITS as i32 - 1 - exp) as usize, x))
    } else {
        format!("{}e{exp}", trim_zeros(mant.to_string()))
    }
}

pub fn round_num(x: f64) -> f64 {
    fmt_num(x).parse().unwrap_or(x)
}

/// Round every float in a JSON tree to [`SIG_DIGITS`].
pub fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_num(n.as_f64().unwrap());
            if let Some(r) = serde_json::Number::from_f64(x) {
                *n = r;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_json),
        Value::Object(o) => o.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Serialize with floats rounded to [`SIG_DIGITS`].
pub fn to_report_json<T: Serialize>(x: &T) -> Value {
    let mut v = serde_json::to_value(x).expect("reports serialize");
    round_json(&mut v);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.0301), "0.0301");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(2.0), "2");
        assert_eq!(fmt_num(1.5e-7), "1.5e-7");
        assert_eq!(fmt_num(2.5e-5), "2.5e-5");
        assert_eq!(fmt_num(2.5e-4), "0.00025");
        assert_eq!(fmt_num(123456789012345.0), "1.23456789012e14");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(round_num(0.1 + 0.2), 0.3);
    }

    const RING: &str = r#"{
  "schema_version": 1,
  "nodes": [
    {"id": "s", "weight": 0, "is_source": true, "label": "feeder"},
    {"id": "v1", "weight": 1},
    {"id": "v2", "weight": 1}
  ],
  "edges": [
    {"id": "e1", "u": "s", "v": "v1", "p_fail": 0.1},
    {"id": "e2", "u": "v1", "v": "v2", "p_fail": 0.1, "length_km": 2.5},
    {"id": "e3", "u": "v2", "v": "s", "p_fail": 0.1}
  ],
  "metadata": {"name": "ring", "coordinates": {"s": [0, 0]}, "source_note": "x"},
  "owner": "ops"
}"#;

    #[test]
    fn round_trip_keeps_unknown_fields() {
        let doc = NetworkDocument::from_json(RING).unwrap();
        assert_eq!(doc.nodes[0].extra["label"], "feeder");
        assert_eq!(doc.extra["owner"], "ops");
        let again = NetworkDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(doc, again);
        assert_eq!(doc.to_network().unwrap().m(), 3);
    }

    #[test]
    fn errors_name_the_field() {
        let bad = RING.replace("\"p_fail\": 0.1, \"length_km\"", "\"p_fail\": 1.2, \"length_km\"");
        let err = NetworkDocument::from_json(&bad).unwrap_err().to_string();
        assert!(err.starts_with("edges[1].p_fail"), "{err}");
        let no_src = RING.replace("\"is_source\": true", "\"is_source\": false");
        let err = NetworkDocument::from_json(&no_src).unwrap_err().to_string();
        assert!(err.contains("is_source"), "{err}");
        let typo = RING.replace("\"weight\": 1}", "\"weight\": \"heavy\"}");
        let err = NetworkDocument::from_json(&typo).unwrap_err().to_string();
        assert!(err.starts_with("nodes[1].weight"), "{err}");
    }
}
