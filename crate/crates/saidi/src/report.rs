//! The answers the CLI and the service hand out, computed one way so the
//! two always agree.

use crate::error::{Error, Result};
use crate::exact::{saidi, saidi_korder};
use crate::network::Network;
use crate::planner::EvalMode;
use crate::risk::{top_risks, RiskRecord};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Analysis {
    pub saidi: f64,
    /// saidi over the total consumer weight
    pub normalized: f64,
    #[serde(flatten)]
    pub mode: EvalMode,
    /// uniform p, or `None` for each edge's own p_fail
    pub p: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub p: f64,
    pub saidi: f64,
    pub normalized: f64,
}

pub fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("p = {p} outside [0, 1]")))
    }
}

fn at(net: &Network, p: Option<f64>) -> Result<Network> {
    match p {
        Some(p) => {
            check_p(p)?;
            net.with_uniform_p(p)
        }
        None => Ok(net.clone()),
    }
}

fn normalize(net: &Network, f: f64) -> f64 {
    let w = net.total_weight();
    if w > 0.0 {
        f / w
    } else {
        0.0
    }
}

pub fn analyze(net: &Network, p: Option<f64>, mode: EvalMode) -> Result<Analysis> {
    let net = at(net, p)?;
    let f = match mode {
        EvalMode::Exact => saidi(&net)?,
        EvalMode::KOrder(k) => saidi_korder(&net, k)?,
    };
    Ok(Analysis { saidi: f, normalized: normalize(&net, f), mode, p })
}

/// `points` evenly spaced values of p from `p_min` to `p_max`.
pub fn curve(net: &Network, p_min: f64, p_max: f64, points: usize, mode: EvalMode) -> Result<Vec<CurvePoint>> {
    check_p(p_min)?;
    check_p(p_max)?;
    if p_min > p_max {
        return Err(Error::InvalidArgument(format!("p-min {p_min} exceeds p-max {p_max}")));
    }
    if points == 0 {
        return Err(Error::InvalidArgument("need at least one point".into()));
    }
    (0..points)
        .map(|i| {
            let p = if points == 1 { p_min } else { p_min + (p_max - p_min) * i as f64 / (points - 1) as f64 };
            let a = analyze(net, Some(p), mode)?;
            Ok(CurvePoint { p, saidi: a.saidi, normalized: a.normalized })
        })
        .collect()
}

/// Largest cut-set risks, highest first.
pub fn risks(net: &Network, p: Option<f64>, top: usize, order: usize) -> Result<Vec<RiskRecord>> {
    top_risks(net, top, p, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::ring;

    #[test]
    fn ring3() {
        let a = analyze(&ring(3, 0.5).unwrap(), Some(0.1), EvalMode::Exact).unwrap();
        assert!((a.normalized - 0.0301).abs() < 1e-12);
        let c = curve(&ring(3, 0.5).unwrap(), 0.0, 0.2, 3, EvalMode::Exact).unwrap();
        assert_eq!(c[0].saidi, 0.0);
        assert!((c[1].normalized - 0.0301).abs() < 1e-12);
        assert!(curve(&ring(3, 0.5).unwrap(), 0.3, 0.2, 3, EvalMode::Exact).is_err());
        let j = serde_json::to_value(analyze(&ring(3, 0.1).unwrap(), None, EvalMode::KOrder(2)).unwrap()).unwrap();
        assert_eq!((j["mode"].as_str(), j["k"].as_u64()), (Some("k-order"), Some(2)));
    }
}
