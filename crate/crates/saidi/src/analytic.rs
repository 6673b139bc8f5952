//! Closed forms for trees, paths and rings, plus small combinatorial helpers.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::network::{EdgeId, Network};
use crate::poly::{binom, q_int, ReliabilityPolynomial, Value, Q};
use num_bigint::BigInt;
use num_traits::Zero;

/// Rooted tree view: parent edge and depth order for every node.
struct Tree {
    parent: Vec<Option<(usize, usize)>>,
    order: Vec<usize>,
}

fn as_tree(g: &Graph) -> Result<Tree> {
    if g.edges.iter().any(|e| e.is_loop()) || g.m() + 1 != g.n() || !g.is_connected() {
        return Err(Error::NotATree);
    }
    let adj = g.adjacency();
    let mut parent = vec![None; g.n()];
    let mut seen = vec![false; g.n()];
    let mut order = vec![g.source];
    seen[g.source] = true;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        for &(y, ei) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some((x, ei));
                order.push(y);
            }
        }
    }
    Ok(Tree { parent, order })
}

/// Equal-probability SAIDI polynomial of a tree: sum_v w_v (1 - q^depth(v)).
pub fn saidi_tree(tree: &Network) -> Result<ReliabilityPolynomial> {
    let g = tree.graph();
    let t = as_tree(&g)?;
    let mut depth = vec![0usize; g.n()];
    let mut out = ReliabilityPolynomial::default();
    for &v in t.order.iter().skip(1) {
        let (par, _) = t.parent[v].unwrap();
        depth[v] = depth[par] + 1;
        let q_pow = (0..depth[v]).fold(ReliabilityPolynomial::one(), |acc, _| acc * ReliabilityPolynomial::q());
        let w = crate::poly::q_from_f64(g.weight[v]);
        out = out + (ReliabilityPolynomial::one() - q_pow).scale(&w);
    }
    Ok(out)
}

/// General-model tree SAIDI using each edge's own p_fail.
pub fn saidi_tree_value(tree: &Network) -> Result<f64> {
    let g = tree.graph();
    let t = as_tree(&g)?;
    let mut reach = vec![1.0; g.n()];
    let mut total = 0.0;
    for &v in t.order.iter().skip(1) {
        let (par, ei) = t.parent[v].unwrap();
        reach[v] = reach[par] * (1.0 - g.edges[ei].p);
        total += g.weight[v] * (1.0 - reach[v]);
    }
    Ok(total)
}

/// Per-edge tree risks in edge order: (prod of q above e) * p_e * D_T(e).
fn tree_risks(g: &Graph) -> Result<Vec<f64>> {
    let t = as_tree(g)?;
    let mut reach = vec![1.0; g.n()];
    let mut below = g.weight.clone();
    below[g.source] = 0.0;
    for &v in t.order.iter().rev() {
        if let Some((par, _)) = t.parent[v] {
            let b = below[v];
            below[par] += b;
        }
    }
    let mut risk = vec![0.0; g.m()];
    for &v in t.order.iter().skip(1) {
        let (par, ei) = t.parent[v].unwrap();
        let p = g.edges[ei].p;
        risk[ei] = reach[par] * p * below[v];
        reach[v] = reach[par] * (1.0 - p);
    }
    Ok(risk)
}

pub fn tree_edge_risk(tree: &Network, e: &EdgeId) -> Result<f64> {
    let i = tree.edge_index(e)?;
    Ok(tree_risks(&tree.graph())?[i])
}

/// First-order tree value sum_e p_e D_T(e).
pub fn tree_first_order(tree: &Network) -> Result<f64> {
    let g = tree.graph();
    let t = as_tree(&g)?;
    let mut below = g.weight.clone();
    below[g.source] = 0.0;
    let mut total = 0.0;
    for &v in t.order.iter().rev() {
        if let Some((par, ei)) = t.parent[v] {
            total += g.edges[ei].p * below[v];
            let b = below[v];
            below[par] += b;
        }
    }
    Ok(total)
}

/// Path of n consumers hanging from the source, equal weights and p.
pub fn saidi_path_equal(n: usize) -> Result<ReliabilityPolynomial> {
    if n < 1 {
        return Err(Error::arg("path needs n >= 1"));
    }
    let mut c = vec![Q::zero(); n + 1];
    for (k, ck) in c.iter_mut().enumerate().skip(1) {
        let v = Q::from_integer(binom(n + 1, k + 1));
        *ck = if k % 2 == 1 { v } else { -v };
    }
    Ok(ReliabilityPolynomial::new(c))
}

/// Ring of n consumers and n+1 edges through the source, equal model.
pub fn saidi_ring_equal(n: usize) -> Result<ReliabilityPolynomial> {
    if n < 1 {
        return Err(Error::arg("ring needs n >= 1"));
    }
    let mut c = vec![Q::zero(); n + 2];
    for (k, ck) in c.iter_mut().enumerate().skip(2) {
        let v = Q::from_integer(BigInt::from(k - 1) * binom(n + 2, k + 1));
        *ck = if k % 2 == 0 { v } else { -v };
    }
    Ok(ReliabilityPolynomial::new(c))
}

/// Normalized ring SAIDI in closed form: 1 + q^(n+1) - (2/n) q (1 - q^n) / p.
pub fn ring_equal_normalized(n: usize, p: f64) -> f64 {
    if p == 0.0 {
        return 0.0;
    }
    let q = 1.0 - p;
    let nf = n as f64;
    1.0 + q.powi(n as i32 + 1) - 2.0 / nf * q * (1.0 - q.powi(n as i32)) / p
}

/// Normalized ring SAIDI as the direct sum (1/n) sum_k (1-q^k)(1-q^(n+1-k)).
pub fn ring_equal_normalized_sum(n: usize, p: f64) -> f64 {
    let q = 1.0 - p;
    (1..=n)
        .map(|k| (1.0 - q.powi(k as i32)) * (1.0 - q.powi((n + 1 - k) as i32)))
        .sum::<f64>()
        / n as f64
}

/// Second-order coefficient of the normalized ring SAIDI: (n^2+3n+2)/6.
pub fn ring_leading_coefficient(n: usize) -> Q {
    let n = n as i64;
    Q::new((n * n + 3 * n + 2).into(), 6.into())
}

/// Second-order coefficient of the total ring SAIDI with c consumers:
/// (c^3 + 3c^2 + 2c)/6.
pub fn ring_second_coefficient(c: usize) -> Q {
    let c = c as i64;
    Q::new((c * c * c + 3 * c * c + 2 * c).into(), 6.into())
}

/// Same as [`ring_second_coefficient`] in floating point.
pub fn ring_second_coefficient_f64(c: usize) -> f64 {
    let c = c as f64;
    (c * c * c + 3.0 * c * c + 2.0 * c) / 6.0
}

/// Rooted path: sum_v w_v (1 - prod_{i<=v} q_i). `q[i]` joins node i-1 to node i.
pub fn path_general<V: Value>(w: &[V], q: &[V]) -> V {
    let mut reach = V::one();
    let mut total = V::zero();
    for (wi, qi) in w.iter().zip(q) {
        reach = reach * qi;
        total = total + (V::one() - reach.clone()) * wi;
    }
    total
}

/// Ring through the source: `w` has n consumers, `q` has n+1 survival
/// probabilities; edge i joins node i-1 and node i (node 0 and n+1 are the source).
pub fn ring_general<V: Value>(w: &[V], q: &[V]) -> V {
    let n = w.len();
    assert_eq!(q.len(), n + 1, "ring with n consumers has n+1 edges");
    let mut suffix = vec![V::one(); n + 2];
    for i in (0..=n).rev() {
        suffix[i] = suffix[i + 1].clone() * &q[i];
    }
    let mut prefix = V::one();
    let mut total = V::zero();
    for v in 0..n {
        prefix = prefix * &q[v];
        let left = V::one() - prefix.clone();
        let right = V::one() - suffix[v + 1].clone();
        total = total + left * right * &w[v];
    }
    total
}

/// General-model ring SAIDI from weights and failure probabilities.
pub fn saidi_ring_general(weights: &[f64], probs: &[f64]) -> Result<f64> {
    if probs.len() != weights.len() + 1 {
        return Err(Error::arg(format!(
            "ring with {} consumers needs {} edge probabilities, got {}",
            weights.len(),
            weights.len() + 1,
            probs.len()
        )));
    }
    let q: Vec<f64> = probs.iter().map(|p| 1.0 - p).collect();
    Ok(ring_general(weights, &q))
}

/// Risk of the ring cut set {e_i, e_j}, edges numbered 1..=n+1.
pub fn ring_cutset_risk(weights: &[f64], probs: &[f64], i: usize, j: usize) -> Result<f64> {
    let n = weights.len();
    if probs.len() != n + 1 || i < 1 || i > j || j > n + 1 {
        return Err(Error::arg(format!("need 1 <= i <= j <= {}", n + 1)));
    }
    if i == j {
        return Ok(0.0);
    }
    let before: f64 = probs[..i - 1].iter().map(|p| 1.0 - p).product();
    let after: f64 = probs[j..].iter().map(|p| 1.0 - p).product();
    let d: f64 = weights[i - 1..j - 1].iter().sum();
    Ok(before * after * probs[i - 1] * probs[j - 1] * d)
}

/// ((n/k)^2 + 3(n/k) + 2) / (n^2 + 3n + 2), exact.
pub fn split_ring_ratio_exact(n: usize, k: usize) -> Result<Q> {
    if k == 0 || n == 0 {
        return Err(Error::arg("need n >= 1 and k >= 1"));
    }
    let x = Q::new(BigInt::from(n), BigInt::from(k));
    let num = x.clone() * &x + x * q_int(3) + q_int(2);
    let nn = q_int(n as i64);
    let den = nn.clone() * &nn + nn * q_int(3) + q_int(2);
    Ok(num / den)
}

pub fn split_ring_ratio(n: usize, k: usize) -> Result<f64> {
    split_ring_ratio_exact(n, k).map(|r| crate::poly::q_to_f64(&r))
}

/// k parts summing to c, differing by at most one, larger parts first.
pub fn balanced_partition(c: usize, k: usize) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(Error::arg("k must be >= 1"));
    }
    let (base, extra) = (c / k, c % k);
    Ok((0..k).map(|i| base + usize::from(i < extra)).collect())
}

/// (1/12) sum_i c_i (c_i+1)(c_i+2)(2n - (c_i+1)) for chain sizes c_i in a
/// network of n nodes.
pub fn pairwise_second_coeff(chains: &[usize], n: usize) -> Q {
    let sum: BigInt = chains
        .iter()
        .map(|&c| {
            let c = c as i64;
            BigInt::from(c * (c + 1) * (c + 2)) * BigInt::from(2 * n as i64 - (c + 1))
        })
        .sum();
    Q::new(sum, BigInt::from(12))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::NetworkBuilder;
    use crate::poly::q_to_f64;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn path_polynomials() {
        assert_eq!(saidi_path_equal(1).unwrap(), ReliabilityPolynomial::from_ints(&[0, 1]));
        assert_eq!(saidi_path_equal(2).unwrap(), ReliabilityPolynomial::from_ints(&[0, 3, -1]));
        assert_eq!(saidi_path_equal(3).unwrap(), ReliabilityPolynomial::from_ints(&[0, 6, -4, 1]));
    }

    #[test]
    fn ring_small_values() {
        assert!(close(saidi_ring_equal(1).unwrap().eval(0.1), 0.01));
        assert!(close(ring_equal_normalized(3, 0.1), 0.0301));
        assert!(close(ring_equal_normalized_sum(3, 0.1), 0.0301));
        assert!(close(saidi_ring_equal(3).unwrap().eval(0.1), 0.0903));
        assert_eq!(ring_equal_normalized(5, 0.0), 0.0);
        assert_eq!(ring_leading_coefficient(3), Q::new(20.into(), 6.into()));
    }

    #[test]
    fn ring_general_cases() {
        let w = [1.0; 3];
        assert!(close(saidi_ring_general(&w, &[0.1; 4]).unwrap(), 0.0903));
        assert_eq!(saidi_ring_general(&w, &[0.0; 4]).unwrap(), 0.0);
        // an always-failing edge next to the source leaves a path
        let v = saidi_ring_general(&w, &[0.1, 0.1, 0.1, 1.0]).unwrap();
        assert!(close(v, saidi_path_equal(3).unwrap().eval(0.1)));
    }

    #[test]
    fn ring_cutsets_n2() {
        let (p, q) = (0.1, 0.9);
        let w = [1.0, 1.0];
        let pr = [p; 3];
        assert!(close(ring_cutset_risk(&w, &pr, 1, 3).unwrap(), 2.0 * p * p));
        assert!(close(ring_cutset_risk(&w, &pr, 1, 2).unwrap(), q * p * p));
        let total: f64 = [(1, 2), (1, 3), (2, 3)]
            .iter()
            .map(|&(i, j)| ring_cutset_risk(&w, &pr, i, j).unwrap())
            .sum();
        assert!(close(total, 2.0 * p * p * (1.0 + q)));
    }

    #[test]
    fn trees() {
        let star = NetworkBuilder::new()
            .source("s")
            .node("a", 1.0)
            .node("b", 1.0)
            .node("c", 1.0)
            .edge("e1", "s", "a", 0.1)
            .edge("e2", "s", "b", 0.1)
            .edge("e3", "s", "c", 0.1)
            .build()
            .unwrap();
        assert_eq!(saidi_tree(&star).unwrap(), ReliabilityPolynomial::from_ints(&[0, 3]));
        let path = NetworkBuilder::new()
            .source("s")
            .node("a", 1.0)
            .node("b", 1.0)
            .edge("e1", "s", "a", 0.1)
            .edge("e2", "a", "b", 0.1)
            .build()
            .unwrap();
        assert!(close(saidi_tree(&path).unwrap().eval(0.1), 0.29));
        assert!(close(saidi_tree_value(&path).unwrap(), 0.29));
        assert!(close(tree_edge_risk(&path, &"e2".into()).unwrap(), 0.09));
        let sum = tree_edge_risk(&path, &"e1".into()).unwrap() + tree_edge_risk(&path, &"e2".into()).unwrap();
        assert!(close(sum, 0.29));
        assert!(close(tree_first_order(&path).unwrap(), 0.3));
        assert!(close(tree_edge_risk(&star, &"e1".into()).unwrap(), 0.1));
    }

    #[test]
    fn non_tree_rejected() {
        let tri = NetworkBuilder::new()
            .source("s")
            .node("a", 1.0)
            .node("b", 1.0)
            .edge("e1", "s", "a", 0.1)
            .edge("e2", "a", "b", 0.1)
            .edge("e3", "b", "s", 0.1)
            .build()
            .unwrap();
        assert!(matches!(saidi_tree(&tri), Err(Error::NotATree)));
    }

    #[test]
    fn ratios_and_partitions() {
        let r = split_ring_ratio_exact(120, 2).unwrap();
        assert_eq!(r, Q::new(3782.into(), 14762.into()));
        assert!((split_ring_ratio(120, 2).unwrap() - 0.25623).abs() < 1e-4);
        assert_eq!(split_ring_ratio_exact(7, 1).unwrap(), q_int(1));
        assert_eq!(balanced_partition(7, 3).unwrap(), vec![3, 2, 2]);
        assert_eq!(balanced_partition(6, 3).unwrap(), vec![2, 2, 2]);
        assert!(balanced_partition(3, 0).is_err());
    }

    #[test]
    fn pairwise_coefficients() {
        assert_eq!(pairwise_second_coeff(&[2], 3), q_int(6));
        assert_eq!(pairwise_second_coeff(&[1], 50), q_int(49));
        assert_eq!(pairwise_second_coeff(&[0], 50), Q::zero());
        assert!(q_to_f64(&ring_second_coefficient(2)) == 4.0);
    }
}
