#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use saidi::{Network, NetworkBuilder};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random connected multigraph with at most `max_m` edges. Weights and
/// failure probabilities vary; some nets get a second source, a
/// self-loop or a parallel edge.
pub fn random_net(r: &mut ChaCha8Rng, max_n: usize, max_m: usize) -> Network {
    let n = r.gen_range(1..=max_n);
    let mut b = NetworkBuilder::new();
    b.add_source("s");
    let two_sources = r.gen_bool(0.15);
    if two_sources {
        b.add_source("t");
    }
    let name = |i: usize| if i == 0 { "s".to_string() } else { format!("v{i}") };
    for i in 1..=n {
        let w = if r.gen_bool(0.2) { 0.0 } else { r.gen_range(0.5..3.0) };
        b.add_node(name(i), w);
    }
    let mut m = 0;
    for i in 1..=n {
        let j = r.gen_range(0..i);
        b.add_edge(name(j), name(i), r.gen_range(0.0..0.6));
        m += 1;
    }
    if two_sources && m < max_m {
        b.add_edge("t", name(r.gen_range(1..=n)), r.gen_range(0.0..0.6));
        m += 1;
    }
    let extra = r.gen_range(0..=max_m.saturating_sub(m));
    for _ in 0..extra {
        let a = r.gen_range(0..=n);
        let c = r.gen_range(0..=n);
        b.add_edge(name(a), name(c), r.gen_range(0.0..0.6));
    }
    b.build().unwrap()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}
