use std::collections::BTreeSet;

use super::{Family, ProximityError, ProximityGraph};
use crate::rng::SimRng;

fn check_probability(name: &str, p: f64) -> Result<(), ProximityError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(ProximityError::InvalidParameter(format!(
            "{name} must lie in [0, 1], got {p}"
        )))
    }
}

/// G(n, p): every unordered pair is an edge independently with probability `p`.
pub fn er_random(n: usize, p: f64, seed: u64) -> Result<ProximityGraph, ProximityError> {
    if n == 0 {
        return Err(ProximityError::InvalidParameter(
            "n must be at least 1".into(),
        ));
    }
    check_probability("p", p)?;
    let mut rng = SimRng::new(seed);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.chance(p) {
                edges.push((a, b, 1.0));
            }
        }
    }
    Ok(ProximityGraph::from_edges(n, Family::Er, edges))
}

/// Ring lattice where each node links to its `k/2` nearest neighbours on
/// either side, then every lattice edge `(u, u+j)` is rewired with
/// probability `beta` to `(u, w)` for a uniform `w` that is neither `u`
/// nor already adjacent to it. Edges are visited for `j = 1..=k/2` and,
/// within each `j`, for `u = 0..n`.
pub fn watts_strogatz(
    n: usize,
    k: usize,
    beta: f64,
    seed: u64,
) -> Result<ProximityGraph, ProximityError> {
    if k < 2 || k % 2 != 0 || n <= k {
        return Err(ProximityError::InvalidParameter(format!(
            "need an even k with n > k >= 2, got n={n} k={k}"
        )));
    }
    check_probability("beta", beta)?;
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for u in 0..n {
        for j in 1..=k / 2 {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    let mut rng = SimRng::new(seed);
    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            if !rng.chance(beta) || !adj[u].contains(&v) || adj[u].len() >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.index(n);
                if w != u && !adj[u].contains(&w) {
                    break w;
                }
            };
            adj[u].remove(&v);
            adj[v].remove(&u);
            adj[u].insert(w);
            adj[w].insert(u);
        }
    }
    let edges = adj
        .iter()
        .enumerate()
        .flat_map(|(a, s)| s.iter().filter(move |&&b| a < b).map(move |&b| (a, b, 1.0)));
    Ok(ProximityGraph::from_edges(n, Family::Ws, edges))
}
