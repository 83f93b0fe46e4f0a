use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::ProximityGraph;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphMetrics {
    /// Mean local clustering; nodes of degree below two count as zero.
    pub clustering_coefficient: f64,
    /// Mean hop distance over connected ordered pairs; `None` without any.
    pub average_path_length: Option<f64>,
    pub connected: bool,
    /// degree -> number of nodes
    pub degree_histogram: BTreeMap<usize, usize>,
}

pub fn metrics(g: &ProximityGraph) -> GraphMetrics {
    let adj = g.adjacency();
    let n = g.n;
    let mut mark = vec![false; n];
    let mut clustering = 0.0;
    for nb in &adj {
        let d = nb.len();
        if d < 2 {
            continue;
        }
        for &v in nb {
            mark[v] = true;
        }
        let mut links = 0usize;
        for &v in nb {
            links += adj[v].iter().filter(|&&w| mark[w]).count();
        }
        for &v in nb {
            mark[v] = false;
        }
        clustering += links as f64 / (d * (d - 1)) as f64;
    }

    let mut total = 0u64;
    let mut pairs = 0u64;
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    total += dist[v] as u64;
                    pairs += 1;
                    queue.push_back(v);
                }
            }
        }
    }

    let mut degree_histogram = BTreeMap::new();
    for nb in &adj {
        *degree_histogram.entry(nb.len()).or_insert(0) += 1;
    }
    GraphMetrics {
        clustering_coefficient: if n == 0 { 0.0 } else { clustering / n as f64 },
        average_path_length: (pairs > 0).then(|| total as f64 / pairs as f64),
        connected: n <= 1 || pairs == (n * (n - 1)) as u64,
        degree_histogram,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proximity::Family;

    fn graph(n: usize, edges: &[(usize, usize)]) -> ProximityGraph {
        ProximityGraph::from_edges(n, Family::Er, edges.iter().map(|&(a, b)| (a, b, 1.0)))
    }

    #[test]
    fn triangle() {
        let m = metrics(&graph(3, &[(0, 1), (1, 2), (0, 2)]));
        assert_eq!(m.clustering_coefficient, 1.0);
        assert_eq!(m.average_path_length, Some(1.0));
        assert!(m.connected);
        assert_eq!(m.degree_histogram, BTreeMap::from([(2, 3)]));
    }

    #[test]
    fn path_and_cycle() {
        assert_eq!(
            metrics(&graph(3, &[(0, 1), (1, 2)])).clustering_coefficient,
            0.0
        );
        let c4 = metrics(&graph(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]));
        assert_eq!(c4.clustering_coefficient, 0.0);
        assert!((c4.average_path_length.unwrap() - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn disconnected() {
        let m = metrics(&graph(4, &[(0, 1)]));
        assert!(!m.connected);
        assert_eq!(m.average_path_length, Some(1.0));
        assert!(!metrics(&graph(2, &[])).connected);
        assert_eq!(metrics(&graph(2, &[])).average_path_length, None);
    }
}
