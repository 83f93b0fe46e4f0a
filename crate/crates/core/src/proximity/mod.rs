//! Planar proximity graphs and reference topologies.
//!
//! For a point set the four graphs nest as
//! `MST ⊆ RNG ⊆ Gabriel ⊆ Delaunay`; [`hierarchy`] builds all four and
//! checks the chain. Gabriel and RNG use open regions, so points exactly
//! on a disc or lune boundary never remove an edge. All geometric decisions
//! go through the exact predicates in [`exact`].

pub mod delaunay;
pub mod exact;
mod families;
mod grid;
mod metrics;
mod points;
mod random;

pub use delaunay::{delaunay, Triangulation};
pub use families::{check_containment, gabriel, hierarchy, mst, rng, ContainmentReport, Hierarchy};
pub use metrics::{metrics, GraphMetrics};
pub use points::{load_points, parse_points, Point, PointSet};
pub use random::{er_random, watts_strogatz};

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProximityError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("row {row}: {message}")]
    Parse { row: usize, message: String },
    #[error("rows with ids {first} and {second} share coordinates ({x}, {y})")]
    Duplicate {
        first: String,
        second: String,
        x: f64,
        y: f64,
    },
    #[error("row with id {id} has a non-finite coordinate")]
    NonFinite { id: String },
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("containment chain violated:\n{0}")]
    Containment(ContainmentReport),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Delaunay,
    Gabriel,
    Rng,
    Mst,
    Er,
    Ws,
    /// Node adjacency extracted from a swarm run.
    Network,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Delaunay => "delaunay",
            Family::Gabriel => "gabriel",
            Family::Rng => "rng",
            Family::Mst => "mst",
            Family::Er => "er",
            Family::Ws => "ws",
            Family::Network => "network",
        }
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "delaunay" => Family::Delaunay,
            "gabriel" => Family::Gabriel,
            "rng" => Family::Rng,
            "mst" => Family::Mst,
            "er" => Family::Er,
            "ws" => Family::Ws,
            "network" => Family::Network,
            other => return Err(format!("unknown graph family {other:?}")),
        })
    }
}

/// Undirected weighted graph on nodes `0..n`. Edges are stored once as
/// `(a, b, weight)` with `a < b`, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProximityGraph {
    pub n: usize,
    pub family: Family,
    pub edges: Vec<(usize, usize, f64)>,
}

impl ProximityGraph {
    /// Normalises orientation and order, drops self-loops and duplicates.
    pub fn from_edges(
        n: usize,
        family: Family,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Self {
        let mut out: Vec<(usize, usize, f64)> = edges
            .into_iter()
            .filter(|&(a, b, _)| a != b)
            .map(|(a, b, w)| (a.min(b), a.max(b), w))
            .collect();
        out.sort_by(|l, r| (l.0, l.1).cmp(&(r.0, r.1)));
        out.dedup_by(|l, r| (l.0, l.1) == (r.0, r.1));
        Self {
            n,
            family,
            edges: out,
        }
    }

    /// Geometric graph: edge weights are Euclidean lengths.
    pub fn geometric(
        points: &PointSet,
        family: Family,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        Self::from_edges(
            points.len(),
            family,
            pairs
                .into_iter()
                .map(|(a, b)| (a, b, points.point(a).dist(points.point(b)))),
        )
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().map(|&(a, b, _)| (a, b)).collect()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges
            .binary_search_by(|e| (e.0, e.1).cmp(&key))
            .is_ok()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b, _) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(a, b, _) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Graphviz rendering; with `points` the nodes are pinned in place.
    pub fn to_dot(&self, points: Option<&PointSet>) -> String {
        let mut out = format!("graph {} {{\n", self.family.name());
        for i in 0..self.n {
            match points {
                Some(ps) => {
                    let p = ps.point(i);
                    let _ = writeln!(out, "  {i} [pos=\"{},{}!\"];", p.x, p.y);
                }
                None => {
                    let _ = writeln!(out, "  {i};");
                }
            }
        }
        for &(a, b, w) in &self.edges {
            let _ = writeln!(out, "  {a} -- {b} [weight={w}];");
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_normalises() {
        let g = ProximityGraph::from_edges(
            4,
            Family::Er,
            [(2, 1, 1.0), (1, 2, 1.0), (3, 3, 1.0), (0, 3, 1.0)],
        );
        assert_eq!(g.edges, vec![(0, 3, 1.0), (1, 2, 1.0)]);
        assert!(g.has_edge(3, 0));
        assert!(!g.has_edge(0, 1));
        assert_eq!(g.degrees(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn json_schema() {
        let g = ProximityGraph::from_edges(3, Family::Gabriel, [(0, 1, 1.5), (1, 2, 2.0)]);
        let v: serde_json::Value = serde_json::to_value(&g).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"n": 3, "family": "gabriel", "edges": [[0, 1, 1.5], [1, 2, 2.0]]})
        );
    }

    #[test]
    fn dot_output() {
        let g = ProximityGraph::from_edges(2, Family::Mst, [(0, 1, 1.0)]);
        assert_eq!(
            g.to_dot(None),
            "graph mst {\n  0;\n  1;\n  0 -- 1 [weight=1];\n}\n"
        );
    }
}
