use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{disc_cells, SwarmWorld};
use crate::proximity::{Family, ProximityGraph};

/// Which per-cell quantity is binarised.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetworkSource {
    #[default]
    Occupancy,
    Trail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NetworkReport {
    /// Number of 8-connected components of the binarised lattice.
    pub components: usize,
    /// Component touching each node's disc, if any. A disc touching several
    /// components takes the one with most cells inside the disc.
    pub node_component: Vec<Option<usize>>,
    /// Node adjacency: two nodes are linked when their geodesic regions
    /// inside the blob meet. Weights are Euclidean node distances.
    pub graph: ProximityGraph,
    /// All nodes share one component and the adjacency is a tree.
    pub spanning_tree: bool,
}

const NEIGHBOURS: [(i64, i64); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

fn neighbours(w: usize, h: usize, c: usize) -> impl Iterator<Item = usize> {
    let (x, y) = ((c % w) as i64, (c / w) as i64);
    NEIGHBOURS.iter().filter_map(move |&(dx, dy)| {
        let (nx, ny) = (x + dx, y + dy);
        (nx >= 0 && ny >= 0 && nx < w as i64 && ny < h as i64)
            .then(|| ny as usize * w + nx as usize)
    })
}

/// Binarises the lattice (`value >= threshold`), labels its components by
/// flood fill and grows a region from every node's disc by breadth-first
/// search through the blob. Nodes whose regions share a boundary are
/// adjacent.
pub fn extract_network(world: &SwarmWorld, threshold: f64, source: NetworkSource) -> NetworkReport {
    assert!(threshold > 0.0, "threshold must be positive");
    let (w, h) = (world.width, world.height);
    let on: Vec<bool> = match source {
        NetworkSource::Occupancy => world
            .occupancy
            .iter()
            .map(|&o| o as f64 >= threshold)
            .collect(),
        NetworkSource::Trail => world.field.iter().map(|&v| v >= threshold).collect(),
    };

    let mut label = vec![usize::MAX; w * h];
    let mut components = 0;
    let mut queue = VecDeque::new();
    for start in 0..w * h {
        if !on[start] || label[start] != usize::MAX {
            continue;
        }
        label[start] = components;
        queue.push_back(start);
        while let Some(c) = queue.pop_front() {
            for n in neighbours(w, h, c) {
                if on[n] && label[n] == usize::MAX {
                    label[n] = components;
                    queue.push_back(n);
                }
            }
        }
        components += 1;
    }

    let discs: Vec<Vec<usize>> = world
        .nodes
        .iter()
        .map(|n| disc_cells(w, h, n.x, n.y, world.params.engulf_radius))
        .collect();
    let node_component: Vec<Option<usize>> = discs
        .iter()
        .map(|disc| {
            let mut counts = std::collections::BTreeMap::new();
            for &c in disc.iter().filter(|&&c| on[c]) {
                *counts.entry(label[c]).or_insert(0usize) += 1;
            }
            counts
                .into_iter()
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
                .map(|(l, _)| l)
        })
        .collect();

    // seed cells go to the nearest node centre, lowest index on ties
    let mut region = vec![usize::MAX; w * h];
    let mut seed_dist = vec![u64::MAX; w * h];
    for (i, disc) in discs.iter().enumerate() {
        let node = &world.nodes[i];
        for &c in disc.iter().filter(|&&c| on[c]) {
            let (dx, dy) = (
                (c % w).abs_diff(node.x) as u64,
                (c / w).abs_diff(node.y) as u64,
            );
            let d = dx * dx + dy * dy;
            if d < seed_dist[c] {
                seed_dist[c] = d;
                region[c] = i;
            }
        }
    }
    for (c, &r) in region.iter().enumerate() {
        if r != usize::MAX {
            queue.push_back(c);
        }
    }
    while let Some(c) = queue.pop_front() {
        for n in neighbours(w, h, c) {
            if on[n] && region[n] == usize::MAX {
                region[n] = region[c];
                queue.push_back(n);
            }
        }
    }
    let mut pairs = BTreeSet::new();
    for c in 0..w * h {
        if region[c] == usize::MAX {
            continue;
        }
        for n in neighbours(w, h, c) {
            if region[n] != usize::MAX && region[n] != region[c] {
                pairs.insert((region[c].min(region[n]), region[c].max(region[n])));
            }
        }
    }

    let nodes = &world.nodes;
    let graph = ProximityGraph::from_edges(
        nodes.len(),
        Family::Network,
        pairs.into_iter().map(|(a, b)| {
            let d = (nodes[a].x as f64 - nodes[b].x as f64)
                .hypot(nodes[a].y as f64 - nodes[b].y as f64);
            (a, b, d)
        }),
    );
    let shared = node_component.first().copied().flatten();
    let one_component = shared.is_some() && node_component.iter().all(|&c| c == shared);
    let spanning_tree =
        one_component && graph.edge_count() + 1 == nodes.len() && is_connected(&graph);
    NetworkReport {
        components,
        node_component,
        graph,
        spanning_tree,
    }
}

fn is_connected(g: &ProximityGraph) -> bool {
    if g.n == 0 {
        return true;
    }
    let adj = g.adjacency();
    let mut seen = vec![false; g.n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}
