//! Definition-literal reference implementations. They are deliberately
//! slow and share no code with the library beyond its data types.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use slimebench_core::actin::{Boundary, NodeState, Rule};
use slimebench_core::proximity::Point;
use slimebench_core::rng::SimRng;

// ---------------------------------------------------------------- actin

fn read(chain: &[NodeState], j: isize, boundary: Boundary) -> NodeState {
    let n = chain.len() as isize;
    if j >= 0 && j < n {
        return chain[j as usize];
    }
    match boundary {
        Boundary::Fixed => NodeState::Resting,
        Boundary::Periodic => chain[j.rem_euclid(n) as usize],
    }
}

fn fires(rule: Rule, on_x: bool, count: usize) -> bool {
    let at_least_one = match rule {
        Rule::C1 => true,
        Rule::C2 => false,
        Rule::C3 => on_x,
    };
    if at_least_one {
        count >= 1
    } else {
        count == 1
    }
}

fn next_state(s: NodeState, excite: bool) -> NodeState {
    if s == NodeState::Excited {
        NodeState::Refractory
    } else if s == NodeState::Refractory {
        NodeState::Resting
    } else if excite {
        NodeState::Excited
    } else {
        NodeState::Resting
    }
}

/// One synchronous step evaluated node by node from the neighbourhood
/// tuples `(x[i-1], x[i+1], y[i-1], y[i])` and `(y[i-1], y[i+1], x[i], x[i+1])`.
pub fn actin_step(
    x: &[NodeState],
    y: &[NodeState],
    rule: Rule,
    boundary: Boundary,
) -> (Vec<NodeState>, Vec<NodeState>) {
    let n = x.len();
    let mut nx = Vec::with_capacity(n);
    let mut ny = Vec::with_capacity(n);
    for i in 0..n as isize {
        let tuple = [
            read(x, i - 1, boundary),
            read(x, i + 1, boundary),
            read(y, i - 1, boundary),
            read(y, i, boundary),
        ];
        let count = tuple.iter().filter(|&&s| s == NodeState::Excited).count();
        nx.push(next_state(x[i as usize], fires(rule, true, count)));
    }
    for i in 0..n as isize {
        let tuple = [
            read(y, i - 1, boundary),
            read(y, i + 1, boundary),
            read(x, i, boundary),
            read(x, i + 1, boundary),
        ];
        let count = tuple.iter().filter(|&&s| s == NodeState::Excited).count();
        ny.push(next_state(y[i as usize], fires(rule, false, count)));
    }
    (nx, ny)
}

pub fn state_of(code: usize) -> NodeState {
    [
        NodeState::Resting,
        NodeState::Excited,
        NodeState::Refractory,
    ][code % 3]
}

/// Configuration number `code` of the `3^(2n)` two-chain configurations.
pub fn enumerate_config(n: usize, mut code: usize) -> (Vec<NodeState>, Vec<NodeState>) {
    let mut cells = Vec::with_capacity(2 * n);
    for _ in 0..2 * n {
        cells.push(state_of(code));
        code /= 3;
    }
    let y = cells.split_off(n);
    (cells, y)
}

// ----------------------------------------------------------- proximity

/// Coordinates on a grid of pitch 2^-20 within `[0, scale)`. Products and
/// sums of such values stay exact in f64, so the float oracles below make
/// no rounding errors.
pub fn dyadic(v: u64) -> f64 {
    v as f64 / (1u64 << 20) as f64
}

pub fn random_points(n: usize, scale: u64, rng: &mut SimRng) -> Vec<Point> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (a, b) = (rng.below(scale << 20), rng.below(scale << 20));
        if seen.insert((a, b)) {
            out.push(Point::new(dyadic(a), dyadic(b)));
        }
    }
    out
}

fn d2(p: Point, q: Point) -> f64 {
    (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y)
}

/// Pairs whose open diametral disc holds no third point.
pub fn gabriel_edges(ps: &[Point]) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for a in 0..ps.len() {
        for b in a + 1..ps.len() {
            let blocked = (0..ps.len()).any(|c| {
                c != a
                    && c != b
                    && (ps[a].x - ps[c].x) * (ps[b].x - ps[c].x)
                        + (ps[a].y - ps[c].y) * (ps[b].y - ps[c].y)
                        < 0.0
            });
            if !blocked {
                out.insert((a, b));
            }
        }
    }
    out
}

/// Pairs whose open lune holds no third point.
pub fn rng_edges(ps: &[Point]) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for a in 0..ps.len() {
        for b in a + 1..ps.len() {
            let ab = d2(ps[a], ps[b]);
            let blocked = (0..ps.len())
                .any(|c| c != a && c != b && d2(ps[a], ps[c]).max(d2(ps[b], ps[c])) < ab);
            if !blocked {
                out.insert((a, b));
            }
        }
    }
    out
}

/// Minimum spanning-tree weight over all `n^(n-2)` labelled trees, decoded
/// from Prüfer sequences.
pub fn mst_weight_brute(ps: &[Point]) -> f64 {
    let n = ps.len();
    assert!((2..=8).contains(&n));
    if n == 2 {
        return ps[0].dist(ps[1]);
    }
    let len = n - 2;
    let total = n.pow(len as u32);
    let mut best = f64::INFINITY;
    let mut seq = vec![0usize; len];
    for mut code in 0..total {
        for s in seq.iter_mut() {
            *s = code % n;
            code /= n;
        }
        let mut degree = vec![1usize; n];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut w = 0.0;
        for &s in &seq {
            let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
            w += ps[leaf].dist(ps[s]);
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        w += ps[rest[0]].dist(ps[rest[1]]);
        best = best.min(w);
    }
    best
}

// ------------------------------------------------------------- graphs

pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); n];
    for &(a, b) in edges {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    adj
}

/// Mean over nodes of (edges among neighbours) / C(d, 2); zero for d < 2.
pub fn clustering(adj: &[BTreeSet<usize>]) -> f64 {
    let mut sum = 0.0;
    for nb in adj {
        let d = nb.len();
        if d < 2 {
            continue;
        }
        let v: Vec<usize> = nb.iter().copied().collect();
        let mut links = 0;
        for i in 0..d {
            for j in i + 1..d {
                if adj[v[i]].contains(&v[j]) {
                    links += 1;
                }
            }
        }
        sum += links as f64 / (d * (d - 1) / 2) as f64;
    }
    sum / adj.len() as f64
}

/// Mean BFS distance over connected ordered pairs.
pub fn mean_path_length(adj: &[BTreeSet<usize>]) -> f64 {
    let n = adj.len();
    let (mut total, mut pairs) = (0u64, 0u64);
    for s in 0..n {
        let mut dist = vec![u64::MAX; n];
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &v in &adj[u] {
                if dist[v] == u64::MAX {
                    dist[v] = dist[u] + 1;
                    total += dist[v];
                    pairs += 1;
                    q.push_back(v);
                }
            }
        }
    }
    total as f64 / pairs as f64
}

// -------------------------------------------------------------- swarm

/// One zero-padded `k×k` box mean followed by decay, evaluated cell by cell.
pub fn diffuse(field: &[f64], w: usize, h: usize, k: usize, decay: f64) -> Vec<f64> {
    let r = (k / 2) as isize;
    let mut out = vec![0.0; w * h];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut s = 0.0;
            for dy in -r..=r {
                for dx in -r..=r {
                    let (xx, yy) = (x + dx, y + dy);
                    if xx >= 0 && yy >= 0 && xx < w as isize && yy < h as isize {
                        s += field[yy as usize * w + xx as usize];
                    }
                }
            }
            out[y as usize * w + x as usize] = s / (k * k) as f64 * decay;
        }
    }
    out
}

/// Steady field of a lone source that adds `projection` at `(sx, sy)` before
/// every diffusion, found by iterating to convergence.
pub fn plume(
    w: usize,
    h: usize,
    (sx, sy): (usize, usize),
    projection: f64,
    k: usize,
    decay: f64,
) -> Vec<f64> {
    let mut f = vec![0.0; w * h];
    loop {
        let mut g = f.clone();
        g[sy * w + sx] += projection;
        let g = diffuse(&g, w, h, k, decay);
        let change = g
            .iter()
            .zip(&f)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        f = g;
        if change < 1e-13 {
            return f;
        }
    }
}

/// 8-connected components of the cells flagged in `mask`.
pub fn components(mask: &[bool], w: usize, h: usize) -> usize {
    let mut seen = vec![false; w * h];
    let mut count = 0;
    for start in 0..w * h {
        if !mask[start] || seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            let (x, y) = ((c % w) as isize, (c / w) as isize);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (xx, yy) = (x + dx, y + dy);
                    if xx < 0 || yy < 0 || xx >= w as isize || yy >= h as isize {
                        continue;
                    }
                    let d = yy as usize * w + xx as usize;
                    if mask[d] && !seen[d] {
                        seen[d] = true;
                        stack.push(d);
                    }
                }
            }
        }
    }
    count
}
