//! Delaunay triangulation by lexicographic sweep followed by Lawson flips.
//!
//! Points are inserted in lexicographic order; each new point lies outside
//! the current hull and is joined to every hull edge it sees. The resulting
//! triangulation is then flipped until every interior edge is locally
//! Delaunay. Exact cocircularity is broken symbolically: the lifted value
//! `x² + y²` of each point is raised by an infinitesimal whose size falls
//! with the point's lexicographic rank, so the output depends only on the
//! point coordinates and never on input order.

use std::cmp::Ordering;

use super::exact::{incircle, orient2d};
use super::{Family, Point, PointSet, ProximityGraph};

const NONE: usize = usize::MAX;

/// Triangles in counter-clockwise order with half-edge adjacency.
///
/// Half-edge `e` runs from `triangles[e]` to `triangles[next(e)]`;
/// `halfedges[e]` is its twin in the neighbouring triangle or `usize::MAX`
/// on the hull.
#[derive(Clone, Debug, Default)]
pub struct Triangulation {
    pub triangles: Vec<usize>,
    pub halfedges: Vec<usize>,
    /// Set when fewer than three non-collinear points exist; `path` then
    /// holds the points in order along their common line.
    pub collinear: bool,
    pub path: Vec<usize>,
}

#[inline]
fn next(e: usize) -> usize {
    if e % 3 == 2 {
        e - 2
    } else {
        e + 1
    }
}

#[inline]
fn prev(e: usize) -> usize {
    if e % 3 == 0 {
        e + 2
    } else {
        e - 1
    }
}

impl Triangulation {
    pub fn triangle_count(&self) -> usize {
        self.triangles.len() / 3
    }

    pub fn triangle(&self, t: usize) -> [usize; 3] {
        [
            self.triangles[3 * t],
            self.triangles[3 * t + 1],
            self.triangles[3 * t + 2],
        ]
    }

    /// Each undirected edge once, as `(min, max)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        if self.collinear {
            return self
                .path
                .windows(2)
                .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
                .collect();
        }
        let mut out = Vec::with_capacity(self.triangles.len() / 2 + 1);
        for e in 0..self.triangles.len() {
            let twin = self.halfedges[e];
            if twin == NONE || e < twin {
                let (a, b) = (self.triangles[e], self.triangles[next(e)]);
                out.push((a.min(b), a.max(b)));
            }
        }
        out
    }

    /// For every undirected edge, the vertices opposite it (one on the
    /// hull, two inside).
    pub fn edges_with_opposites(&self) -> Vec<((usize, usize), Vec<usize>)> {
        if self.collinear {
            return self.edges().into_iter().map(|e| (e, Vec::new())).collect();
        }
        let mut out = Vec::new();
        for e in 0..self.triangles.len() {
            let twin = self.halfedges[e];
            if twin == NONE || e < twin {
                let (a, b) = (self.triangles[e], self.triangles[next(e)]);
                let mut opp = vec![self.triangles[prev(e)]];
                if twin != NONE {
                    opp.push(self.triangles[prev(twin)]);
                }
                out.push(((a.min(b), a.max(b)), opp));
            }
        }
        out
    }

    /// Groups of triangles that share one circumcircle exactly (four or
    /// more cocircular points), as vertex lists.
    pub fn cocircular_groups(&self, points: &[Point]) -> Vec<Vec<usize>> {
        let nt = self.triangle_count();
        let mut parent: Vec<usize> = (0..nt).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let mut merged = false;
        for e in 0..self.triangles.len() {
            let twin = self.halfedges[e];
            if twin == NONE || twin < e {
                continue;
            }
            let [a, b, c] = self.triangle(e / 3);
            let d = self.triangles[prev(twin)];
            if incircle(points[a], points[b], points[c], points[d]) == 0.0 {
                let (ra, rb) = (find(&mut parent, e / 3), find(&mut parent, twin / 3));
                parent[ra.max(rb)] = ra.min(rb);
                merged = true;
            }
        }
        if !merged {
            return Vec::new();
        }
        let mut groups: std::collections::BTreeMap<usize, (usize, Vec<usize>)> = Default::default();
        for t in 0..nt {
            let root = find(&mut parent, t);
            let entry = groups.entry(root).or_default();
            entry.0 += 1;
            entry.1.extend(self.triangle(t));
        }
        groups
            .into_values()
            .filter(|(count, _)| *count > 1)
            .map(|(_, mut verts)| {
                verts.sort_unstable();
                verts.dedup();
                verts
            })
            .collect()
    }
}

struct Builder<'a> {
    points: &'a [Point],
    rank: Vec<usize>,
    triangles: Vec<usize>,
    halfedges: Vec<usize>,
    hull_next: Vec<usize>,
    hull_prev: Vec<usize>,
    /// Half-edge leaving each hull vertex along the hull.
    hull_edge: Vec<usize>,
}

impl Builder<'_> {
    fn add_triangle(
        &mut self,
        a: usize,
        b: usize,
        c: usize,
        ha: usize,
        hb: usize,
        hc: usize,
    ) -> usize {
        let t = self.triangles.len();
        self.triangles.extend([a, b, c]);
        self.halfedges.extend([NONE, NONE, NONE]);
        self.link(t, ha);
        self.link(t + 1, hb);
        self.link(t + 2, hc);
        t
    }

    fn link(&mut self, a: usize, b: usize) {
        self.halfedges[a] = b;
        if b != NONE {
            self.halfedges[b] = a;
        }
    }

    /// Incircle with the symbolic lift perturbation; never returns zero for
    /// four points that are not all collinear.
    fn in_circle(&self, a: usize, b: usize, c: usize, d: usize) -> Ordering {
        let p = self.points;
        let det = incircle(p[a], p[b], p[c], p[d]);
        if det > 0.0 {
            return Ordering::Greater;
        }
        if det < 0.0 {
            return Ordering::Less;
        }
        // Partial derivatives of the determinant with respect to each
        // point's lifted coordinate, taken in order of decreasing
        // perturbation (increasing lexicographic rank).
        let mut quad = [(a, 0u8), (b, 1), (c, 2), (d, 3)];
        quad.sort_by_key(|&(v, _)| self.rank[v]);
        for (_, role) in quad {
            let v = match role {
                0 => orient2d(p[d], p[b], p[c]),
                1 => orient2d(p[d], p[c], p[a]),
                2 => orient2d(p[d], p[a], p[b]),
                _ => -orient2d(p[a], p[b], p[c]),
            };
            if v > 0.0 {
                return Ordering::Greater;
            }
            if v < 0.0 {
                return Ordering::Less;
            }
        }
        Ordering::Equal
    }

    fn flip_all(&mut self) {
        let mut stack: Vec<usize> = (0..self.triangles.len())
            .filter(|&e| self.halfedges[e] != NONE)
            .collect();
        while let Some(a) = stack.pop() {
            let b = self.halfedges[a];
            if b == NONE {
                continue;
            }
            // triangle of a: (pr, pl, p0) with a: pr -> pl
            let al = next(a);
            let ar = prev(a);
            let bl = prev(b);
            let br = next(b);
            let pr = self.triangles[a];
            let pl = self.triangles[al];
            let p0 = self.triangles[ar];
            let p1 = self.triangles[bl];
            if self.in_circle(pr, pl, p0, p1) != Ordering::Greater {
                continue;
            }
            self.triangles[a] = p1;
            self.triangles[b] = p0;
            let hbl = self.halfedges[bl];
            let har = self.halfedges[ar];
            self.link(a, hbl);
            self.link(b, har);
            self.link(ar, bl);
            stack.extend([a, al, b, br]);
        }
    }
}

/// Triangulates the point set. With fewer than three points, or when all
/// points are collinear, the result is the path through the sorted points.
pub fn triangulate(ps: &PointSet) -> Triangulation {
    let points = ps.points();
    let n = points.len();
    let rank = ps.lex_ranks();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| rank[i]);

    let apex_pos =
        (2..n).find(|&k| orient2d(points[order[0]], points[order[1]], points[order[k]]) != 0.0);
    let Some(k) = apex_pos else {
        return Triangulation {
            collinear: true,
            path: order,
            ..Default::default()
        };
    };

    let mut b = Builder {
        points,
        rank,
        triangles: Vec::with_capacity(6 * n),
        halfedges: Vec::with_capacity(6 * n),
        hull_next: vec![NONE; n],
        hull_prev: vec![NONE; n],
        hull_edge: vec![NONE; n],
    };

    // Fan from the first off-line point to the collinear prefix.
    let apex = order[k];
    let ccw = orient2d(points[order[0]], points[order[1]], points[apex]) > 0.0;
    let chain: Vec<usize> = if ccw {
        order[..k].to_vec()
    } else {
        order[..k].iter().rev().copied().collect()
    };
    // chain runs along the hull with the apex on its left
    let mut shared = NONE; // half-edge apex -> chain[i] of the previous triangle
    for i in 0..k - 1 {
        let (u, w) = (chain[i], chain[i + 1]);
        let t = b.add_triangle(u, w, apex, NONE, NONE, shared);
        b.hull_edge[u] = t;
        shared = t + 1; // w -> apex
        if i == 0 {
            b.hull_edge[apex] = t + 2; // apex -> chain[0]
        }
    }
    for i in 0..k - 1 {
        b.hull_next[chain[i]] = chain[i + 1];
        b.hull_prev[chain[i + 1]] = chain[i];
    }
    let last = chain[k - 1];
    b.hull_next[last] = apex;
    b.hull_prev[apex] = last;
    b.hull_next[apex] = chain[0];
    b.hull_prev[chain[0]] = apex;
    b.hull_edge[last] = shared; // last -> apex

    let mut newest = apex;
    for &p in &order[k + 1..] {
        let pp = points[p];
        let visible = |b: &Builder, u: usize| orient2d(points[u], points[b.hull_next[u]], pp) < 0.0;
        // walk from the previous maximum, which always sees `p`
        let mut start = newest;
        while visible(&b, b.hull_prev[start]) {
            start = b.hull_prev[start];
        }
        let mut end = start;
        while visible(&b, end) {
            end = b.hull_next[end];
        }
        debug_assert_ne!(start, end, "new point sees no hull edge");

        let mut u = start;
        let mut prev_tri = NONE;
        let mut first_tri = NONE;
        while u != end {
            let w = b.hull_next[u];
            // (w, u, p): w -> u twins the hull edge, u -> p, p -> w
            let hull = b.hull_edge[u];
            let twin_up = if prev_tri == NONE { NONE } else { prev_tri + 2 };
            let t = b.add_triangle(w, u, p, hull, twin_up, NONE);
            if first_tri == NONE {
                first_tri = t;
            }
            prev_tri = t;
            if u != start {
                b.hull_next[u] = NONE;
                b.hull_prev[u] = NONE;
                b.hull_edge[u] = NONE;
            }
            u = w;
        }
        b.hull_next[start] = p;
        b.hull_prev[p] = start;
        b.hull_next[p] = end;
        b.hull_prev[end] = p;
        b.hull_edge[start] = first_tri + 1; // start -> p
        b.hull_edge[p] = prev_tri + 2; // p -> end
        newest = p;
    }

    b.flip_all();
    Triangulation {
        triangles: b.triangles,
        halfedges: b.halfedges,
        collinear: false,
        path: Vec::new(),
    }
}

/// Delaunay graph of the point set (the sorted path when collinear).
pub fn delaunay(ps: &PointSet) -> ProximityGraph {
    ProximityGraph::geometric(ps, Family::Delaunay, triangulate(ps).edges())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri_ok(ps: &PointSet, t: &Triangulation) {
        let p = ps.points();
        for i in 0..t.triangle_count() {
            let [a, b, c] = t.triangle(i);
            assert!(orient2d(p[a], p[b], p[c]) > 0.0, "triangle {i} not ccw");
            for d in 0..ps.len() {
                if d != a && d != b && d != c {
                    assert!(
                        incircle(p[a], p[b], p[c], p[d]) <= 0.0,
                        "point {d} inside triangle {i}"
                    );
                }
            }
        }
        for e in 0..t.halfedges.len() {
            let h = t.halfedges[e];
            if h != NONE {
                assert_eq!(t.halfedges[h], e);
                assert_eq!(t.triangles[e], t.triangles[next(h)]);
            }
        }
    }

    #[test]
    fn three_points() {
        let ps = PointSet::from_coords(&[(0.0, 0.0), (1.0, 0.0), (0.2, 0.9)]).unwrap();
        let t = triangulate(&ps);
        tri_ok(&ps, &t);
        assert_eq!(delaunay(&ps).edge_count(), 3);
    }

    #[test]
    fn convex_quad_has_one_diagonal() {
        let ps = PointSet::from_coords(&[(0.0, 0.0), (2.0, 0.1), (2.2, 1.9), (0.1, 1.5)]).unwrap();
        let g = delaunay(&ps);
        tri_ok(&ps, &triangulate(&ps));
        assert_eq!(g.edge_count(), 5);
    }

    #[test]
    fn collinear_is_a_path() {
        let ps = PointSet::from_coords(&[(2.0, 2.0), (0.0, 0.0), (1.0, 1.0), (3.0, 3.0)]).unwrap();
        let g = delaunay(&ps);
        assert_eq!(g.edge_set(), [(0, 2), (0, 3), (1, 2)].into_iter().collect());
    }

    #[test]
    fn collinear_prefix_then_apex() {
        let ps = PointSet::from_coords(&[
            (0.0, 0.0),
            (0.0, 1.0),
            (0.0, 2.0),
            (0.0, 3.0),
            (1.0, 1.5),
            (2.0, -1.0),
            (2.0, 4.0),
        ])
        .unwrap();
        let t = triangulate(&ps);
        tri_ok(&ps, &t);
        // 2n - 2 - h triangles; the four points on x = 0 all sit on the hull
        assert_eq!(t.triangle_count(), 2 * 7 - 2 - 6);
    }

    #[test]
    fn cocircular_square_is_order_independent() {
        let square = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        let base = PointSet::from_coords(&square).unwrap();
        let t = triangulate(&base);
        tri_ok(&base, &t);
        let diag: Vec<_> = delaunay(&base)
            .edge_set()
            .into_iter()
            .filter(|&(a, b)| (a, b) == (0, 2) || (a, b) == (1, 3))
            .collect();
        assert_eq!(diag.len(), 1);
        assert_eq!(t.cocircular_groups(base.points()).len(), 1);
        let geometric = |ps: &PointSet| -> std::collections::BTreeSet<[(u64, u64); 2]> {
            delaunay(ps)
                .edges
                .iter()
                .map(|&(a, b, _)| {
                    let pa = ps.point(a);
                    let pb = ps.point(b);
                    let mut e = [
                        (pa.x.to_bits(), pa.y.to_bits()),
                        (pb.x.to_bits(), pb.y.to_bits()),
                    ];
                    e.sort();
                    e
                })
                .collect()
        };
        let reference = geometric(&base);
        for perm in [[3, 2, 1, 0], [2, 0, 3, 1], [1, 3, 0, 2]] {
            let ps = PointSet::from_coords(&perm.map(|i| square[i])).unwrap();
            assert_eq!(geometric(&ps), reference);
        }
    }

    #[test]
    fn grid_with_many_cocircular_quads() {
        let mut coords = Vec::new();
        for i in 0..6 {
            for j in 0..5 {
                coords.push((i as f64, j as f64));
            }
        }
        let ps = PointSet::from_coords(&coords).unwrap();
        let t = triangulate(&ps);
        tri_ok(&ps, &t);
        assert_eq!(t.triangle_count(), 2 * 30 - 2 - 18);
    }
}
