use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::delaunay::{triangulate, Triangulation};
use super::exact::{cmp_dist, in_diametral_disc, in_lune};
use super::grid::BucketGrid;
use super::{Family, Point, PointSet, ProximityError, ProximityGraph};

fn single_edge(ps: &PointSet, family: Family) -> ProximityGraph {
    ProximityGraph::geometric(ps, family, [(0, 1)])
}

fn query_box(
    grid: &BucketGrid,
    center: Point,
    radius: f64,
    visit: impl FnMut(usize) -> bool,
) -> bool {
    let r = radius * (1.0 + 1e-9);
    grid.query(
        Point::new(center.x - r, center.y - r),
        Point::new(center.x + r, center.y + r),
        visit,
    )
}

fn gabriel_pairs(ps: &PointSet, tri: &Triangulation) -> Vec<(usize, usize)> {
    let p = ps.points();
    if tri.collinear {
        return tri.edges();
    }
    let mut kept: BTreeSet<(usize, usize)> = tri
        .edges_with_opposites()
        .into_iter()
        .filter(|((a, b), opp)| opp.iter().all(|&c| !in_diametral_disc(p[*a], p[*b], p[c])))
        .map(|(e, _)| e)
        .collect();

    // With four or more exactly cocircular points, a chord that is a
    // diameter of the shared circle is Gabriel (its blockers sit on the
    // boundary) but only one diagonal made it into the triangulation.
    let groups = tri.cocircular_groups(p);
    if !groups.is_empty() {
        let grid = BucketGrid::new(p);
        for group in groups {
            for (i, &a) in group.iter().enumerate() {
                for &b in &group[i + 1..] {
                    if kept.contains(&(a, b)) {
                        continue;
                    }
                    let mid = Point::new((p[a].x + p[b].x) / 2.0, (p[a].y + p[b].y) / 2.0);
                    let blocked = query_box(&grid, mid, p[a].dist(p[b]) / 2.0, |c| {
                        c != a && c != b && in_diametral_disc(p[a], p[b], p[c])
                    });
                    if !blocked {
                        kept.insert((a, b));
                    }
                }
            }
        }
    }
    kept.into_iter().collect()
}

/// Gabriel graph: `ab` is an edge iff the open disc with diameter `ab`
/// holds no other point.
pub fn gabriel(ps: &PointSet) -> ProximityGraph {
    if ps.len() == 2 {
        return single_edge(ps, Family::Gabriel);
    }
    let tri = triangulate(ps);
    ProximityGraph::geometric(ps, Family::Gabriel, gabriel_pairs(ps, &tri))
}

fn rng_pairs(ps: &PointSet, gabriel: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let p = ps.points();
    let grid = BucketGrid::new(p);
    gabriel
        .iter()
        .copied()
        .filter(|&(a, b)| {
            let mid = Point::new((p[a].x + p[b].x) / 2.0, (p[a].y + p[b].y) / 2.0);
            !query_box(&grid, mid, p[a].dist(p[b]), |c| {
                c != a && c != b && in_lune(p[a], p[b], p[c])
            })
        })
        .collect()
}

/// Relative neighbourhood graph: `ab` is an edge iff no other point is
/// strictly closer to both `a` and `b` than they are to each other.
pub fn rng(ps: &PointSet) -> ProximityGraph {
    if ps.len() == 2 {
        return single_edge(ps, Family::Rng);
    }
    let tri = triangulate(ps);
    let gg = gabriel_pairs(ps, &tri);
    ProximityGraph::geometric(ps, Family::Rng, rng_pairs(ps, &gg))
}

fn mst_pairs(ps: &PointSet, candidates: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut edges = candidates.to_vec();
    edges.sort_by(|&e, &f| edge_order(ps, e, f));
    let mut parent: Vec<usize> = (0..ps.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut out = Vec::with_capacity(ps.len() - 1);
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            out.push((a, b));
            if out.len() + 1 == ps.len() {
                break;
            }
        }
    }
    out
}

/// Euclidean minimum spanning tree. Equal lengths are ordered by the
/// `(min id, max id)` pair of the edge, which makes the tree unique.
pub fn mst(ps: &PointSet) -> ProximityGraph {
    if ps.len() == 2 {
        return single_edge(ps, Family::Mst);
    }
    let tri = triangulate(ps);
    ProximityGraph::geometric(ps, Family::Mst, mst_pairs(ps, &tri.edges()))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ContainmentReport {
    /// `(smaller family, larger family, edges of the smaller one missing
    /// from the larger one)`.
    pub violations: Vec<(Family, Family, Vec<(usize, usize)>)>,
}

impl ContainmentReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ContainmentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds() {
            return write!(f, "mst ⊆ rng ⊆ gabriel ⊆ delaunay holds");
        }
        for (sub, sup, edges) in &self.violations {
            writeln!(f, "{} ⊄ {}: {:?}", sub.name(), sup.name(), edges)?;
        }
        Ok(())
    }
}

/// Checks `MST ⊆ RNG ⊆ GG ⊆ DT` link by link.
pub fn check_containment(
    mst: &ProximityGraph,
    rng: &ProximityGraph,
    gabriel: &ProximityGraph,
    delaunay: &ProximityGraph,
) -> ContainmentReport {
    let mut report = ContainmentReport::default();
    for (sub, sup) in [(mst, rng), (rng, gabriel), (gabriel, delaunay)] {
        let missing: Vec<_> = sub
            .edges
            .iter()
            .filter(|e| !sup.has_edge(e.0, e.1))
            .map(|e| (e.0, e.1))
            .collect();
        if !missing.is_empty() {
            report.violations.push((sub.family, sup.family, missing));
        }
    }
    report
}

#[derive(Clone, Debug)]
pub struct Hierarchy {
    pub mst: ProximityGraph,
    pub rng: ProximityGraph,
    pub gabriel: ProximityGraph,
    pub delaunay: ProximityGraph,
}

impl Hierarchy {
    /// Builds all four graphs from one triangulation without checking them.
    pub fn build(ps: &PointSet) -> Self {
        let tri = triangulate(ps);
        let dt = tri.edges();
        let gg = gabriel_pairs(ps, &tri);
        let rn = rng_pairs(ps, &gg);
        let mst = mst_pairs(ps, &dt);
        Self {
            mst: ProximityGraph::geometric(ps, Family::Mst, mst),
            rng: ProximityGraph::geometric(ps, Family::Rng, rn),
            gabriel: ProximityGraph::geometric(ps, Family::Gabriel, gg),
            delaunay: ProximityGraph::geometric(ps, Family::Delaunay, dt),
        }
    }

    pub fn containment(&self) -> ContainmentReport {
        check_containment(&self.mst, &self.rng, &self.gabriel, &self.delaunay)
    }

    pub fn graphs(&self) -> [&ProximityGraph; 4] {
        [&self.mst, &self.rng, &self.gabriel, &self.delaunay]
    }
}

/// All four graphs, or the list of edges that break the containment chain.
pub fn hierarchy(ps: &PointSet) -> Result<Hierarchy, ProximityError> {
    if ps.len() < 3 {
        return Err(ProximityError::TooFewPoints {
            needed: 3,
            got: ps.len(),
        });
    }
    let h = Hierarchy::build(ps);
    let report = h.containment();
    if report.holds() {
        Ok(h)
    } else {
        Err(ProximityError::Containment(report))
    }
}

/// Edge length order used by the spanning tree.
pub(crate) fn edge_order(ps: &PointSet, e: (usize, usize), f: (usize, usize)) -> Ordering {
    let p = ps.points();
    cmp_dist(p[e.0], p[e.1], p[f.0], p[f.1]).then(e.cmp(&f))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Apex y rounded up from sqrt(3)/2 so the two slanted sides tie exactly
    // and are no shorter than the base.
    const APEX: f64 = 0.8660254037844387;

    fn equilateral() -> PointSet {
        PointSet::from_coords(&[(0.0, 0.0), (1.0, 0.0), (0.5, APEX)]).unwrap()
    }

    #[test]
    fn two_points_every_family() {
        let ps = PointSet::from_coords(&[(0.0, 0.0), (1.0, 0.0)]).unwrap();
        for g in [gabriel(&ps), rng(&ps), mst(&ps)] {
            assert_eq!(g.edges, vec![(0, 1, 1.0)]);
        }
    }

    #[test]
    fn equilateral_triangle() {
        let ps = equilateral();
        assert_eq!(gabriel(&ps).edge_count(), 3);
        assert_eq!(rng(&ps).edge_count(), 3);
        let t = mst(&ps);
        assert_eq!(t.edge_set(), [(0, 1), (0, 2)].into_iter().collect());
        assert!((t.total_weight() - 2.0).abs() < 1e-12);
        let h = hierarchy(&ps).unwrap();
        assert_eq!(h.delaunay.edge_count(), 3);
        assert_eq!(h.mst.edge_count(), 2);
    }

    #[test]
    fn obtuse_triangle_loses_long_side() {
        let ps = PointSet::from_coords(&[(0.0, 0.0), (4.0, 0.0), (2.0, 0.5)]).unwrap();
        assert!(!gabriel(&ps).has_edge(0, 1));
        assert!(!rng(&ps).has_edge(0, 1));
        assert_eq!(mst(&ps).edge_set(), [(0, 2), (1, 2)].into_iter().collect());
    }

    #[test]
    fn square_diagonals_are_gabriel_but_not_both_delaunay() {
        let ps = PointSet::from_coords(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        let gg = gabriel(&ps);
        assert!(gg.has_edge(0, 2) && gg.has_edge(1, 3));
        assert_eq!(rng(&ps).edge_count(), 4);
        match hierarchy(&ps) {
            Err(ProximityError::Containment(report)) => {
                assert_eq!(report.violations.len(), 1);
                let (sub, sup, edges) = &report.violations[0];
                assert_eq!((*sub, *sup), (Family::Gabriel, Family::Delaunay));
                assert_eq!(edges.len(), 1);
            }
            other => panic!("expected a containment diagnostic, got {other:?}"),
        }
    }

    #[test]
    fn hierarchy_needs_three_points() {
        let ps = PointSet::from_coords(&[(0.0, 0.0), (1.0, 0.0)]).unwrap();
        assert!(matches!(
            hierarchy(&ps),
            Err(ProximityError::TooFewPoints { needed: 3, got: 2 })
        ));
    }

    #[test]
    fn collinear_points() {
        let ps = PointSet::from_coords(&[(0.0, 0.0), (3.0, 0.0), (1.0, 0.0), (2.0, 0.0)]).unwrap();
        let h = hierarchy(&ps).unwrap();
        let path: BTreeSet<_> = [(0, 2), (2, 3), (1, 3)].into_iter().collect();
        for g in h.graphs() {
            assert_eq!(g.edge_set(), path, "{:?}", g.family);
        }
    }

    #[test]
    fn edge_order_breaks_ties_by_ids() {
        let ps = equilateral();
        assert_eq!(edge_order(&ps, (0, 2), (1, 2)), Ordering::Less);
        assert_eq!(edge_order(&ps, (0, 1), (0, 2)), Ordering::Less);
    }
}
