use super::Point;

/// Uniform bucket grid for rectangle queries over a fixed point list.
pub(crate) struct BucketGrid {
    min_x: f64,
    min_y: f64,
    cell: f64,
    cols: usize,
    rows: usize,
    buckets: Vec<Vec<usize>>,
}

impl BucketGrid {
    pub fn new(points: &[Point]) -> Self {
        let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
        let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min_x = min_x.min(p.x);
            min_y = min_y.min(p.y);
            max_x = max_x.max(p.x);
            max_y = max_y.max(p.y);
        }
        let span = (max_x - min_x).max(max_y - min_y).max(f64::MIN_POSITIVE);
        let per_side = (points.len() as f64).sqrt().ceil().max(1.0);
        let cell = span / per_side;
        let cols = (((max_x - min_x) / cell) as usize + 1).min(4096);
        let rows = (((max_y - min_y) / cell) as usize + 1).min(4096);
        let mut grid = Self {
            min_x,
            min_y,
            cell,
            cols,
            rows,
            buckets: vec![Vec::new(); cols * rows],
        };
        for (i, p) in points.iter().enumerate() {
            let (c, r) = grid.locate(p.x, p.y);
            grid.buckets[r * cols + c].push(i);
        }
        grid
    }

    fn locate(&self, x: f64, y: f64) -> (usize, usize) {
        let c = ((x - self.min_x) / self.cell).floor().max(0.0) as usize;
        let r = ((y - self.min_y) / self.cell).floor().max(0.0) as usize;
        (c.min(self.cols - 1), r.min(self.rows - 1))
    }

    /// Every point whose bucket overlaps the rectangle (a superset of the
    /// points inside it).
    pub fn query(&self, lo: Point, hi: Point, mut visit: impl FnMut(usize) -> bool) -> bool {
        // pad by one cell so rounding in `locate` cannot drop a neighbour
        let (c0, r0) = self.locate(lo.x - self.cell, lo.y - self.cell);
        let (c1, r1) = self.locate(hi.x + self.cell, hi.y + self.cell);
        for r in r0..=r1 {
            for c in c0..=c1 {
                for &i in &self.buckets[r * self.cols + c] {
                    if visit(i) {
                        return true;
                    }
                }
            }
        }
        false
    }
}
