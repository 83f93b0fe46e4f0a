use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ProximityError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Lexicographic `(x, y)` order; total on finite coordinates.
    pub fn lex_cmp(&self, other: &Point) -> std::cmp::Ordering {
        self.x
            .total_cmp(&other.x)
            .then_with(|| self.y.total_cmp(&other.y))
    }
}

/// Validated planar point set: finite, pairwise distinct, at least two.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    ids: Vec<u64>,
    points: Vec<Point>,
}

impl PointSet {
    /// Points numbered `0..n` in the given order.
    pub fn new(points: Vec<Point>) -> Result<Self, ProximityError> {
        let ids = (0..points.len() as u64).collect();
        Self::with_ids(ids, points)
    }

    pub fn from_coords(coords: &[(f64, f64)]) -> Result<Self, ProximityError> {
        Self::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    pub fn with_ids(ids: Vec<u64>, points: Vec<Point>) -> Result<Self, ProximityError> {
        assert_eq!(ids.len(), points.len(), "one id per point");
        if points.len() < 2 {
            return Err(ProximityError::TooFewPoints {
                needed: 2,
                got: points.len(),
            });
        }
        let mut seen: HashMap<(u64, u64), usize> = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(ProximityError::NonFinite {
                    id: ids[i].to_string(),
                });
            }
            // +0.0 and -0.0 are the same location
            let key = ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits());
            if let Some(&j) = seen.get(&key) {
                return Err(ProximityError::Duplicate {
                    first: ids[j].to_string(),
                    second: ids[i].to_string(),
                    x: p.x,
                    y: p.y,
                });
            }
            seen.insert(key, i);
        }
        Ok(Self { ids, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> Point {
        self.points[i]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    /// `id,x,y` CSV; coordinates use the shortest round-tripping form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,x,y\n");
        for (id, p) in self.ids.iter().zip(&self.points) {
            out.push_str(&format!("{id},{},{}\n", p.x, p.y));
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<(), ProximityError> {
        std::fs::write(path, self.to_csv()).map_err(|source| ProximityError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    /// Lexicographic rank of every point; used as the symbolic tie-break key.
    pub fn lex_ranks(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.points[a].lex_cmp(&self.points[b]));
        let mut rank = vec![0; self.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        rank
    }
}

pub fn load_points(path: &Path) -> Result<PointSet, ProximityError> {
    let text = std::fs::read_to_string(path).map_err(|source| ProximityError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_points(&text)
}

/// Parses `id,x,y` CSV text. Rows are numbered from 1 at the header.
pub fn parse_points(text: &str) -> Result<PointSet, ProximityError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let header = lines.next().map(|(_, l)| l).unwrap_or("");
    let columns: Vec<_> = header.split(',').map(str::trim).collect();
    if columns != ["id", "x", "y"] {
        return Err(ProximityError::Parse {
            row: 1,
            message: format!("expected header `id,x,y`, found {header:?}"),
        });
    }
    let mut ids = Vec::new();
    let mut points = Vec::new();
    for (idx, line) in lines {
        let row = idx + 1;
        let fields: Vec<_> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(ProximityError::Parse {
                row,
                message: format!("expected 3 fields, found {}", fields.len()),
            });
        }
        let id = fields[0]
            .parse::<u64>()
            .map_err(|_| ProximityError::Parse {
                row,
                message: format!("bad id {:?}", fields[0]),
            })?;
        let coord = |s: &str| {
            s.parse::<f64>().map_err(|_| ProximityError::Parse {
                row,
                message: format!("bad coordinate {s:?} (id {id})"),
            })
        };
        ids.push(id);
        points.push(Point::new(coord(fields[1])?, coord(fields[2])?));
    }
    PointSet::with_ids(ids, points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points() {
        let ps = parse_points("id,x,y\n0,0,0\n1,1,0\n").unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(ps.point(1), Point::new(1.0, 0.0));
    }

    #[test]
    fn duplicate_names_both_ids() {
        let err = parse_points("id,x,y\n7,0.5,1\n8,2,2\n9,0.5,1\n").unwrap_err();
        match err {
            ProximityError::Duplicate { first, second, .. } => {
                assert_eq!((first.as_str(), second.as_str()), ("7", "9"));
            }
            other => panic!("unexpected {other}"),
        }
        let msg = parse_points("id,x,y\n7,0,0\n9,-0,0\n")
            .unwrap_err()
            .to_string();
        assert!(msg.contains('7') && msg.contains('9'), "{msg}");
    }

    #[test]
    fn rejects_non_finite_and_short_input() {
        assert!(matches!(
            parse_points("id,x,y\n0,0,0\n1,inf,0\n"),
            Err(ProximityError::NonFinite { .. })
        ));
        assert!(matches!(
            parse_points("id,x,y\n0,NaN,0\n1,1,0\n"),
            Err(ProximityError::NonFinite { .. })
        ));
        assert!(matches!(
            parse_points("id,x,y\n0,0,0\n"),
            Err(ProximityError::TooFewPoints { got: 1, .. })
        ));
        assert!(matches!(
            parse_points("x,y\n0,0\n"),
            Err(ProximityError::Parse { row: 1, .. })
        ));
        let err = parse_points("id,x,y\n0,0,0\n1,abc,0\n").unwrap_err();
        assert!(matches!(err, ProximityError::Parse { row: 3, .. }), "{err}");
    }

    #[test]
    fn save_load_round_trip() {
        let ps = PointSet::with_ids(
            vec![3, 1, 2],
            vec![
                Point::new(0.1, 0.2),
                Point::new(-3.5e-7, 1e10),
                Point::new(1.0 / 3.0, 2.0f64.sqrt()),
            ],
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pts.csv");
        ps.save(&path).unwrap();
        assert_eq!(load_points(&path).unwrap(), ps);
    }

    #[test]
    fn ranks_are_lexicographic() {
        let ps = PointSet::from_coords(&[(1.0, 0.0), (0.0, 5.0), (0.0, 1.0)]).unwrap();
        assert_eq!(ps.lex_ranks(), vec![2, 1, 0]);
    }
}
