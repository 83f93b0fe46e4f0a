//! Exact sign predicates on `f64` coordinates.
//!
//! `orient2d` and `incircle` come from the `robust` crate (adaptive
//! Shewchuk predicates). Distance comparisons and the diametral-disc test
//! are sums of products of coordinate differences; they get a floating-point
//! filter with an exact expansion-arithmetic fallback here.

use std::cmp::Ordering;

use robust::Coord;

use super::Point;

#[inline]
fn coord(p: Point) -> Coord<f64> {
    Coord { x: p.x, y: p.y }
}

/// Positive when `a, b, c` turn counter-clockwise, zero when collinear.
#[inline]
pub fn orient2d(a: Point, b: Point, c: Point) -> f64 {
    robust::orient2d(coord(a), coord(b), coord(c))
}

/// Positive when `d` lies strictly inside the circle through the
/// counter-clockwise triangle `a, b, c`; zero when cocircular.
#[inline]
pub fn incircle(a: Point, b: Point, c: Point, d: Point) -> f64 {
    robust::incircle(coord(a), coord(b), coord(c), coord(d))
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bv = s - a;
    let av = s - bv;
    (s, (a - av) + (b - bv))
}

#[inline]
fn two_diff(a: f64, b: f64) -> (f64, f64) {
    let d = a - b;
    let bv = a - d;
    let av = d + bv;
    (d, (a - av) + (bv - b))
}

#[inline]
fn two_product(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Adds `b` to a non-overlapping expansion kept in increasing magnitude.
fn grow(expansion: &mut Vec<f64>, b: f64) {
    let mut q = b;
    let mut out = Vec::with_capacity(expansion.len() + 1);
    for &e in expansion.iter() {
        let (s, h) = two_sum(q, e);
        if h != 0.0 {
            out.push(h);
        }
        q = s;
    }
    if q != 0.0 {
        out.push(q);
    }
    *expansion = out;
}

/// One summand `sign * (u1 - v1) * (u2 - v2)`.
#[derive(Clone, Copy)]
struct Term {
    negative: bool,
    u1: f64,
    v1: f64,
    u2: f64,
    v2: f64,
}

fn sign_of(terms: &[Term]) -> Ordering {
    let mut approx = 0.0;
    let mut magnitude = 0.0;
    for t in terms {
        let v = (t.u1 - t.v1) * (t.u2 - t.v2);
        approx += if t.negative { -v } else { v };
        magnitude += v.abs();
    }
    // each difference, product and addition contributes at most one ulp
    let bound = (3.0 + 2.0 * terms.len() as f64) * f64::EPSILON * magnitude;
    if approx > bound {
        return Ordering::Greater;
    }
    if approx < -bound {
        return Ordering::Less;
    }

    let mut expansion = Vec::with_capacity(8 * terms.len());
    for t in terms {
        let (h1, l1) = two_diff(t.u1, t.v1);
        let (h2, l2) = two_diff(t.u2, t.v2);
        for (a, b) in [(h1, h2), (h1, l2), (l1, h2), (l1, l2)] {
            let (p, e) = two_product(a, b);
            let (p, e) = if t.negative { (-p, -e) } else { (p, e) };
            grow(&mut expansion, e);
            grow(&mut expansion, p);
        }
    }
    match expansion.last() {
        Some(&v) if v > 0.0 => Ordering::Greater,
        Some(&v) if v < 0.0 => Ordering::Less,
        _ => Ordering::Equal,
    }
}

/// Exact comparison of `|p - q|` against `|r - s|`.
pub fn cmp_dist(p: Point, q: Point, r: Point, s: Point) -> Ordering {
    let term = |negative, a: Point, b: Point, axis: usize| {
        let (u, v) = if axis == 0 { (a.x, b.x) } else { (a.y, b.y) };
        Term {
            negative,
            u1: u,
            v1: v,
            u2: u,
            v2: v,
        }
    };
    sign_of(&[
        term(false, p, q, 0),
        term(false, p, q, 1),
        term(true, r, s, 0),
        term(true, r, s, 1),
    ])
}

/// Exact sign of `(a - c) . (b - c)`; negative exactly when `c` lies
/// strictly inside the disc whose diameter is `ab`.
pub fn diametral_sign(a: Point, b: Point, c: Point) -> Ordering {
    sign_of(&[
        Term {
            negative: false,
            u1: a.x,
            v1: c.x,
            u2: b.x,
            v2: c.x,
        },
        Term {
            negative: false,
            u1: a.y,
            v1: c.y,
            u2: b.y,
            v2: c.y,
        },
    ])
}

/// `c` strictly inside the open disc with diameter `ab`.
pub fn in_diametral_disc(a: Point, b: Point, c: Point) -> bool {
    diametral_sign(a, b, c) == Ordering::Less
}

/// `c` strictly inside the open lune of `ab`: closer to both `a` and `b`
/// than they are to each other.
pub fn in_lune(a: Point, b: Point, c: Point) -> bool {
    cmp_dist(a, c, a, b) == Ordering::Less && cmp_dist(b, c, a, b) == Ordering::Less
}
