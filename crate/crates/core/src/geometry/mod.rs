//! Terrain model and the visibility primitives every map is built from.
//!
//! A terrain is an x-monotone polygonal chain. All predicates share one
//! tolerance, `eps` scaled by the coordinate extent of the terrain, exposed
//! as [`Terrain::tol`].

pub(crate) mod general_position;
mod metric;

pub use general_position::{bisector_crossings, check_general_position, GeneralPositionReport};
pub(crate) use metric::link_key_inside;
pub use metric::{link_distance, metric_distance, metric_key, DistanceKey, Metric};

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Default relative tolerance used by every sign and comparison predicate.
pub const DEFAULT_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist2(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.dist2(other).sqrt()
    }
}

/// A point on a terrain, tagged with the edge that contains it.
///
/// Vertices use the lower of their two adjacent edge indices (edge 0 for the
/// leftmost vertex).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TerrainPoint {
    pub edge: usize,
    pub x: f64,
    pub y: f64,
}

impl TerrainPoint {
    pub fn point(&self) -> Point {
        Point::new(self.x, self.y)
    }

    /// Orders points along the terrain (by x, which is a total order on T).
    pub fn cmp_x(&self, other: &TerrainPoint) -> Ordering {
        self.x.total_cmp(&other.x)
    }
}

/// Horizontal direction of a walk along the terrain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug)]
pub struct Terrain {
    vertices: Vec<Point>,
    cum_len: Vec<f64>,
    eps: f64,
    tol: f64,
}

impl Terrain {
    /// Validates a raw vertex chain with the default tolerance.
    pub fn new(raw: &[(f64, f64)]) -> Result<Self> {
        Self::with_eps(raw, DEFAULT_EPS)
    }

    pub fn with_eps(raw: &[(f64, f64)], eps: f64) -> Result<Self> {
        if raw.len() < 2 {
            return Err(Error::TooShort);
        }
        for (i, &(x, y)) in raw.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::NonFinite(i));
            }
        }
        if let Some(i) = raw.windows(2).position(|w| w[1].0 <= w[0].0) {
            return Err(Error::NonMonotone(i));
        }
        let vertices: Vec<Point> = raw.iter().map(|&(x, y)| Point::new(x, y)).collect();
        let mut cum_len = Vec::with_capacity(vertices.len());
        cum_len.push(0.0);
        for w in vertices.windows(2) {
            let last = *cum_len.last().unwrap();
            cum_len.push(last + w[0].dist(&w[1]));
        }
        let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in &vertices {
            y_lo = y_lo.min(v.y);
            y_hi = y_hi.max(v.y);
        }
        let x_extent = vertices[vertices.len() - 1].x - vertices[0].x;
        let scale = x_extent.max(y_hi - y_lo).max(1.0);
        Ok(Self {
            vertices,
            cum_len,
            eps,
            tol: eps * scale,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i]
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn cum_len(&self) -> &[f64] {
        &self.cum_len
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Absolute length tolerance: `eps` times the coordinate extent.
    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn x_min(&self) -> f64 {
        self.vertices[0].x
    }

    pub fn x_max(&self) -> f64 {
        self.vertices[self.n() - 1].x
    }

    pub fn start(&self) -> TerrainPoint {
        self.vertex_point(0)
    }

    pub fn end(&self) -> TerrainPoint {
        self.vertex_point(self.n() - 1)
    }

    pub fn edge_len(&self, edge: usize) -> f64 {
        self.cum_len[edge + 1] - self.cum_len[edge]
    }

    pub fn vertex_point(&self, i: usize) -> TerrainPoint {
        let v = self.vertices[i];
        TerrainPoint {
            edge: i.max(1) - 1,
            x: v.x,
            y: v.y,
        }
    }

    /// The point at parameter `t` in `[0, 1]` along `edge`.
    pub fn point_on_edge(&self, edge: usize, t: f64) -> TerrainPoint {
        let a = self.vertices[edge];
        let b = self.vertices[edge + 1];
        let t = t.clamp(0.0, 1.0);
        self.snap(edge, a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
    }

    /// Canonicalizes a point of `edge`, snapping to a vertex within tolerance.
    fn snap(&self, edge: usize, x: f64, y: f64) -> TerrainPoint {
        if (x - self.vertices[edge].x).abs() <= self.tol {
            self.vertex_point(edge)
        } else if (x - self.vertices[edge + 1].x).abs() <= self.tol {
            self.vertex_point(edge + 1)
        } else {
            TerrainPoint { edge, x, y }
        }
    }

    /// Index of the edge whose closed x-range contains `x` (lower index on ties).
    fn edge_containing(&self, x: f64) -> usize {
        let idx = self.vertices.partition_point(|v| v.x < x);
        idx.clamp(1, self.n() - 1) - 1
    }

    /// Height of the terrain at `x`, which must lie within the x-range.
    pub fn height_at(&self, x: f64) -> f64 {
        let e = self.edge_containing(x);
        let a = self.vertices[e];
        let b = self.vertices[e + 1];
        a.y + (x - a.x) / (b.x - a.x) * (b.y - a.y)
    }

    /// The unique terrain point above or below `x`.
    pub fn point_at_x(&self, x: f64) -> Result<TerrainPoint> {
        if !(x >= self.x_min() - self.tol && x <= self.x_max() + self.tol) {
            return Err(Error::OutOfRange(x));
        }
        let x = x.clamp(self.x_min(), self.x_max());
        let e = self.edge_containing(x);
        Ok(self.snap(e, x, self.height_at(x)))
    }

    /// The vertex coinciding with `p`, if any.
    pub fn vertex_index(&self, p: &TerrainPoint) -> Option<usize> {
        if (p.x - self.vertices[p.edge].x).abs() <= self.tol {
            Some(p.edge)
        } else if (p.x - self.vertices[p.edge + 1].x).abs() <= self.tol {
            Some(p.edge + 1)
        } else {
            None
        }
    }

    /// Index of the first vertex strictly to the right of `p` (may be `n`).
    pub fn first_vertex_right(&self, p: &TerrainPoint) -> usize {
        match self.vertex_index(p) {
            Some(i) => i + 1,
            None => p.edge + 1,
        }
    }

    /// Index of the last vertex strictly to the left of `p`.
    pub fn last_vertex_left(&self, p: &TerrainPoint) -> Option<usize> {
        match self.vertex_index(p) {
            Some(i) => i.checked_sub(1),
            None => Some(p.edge),
        }
    }

    /// Arc length from the leftmost vertex to `p`.
    pub fn arc_position(&self, p: &TerrainPoint) -> f64 {
        self.cum_len[p.edge] + self.vertices[p.edge].dist(&p.point())
    }

    /// Locates the terrain point at arc length `s` from the leftmost vertex.
    pub fn point_at_arc(&self, s: f64) -> TerrainPoint {
        let total = self.cum_len[self.n() - 1];
        let s = s.clamp(0.0, total);
        let idx = self.cum_len.partition_point(|&c| c < s);
        let e = idx.clamp(1, self.n() - 1) - 1;
        let len = self.edge_len(e);
        let t = if len > 0.0 {
            (s - self.cum_len[e]) / len
        } else {
            0.0
        };
        self.point_on_edge(e, t)
    }

    /// True iff the segment `ab` has no point strictly below the terrain.
    ///
    /// Touching the terrain counts as visible. Only vertices strictly between
    /// `a` and `b` can block, because both the chain and the segment are
    /// linear between consecutive vertices.
    pub fn sees(&self, a: &TerrainPoint, b: &TerrainPoint) -> bool {
        let (l, r) = if a.x <= b.x { (a, b) } else { (b, a) };
        if r.x - l.x <= self.tol {
            return true;
        }
        let first = self.first_vertex_right(l);
        let Some(last) = self.last_vertex_left(r) else {
            return true;
        };
        let slope = (r.y - l.y) / (r.x - l.x);
        (first..=last.min(self.n() - 1)).all(|i| {
            let v = self.vertices[i];
            l.y + slope * (v.x - l.x) >= v.y - self.tol
        })
    }

    /// Shoots the ray `origin -> through` and returns the first terrain point
    /// strictly beyond `through` (walking towards `side`) where the ray meets
    /// the terrain after having been separated from it.
    ///
    /// A ray running along the terrain (grazing) never produces a hit. The walk
    /// is linear in the number of edges crossed.
    pub fn ray_first_hit(&self, origin: Point, through: Point, side: Side) -> Option<TerrainPoint> {
        let dx = through.x - origin.x;
        if dx.abs() <= self.tol {
            return None;
        }
        let slope = (through.y - origin.y) / dx;
        let ray_y = |x: f64| origin.y + slope * (x - origin.x);
        let gap = |x: f64| ray_y(x) - self.height_at(x);

        let x0 = through.x.clamp(self.x_min(), self.x_max());
        let mut checkpoints = vec![x0];
        match side {
            Side::Right => checkpoints.extend(
                self.vertices
                    .iter()
                    .map(|v| v.x)
                    .filter(|&x| x > x0 + self.tol),
            ),
            Side::Left => checkpoints.extend(
                self.vertices
                    .iter()
                    .rev()
                    .map(|v| v.x)
                    .filter(|&x| x < x0 - self.tol),
            ),
        }

        let mut sign = 0.0;
        let mut prev = (x0, gap(x0));
        if prev.1.abs() > self.tol {
            sign = prev.1.signum();
        }
        for &x in &checkpoints[1..] {
            let g = gap(x);
            if sign == 0.0 {
                if g.abs() > self.tol {
                    sign = g.signum();
                }
            } else if g * sign <= self.tol {
                let t = prev.1 / (prev.1 - g);
                let hit_x = prev.0 + t * (x - prev.0);
                return self.point_at_x(hit_x).ok();
            }
            prev = (x, g);
        }
        None
    }
}

/// Sorted set of distinct viewpoint vertices.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ViewpointSet {
    indices: Vec<usize>,
}

impl ViewpointSet {
    pub fn new(terrain: &Terrain, indices: &[usize]) -> Result<Self> {
        let n = terrain.n();
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        if let Some(&bad) = sorted.iter().find(|&&i| i >= n) {
            return Err(Error::ViewpointOutOfRange(bad));
        }
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateViewpoint(w[0]));
        }
        if sorted.len() >= n {
            return Err(Error::TooManyViewpoints { m: sorted.len(), n });
        }
        Ok(Self { indices: sorted })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.indices.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat() -> Terrain {
        Terrain::new(&[(0.0, 0.0), (4.0, 0.0), (6.0, 0.0), (10.0, 0.0)]).unwrap()
    }

    fn peak() -> Terrain {
        Terrain::new(&[(0.0, 0.0), (5.0, 5.0), (10.0, 0.0)]).unwrap()
    }

    #[test]
    fn validate_terrain_fills_cumulative_lengths() {
        assert_eq!(flat().cum_len(), &[0.0, 4.0, 6.0, 10.0]);
        let p = peak();
        let s = 50f64.sqrt();
        assert!((p.cum_len()[1] - s).abs() < 1e-12);
        assert!((p.cum_len()[2] - 2.0 * s).abs() < 1e-12);
    }

    #[test]
    fn validate_terrain_rejects_bad_chains() {
        assert_eq!(
            Terrain::new(&[(0.0, 0.0), (0.0, 5.0)]).unwrap_err(),
            Error::NonMonotone(0)
        );
        assert_eq!(Terrain::new(&[(0.0, 0.0)]).unwrap_err(), Error::TooShort);
        assert_eq!(
            Terrain::new(&[(0.0, 0.0), (1.0, 1.0), (0.5, 0.0)]).unwrap_err(),
            Error::NonMonotone(1)
        );
        assert_eq!(
            Terrain::new(&[(0.0, f64::NAN), (1.0, 1.0)]).unwrap_err(),
            Error::NonFinite(0)
        );
    }

    #[test]
    fn point_at_x_examples() {
        let p = flat().point_at_x(5.0).unwrap();
        assert_eq!((p.edge, p.x, p.y), (1, 5.0, 0.0));
        let apex = peak().point_at_x(5.0).unwrap();
        assert_eq!((apex.edge, apex.x, apex.y), (0, 5.0, 5.0));
        let q = peak().point_at_x(2.5).unwrap();
        assert_eq!((q.edge, q.x, q.y), (0, 2.5, 2.5));
        assert_eq!(peak().point_at_x(11.0), Err(Error::OutOfRange(11.0)));
    }

    #[test]
    fn sees_examples() {
        let p = peak();
        let (a, apex, b) = (p.vertex_point(0), p.vertex_point(1), p.vertex_point(2));
        assert!(p.sees(&a, &apex));
        assert!(!p.sees(&a, &b));
        assert!(!p.sees(&b, &a));
        let f = flat();
        assert!(f.sees(&f.vertex_point(0), &f.vertex_point(3)));
    }

    #[test]
    fn ray_first_hit_examples() {
        let p = peak();
        let origin = Point::new(0.0, 0.0);
        assert_eq!(
            p.ray_first_hit(origin, Point::new(5.0, 5.0), Side::Right),
            None
        );
        let hit = p
            .ray_first_hit(origin, Point::new(2.5, 2.0), Side::Right)
            .unwrap();
        assert!((hit.x - 50.0 / 9.0).abs() < 1e-12);
        assert_eq!(hit.edge, 1);
        let f = flat();
        assert_eq!(
            f.ray_first_hit(Point::new(4.0, 0.0), Point::new(6.0, 0.0), Side::Right),
            None
        );
    }

    #[test]
    fn ray_first_hit_walks_left() {
        // Mirror image of the peak case.
        let p = peak();
        let hit = p
            .ray_first_hit(Point::new(10.0, 0.0), Point::new(7.5, 2.0), Side::Left)
            .unwrap();
        assert!((hit.x - (10.0 - 50.0 / 9.0)).abs() < 1e-12);
    }

    #[test]
    fn viewpoint_set_validation() {
        let t = flat();
        assert_eq!(ViewpointSet::new(&t, &[2, 1]).unwrap().indices(), &[1, 2]);
        assert_eq!(
            ViewpointSet::new(&t, &[1, 1]).unwrap_err(),
            Error::DuplicateViewpoint(1)
        );
        assert_eq!(
            ViewpointSet::new(&t, &[7]).unwrap_err(),
            Error::ViewpointOutOfRange(7)
        );
        assert_eq!(
            ViewpointSet::new(&t, &[0, 1, 2, 3]).unwrap_err(),
            Error::TooManyViewpoints { m: 4, n: 4 }
        );
    }

    #[test]
    fn arc_round_trip() {
        let p = peak();
        let q = p.point_at_x(7.0).unwrap();
        let back = p.point_at_arc(p.arc_position(&q));
        assert!((back.x - 7.0).abs() < 1e-12);
        assert_eq!(p.point_at_arc(50f64.sqrt()).edge, 0);
    }
}
