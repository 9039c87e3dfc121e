//! Viewsheds of single viewpoints and the maps built by overlaying them.

mod colored;
mod interval_map;

pub use colored::{
    colvis_from_viewsheds, compute_colvis, compute_vis, vis_from_colvis, Delta, SetMap,
};
pub use interval_map::IntervalMap;

use std::fmt;
use std::str::FromStr;

use crate::geometry::{Point, Terrain, TerrainPoint, ViewpointSet};

/// Which directions a viewpoint can see in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Both,
    /// Viewpoints see only themselves and terrain to their left.
    Left,
    /// Viewpoints see only themselves and terrain to their right.
    Right,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Both, Mode::Left, Mode::Right];

    /// Whether the mode lets a viewpoint at `vx` look at `x`.
    pub fn allows(self, vx: f64, x: f64) -> bool {
        match self {
            Mode::Both => true,
            Mode::Left => x <= vx,
            Mode::Right => x >= vx,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Both => "both",
            Mode::Left => "left",
            Mode::Right => "right",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "both" => Ok(Mode::Both),
            "left" => Ok(Mode::Left),
            "right" => Ok(Mode::Right),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

/// A closed portion `[start, end]` of the terrain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedInterval {
    pub start: TerrainPoint,
    pub end: TerrainPoint,
}

impl ClosedInterval {
    pub fn contains_x(&self, x: f64, tol: f64) -> bool {
        x >= self.start.x - tol && x <= self.end.x + tol
    }
}

/// Walks away from `v` along `order` (vertex indices moving monotonically
/// away from `v`) and returns the visible closed pieces in walk order; the
/// first piece always starts at `v`.
///
/// A point `q` is visible iff its rise per unit of horizontal distance from
/// `v` is at least `rise(w) - tol / dist(w)` for every vertex `w` passed so
/// far, which is exactly the vertex test of [`Terrain::sees`]. Only the
/// running maximum of that bound is kept.
fn angular_walk(
    terrain: &Terrain,
    v: usize,
    order: impl Iterator<Item = usize>,
) -> Vec<ClosedInterval> {
    let tol = terrain.tol();
    let vp = terrain.vertex(v);
    let mut out = Vec::new();
    let mut open: Option<TerrainPoint> = Some(terrain.vertex_point(v));
    let mut near = v;
    let mut bound = f64::NEG_INFINITY;

    for far in order {
        let (a, b) = (terrain.vertex(near), terrain.vertex(far));
        // Height above the bounding line at both ends of the edge.
        let gap = |p: Point| {
            let d = (p.x - vp.x).abs();
            if bound == f64::NEG_INFINITY {
                0.0
            } else {
                p.y - vp.y - bound * d
            }
        };
        let (ga, gb) = (gap(a), gap(b));
        let at = |t: f64| {
            let edge = near.min(far);
            terrain.point_on_edge(edge, if far > near { t } else { 1.0 - t })
        };
        match (ga >= 0.0, gb >= 0.0) {
            (true, true) => {
                if open.is_none() {
                    open = Some(terrain.vertex_point(near));
                }
            }
            (true, false) => {
                let start = open.take().unwrap_or_else(|| terrain.vertex_point(near));
                out.push(ClosedInterval {
                    start,
                    end: at(ga / (ga - gb)),
                });
            }
            (false, true) => {
                if open.is_none() {
                    open = Some(at(ga / (ga - gb)));
                }
            }
            (false, false) => {
                if let Some(start) = open.take() {
                    out.push(ClosedInterval {
                        start,
                        end: terrain.vertex_point(near),
                    });
                }
            }
        }
        let d = (b.x - vp.x).abs();
        bound = bound.max((b.y - vp.y) / d - tol / d);
        near = far;
    }
    if let Some(start) = open {
        out.push(ClosedInterval {
            start,
            end: terrain.vertex_point(near),
        });
    }
    out
}

/// Maximal closed intervals of the terrain visible from viewpoint vertex `v`.
///
/// Two angular walks (one per side) of O(n) total. A viewpoint always sees
/// itself; in the one-sided modes the output stops at `v`.
pub fn viewshed(terrain: &Terrain, v: usize, mode: Mode) -> Vec<ClosedInterval> {
    let here = terrain.vertex_point(v);
    let mut left: Vec<ClosedInterval> = if mode == Mode::Right {
        vec![ClosedInterval {
            start: here,
            end: here,
        }]
    } else {
        angular_walk(terrain, v, (0..v).rev())
            .into_iter()
            .map(|iv| ClosedInterval {
                start: iv.end,
                end: iv.start,
            })
            .collect()
    };
    left.reverse();
    let right = if mode == Mode::Left {
        vec![ClosedInterval {
            start: here,
            end: here,
        }]
    } else {
        angular_walk(terrain, v, v + 1..terrain.n())
    };
    // Both walks produce a piece touching `v`; fuse them.
    let last = left
        .pop()
        .expect("walk always yields the viewpoint's own piece");
    let mut right = right.into_iter();
    let first = right
        .next()
        .expect("walk always yields the viewpoint's own piece");
    left.push(ClosedInterval {
        start: last.start,
        end: first.end,
    });
    left.extend(right);
    left
}

/// The viewsheds of every viewpoint of an instance under one mode.
#[derive(Clone, Debug)]
pub struct Viewsheds {
    mode: Mode,
    tol: f64,
    per_viewpoint: Vec<(usize, Vec<ClosedInterval>)>,
}

impl Viewsheds {
    pub fn compute(terrain: &Terrain, viewpoints: &ViewpointSet, mode: Mode) -> Self {
        Self {
            mode,
            tol: terrain.tol(),
            per_viewpoint: viewpoints
                .iter()
                .map(|v| (v, viewshed(terrain, v, mode)))
                .collect(),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &[ClosedInterval])> {
        self.per_viewpoint.iter().map(|(v, s)| (*v, s.as_slice()))
    }

    pub fn of(&self, v: usize) -> Option<&[ClosedInterval]> {
        self.per_viewpoint
            .binary_search_by_key(&v, |(w, _)| *w)
            .ok()
            .map(|i| self.per_viewpoint[i].1.as_slice())
    }

    /// Whether `x` lies in the closed viewshed of `v` (within tolerance).
    pub fn sees_x(&self, v: usize, x: f64) -> bool {
        let Some(intervals) = self.of(v) else {
            return false;
        };
        let idx = intervals.partition_point(|iv| iv.end.x < x - self.tol);
        intervals
            .get(idx)
            .is_some_and(|iv| iv.contains_x(x, self.tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xs(intervals: &[ClosedInterval]) -> Vec<(f64, f64)> {
        intervals.iter().map(|iv| (iv.start.x, iv.end.x)).collect()
    }

    #[test]
    fn viewshed_examples() {
        let peak = Terrain::new(&[(0.0, 0.0), (5.0, 5.0), (10.0, 0.0)]).unwrap();
        assert_eq!(xs(&viewshed(&peak, 0, Mode::Both)), vec![(0.0, 5.0)]);
        assert_eq!(xs(&viewshed(&peak, 1, Mode::Both)), vec![(0.0, 10.0)]);
        let flat = Terrain::new(&[(0.0, 0.0), (4.0, 0.0), (6.0, 0.0), (10.0, 0.0)]).unwrap();
        assert_eq!(xs(&viewshed(&flat, 1, Mode::Left)), vec![(0.0, 4.0)]);
        assert_eq!(xs(&viewshed(&flat, 1, Mode::Right)), vec![(4.0, 10.0)]);
        assert_eq!(xs(&viewshed(&flat, 1, Mode::Both)), vec![(0.0, 10.0)]);
    }

    #[test]
    fn viewshed_resumes_behind_a_ridge() {
        // From v0 the first ridge at (2,3) hides (3,0.5) but not the tall (5,9).
        let t =
            Terrain::new(&[(0.0, 0.0), (2.0, 3.0), (3.0, 0.5), (5.0, 9.0), (6.0, 5.0)]).unwrap();
        let vs = viewshed(&t, 0, Mode::Both);
        assert_eq!(vs.len(), 2);
        assert_eq!((vs[0].start.x, vs[0].end.x), (0.0, 2.0));
        // Sight line y = 1.5x meets edge (3,0.5)-(5,9) where 0.5 + 4.25(x-3) = 1.5x.
        let x = (0.5 - 12.75) / (1.5 - 4.25);
        assert!((vs[1].start.x - x).abs() < 10.0 * t.tol());
        assert_eq!(vs[1].end.x, 5.0);
    }

    #[test]
    fn viewsheds_membership() {
        let peak = Terrain::new(&[(0.0, 0.0), (5.0, 5.0), (10.0, 0.0)]).unwrap();
        let p = ViewpointSet::new(&peak, &[0, 2]).unwrap();
        let v = Viewsheds::compute(&peak, &p, Mode::Both);
        assert!(v.sees_x(0, 5.0));
        assert!(v.sees_x(2, 5.0));
        assert!(!v.sees_x(0, 5.1));
        assert!(!v.sees_x(1, 5.0));
    }
}
