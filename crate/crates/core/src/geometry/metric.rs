use std::fmt;
use std::str::FromStr;

use super::{Terrain, TerrainPoint};

/// Distance used to decide which visible viewpoint is closest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Metric {
    /// Straight-line distance in the plane.
    Euclidean,
    /// Arc length along the terrain.
    Geodesic,
    /// Number of terrain vertices strictly between the two points.
    Link,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Euclidean, Metric::Geodesic, Metric::Link];
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Euclidean => "euclidean",
            Metric::Geodesic => "geodesic",
            Metric::Link => "link",
        })
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "geodesic" => Ok(Metric::Geodesic),
            "link" => Ok(Metric::Link),
            other => Err(format!("unknown metric `{other}`")),
        }
    }
}

/// Number of vertices in the open portion of the terrain between `a` and `b`.
pub fn link_distance(terrain: &Terrain, a: &TerrainPoint, b: &TerrainPoint) -> usize {
    let (l, r) = if a.x <= b.x { (a, b) } else { (b, a) };
    let first = terrain.first_vertex_right(l);
    match terrain.last_vertex_left(r) {
        Some(last) if last >= first => last - first + 1,
        _ => 0,
    }
}

pub fn metric_distance(
    terrain: &Terrain,
    metric: Metric,
    a: &TerrainPoint,
    b: &TerrainPoint,
) -> f64 {
    match metric {
        Metric::Euclidean => a.point().dist(&b.point()),
        Metric::Geodesic => (terrain.arc_position(b) - terrain.arc_position(a)).abs(),
        Metric::Link => link_distance(terrain, a, b) as f64,
    }
}

/// Lexicographic comparison key for "how far is `x` from `viewpoint`".
///
/// `primary` is the metric distance (squared for the Euclidean metric).
/// `secondary` is zero except for the link metric, where it holds the arc
/// length from `x` back to the nearest terrain vertex on the viewpoint's
/// side. Link distance is constant on whole edges, and this refinement splits
/// an edge that is equidistant from two viewpoints at its midpoint.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct DistanceKey {
    pub primary: f64,
    pub secondary: f64,
}

impl DistanceKey {
    pub fn total_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.primary
            .total_cmp(&other.primary)
            .then(self.secondary.total_cmp(&other.secondary))
    }
}

pub fn metric_key(
    terrain: &Terrain,
    metric: Metric,
    viewpoint: usize,
    x: &TerrainPoint,
) -> DistanceKey {
    let v = terrain.vertex_point(viewpoint);
    match metric {
        Metric::Euclidean => DistanceKey {
            primary: v.point().dist2(&x.point()),
            secondary: 0.0,
        },
        Metric::Geodesic => DistanceKey {
            primary: (terrain.arc_position(x) - terrain.cum_len()[viewpoint]).abs(),
            secondary: 0.0,
        },
        Metric::Link => {
            let primary = link_distance(terrain, &v, x) as f64;
            let here = terrain.arc_position(x);
            let secondary = match terrain.vertex_index(x) {
                Some(i) if i == viewpoint => 0.0,
                _ if x.x > v.x => {
                    let w = terrain.last_vertex_left(x).unwrap_or(0);
                    here - terrain.cum_len()[w]
                }
                _ => {
                    let w = terrain.first_vertex_right(x).min(terrain.n() - 1);
                    terrain.cum_len()[w] - here
                }
            };
            DistanceKey { primary, secondary }
        }
    }
}

/// Link key of a point strictly inside `edge` at arc position `here`, even
/// when that point lies within tolerance of an endpoint: the one-sided limit
/// of [`metric_key`] from inside the edge.
pub(crate) fn link_key_inside(
    terrain: &Terrain,
    viewpoint: usize,
    edge: usize,
    here: f64,
) -> DistanceKey {
    let cum = terrain.cum_len();
    if viewpoint <= edge {
        DistanceKey {
            primary: (edge - viewpoint) as f64,
            secondary: here - cum[edge],
        }
    } else {
        DistanceKey {
            primary: (viewpoint - edge - 1) as f64,
            secondary: cum[edge + 1] - here,
        }
    }
}
