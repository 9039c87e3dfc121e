use super::compute_vorvis;
use crate::error::{Error, Result};
use crate::geometry::{Metric, Terrain, TerrainPoint, ViewpointSet};
use crate::viewshed::Mode;

/// Smallest viewing radius that keeps the visibility map unchanged, with the
/// viewpoint and terrain point that attain it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RStar {
    pub value: f64,
    pub viewpoint: usize,
    pub point: TerrainPoint,
}

/// Every visible point must lie within the radius of its nearest visible
/// viewpoint, so r* is the largest owner distance over the Euclidean map.
/// Distance to a fixed point is convex along an edge, so interval endpoints
/// and interior vertices suffice.
pub fn compute_rstar(terrain: &Terrain, viewpoints: &ViewpointSet) -> Result<RStar> {
    if viewpoints.is_empty() {
        return Err(Error::NoViewpoints);
    }
    let map = compute_vorvis(terrain, viewpoints, Metric::Euclidean, Mode::Both)?;
    let first = viewpoints.indices()[0];
    let mut best = RStar {
        value: 0.0,
        viewpoint: first,
        point: terrain.vertex_point(first),
    };
    for (l, r, owner) in map.intervals() {
        let Some(v) = *owner else { continue };
        let vp = terrain.vertex(v);
        let inner = terrain.first_vertex_right(&l)..=terrain.last_vertex_left(&r).unwrap_or(0);
        let inner = inner
            .map(|i| terrain.vertex_point(i))
            .filter(|p| p.x > l.x && p.x < r.x);
        for p in [l, r].into_iter().chain(inner) {
            let d = vp.dist(&p.point());
            if d > best.value {
                best = RStar {
                    value: d,
                    viewpoint: v,
                    point: p,
                };
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_values() {
        let flat = Terrain::new(&[(0.0, 0.0), (4.0, 0.0), (6.0, 0.0), (10.0, 0.0)]).unwrap();
        let r = compute_rstar(&flat, &ViewpointSet::new(&flat, &[1]).unwrap()).unwrap();
        assert_eq!(r.value, 6.0);
        assert_eq!(r.point.x, 10.0);
        let r = compute_rstar(&flat, &ViewpointSet::new(&flat, &[1, 2]).unwrap()).unwrap();
        assert_eq!(r.value, 4.0);

        let peak = Terrain::new(&[(0.0, 0.0), (5.0, 5.0), (10.0, 0.0)]).unwrap();
        let r = compute_rstar(&peak, &ViewpointSet::new(&peak, &[1]).unwrap()).unwrap();
        assert_eq!(r.value, 50f64.sqrt());
        assert_eq!(r.viewpoint, 1);
    }

    #[test]
    fn no_viewpoints() {
        let peak = Terrain::new(&[(0.0, 0.0), (5.0, 5.0), (10.0, 0.0)]).unwrap();
        let empty = ViewpointSet::new(&peak, &[]).unwrap();
        assert_eq!(compute_rstar(&peak, &empty), Err(Error::NoViewpoints));
    }
}
