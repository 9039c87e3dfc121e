use crate::geometry::general_position::bisector_offset;
use crate::geometry::{Metric, Side, Terrain, TerrainPoint};
use crate::viewshed::Viewsheds;

/// First crossing of the Euclidean bisector of `lower` and `other` met when
/// walking away from `lower` along `side`. Tangential touches end the walk
/// with no candidate.
fn first_crossing(
    terrain: &Terrain,
    lower: usize,
    other: usize,
    side: Side,
) -> Option<TerrainPoint> {
    let tol = terrain.tol();
    let n = terrain.n();
    let (a, b) = (terrain.vertex(lower), terrain.vertex(other));
    let g = |w: usize| bisector_offset(a, b, terrain.vertex(w));
    let order: Box<dyn Iterator<Item = usize>> = match side {
        Side::Right => Box::new(lower + 1..n),
        Side::Left => Box::new((0..lower).rev()),
    };
    let mut order = order.peekable();
    let mut prev = lower;
    let mut g_prev = g(lower);
    while let Some(w) = order.next() {
        let gw = g(w);
        if gw > tol {
            let t = g_prev / (g_prev - gw);
            let edge = prev.min(w);
            let t_edge = if w > prev { t } else { 1.0 - t };
            return Some(terrain.point_on_edge(edge, t_edge));
        }
        if gw >= -tol {
            // Touch at vertex `w`: a crossing if the sign flips after it.
            for u in order.by_ref() {
                let gu = g(u);
                if gu > tol {
                    let at_end = w == 0 || w == n - 1;
                    return (!at_end).then(|| terrain.vertex_point(w));
                }
                if gu < -tol {
                    return None;
                }
            }
            return None;
        }
        prev = w;
        g_prev = gw;
    }
    None
}

/// Equidistant points of viewpoints `i` and `j` before any visibility
/// filtering: up to two for the Euclidean metric, one otherwise.
pub fn raw_candidates(terrain: &Terrain, i: usize, j: usize, metric: Metric) -> Vec<TerrainPoint> {
    assert_ne!(i, j, "candidates need two distinct viewpoints");
    match metric {
        Metric::Euclidean => {
            let (pi, pj) = (terrain.vertex(i), terrain.vertex(j));
            let (lower, other) = if pi.y <= pj.y { (i, j) } else { (j, i) };
            [Side::Left, Side::Right]
                .into_iter()
                .filter_map(|s| first_crossing(terrain, lower, other, s))
                .collect()
        }
        Metric::Geodesic => {
            let s = 0.5 * (terrain.cum_len()[i] + terrain.cum_len()[j]);
            vec![terrain.point_at_arc(s)]
        }
        Metric::Link => {
            let (a, b) = (i.min(j), i.max(j));
            if (b - a - 1) % 2 == 1 {
                vec![terrain.vertex_point((a + b) / 2)]
            } else {
                vec![terrain.point_on_edge((a + b - 1) / 2, 0.5)]
            }
        }
    }
}

/// Type-(iii) candidates of a viewpoint pair: equidistant terrain points that
/// both viewpoints see. Points at the terrain ends are dropped since no
/// interval starts there.
pub fn candidate_type3_events(
    terrain: &Terrain,
    viewsheds: &Viewsheds,
    i: usize,
    j: usize,
    metric: Metric,
) -> Vec<TerrainPoint> {
    counted_candidates(terrain, viewsheds, i, j, metric, &mut 0)
}

/// As [`candidate_type3_events`], adding the number of visibility tests to `queries`.
pub(crate) fn counted_candidates(
    terrain: &Terrain,
    viewsheds: &Viewsheds,
    i: usize,
    j: usize,
    metric: Metric,
    queries: &mut u64,
) -> Vec<TerrainPoint> {
    let tol = terrain.tol();
    raw_candidates(terrain, i, j, metric)
        .into_iter()
        .filter(|q| q.x > terrain.x_min() + tol && q.x < terrain.x_max() - tol)
        .filter(|q| {
            *queries += 2;
            viewsheds.sees_x(i, q.x) && viewsheds.sees_x(j, q.x)
        })
        .collect()
}
