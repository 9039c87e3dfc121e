//! Brute-force oracles, instance generators and complexity checks.

mod generate;
mod oracle;

pub use generate::{gen_fig4b, gen_random_terrain, InstanceSpec};
pub use oracle::{
    check_owner_map, check_set_map, compare_map_to_oracle, edge_samples, oracle_at, oracle_map,
    probe_positions, Mismatch, MismatchReport, OracleSample,
};

use crate::error::Result;
use crate::geometry::{Metric, Terrain, TerrainPoint, ViewpointSet};
use crate::viewshed::{compute_colvis, Mode};
use crate::vorvis::{compute_vorvis, VoronoiMap};

/// Sizes of the colored and Voronoi maps, counting every terrain vertex plus
/// every interior breakpoint that is not a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplexityCounts {
    pub n: usize,
    pub m: usize,
    pub k_c: usize,
    pub k_v: usize,
}

fn off_vertex(terrain: &Terrain, breakpoints: &[TerrainPoint]) -> usize {
    breakpoints
        .iter()
        .filter(|b| terrain.vertex_index(b).is_none())
        .count()
}

/// Counts for the Euclidean maps with two-sided viewpoints.
pub fn count_complexities(
    terrain: &Terrain,
    viewpoints: &ViewpointSet,
) -> Result<ComplexityCounts> {
    let colored = compute_colvis(terrain, viewpoints, Mode::Both);
    let voronoi = compute_vorvis(terrain, viewpoints, Metric::Euclidean, Mode::Both)?;
    Ok(counts_from_maps(
        terrain,
        viewpoints,
        colored.interior_breakpoints(),
        &voronoi,
    ))
}

pub fn counts_from_maps(
    terrain: &Terrain,
    viewpoints: &ViewpointSet,
    colored_breakpoints: &[TerrainPoint],
    voronoi: &VoronoiMap,
) -> ComplexityCounts {
    let n = terrain.n();
    ComplexityCounts {
        n,
        m: viewpoints.len(),
        k_c: n + off_vertex(terrain, colored_breakpoints),
        k_v: n + off_vertex(terrain, voronoi.interior_breakpoints()),
    }
}

/// `k_v ≤ min(k_c + m², 2 k_c + 8 m − 4)`.
pub fn check_theorem_bound(c: &ComplexityCounts) -> bool {
    let (k_c, m) = (c.k_c as i64, c.m as i64);
    (c.k_v as i64) <= (k_c + m * m).min(2 * k_c + 8 * m - 4)
}

/// Region counts of the Euclidean two-sided maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegionCounts {
    pub colvis: usize,
    /// Voronoi intervals that have an owner.
    pub vorvis_visible: usize,
}

pub fn region_counts(terrain: &Terrain, viewpoints: &ViewpointSet) -> Result<RegionCounts> {
    let colored = compute_colvis(terrain, viewpoints, Mode::Both);
    let voronoi = compute_vorvis(terrain, viewpoints, Metric::Euclidean, Mode::Both)?;
    Ok(RegionCounts {
        colvis: colored.len(),
        vorvis_visible: voronoi.labels().iter().filter(|o| o.is_some()).count(),
    })
}

/// Breakpoints of the two-sided Euclidean map that are explained neither by
/// the one-sided maps nor by a single bisector between the nearest visible
/// viewpoint on the left and the one on the right. Positions are compared
/// with tolerance `slack`.
pub fn directional_decomposition_violations(
    terrain: &Terrain,
    viewpoints: &ViewpointSet,
    slack: f64,
) -> Result<Vec<TerrainPoint>> {
    let both = compute_vorvis(terrain, viewpoints, Metric::Euclidean, Mode::Both)?;
    let left = compute_vorvis(terrain, viewpoints, Metric::Euclidean, Mode::Left)?;
    let right = compute_vorvis(terrain, viewpoints, Metric::Euclidean, Mode::Right)?;
    let near = |map: &VoronoiMap, x: f64| {
        map.interior_breakpoints()
            .iter()
            .any(|b| (b.x - x).abs() <= slack)
    };
    let mut out = Vec::new();
    for (i, b) in both.interior_breakpoints().iter().enumerate() {
        if near(&left, b.x) || near(&right, b.x) {
            continue;
        }
        // Owners on both sides: one must sit left of b and one right of it,
        // at equal distance.
        let (a, c) = (both.labels()[i], both.labels()[i + 1]);
        let explained = match (a, c) {
            (Some(a), Some(c)) => {
                let (pa, pc) = (terrain.vertex(a), terrain.vertex(c));
                let q = b.point();
                (pa.x - q.x) * (pc.x - q.x) <= 0.0 && (pa.dist(&q) - pc.dist(&q)).abs() <= slack
            }
            _ => false,
        };
        if !explained {
            out.push(*b);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_counts() {
        let flat = Terrain::new(&[(0.0, 0.0), (4.0, 0.0), (6.0, 0.0), (10.0, 0.0)]).unwrap();
        let c = count_complexities(&flat, &ViewpointSet::new(&flat, &[1, 2]).unwrap()).unwrap();
        assert_eq!((c.n, c.m, c.k_c, c.k_v), (4, 2, 4, 5));
        assert!(check_theorem_bound(&c));

        let peak = Terrain::new(&[(0.0, 0.0), (5.0, 5.0), (10.0, 0.0)]).unwrap();
        let c = count_complexities(&peak, &ViewpointSet::new(&peak, &[0, 2]).unwrap()).unwrap();
        assert_eq!((c.k_c, c.k_v), (3, 3));
    }

    #[test]
    fn theorem_bound_examples() {
        assert!(check_theorem_bound(&ComplexityCounts {
            n: 4,
            m: 2,
            k_c: 4,
            k_v: 5
        }));
        assert!(!check_theorem_bound(&ComplexityCounts {
            n: 4,
            m: 2,
            k_c: 4,
            k_v: 100
        }));
    }
}
