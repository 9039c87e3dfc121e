use std::fmt::Debug;

use crate::geometry::{metric_key, Metric, Terrain, TerrainPoint, ViewpointSet};
use crate::viewshed::{IntervalMap, Mode};

/// Brute-force answer at one terrain position.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleSample {
    pub x: f64,
    /// Visible viewpoints, closest first, ties to the lower index.
    pub ranked: Vec<usize>,
}

impl OracleSample {
    pub fn owner(&self) -> Option<usize> {
        self.ranked.first().copied()
    }

    /// The `min(k, #visible)` closest visible viewpoints, sorted by index.
    pub fn closest(&self, k: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.ranked.iter().take(k).copied().collect();
        out.sort_unstable();
        out
    }

    pub fn visible(&self) -> Vec<usize> {
        self.closest(usize::MAX)
    }
}

/// Tests every viewpoint against `x` directly: O(m n).
pub fn oracle_at(
    terrain: &Terrain,
    viewpoints: &ViewpointSet,
    metric: Metric,
    mode: Mode,
    x: f64,
) -> OracleSample {
    let q = terrain.point_at_x(x).expect("sample inside terrain");
    let mut ranked: Vec<usize> = viewpoints
        .iter()
        .filter(|&v| {
            let p = terrain.vertex_point(v);
            mode.allows(p.x, q.x) && terrain.sees(&p, &q)
        })
        .collect();
    ranked.sort_by(|&a, &b| {
        metric_key(terrain, metric, a, &q)
            .total_cmp(&metric_key(terrain, metric, b, &q))
            .then(a.cmp(&b))
    });
    OracleSample { x, ranked }
}

/// `samples_per_edge` evenly spaced positions inside every edge.
pub fn edge_samples(terrain: &Terrain, samples_per_edge: usize) -> Vec<f64> {
    assert!(samples_per_edge >= 1, "need at least one sample per edge");
    let vs = terrain.vertices();
    let mut xs = Vec::with_capacity((vs.len() - 1) * samples_per_edge);
    for w in vs.windows(2) {
        for s in 0..samples_per_edge {
            let t = (s as f64 + 0.5) / samples_per_edge as f64;
            xs.push(w[0].x + t * (w[1].x - w[0].x));
        }
    }
    xs
}

/// Probe positions for checking a map: edge samples, every interval
/// midpoint, and both sides of every interior breakpoint at a distance of
/// 10⁻⁴ of the containing edge's width.
pub fn probe_positions(
    terrain: &Terrain,
    breakpoints: &[TerrainPoint],
    samples_per_edge: usize,
) -> Vec<f64> {
    let mut xs = edge_samples(terrain, samples_per_edge);
    xs.extend(breakpoints.windows(2).map(|w| 0.5 * (w[0].x + w[1].x)));
    for b in &breakpoints[1..breakpoints.len() - 1] {
        let e = b.edge;
        let width = terrain.vertex(e + 1).x - terrain.vertex(e).x;
        let delta = 1e-4 * width;
        xs.push(b.x - delta);
        xs.push(b.x + delta);
    }
    xs.retain(|&x| x >= terrain.x_min() && x <= terrain.x_max());
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

/// The oracle at the default edge samples.
pub fn oracle_map(
    terrain: &Terrain,
    viewpoints: &ViewpointSet,
    metric: Metric,
    mode: Mode,
    samples_per_edge: usize,
) -> Vec<OracleSample> {
    edge_samples(terrain, samples_per_edge)
        .into_iter()
        .map(|x| oracle_at(terrain, viewpoints, metric, mode, x))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub x: f64,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MismatchReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl MismatchReport {
    pub fn is_ok(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn merge(&mut self, other: MismatchReport) {
        self.checked += other.checked;
        self.mismatches.extend(other.mismatches);
    }
}

/// Compares a map against oracle samples; samples within `tol` of a map
/// breakpoint are skipped.
pub fn compare_map_to_oracle<L: PartialEq + Clone + Debug>(
    map: &IntervalMap<L>,
    samples: &[OracleSample],
    tol: f64,
    expected: impl Fn(&OracleSample) -> L,
) -> MismatchReport {
    let mut report = MismatchReport::default();
    let bps = map.breakpoints();
    for s in samples {
        let i = bps.partition_point(|b| b.x < s.x);
        let near = |j: usize| bps.get(j).is_some_and(|b| (b.x - s.x).abs() <= tol);
        if (i > 0 && near(i - 1)) || near(i) {
            continue;
        }
        report.checked += 1;
        let want = expected(s);
        let got = map.label_at(s.x);
        if *got != want {
            report.mismatches.push(Mismatch {
                x: s.x,
                expected: format!("{want:?}"),
                found: format!("{got:?}"),
            });
        }
    }
    report
}

/// Checks an owner map against the oracle at its own probe positions.
pub fn check_owner_map(
    terrain: &Terrain,
    viewpoints: &ViewpointSet,
    metric: Metric,
    mode: Mode,
    map: &IntervalMap<Option<usize>>,
    samples_per_edge: usize,
) -> MismatchReport {
    let samples: Vec<OracleSample> = probe_positions(terrain, map.breakpoints(), samples_per_edge)
        .into_iter()
        .map(|x| oracle_at(terrain, viewpoints, metric, mode, x))
        .collect();
    compare_map_to_oracle(map, &samples, terrain.tol(), OracleSample::owner)
}

/// Checks a set-labelled map (`k` closest visible viewpoints) against the
/// oracle at its own probe positions.
pub fn check_set_map(
    terrain: &Terrain,
    viewpoints: &ViewpointSet,
    metric: Metric,
    mode: Mode,
    map: &IntervalMap<Vec<usize>>,
    k: usize,
    samples_per_edge: usize,
) -> MismatchReport {
    let samples: Vec<OracleSample> = probe_positions(terrain, map.breakpoints(), samples_per_edge)
        .into_iter()
        .map(|x| oracle_at(terrain, viewpoints, metric, mode, x))
        .collect();
    compare_map_to_oracle(map, &samples, terrain.tol(), |s| s.closest(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_owner_flips_at_five() {
        let t = Terrain::new(&[(0.0, 0.0), (4.0, 0.0), (6.0, 0.0), (10.0, 0.0)]).unwrap();
        let p = ViewpointSet::new(&t, &[1, 2]).unwrap();
        let samples = oracle_map(&t, &p, Metric::Euclidean, Mode::Both, 10);
        let owners: Vec<(f64, Option<usize>)> = samples.iter().map(|s| (s.x, s.owner())).collect();
        assert!(owners
            .iter()
            .all(|&(x, o)| o == Some(if x < 5.0 { 1 } else { 2 })));
        assert!([4.9, 5.1]
            .iter()
            .all(|y| owners.iter().any(|&(x, _)| (x - y).abs() < 1e-12)));
    }

    #[test]
    fn swapped_owners_mismatch_everywhere() {
        let t = Terrain::new(&[(0.0, 0.0), (4.0, 0.0), (6.0, 0.0), (10.0, 0.0)]).unwrap();
        let p = ViewpointSet::new(&t, &[1, 2]).unwrap();
        let samples = oracle_map(&t, &p, Metric::Euclidean, Mode::Both, 10);
        let five = t.point_at_x(5.0).unwrap();
        let good = IntervalMap::from_runs(&t, vec![(five, Some(1)), (t.end(), Some(2))]);
        let bad = IntervalMap::from_runs(&t, vec![(five, Some(2)), (t.end(), Some(1))]);
        assert!(compare_map_to_oracle(&good, &samples, t.tol(), OracleSample::owner).is_ok());
        let r = compare_map_to_oracle(&bad, &samples, t.tol(), OracleSample::owner);
        assert_eq!(r.mismatches.len(), r.checked);
        assert_eq!(r.checked, 30);
    }
}
