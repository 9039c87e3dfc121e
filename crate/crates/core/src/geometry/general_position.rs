use std::collections::BTreeSet;

use super::{Point, Terrain, TerrainPoint, ViewpointSet};

/// Violations of the non-degeneracy assumptions.
///
/// Computations still run on violating inputs; ties are broken by the lower
/// viewpoint index.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GeneralPositionReport {
    /// Vertex triples `(i, j, k)`, `i < j < k`, lying on one line.
    pub collinear_triples: Vec<[usize; 3]>,
    /// `(edge, i, j)`: the whole edge lies on the bisector of viewpoints `i`, `j`.
    pub edge_on_bisector: Vec<(usize, usize, usize)>,
    /// Terrain points equidistant from three viewpoints `(i, j, k)`.
    pub triple_equidistant: Vec<(TerrainPoint, usize, usize, usize)>,
}

impl GeneralPositionReport {
    pub fn is_clean(&self) -> bool {
        self.collinear_triples.is_empty()
            && self.edge_on_bisector.is_empty()
            && self.triple_equidistant.is_empty()
    }
}

/// Signed distance from `x` to the bisector of `a` and `b`; negative on `a`'s side.
pub(crate) fn bisector_offset(a: Point, b: Point, x: Point) -> f64 {
    let f = a.dist2(&x) - b.dist2(&x);
    f / (2.0 * a.dist(&b))
}

/// All points where the Euclidean bisector of viewpoints `i` and `j` meets
/// the terrain, sorted by x. Tangential touches at vertices are included.
pub fn bisector_crossings(terrain: &Terrain, i: usize, j: usize) -> Vec<TerrainPoint> {
    let tol = terrain.tol();
    let (a, b) = (terrain.vertex(i), terrain.vertex(j));
    let g: Vec<f64> = terrain
        .vertices()
        .iter()
        .map(|&v| bisector_offset(a, b, v))
        .collect();
    let mut out = Vec::new();
    for e in 0..terrain.n() - 1 {
        if g[e].abs() <= tol {
            out.push(terrain.vertex_point(e));
        }
        let (ga, gb) = (g[e], g[e + 1]);
        if (ga < -tol && gb > tol) || (ga > tol && gb < -tol) {
            out.push(terrain.point_on_edge(e, ga / (ga - gb)));
        }
    }
    if g[terrain.n() - 1].abs() <= tol {
        out.push(terrain.end());
    }
    out
}

fn collinear_triples(terrain: &Terrain) -> Vec<[usize; 3]> {
    let tol = terrain.tol();
    let vs = terrain.vertices();
    let n = vs.len();
    let mut found = BTreeSet::new();
    for i in 0..n {
        let mut dirs: Vec<(f64, usize)> = ((i + 1)..n)
            .map(|j| ((vs[j].y - vs[i].y).atan2(vs[j].x - vs[i].x), j))
            .collect();
        if dirs.len() < 2 {
            continue;
        }
        let min_len = ((i + 1)..n)
            .map(|j| vs[i].dist(&vs[j]))
            .fold(f64::INFINITY, f64::min);
        let angle_tol = 2.0 * tol / min_len;
        dirs.sort_by(|a, b| a.0.total_cmp(&b.0));
        for a in 0..dirs.len() {
            for b in (a + 1)..dirs.len() {
                if dirs[b].0 - dirs[a].0 > angle_tol {
                    break;
                }
                let (j, k) = (dirs[a].1.min(dirs[b].1), dirs[a].1.max(dirs[b].1));
                // Distance of the middle vertex from the chord through the outer two.
                let (p, q, r) = (vs[i], vs[j], vs[k]);
                let cross = (r.x - p.x) * (q.y - p.y) - (r.y - p.y) * (q.x - p.x);
                if cross.abs() / p.dist(&r) <= tol {
                    found.insert([i, j, k]);
                }
            }
        }
    }
    found.into_iter().collect()
}

/// Checks the three non-degeneracy assumptions on an instance.
pub fn check_general_position(
    terrain: &Terrain,
    viewpoints: &ViewpointSet,
) -> GeneralPositionReport {
    let tol = terrain.tol();
    let mut report = GeneralPositionReport {
        collinear_triples: collinear_triples(terrain),
        ..Default::default()
    };

    let p = viewpoints.indices();
    let mut crossings: Vec<(TerrainPoint, usize, usize)> = Vec::new();
    for (a, &i) in p.iter().enumerate() {
        for &j in &p[a + 1..] {
            let (pi, pj) = (terrain.vertex(i), terrain.vertex(j));
            for e in 0..terrain.n() - 1 {
                let ga = bisector_offset(pi, pj, terrain.vertex(e));
                let gb = bisector_offset(pi, pj, terrain.vertex(e + 1));
                if ga.abs() <= tol && gb.abs() <= tol {
                    report.edge_on_bisector.push((e, i, j));
                }
            }
            crossings.extend(
                bisector_crossings(terrain, i, j)
                    .into_iter()
                    .map(|q| (q, i, j)),
            );
        }
    }

    crossings.sort_by(|a, b| a.0.cmp_x(&b.0));
    let mut triples = BTreeSet::new();
    for a in 0..crossings.len() {
        for b in (a + 1)..crossings.len() {
            let (qa, i, j) = crossings[a];
            let (qb, k, l) = crossings[b];
            if qb.x - qa.x > tol {
                break;
            }
            let ids: BTreeSet<usize> = [i, j, k, l].into_iter().collect();
            if ids.len() == 3 {
                let v: Vec<usize> = ids.into_iter().collect();
                if triples.insert((v[0], v[1], v[2], qa.x.to_bits())) {
                    report.triple_equidistant.push((qa, v[0], v[1], v[2]));
                }
            }
        }
    }
    report
}
