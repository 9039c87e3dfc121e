use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{count_complexities, region_counts};
use crate::error::{Error, Result};
use crate::geometry::{Terrain, ViewpointSet};

/// Parameters of a random instance.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceSpec {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    /// Heights stay inside `[low, high]`.
    pub height_range: (f64, f64),
    /// Largest height change between neighbouring vertices.
    pub roughness: f64,
    /// x steps are uniform in `1 ± jitter`.
    pub jitter: f64,
}

impl InstanceSpec {
    pub fn new(seed: u64, n: usize, m: usize) -> Self {
        Self {
            seed,
            n,
            m,
            height_range: (0.0, 10.0),
            roughness: 2.0,
            jitter: 0.4,
        }
    }
}

/// A random terrain: jittered x steps and a reflected random walk for the
/// heights, with `m` distinct viewpoint vertices. Deterministic per seed.
pub fn gen_random_terrain(spec: &InstanceSpec) -> Result<(Terrain, ViewpointSet)> {
    if spec.m >= spec.n {
        return Err(Error::TooManyViewpoints {
            m: spec.m,
            n: spec.n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (low, high) = spec.height_range;
    let mut x = 0.0;
    let mut y = rng.gen_range(low..=high);
    let mut vertices = Vec::with_capacity(spec.n);
    for _ in 0..spec.n {
        vertices.push((x, y));
        x += 1.0 + rng.gen_range(-spec.jitter..=spec.jitter);
        y += rng.gen_range(-spec.roughness..=spec.roughness);
        if y > high {
            y = 2.0 * high - y;
        }
        if y < low {
            y = 2.0 * low - y;
        }
        y = y.clamp(low, high);
    }
    let terrain = Terrain::new(&vertices)?;
    let picks = sample(&mut rng, spec.n, spec.m).into_vec();
    let viewpoints = ViewpointSet::new(&terrain, &picks)?;
    Ok((terrain, viewpoints))
}

fn fig4b_candidate(m: usize, far: f64, step: f64) -> Vec<(f64, f64)> {
    let h = 1.0;
    // Wall points p_m (top, left) .. p_1 (bottom, right); gaps widen
    // downwards so the wall is convex.
    let mut wall = vec![(0.0, h)];
    for k in 2..=m {
        let gap = step * (m - k + 2) as f64;
        let (x, _) = *wall.last().unwrap();
        wall.push((x - gap, k as f64 * h));
    }
    wall.reverse();
    let (x_top, y_top) = wall[0];
    let top = y_top + 2.0 * h;
    let mut v = vec![(x_top - 2.0, -5.0), (x_top - 0.01 * step, top)];
    v.extend(wall);
    v.push((far, 0.5 * h));
    v.push((far + 0.5 * far, top + 0.5 * far * 0.05));
    let (xr, _) = *v.last().unwrap();
    v.push((xr + 0.01, -5.0));
    v
}

/// An instance where every viewpoint sees the same portion of the terrain
/// but that portion is split among them into `2m − 1` Voronoi parts: a
/// convex valley with the viewpoints stacked on its steep left wall and a
/// long slope on the right that crosses every bisector of neighbouring
/// viewpoints. Coordinates are searched and the counts verified.
pub fn gen_fig4b(m: usize) -> Result<(Terrain, ViewpointSet)> {
    if m < 2 {
        return Err(Error::ConstructionFailed(format!(
            "m = {m} must be at least 2"
        )));
    }
    for far in [20.0, 40.0, 80.0, 12.0] {
        for step in [0.02, 0.01, 0.005] {
            let vertices = fig4b_candidate(m, far, step);
            let Ok(terrain) = Terrain::new(&vertices) else {
                continue;
            };
            let indices: Vec<usize> = (2..2 + m).collect();
            let viewpoints = ViewpointSet::new(&terrain, &indices)?;
            let Ok(counts) = count_complexities(&terrain, &viewpoints) else {
                continue;
            };
            let Ok(regions) = region_counts(&terrain, &viewpoints) else {
                continue;
            };
            if regions.colvis == 3
                && regions.vorvis_visible == 2 * m - 1
                && counts.k_v - counts.k_c == 2 * m - 2
            {
                return Ok((terrain, viewpoints));
            }
        }
    }
    Err(Error::ConstructionFailed(format!(
        "no verified layout for m = {m}"
    )))
}
