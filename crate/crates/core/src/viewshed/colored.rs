use std::collections::BTreeSet;

use super::{IntervalMap, Mode, Viewsheds};
use crate::geometry::{Terrain, TerrainPoint, ViewpointSet};

/// Change of the label set at one breakpoint.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Delta {
    pub gained: Vec<usize>,
    pub lost: Vec<usize>,
}

impl Delta {
    pub fn is_empty(&self) -> bool {
        self.gained.is_empty() && self.lost.is_empty()
    }
}

/// A partition of the terrain labeled with viewpoint sets, stored as the set
/// of the first interval plus one [`Delta`] per interior breakpoint.
///
/// Used for the colored visibility map (label = visible viewpoints) and for
/// k-th order maps (label = the k closest visible viewpoints).
#[derive(Clone, Debug, PartialEq)]
pub struct SetMap {
    breakpoints: Vec<TerrainPoint>,
    first: Vec<usize>,
    deltas: Vec<Delta>,
}

impl SetMap {
    /// Assembles a map from the first label and `(position, delta)` pairs in
    /// increasing x. Empty deltas are dropped.
    pub(crate) fn assemble(
        terrain: &Terrain,
        mut first: Vec<usize>,
        changes: impl IntoIterator<Item = (TerrainPoint, Delta)>,
    ) -> Self {
        first.sort_unstable();
        let mut breakpoints = vec![terrain.start()];
        let mut deltas = Vec::new();
        for (at, mut delta) in changes {
            if delta.is_empty() {
                continue;
            }
            delta.gained.sort_unstable();
            delta.lost.sort_unstable();
            breakpoints.push(at);
            deltas.push(delta);
        }
        breakpoints.push(terrain.end());
        Self {
            breakpoints,
            first,
            deltas,
        }
    }

    pub fn breakpoints(&self) -> &[TerrainPoint] {
        &self.breakpoints
    }

    pub fn interior_breakpoints(&self) -> &[TerrainPoint] {
        &self.breakpoints[1..self.breakpoints.len() - 1]
    }

    pub fn first(&self) -> &[usize] {
        &self.first
    }

    pub fn deltas(&self) -> &[Delta] {
        &self.deltas
    }

    /// Number of intervals.
    pub fn len(&self) -> usize {
        self.deltas.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Replays the deltas into one sorted label per interval.
    pub fn labels(&self) -> Vec<Vec<usize>> {
        let mut current: BTreeSet<usize> = self.first.iter().copied().collect();
        let mut out = vec![current.iter().copied().collect()];
        for d in &self.deltas {
            for v in &d.lost {
                current.remove(v);
            }
            current.extend(d.gained.iter().copied());
            out.push(current.iter().copied().collect());
        }
        out
    }

    pub fn to_interval_map(&self, terrain: &Terrain) -> IntervalMap<Vec<usize>> {
        IntervalMap::from_runs(
            terrain,
            self.breakpoints[1..].iter().copied().zip(self.labels()),
        )
    }

    /// Checks that every delta is well formed against the replayed label:
    /// disjoint gain/loss sets, gains absent before, losses present before,
    /// and no empty deltas.
    pub fn check_replay(&self) -> Result<(), String> {
        let mut current: BTreeSet<usize> = self.first.iter().copied().collect();
        if current.len() != self.first.len() {
            return Err("duplicate viewpoint in first label".into());
        }
        for (i, d) in self.deltas.iter().enumerate() {
            let at = self.breakpoints[i + 1].x;
            if d.is_empty() {
                return Err(format!("empty delta at x = {at}"));
            }
            if d.gained.iter().any(|v| d.lost.contains(v)) {
                return Err(format!("viewpoint both gained and lost at x = {at}"));
            }
            for v in &d.lost {
                if !current.remove(v) {
                    return Err(format!("viewpoint {v} lost at x = {at} but was absent"));
                }
            }
            for &v in &d.gained {
                if !current.insert(v) {
                    return Err(format!("viewpoint {v} gained at x = {at} but was present"));
                }
            }
        }
        Ok(())
    }

    /// Same first label and deltas, breakpoints within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.first == other.first
            && self.deltas == other.deltas
            && self.breakpoints.len() == other.breakpoints.len()
            && self
                .breakpoints
                .iter()
                .zip(&other.breakpoints)
                .all(|(a, b)| (a.x - b.x).abs() <= tol)
    }
}

/// Colored visibility map from precomputed viewsheds.
///
/// Every viewshed endpoint becomes a gain or loss; endpoints closer than the
/// terrain tolerance are coalesced into one breakpoint. Runs in
/// O(K log K) for K viewshed intervals.
pub fn colvis_from_viewsheds(terrain: &Terrain, viewsheds: &Viewsheds) -> SetMap {
    let tol = terrain.tol();
    let (x_min, x_max) = (terrain.x_min(), terrain.x_max());
    let mut first = Vec::new();
    // (position, slot, +1 gain / -1 loss)
    let mut events: Vec<(TerrainPoint, usize, i32)> = Vec::new();
    let ids: Vec<usize> = viewsheds.iter().map(|(v, _)| v).collect();
    for (slot, (_, intervals)) in viewsheds.iter().enumerate() {
        for iv in intervals {
            if iv.end.x - iv.start.x <= tol {
                continue;
            }
            if iv.start.x <= x_min + tol {
                first.push(ids[slot]);
            } else {
                events.push((iv.start, slot, 1));
            }
            if iv.end.x < x_max - tol {
                events.push((iv.end, slot, -1));
            }
        }
    }
    events.sort_by(|a, b| a.0.cmp_x(&b.0));

    let mut count = vec![0i32; ids.len()];
    for &v in &first {
        count[ids.binary_search(&v).unwrap()] += 1;
    }
    let mut changes = Vec::new();
    let mut i = 0;
    while i < events.len() {
        let anchor = events[i].0;
        let mut j = i;
        let mut touched = Vec::new();
        while j < events.len() && events[j].0.x - anchor.x <= tol {
            touched.push((events[j].1, count[events[j].1] > 0));
            count[events[j].1] += events[j].2;
            j += 1;
        }
        // Stable: the first entry per slot holds its state before the group.
        touched.sort_by_key(|t| t.0);
        touched.dedup_by_key(|t| t.0);
        let mut delta = Delta::default();
        for (slot, before) in touched {
            let after = count[slot] > 0;
            match (before, after) {
                (false, true) => delta.gained.push(ids[slot]),
                (true, false) => delta.lost.push(ids[slot]),
                _ => {}
            }
        }
        changes.push((anchor, delta));
        i = j;
    }
    SetMap::assemble(terrain, first, changes)
}

/// The colored visibility map: maximal intervals with equal visible sets.
pub fn compute_colvis(terrain: &Terrain, viewpoints: &ViewpointSet, mode: Mode) -> SetMap {
    colvis_from_viewsheds(terrain, &Viewsheds::compute(terrain, viewpoints, mode))
}

/// The visibility map collapsed from a colored map.
pub fn vis_from_colvis(terrain: &Terrain, colored: &SetMap) -> IntervalMap<bool> {
    let mut size = colored.first().len();
    let mut runs = Vec::with_capacity(colored.len());
    for (d, at) in colored.deltas().iter().zip(colored.interior_breakpoints()) {
        runs.push((*at, size > 0));
        size = size + d.gained.len() - d.lost.len();
    }
    runs.push((terrain.end(), size > 0));
    IntervalMap::from_runs(terrain, runs)
}

/// The visibility map: visible iff at least one viewpoint sees the point.
pub fn compute_vis(terrain: &Terrain, viewpoints: &ViewpointSet, mode: Mode) -> IntervalMap<bool> {
    vis_from_colvis(terrain, &compute_colvis(terrain, viewpoints, mode))
}
