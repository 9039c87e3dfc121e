use crate::geometry::{Terrain, TerrainPoint};

/// A partition of the terrain into consecutive intervals, one label each.
///
/// `breakpoints` runs from the leftmost to the rightmost terrain point with
/// strictly increasing x; interval `i` spans `breakpoints[i]..breakpoints[i + 1]`
/// and carries `labels[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalMap<L> {
    breakpoints: Vec<TerrainPoint>,
    labels: Vec<L>,
}

impl<L: PartialEq + Clone> IntervalMap<L> {
    /// Builds a map from raw runs `(right end, label)`, dropping empty runs
    /// and merging equal neighbours so that the result is maximal.
    ///
    /// Panics if `runs` is empty.
    pub fn from_runs(terrain: &Terrain, runs: impl IntoIterator<Item = (TerrainPoint, L)>) -> Self {
        let tol = terrain.tol();
        let mut breakpoints = vec![terrain.start()];
        let mut labels: Vec<L> = Vec::new();
        let mut last_seen = None;
        for (end, label) in runs {
            let last_x = breakpoints.last().unwrap().x;
            if end.x - last_x <= tol {
                last_seen = Some(label);
                continue;
            }
            if labels.last() == Some(&label) {
                *breakpoints.last_mut().unwrap() = end;
            } else {
                breakpoints.push(end);
                labels.push(label);
            }
        }
        if labels.is_empty() {
            labels.push(last_seen.expect("IntervalMap::from_runs needs at least one run"));
            breakpoints.push(terrain.end());
        }
        *breakpoints.last_mut().unwrap() = terrain.end();
        Self {
            breakpoints,
            labels,
        }
    }

    /// A single interval covering the whole terrain.
    pub fn uniform(terrain: &Terrain, label: L) -> Self {
        Self {
            breakpoints: vec![terrain.start(), terrain.end()],
            labels: vec![label],
        }
    }

    pub fn breakpoints(&self) -> &[TerrainPoint] {
        &self.breakpoints
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Breakpoints strictly inside the terrain.
    pub fn interior_breakpoints(&self) -> &[TerrainPoint] {
        let n = self.breakpoints.len();
        if n <= 2 {
            &[]
        } else {
            &self.breakpoints[1..n - 1]
        }
    }

    /// Iterates `(left, right, label)` for every interval.
    pub fn intervals(&self) -> impl Iterator<Item = (TerrainPoint, TerrainPoint, &L)> {
        self.breakpoints
            .windows(2)
            .zip(&self.labels)
            .map(|(w, l)| (w[0], w[1], l))
    }

    /// Index of the interval containing `x`; a breakpoint belongs to the
    /// interval on its right (the last interval keeps the right end).
    pub fn index_at(&self, x: f64) -> usize {
        let idx = self.breakpoints.partition_point(|b| b.x <= x);
        idx.clamp(1, self.labels.len()) - 1
    }

    pub fn label_at(&self, x: f64) -> &L {
        &self.labels[self.index_at(x)]
    }

    /// Relabels every interval and re-merges equal neighbours.
    pub fn map_labels<M: PartialEq + Clone>(
        &self,
        terrain: &Terrain,
        f: impl Fn(&L) -> M,
    ) -> IntervalMap<M> {
        IntervalMap::from_runs(terrain, self.intervals().map(|(_, r, l)| (r, f(l))))
    }

    /// Checks the partition invariant: ends match the terrain, x strictly
    /// increasing, and adjacent labels differ.
    pub fn check_partition(&self, terrain: &Terrain) -> Result<(), String> {
        if self.breakpoints.len() != self.labels.len() + 1 {
            return Err(format!(
                "{} breakpoints for {} labels",
                self.breakpoints.len(),
                self.labels.len()
            ));
        }
        if self.breakpoints[0].x != terrain.x_min()
            || self.breakpoints.last().unwrap().x != terrain.x_max()
        {
            return Err("map does not span the terrain".into());
        }
        if let Some(w) = self.breakpoints.windows(2).find(|w| w[1].x <= w[0].x) {
            return Err(format!("breakpoints not increasing at x = {}", w[0].x));
        }
        if let Some(i) = self.labels.windows(2).position(|w| w[0] == w[1]) {
            return Err(format!("intervals {i} and {} share a label", i + 1));
        }
        Ok(())
    }

    /// True when both maps have the same labels and breakpoints within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.labels == other.labels
            && self.breakpoints.len() == other.breakpoints.len()
            && self
                .breakpoints
                .iter()
                .zip(&other.breakpoints)
                .all(|(a, b)| (a.x - b.x).abs() <= tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runs_merge_and_drop_empties() {
        let t = Terrain::new(&[(0.0, 0.0), (4.0, 0.0), (6.0, 0.0), (10.0, 0.0)]).unwrap();
        let p = |x| t.point_at_x(x).unwrap();
        let m = IntervalMap::from_runs(
            &t,
            vec![(p(2.0), 1), (p(2.0), 7), (p(5.0), 1), (p(10.0), 2)],
        );
        assert_eq!(m.labels(), &[1, 2]);
        assert_eq!(
            m.breakpoints().iter().map(|b| b.x).collect::<Vec<_>>(),
            vec![0.0, 5.0, 10.0]
        );
        assert!(m.check_partition(&t).is_ok());
        assert_eq!(*m.label_at(5.0), 2);
        assert_eq!(*m.label_at(4.9), 1);
        assert_eq!(*m.label_at(10.0), 2);
    }
}
