use super::events::{Event, EventList};
use super::tree::VisibleSet;
use super::VoronoiMap;
use crate::error::{Error, Result};
use crate::geometry::{link_key_inside, DistanceKey, Metric, Terrain, TerrainPoint};
use crate::viewshed::IntervalMap;

/// Instrumentation of one sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounters {
    /// Insertions plus removals in the ordered visible set.
    pub tree_ops: u64,
    pub events_processed: u64,
    /// Visibility tests made while building the event list.
    pub ray_queries: u64,
}

/// Shared driver state: the ordered visible set plus the points at which
/// keys are evaluated.
pub(crate) struct Sweep<'a> {
    terrain: &'a Terrain,
    metric: Metric,
    pub tree: VisibleSet,
    /// `probes[g]` lies in the open gap after the `g`-th event (gap 0 is
    /// before the first event).
    probes: Vec<Probe>,
}

/// A gap probe kept at its exact position: snapping it onto a nearby
/// vertex or event would make keys tie at the event itself.
#[derive(Clone, Copy)]
struct Probe {
    point: TerrainPoint,
    arc: f64,
}

impl<'a> Sweep<'a> {
    pub fn new(terrain: &'a Terrain, events: &EventList, metric: Metric) -> Self {
        let mut xs = vec![terrain.x_min()];
        xs.extend(events.events().iter().map(|e| e.position.x));
        let vs = terrain.vertices();
        let probes = xs
            .windows(2)
            .map(|w| {
                let x = 0.5 * (w[0] + w[1]);
                let edge = vs.partition_point(|v| v.x <= x).clamp(1, vs.len() - 1) - 1;
                let (a, b) = (vs[edge], vs[edge + 1]);
                let t = ((x - a.x) / (b.x - a.x)).clamp(0.0, 1.0);
                let point = TerrainPoint {
                    edge,
                    x: a.x + t * (b.x - a.x),
                    y: a.y + t * (b.y - a.y),
                };
                let arc = terrain.cum_len()[edge] + t * terrain.edge_len(edge);
                Probe { point, arc }
            })
            .collect();
        Self {
            terrain,
            metric,
            tree: VisibleSet::new(terrain.n()),
            probes,
        }
    }

    /// Strict "closer than" at the probe of `gap`, ties to the lower index.
    pub fn less_at(&self, gap: usize) -> impl Fn(usize, usize) -> bool + 'a {
        let at = self.probes[gap];
        let (terrain, metric) = (self.terrain, self.metric);
        let key = move |v: usize| -> DistanceKey {
            match metric {
                Metric::Euclidean => DistanceKey {
                    primary: terrain.vertex(v).dist2(&at.point.point()),
                    secondary: 0.0,
                },
                Metric::Geodesic => DistanceKey {
                    primary: (at.arc - terrain.cum_len()[v]).abs(),
                    secondary: 0.0,
                },
                Metric::Link => link_key_inside(terrain, v, at.point.edge, at.arc),
            }
        };
        move |a, b| key(a).total_cmp(&key(b)).then(a.cmp(&b)).is_lt()
    }

    pub fn insert(&mut self, v: usize, gap: usize) -> usize {
        let less = self.less_at(gap);
        self.tree.insert(v, less)
    }

    /// Applies the losses of `ev` and pulls out one viewpoint of every
    /// swapped pair. Returns the viewpoints to reinsert.
    pub fn detach(
        &mut self,
        ev: &Event,
        mut on_remove: impl FnMut(&VisibleSet, usize, usize),
    ) -> Result<Vec<usize>> {
        for &v in &ev.losses {
            let r = self.tree.remove(v).ok_or_else(|| {
                Error::InconsistentEventList(format!(
                    "viewpoint {v} lost at x = {} but not visible",
                    ev.position.x
                ))
            })?;
            on_remove(&self.tree, v, r);
        }
        if let Some(&v) = ev.gains.iter().find(|&&v| self.tree.contains(v)) {
            return Err(Error::InconsistentEventList(format!(
                "viewpoint {v} gained at x = {} but already visible",
                ev.position.x
            )));
        }
        // Removing one endpoint of every swapped pair (a vertex cover of the
        // swap graph) leaves a set whose order is still valid past the event.
        let mut reinsert: Vec<usize> = Vec::new();
        for &(i, j) in &ev.crossings {
            if self.tree.contains(i) && self.tree.contains(j) {
                let r = self.tree.remove(j).expect("present");
                on_remove(&self.tree, j, r);
                reinsert.push(j);
            }
        }
        Ok(reinsert)
    }
}

/// Runs the sweep over a prepared event list, starting from the viewpoints
/// visible at the left end of the terrain.
pub fn sweep_vorvis(
    terrain: &Terrain,
    initial: &[usize],
    events: &EventList,
    metric: Metric,
) -> Result<(VoronoiMap, OpCounters)> {
    let mut sweep = Sweep::new(terrain, events, metric);
    for &v in initial {
        sweep.insert(v, 0);
    }
    let mut owner = sweep.tree.min();
    let mut runs = Vec::new();
    let mut counters = OpCounters {
        ray_queries: events.ray_queries(),
        ..Default::default()
    };
    for (g, ev) in events.events().iter().enumerate() {
        counters.events_processed += 1;
        if ev.terminal {
            runs.push((ev.position, owner));
            break;
        }
        let reinsert = sweep.detach(ev, |_, _, _| {})?;
        for &v in ev.gains.iter().chain(&reinsert) {
            sweep.insert(v, g + 1);
        }
        let now = sweep.tree.min();
        if now != owner {
            runs.push((ev.position, owner));
            owner = now;
        }
    }
    counters.tree_ops = sweep.tree.tree_ops();
    Ok((IntervalMap::from_runs(terrain, runs), counters))
}
