//! Voronoi visibility maps: which visible viewpoint is closest along the terrain.
//!
//! Pipeline: viewsheds, colored map, pairwise equidistant candidates, one
//! left-to-right sweep over the merged events.

mod candidates;
mod events;
mod korder;
mod rstar;
mod sweep;
mod tree;

pub use candidates::{candidate_type3_events, raw_candidates};
pub use events::{build_event_list, Event, EventList};
pub use korder::{compute_kvorvis, compute_kvorvis_instrumented, KOrderMap};
pub use rstar::{compute_rstar, RStar};
pub use sweep::{sweep_vorvis, OpCounters};
pub use tree::VisibleSet;

use crate::error::Result;
use crate::geometry::{Metric, Terrain, ViewpointSet};
use crate::viewshed::{colvis_from_viewsheds, IntervalMap, Mode, SetMap, Viewsheds};

/// Owner per interval; `None` where no viewpoint sees the terrain.
pub type VoronoiMap = IntervalMap<Option<usize>>;

pub(crate) struct Prepared {
    pub colored: SetMap,
    pub events: EventList,
}

pub(crate) fn prepare(
    terrain: &Terrain,
    viewpoints: &ViewpointSet,
    metric: Metric,
    mode: Mode,
) -> Prepared {
    let viewsheds = Viewsheds::compute(terrain, viewpoints, mode);
    let colored = colvis_from_viewsheds(terrain, &viewsheds);
    let events = build_event_list(terrain, viewpoints, &colored, &viewsheds, metric);
    Prepared { colored, events }
}

/// The Voronoi visibility map.
pub fn compute_vorvis(
    terrain: &Terrain,
    viewpoints: &ViewpointSet,
    metric: Metric,
    mode: Mode,
) -> Result<VoronoiMap> {
    compute_vorvis_instrumented(terrain, viewpoints, metric, mode).map(|(m, _)| m)
}

/// As [`compute_vorvis`], also returning the operation counters of the sweep.
pub fn compute_vorvis_instrumented(
    terrain: &Terrain,
    viewpoints: &ViewpointSet,
    metric: Metric,
    mode: Mode,
) -> Result<(VoronoiMap, OpCounters)> {
    let Prepared { colored, events } = prepare(terrain, viewpoints, metric, mode);
    sweep_vorvis(terrain, colored.first(), &events, metric)
}
