use super::candidates::counted_candidates;
use crate::geometry::{Metric, Terrain, TerrainPoint, ViewpointSet};
use crate::viewshed::{SetMap, Viewsheds};

/// Everything that happens at one sweep position.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Event {
    pub position: TerrainPoint,
    pub gains: Vec<usize>,
    pub losses: Vec<usize>,
    /// Viewpoint pairs `(i, j)`, `i < j`, whose bisector is crossed here.
    pub crossings: Vec<(usize, usize)>,
    /// The sentinel at the right end of the terrain.
    pub terminal: bool,
}

/// Events sorted by strictly increasing x, ending with the terminal sentinel.
#[derive(Clone, Debug, PartialEq)]
pub struct EventList {
    events: Vec<Event>,
    /// Visibility tests spent on filtering candidates.
    pub(crate) ray_queries: u64,
}

impl EventList {
    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn ray_queries(&self) -> u64 {
        self.ray_queries
    }
}

enum Item {
    Visibility(Vec<usize>, Vec<usize>),
    Crossing(usize, usize),
}

/// Merges the breakpoints of the colored map with all type-(iii) candidates.
/// Items closer than the terrain tolerance share one composite event, placed
/// at the colored-map breakpoint when there is one.
pub fn build_event_list(
    terrain: &Terrain,
    viewpoints: &ViewpointSet,
    colored: &SetMap,
    viewsheds: &Viewsheds,
    metric: Metric,
) -> EventList {
    let tol = terrain.tol();
    let mut items: Vec<(TerrainPoint, Item)> = colored
        .interior_breakpoints()
        .iter()
        .zip(colored.deltas())
        .map(|(at, d)| (*at, Item::Visibility(d.gained.clone(), d.lost.clone())))
        .collect();
    let p = viewpoints.indices();
    let mut ray_queries = 0;
    for (a, &i) in p.iter().enumerate() {
        for &j in &p[a + 1..] {
            let found = counted_candidates(terrain, viewsheds, i, j, metric, &mut ray_queries);
            items.extend(found.into_iter().map(|q| (q, Item::Crossing(i, j))));
        }
    }
    items.sort_by(|a, b| a.0.cmp_x(&b.0));

    let mut events = Vec::new();
    let mut k = 0;
    while k < items.len() {
        let anchor = items[k].0.x;
        let mut ev = Event {
            position: items[k].0,
            ..Default::default()
        };
        while k < items.len() && items[k].0.x - anchor <= tol {
            match &items[k].1 {
                Item::Visibility(g, l) => {
                    ev.position = items[k].0;
                    ev.gains.extend(g);
                    ev.losses.extend(l);
                }
                Item::Crossing(i, j) => ev.crossings.push((*i, *j)),
            }
            k += 1;
        }
        ev.crossings.sort_unstable();
        ev.crossings.dedup();
        events.push(ev);
    }
    events.push(Event {
        position: terrain.end(),
        terminal: true,
        ..Default::default()
    });
    EventList {
        events,
        ray_queries,
    }
}
