use super::sweep::{OpCounters, Sweep};
use super::{prepare, Prepared};
use crate::error::{Error, Result};
use crate::geometry::{Metric, Terrain, ViewpointSet};
use crate::viewshed::{Delta, Mode, SetMap};

/// Labels are the `min(k, #visible)` closest visible viewpoints.
pub type KOrderMap = SetMap;

/// Membership in the top-k prefix of the visible order, with the state each
/// touched viewpoint had before the current event.
struct TopK {
    k: usize,
    inside: Vec<bool>,
    before: Vec<(usize, bool)>,
}

impl TopK {
    fn set(&mut self, v: usize, now: bool) {
        if self.inside[v] != now {
            if !self.before.iter().any(|&(w, _)| w == v) {
                self.before.push((v, self.inside[v]));
            }
            self.inside[v] = now;
        }
    }

    fn take_delta(&mut self) -> Delta {
        let mut d = Delta::default();
        for (v, was) in self.before.drain(..) {
            match (was, self.inside[v]) {
                (false, true) => d.gained.push(v),
                (true, false) => d.lost.push(v),
                _ => {}
            }
        }
        d
    }
}

/// The k-th order Voronoi visibility map.
pub fn compute_kvorvis(
    terrain: &Terrain,
    viewpoints: &ViewpointSet,
    k: usize,
    metric: Metric,
    mode: Mode,
) -> Result<KOrderMap> {
    compute_kvorvis_instrumented(terrain, viewpoints, k, metric, mode).map(|(m, _)| m)
}

pub fn compute_kvorvis_instrumented(
    terrain: &Terrain,
    viewpoints: &ViewpointSet,
    k: usize,
    metric: Metric,
    mode: Mode,
) -> Result<(KOrderMap, OpCounters)> {
    let m = viewpoints.len();
    if k < 1 || k > m {
        return Err(Error::InvalidK { k, m });
    }
    let Prepared {
        colored, events, ..
    } = prepare(terrain, viewpoints, metric, mode);
    let mut sweep = Sweep::new(terrain, &events, metric);
    let mut top = TopK {
        k,
        inside: vec![false; terrain.n()],
        before: Vec::new(),
    };
    for &v in colored.first() {
        sweep.insert(v, 0);
    }
    let first: Vec<usize> = (0..k.min(sweep.tree.len()))
        .map(|r| sweep.tree.select(r).unwrap())
        .collect();
    for &v in &first {
        top.inside[v] = true;
    }

    let mut changes = Vec::new();
    let mut counters = OpCounters {
        ray_queries: events.ray_queries(),
        ..Default::default()
    };
    for (g, ev) in events.events().iter().enumerate() {
        counters.events_processed += 1;
        if ev.terminal {
            break;
        }
        let reinsert = sweep.detach(ev, |tree, v, _| {
            if top.inside[v] {
                top.set(v, false);
                if let Some(w) = tree.select(top.k - 1) {
                    top.set(w, true);
                }
            }
        })?;

        for &v in &reinsert {
            let r = sweep.insert(v, g + 1);
            if r < k {
                top.set(v, true);
                if let Some(w) = sweep.tree.select(k) {
                    top.set(w, false);
                }
            }
        }

        // Gains, closest first: fill free slots, then admit while beating the
        // current k-th closest.
        let less = sweep.less_at(g + 1);
        let mut gains = ev.gains.clone();
        gains.sort_by(|&a, &b| {
            if less(a, b) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        let mut rest = gains.into_iter().peekable();
        while sweep.tree.len() < k {
            let Some(v) = rest.next() else { break };
            sweep.insert(v, g + 1);
            top.set(v, true);
        }
        while let Some(&c) = rest.peek() {
            let p_max = sweep.tree.select(k - 1).expect("k viewpoints visible");
            if !less(c, p_max) {
                break;
            }
            sweep.insert(c, g + 1);
            top.set(c, true);
            top.set(p_max, false);
            rest.next();
        }
        for v in rest {
            sweep.insert(v, g + 1);
        }

        changes.push((ev.position, top.take_delta()));
    }
    counters.tree_ops = sweep.tree.tree_ops();
    Ok((SetMap::assemble(terrain, first, changes), counters))
}
