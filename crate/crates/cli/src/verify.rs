use terravis_core::geometry::{Metric, Terrain, ViewpointSet};
use terravis_core::oracle_bench::{
    check_theorem_bound, compare_map_to_oracle, count_complexities, oracle_at, probe_positions,
    MismatchReport, OracleSample,
};
use terravis_core::viewshed::{compute_colvis, compute_vis, IntervalMap, Mode};
use terravis_core::vorvis::{
    compute_kvorvis_instrumented, compute_vorvis_instrumented, OpCounters,
};

use crate::files::{Label, MapKind};

const SAMPLES_PER_EDGE: usize = 20;

/// Which map to build and how.
#[derive(Clone, Copy, Debug)]
pub struct MapRequest {
    pub kind: MapKind,
    pub metric: Metric,
    pub mode: Mode,
    pub k: Option<usize>,
}

pub fn compute_map(
    terrain: &Terrain,
    viewpoints: &ViewpointSet,
    req: &MapRequest,
) -> terravis_core::Result<(IntervalMap<Label>, Option<OpCounters>)> {
    Ok(match req.kind {
        MapKind::Vis => {
            let m = compute_vis(terrain, viewpoints, req.mode);
            (
                m.map_labels(terrain, |&visible| Label::Visible { visible }),
                None,
            )
        }
        MapKind::Colvis => {
            let m = compute_colvis(terrain, viewpoints, req.mode).to_interval_map(terrain);
            (
                m.map_labels(terrain, |s| Label::Set { set: s.clone() }),
                None,
            )
        }
        MapKind::Vorvis => {
            let (m, c) = compute_vorvis_instrumented(terrain, viewpoints, req.metric, req.mode)?;
            (
                m.map_labels(terrain, |&owner| Label::Owner { owner }),
                Some(c),
            )
        }
        MapKind::Kvorvis => {
            let k = req.k.unwrap_or(1);
            let (m, c) =
                compute_kvorvis_instrumented(terrain, viewpoints, k, req.metric, req.mode)?;
            let m = m.to_interval_map(terrain);
            (
                m.map_labels(terrain, |s| Label::Set { set: s.clone() }),
                Some(c),
            )
        }
    })
}

fn expected(req: &MapRequest, s: &OracleSample) -> Label {
    match req.kind {
        MapKind::Vis => Label::Visible {
            visible: s.owner().is_some(),
        },
        MapKind::Colvis => Label::Set { set: s.visible() },
        MapKind::Vorvis => Label::Owner { owner: s.owner() },
        MapKind::Kvorvis => Label::Set {
            set: s.closest(req.k.unwrap_or(1)),
        },
    }
}

/// Compares `map` with the brute-force answer at its probe positions.
pub fn oracle_check(
    terrain: &Terrain,
    viewpoints: &ViewpointSet,
    req: &MapRequest,
    map: &IntervalMap<Label>,
) -> MismatchReport {
    let samples: Vec<OracleSample> = probe_positions(terrain, map.breakpoints(), SAMPLES_PER_EDGE)
        .into_iter()
        .map(|x| oracle_at(terrain, viewpoints, req.metric, req.mode, x))
        .collect();
    compare_map_to_oracle(map, &samples, terrain.tol(), |s| expected(req, s))
}

/// Report lines plus the overall verdict.
#[derive(Debug, Default)]
pub struct Outcome {
    pub lines: Vec<String>,
    pub ok: bool,
}

impl Outcome {
    fn fail(&mut self, line: String) {
        self.ok = false;
        self.lines.push(line);
    }
}

pub fn oracle_line(report: &MismatchReport) -> String {
    match report.mismatches.first() {
        None => format!("oracle: {} probes, 0 mismatches", report.checked),
        Some(m) => format!(
            "oracle: {} probes, {} mismatches; first at x = {}: expected {}, found {}",
            report.checked,
            report.mismatches.len(),
            m.x,
            m.expected,
            m.found
        ),
    }
}

/// Partition, oracle and complexity checks on one instance.
pub fn verify_instance(terrain: &Terrain, viewpoints: &ViewpointSet, req: &MapRequest) -> Outcome {
    let mut out = Outcome {
        ok: true,
        ..Default::default()
    };
    let (map, counters) = match compute_map(terrain, viewpoints, req) {
        Ok(r) => r,
        Err(e) => {
            out.fail(format!("map: {e}"));
            return out;
        }
    };
    match map.check_partition(terrain) {
        Ok(()) => out
            .lines
            .push(format!("partition: {} intervals", map.len())),
        Err(e) => out.fail(format!("partition: {e}")),
    }
    let report = oracle_check(terrain, viewpoints, req, &map);
    if report.is_ok() {
        out.lines.push(oracle_line(&report));
    } else {
        out.fail(oracle_line(&report));
    }
    match count_complexities(terrain, viewpoints) {
        Ok(c) => {
            out.lines.push(format!(
                "counts: n = {}, m = {}, k_c = {}, k_v = {}, k_v - k_c = {}",
                c.n,
                c.m,
                c.k_c,
                c.k_v,
                c.k_v as i64 - c.k_c as i64
            ));
            if check_theorem_bound(&c) {
                out.lines
                    .push("bound: k_v <= min(k_c + m^2, 2 k_c + 8 m - 4) holds".into());
            } else {
                out.fail("bound: k_v <= min(k_c + m^2, 2 k_c + 8 m - 4) violated".into());
            }
        }
        Err(e) => out.fail(format!("counts: {e}")),
    }
    if let Some(c) = counters {
        out.lines.push(format!(
            "ops: tree_ops = {}, events_processed = {}, ray_queries = {}",
            c.tree_ops, c.events_processed, c.ray_queries
        ));
    }
    out
}
