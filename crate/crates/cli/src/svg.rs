use std::fmt::Write;

use terravis_core::geometry::{Terrain, TerrainPoint, ViewpointSet};
use terravis_core::viewshed::IntervalMap;

use crate::files::Label;

const WIDTH: f64 = 1000.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 20.0;
const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

struct Frame {
    x0: f64,
    y0: f64,
    scale: f64,
    dx: f64,
    dy: f64,
}

impl Frame {
    fn new(terrain: &Terrain) -> Self {
        let vs = terrain.vertices();
        let (x0, x1) = (terrain.x_min(), terrain.x_max());
        let y0 = vs.iter().map(|v| v.y).fold(f64::INFINITY, f64::min);
        let y1 = vs.iter().map(|v| v.y).fold(f64::NEG_INFINITY, f64::max);
        let (w, h) = (x1 - x0, (y1 - y0).max(1e-12));
        let scale = ((WIDTH - 2.0 * MARGIN) / w).min((HEIGHT - 2.0 * MARGIN) / h);
        Self {
            x0,
            y0,
            scale,
            dx: MARGIN + 0.5 * (WIDTH - 2.0 * MARGIN - w * scale),
            dy: MARGIN + 0.5 * (HEIGHT - 2.0 * MARGIN - h * scale),
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.dx + (x - self.x0) * self.scale,
            HEIGHT - self.dy - (y - self.y0) * self.scale,
        )
    }

    fn polyline(&self, pts: impl Iterator<Item = (f64, f64)>) -> String {
        let mut out = String::new();
        for (i, (x, y)) in pts.enumerate() {
            let (sx, sy) = self.map(x, y);
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{sx:.2},{sy:.2}");
        }
        out
    }
}

fn color(label: &Label, viewpoints: &ViewpointSet) -> Option<&'static str> {
    let slot = |v: usize| {
        viewpoints
            .indices()
            .iter()
            .position(|&u| u == v)
            .unwrap_or(0)
    };
    match label {
        Label::Visible { visible: true } => Some(PALETTE[0]),
        Label::Owner { owner: Some(v) } => Some(PALETTE[slot(*v) % PALETTE.len()]),
        Label::Set { set } if !set.is_empty() => {
            Some(PALETTE[set.iter().map(|&v| slot(v) + 1).sum::<usize>() % PALETTE.len()])
        }
        _ => None,
    }
}

fn chain(terrain: &Terrain, l: &TerrainPoint, r: &TerrainPoint) -> Vec<(f64, f64)> {
    let mut pts = vec![(l.x, l.y)];
    pts.extend(
        terrain
            .vertices()
            .iter()
            .filter(|v| v.x > l.x && v.x < r.x)
            .map(|v| (v.x, v.y)),
    );
    pts.push((r.x, r.y));
    pts
}

/// Terrain polyline, map intervals as coloured strokes, breakpoints as
/// ticks and viewpoints as markers.
pub fn render(terrain: &Terrain, viewpoints: &ViewpointSet, map: &IntervalMap<Label>) -> String {
    let f = Frame::new(terrain);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let terrain_pts = f.polyline(terrain.vertices().iter().map(|v| (v.x, v.y)));
    let _ = writeln!(
        out,
        r##"<polyline points="{terrain_pts}" fill="none" stroke="#444" stroke-width="1"/>"##
    );
    for (l, r, label) in map.intervals() {
        if let Some(c) = color(label, viewpoints) {
            let pts = f.polyline(chain(terrain, &l, &r).into_iter());
            let _ = writeln!(
                out,
                r#"<polyline points="{pts}" fill="none" stroke="{c}" stroke-width="4" stroke-opacity="0.8"/>"#
            );
        }
    }
    for b in map.interior_breakpoints() {
        let (x, y) = f.map(b.x, b.y);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
            y - 6.0,
            y + 6.0
        );
    }
    for (slot, v) in viewpoints.iter().enumerate() {
        let p = terrain.vertex(v);
        let (x, y) = f.map(p.x, p.y);
        let c = PALETTE[slot % PALETTE.len()];
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{c}" stroke="black"><title>v{v}</title></circle>"#
        );
    }
    out.push_str("</svg>\n");
    out
}
