use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use terravis_core::geometry::{Terrain, ViewpointSet};
use terravis_core::viewshed::IntervalMap;

/// A terrain with its viewpoints, as stored on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub vertices: Vec<[f64; 2]>,
    pub viewpoints: Vec<usize>,
}

impl InstanceFile {
    pub fn from_instance(terrain: &Terrain, viewpoints: &ViewpointSet) -> Self {
        Self {
            name: None,
            seed: None,
            vertices: terrain.vertices().iter().map(|v| [v.x, v.y]).collect(),
            viewpoints: viewpoints.indices().to_vec(),
        }
    }

    pub fn build(&self, eps: Option<f64>) -> terravis_core::Result<(Terrain, ViewpointSet)> {
        let raw: Vec<(f64, f64)> = self.vertices.iter().map(|&[x, y]| (x, y)).collect();
        let terrain = match eps {
            Some(eps) => Terrain::with_eps(&raw, eps)?,
            None => Terrain::new(&raw)?,
        };
        let viewpoints = ViewpointSet::new(&terrain, &self.viewpoints)?;
        Ok((terrain, viewpoints))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Vis,
    Colvis,
    Vorvis,
    Kvorvis,
}

/// What one interval of a map says.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Visible { visible: bool },
    Set { set: Vec<usize> },
    Owner { owner: Option<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalEntry {
    pub interval: [f64; 2],
    #[serde(flatten)]
    pub label: Label,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub instance: InstanceFile,
    pub map: MapKind,
    pub metric: String,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub intervals: Vec<IntervalEntry>,
}

pub fn entries(map: &IntervalMap<Label>) -> Vec<IntervalEntry> {
    map.intervals()
        .map(|(l, r, label)| IntervalEntry {
            interval: [l.x, r.x],
            label: label.clone(),
        })
        .collect()
}

/// Rebuilds a map from stored entries, which must tile the terrain.
pub fn from_entries(
    terrain: &Terrain,
    entries: &[IntervalEntry],
) -> Result<IntervalMap<Label>, String> {
    let tol = terrain.tol();
    let (Some(first), Some(last)) = (entries.first(), entries.last()) else {
        return Err("map has no intervals".into());
    };
    if (first.interval[0] - terrain.x_min()).abs() > tol
        || (last.interval[1] - terrain.x_max()).abs() > tol
    {
        return Err("intervals do not span the terrain".into());
    }
    for w in entries.windows(2) {
        if (w[0].interval[1] - w[1].interval[0]).abs() > tol {
            return Err(format!("gap or overlap at x = {}", w[0].interval[1]));
        }
    }
    if let Some(e) = entries.iter().find(|e| e.interval[1] <= e.interval[0]) {
        return Err(format!("empty interval at x = {}", e.interval[0]));
    }
    let mut runs = Vec::with_capacity(entries.len());
    for e in entries {
        let end = terrain
            .point_at_x(e.interval[1])
            .map_err(|err| err.to_string())?;
        runs.push((end, e.label.clone()));
    }
    Ok(IntervalMap::from_runs(terrain, runs))
}

/// A document that could not be read or parsed.
#[derive(Debug)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseError {}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, ParseError> {
    let text = fs::read_to_string(path)
        .map_err(|e| ParseError(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| ParseError(format!("cannot parse {}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
