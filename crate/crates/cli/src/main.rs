//! `terravis`: visibility and Voronoi visibility maps of 1.5D terrains.

mod files;
mod svg;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{CommandFactory, Parser, Subcommand};
use terravis_core::geometry::{check_general_position, Metric, Terrain, ViewpointSet};
use terravis_core::oracle_bench::{gen_fig4b, gen_random_terrain, InstanceSpec};
use terravis_core::viewshed::Mode;
use terravis_core::vorvis::compute_rstar;

use files::{InstanceFile, MapFile, MapKind, ParseError};
use verify::{MapRequest, Outcome};

#[derive(Parser)]
#[command(name = "terravis", version, about = "Visibility maps of 1.5D terrains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an instance file and report degeneracies.
    Validate { path: PathBuf },
    /// Compute a map and write it as JSON.
    Map {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "vorvis")]
        map: MapKind,
        #[arg(long, default_value = "euclidean")]
        metric: Metric,
        #[arg(long, default_value = "both")]
        mode: Mode,
        #[arg(short)]
        k: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Print the smallest viewing radius that keeps the visibility map.
    Rstar { path: PathBuf },
    /// Check maps against the brute-force oracle and the complexity bound.
    Verify {
        #[arg(required_unless_present_any = ["random", "against"])]
        path: Option<PathBuf>,
        /// First seed and number of random instances.
        #[arg(long, num_args = 2, value_names = ["SEED", "COUNT"], conflicts_with = "path")]
        random: Option<Vec<u64>>,
        /// A map file to check instead of a freshly computed map.
        #[arg(long, conflicts_with_all = ["path", "random"])]
        against: Option<PathBuf>,
        #[arg(long, default_value = "euclidean")]
        metric: Metric,
        #[arg(long, default_value = "both")]
        mode: Mode,
        #[arg(short)]
        k: Option<usize>,
    },
    /// Generate an instance.
    Gen {
        #[arg(long, num_args = 3, value_names = ["N", "M", "SEED"], required_unless_present = "fig4b")]
        random: Option<Vec<u64>>,
        /// Wall-and-slope instance whose M viewpoints split one visible
        /// stretch into 2M - 1 Voronoi parts.
        #[arg(long, value_name = "M", conflicts_with = "random")]
        fig4b: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// The tolerance override from `TERRAVIS_EPS`, if set.
fn eps_override() -> Result<Option<f64>, ParseError> {
    match std::env::var("TERRAVIS_EPS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(e) if e.is_finite() && e > 0.0 => Ok(Some(e)),
            _ => Err(ParseError(format!(
                "TERRAVIS_EPS = `{s}` is not a positive number"
            ))),
        },
    }
}

fn load(path: &Path) -> anyhow::Result<(InstanceFile, Terrain, ViewpointSet)> {
    let file: InstanceFile = files::read_json(path)?;
    let (t, p) = file
        .build(eps_override()?)
        .with_context(|| format!("invalid instance {}", path.display()))?;
    Ok((file, t, p))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_validate(path: &Path) -> anyhow::Result<ExitCode> {
    let (_, t, p) = load(path)?;
    println!(
        "valid: {} vertices, {} viewpoints, tolerance {}",
        t.n(),
        p.len(),
        t.tol()
    );
    let report = check_general_position(&t, &p);
    for [i, j, k] in &report.collinear_triples {
        println!("warning: collinear vertices {i}, {j}, {k}");
    }
    for (e, i, j) in &report.edge_on_bisector {
        println!("warning: edge {e} lies on the bisector of viewpoints {i} and {j}");
    }
    for (q, i, j, k) in &report.triple_equidistant {
        println!(
            "warning: ({}, {}) is equidistant from viewpoints {i}, {j}, {k}",
            q.x, q.y
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn request(kind: MapKind, metric: Metric, mode: Mode, k: Option<usize>) -> MapRequest {
    let k = if kind == MapKind::Kvorvis { k } else { None };
    MapRequest {
        kind,
        metric,
        mode,
        k,
    }
}

fn cmd_map(
    path: &Path,
    req: MapRequest,
    out: Option<&Path>,
    svg_out: Option<&Path>,
) -> anyhow::Result<ExitCode> {
    let (file, t, p) = load(path)?;
    let (map, _) = verify::compute_map(&t, &p, &req)?;
    let doc = MapFile {
        instance: file,
        map: req.kind,
        metric: req.metric.to_string(),
        mode: req.mode.to_string(),
        k: req.k,
        intervals: files::entries(&map),
    };
    emit(out, &files::to_json(&doc))?;
    if let Some(s) = svg_out {
        fs::write(s, svg::render(&t, &p, &map))
            .with_context(|| format!("cannot write {}", s.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_rstar(path: &Path) -> anyhow::Result<ExitCode> {
    let (_, t, p) = load(path)?;
    let r = compute_rstar(&t, &p)?;
    println!("{}", r.value);
    println!(
        "viewpoint {} at ({}, {})",
        r.viewpoint, r.point.x, r.point.y
    );
    Ok(ExitCode::SUCCESS)
}

fn report(outcome: &Outcome) {
    for line in &outcome.lines {
        println!("  {line}");
    }
}

fn verdict(ok: bool) -> ExitCode {
    println!("{}", if ok { "PASS" } else { "FAIL" });
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn random_instance(seed: u64) -> terravis_core::Result<(Terrain, ViewpointSet)> {
    let n = 8 + (seed as usize * 7) % 53;
    let m = (1 + seed as usize % 8).min(n - 1);
    gen_random_terrain(&InstanceSpec::new(seed, n, m))
}

fn cmd_verify_random(seed: u64, count: u64, req: MapRequest) -> anyhow::Result<ExitCode> {
    let mut first_failure = None;
    for s in seed..seed + count {
        let (t, p) = random_instance(s)?;
        let mut req = req;
        if let Some(k) = req.k {
            req.k = Some(k.min(p.len()));
        }
        let outcome = verify::verify_instance(&t, &p, &req);
        if !outcome.ok {
            println!("seed {s}: n = {}, m = {}", t.n(), p.len());
            report(&outcome);
            first_failure.get_or_insert(s);
        }
    }
    println!("{count} random instances from seed {seed}");
    if let Some(s) = first_failure {
        println!("reproduce with: terravis verify --random {s} 1");
    }
    Ok(verdict(first_failure.is_none()))
}

fn cmd_verify_against(path: &Path) -> anyhow::Result<ExitCode> {
    let doc: MapFile = files::read_json(path)?;
    let metric: Metric = doc.metric.parse().map_err(ParseError)?;
    let mode: Mode = doc.mode.parse().map_err(ParseError)?;
    let req = request(doc.map, metric, mode, doc.k);
    let (t, p) = doc
        .instance
        .build(eps_override()?)
        .context("invalid instance in map file")?;
    let stored = match files::from_entries(&t, &doc.intervals) {
        Ok(m) => m,
        Err(e) => {
            println!("  intervals: {e}");
            return Ok(verdict(false));
        }
    };
    let report = verify::oracle_check(&t, &p, &req, &stored);
    println!("  {}", verify::oracle_line(&report));
    let (fresh, _) = verify::compute_map(&t, &p, &req)?;
    let same = fresh.approx_eq(&stored, t.tol());
    println!(
        "  recomputed map {}",
        if same { "matches" } else { "differs" }
    );
    Ok(verdict(report.is_ok() && same))
}

fn cmd_gen(
    random: Option<&[u64]>,
    fig4b: Option<usize>,
    out: Option<&Path>,
) -> anyhow::Result<ExitCode> {
    let file = match (random, fig4b) {
        (Some(&[n, m, seed]), None) => {
            let (t, p) = gen_random_terrain(&InstanceSpec::new(seed, n as usize, m as usize))?;
            InstanceFile {
                name: Some(format!("random-{n}-{m}-{seed}")),
                seed: Some(seed),
                ..InstanceFile::from_instance(&t, &p)
            }
        }
        (None, Some(m)) => {
            let (t, p) = gen_fig4b(m)?;
            InstanceFile {
                name: Some(format!("fig4b-{m}")),
                ..InstanceFile::from_instance(&t, &p)
            }
        }
        _ => bail!("give exactly one of --random N M SEED and --fig4b M"),
    };
    emit(out, &files::to_json(&file))?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Map {
            path,
            map,
            metric,
            mode,
            k,
            out,
            svg,
        } => {
            if (map == MapKind::Kvorvis) != k.is_some() {
                Cli::command()
                    .error(
                        clap::error::ErrorKind::ArgumentConflict,
                        "-k is required with, and only with, --map kvorvis",
                    )
                    .exit();
            }
            cmd_map(
                &path,
                request(map, metric, mode, k),
                out.as_deref(),
                svg.as_deref(),
            )
        }
        Command::Rstar { path } => cmd_rstar(&path),
        Command::Verify {
            path,
            random,
            against,
            metric,
            mode,
            k,
        } => {
            let kind = if k.is_some() {
                MapKind::Kvorvis
            } else {
                MapKind::Vorvis
            };
            let req = request(kind, metric, mode, k);
            if let Some(a) = against {
                return cmd_verify_against(&a);
            }
            if let Some(r) = random {
                return cmd_verify_random(r[0], r[1], req);
            }
            let path = path.ok_or_else(|| anyhow!("no instance given"))?;
            let (_, t, p) = load(&path)?;
            let outcome = verify::verify_instance(&t, &p, &req);
            println!("{}: n = {}, m = {}", path.display(), t.n(), p.len());
            report(&outcome);
            Ok(verdict(outcome.ok))
        }
        Command::Gen { random, fig4b, out } => cmd_gen(random.as_deref(), fig4b, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ParseError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
