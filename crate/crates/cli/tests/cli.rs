use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn terravis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_terravis"))
        .args(args)
        .env_remove("TERRAVIS_EPS")
        .output()
        .expect("run terravis")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, value: &Value) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, value.to_string()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn flat(viewpoints: &[usize]) -> Value {
    json!({"vertices": [[0, 0], [4, 0], [6, 0], [10, 0]], "viewpoints": viewpoints})
}

fn peak(viewpoints: &[usize]) -> Value {
    json!({"vertices": [[0, 0], [5, 5], [10, 0]], "viewpoints": viewpoints})
}

fn two_peaks() -> Value {
    json!({"vertices": [[0, 0], [1, 2], [2, 0], [3, 2], [4, 0]], "viewpoints": [0, 4]})
}

fn intervals(map: &Value) -> Vec<(f64, f64, Value)> {
    map["intervals"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let i = &e["interval"];
            let label = e
                .as_object()
                .unwrap()
                .iter()
                .find(|(k, _)| *k != "interval")
                .unwrap()
                .1
                .clone();
            (i[0].as_f64().unwrap(), i[1].as_f64().unwrap(), label)
        })
        .collect()
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ok = terravis(&["validate", s(&write(&dir, "flat.json", &flat(&[1, 2])))]);
    assert_eq!(code(&ok), 0);
    assert!(stdout(&ok).contains("collinear"));

    let vertical = write(
        &dir,
        "v.json",
        &json!({"vertices": [[0, 0], [0, 1], [2, 0]], "viewpoints": []}),
    );
    assert_eq!(code(&terravis(&["validate", s(&vertical)])), 1);

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"vertices\": [[0, 0], ").unwrap();
    assert_eq!(code(&terravis(&["validate", s(&bad)])), 2);
    assert_eq!(
        code(&terravis(&[
            "validate",
            s(&dir.path().join("missing.json"))
        ])),
        2
    );
}

#[test]
fn map_flat_vorvis() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "flat.json", &flat(&[1, 2]));
    let o = terravis(&["map", s(&inst), "--map", "vorvis", "--metric", "euclidean"]);
    assert_eq!(code(&o), 0);
    let map: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        intervals(&map),
        vec![(0.0, 5.0, json!(1)), (5.0, 10.0, json!(2))]
    );
    assert_eq!(map["metric"], "euclidean");
    assert_eq!(map["mode"], "both");
}

#[test]
fn map_peak_colvis_breaks_at_apex() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "peak.json", &peak(&[0, 2]));
    let o = terravis(&["map", s(&inst), "--map", "colvis"]);
    assert_eq!(code(&o), 0);
    let map: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        intervals(&map),
        vec![(0.0, 5.0, json!([0])), (5.0, 10.0, json!([2]))]
    );
}

#[test]
fn map_k_flag_rules() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "flat.json", &flat(&[1, 2]));
    assert_eq!(code(&terravis(&["map", s(&inst), "--map", "kvorvis"])), 2);
    assert_eq!(
        code(&terravis(&["map", s(&inst), "--map", "vorvis", "-k", "1"])),
        2
    );
    assert_eq!(
        code(&terravis(&["map", s(&inst), "--map", "kvorvis", "-k", "3"])),
        1
    );
    let o = terravis(&["map", s(&inst), "--map", "kvorvis", "-k", "2"]);
    let map: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(intervals(&map), vec![(0.0, 10.0, json!([1, 2]))]);
}

#[test]
fn map_round_trips_through_verify() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "tp.json", &two_peaks());
    for (kind, extra) in [
        ("vis", None),
        ("colvis", None),
        ("vorvis", None),
        ("kvorvis", Some("2")),
    ] {
        for metric in ["euclidean", "geodesic", "link"] {
            let out = dir.path().join(format!("{kind}-{metric}.json"));
            let mut args = vec![
                "map",
                s(&inst),
                "--map",
                kind,
                "--metric",
                metric,
                "--out",
                s(&out),
            ];
            if let Some(k) = extra {
                args.extend(["-k", k]);
            }
            assert_eq!(code(&terravis(&args)), 0);
            let v = terravis(&["verify", "--against", s(&out)]);
            assert_eq!(code(&v), 0, "{kind} {metric}: {}", stdout(&v));
        }
    }
}

#[test]
fn corrupted_map_fails_verification() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "flat.json", &flat(&[1, 2]));
    let out = dir.path().join("map.json");
    assert_eq!(code(&terravis(&["map", s(&inst), "--out", s(&out)])), 0);
    let mut map: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();

    map["intervals"][0]["owner"] = json!(2);
    map["intervals"][1]["owner"] = json!(1);
    let swapped = write(&dir, "swapped.json", &map);
    let o = terravis(&["verify", "--against", s(&swapped)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL"));

    map["intervals"][1]["interval"][0] = json!(6.0);
    let gap = write(&dir, "gap.json", &map);
    assert_eq!(code(&terravis(&["verify", "--against", s(&gap)])), 1);
}

#[test]
fn map_is_deterministic_and_draws_svg() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "tp.json", &two_peaks());
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let svg = dir.path().join("m.svg");
    assert_eq!(
        code(&terravis(&[
            "map",
            s(&inst),
            "--out",
            s(&a),
            "--svg",
            s(&svg)
        ])),
        0
    );
    assert_eq!(code(&terravis(&["map", s(&inst), "--out", s(&b)])), 0);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert!(text.contains(r#"viewBox="0 0 1000 400""#));
    assert_eq!(text.matches("<circle").count(), 2);
}

#[test]
fn rstar_values() {
    let dir = TempDir::new().unwrap();
    let first_line = |v: &Value, name: &str| {
        let o = terravis(&["rstar", s(&write(&dir, name, v))]);
        assert_eq!(code(&o), 0);
        stdout(&o).lines().next().unwrap().to_string()
    };
    assert_eq!(first_line(&flat(&[1]), "a.json"), "6");
    assert_eq!(first_line(&flat(&[1, 2]), "b.json"), "4");
    assert_eq!(first_line(&peak(&[1]), "c.json"), "7.0710678118654755");
    assert_eq!(
        code(&terravis(&["rstar", s(&write(&dir, "d.json", &flat(&[])))])),
        1
    );
}

#[test]
fn verify_random_batch() {
    let o = terravis(&["verify", "--random", "0", "100"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with("PASS"));
    let o = terravis(&[
        "verify", "--random", "5", "10", "--metric", "link", "--mode", "left", "-k", "2",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn gen_random_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    assert_eq!(
        code(&terravis(&[
            "gen",
            "--random",
            "20",
            "4",
            "7",
            "--out",
            s(&a)
        ])),
        0
    );
    assert_eq!(
        code(&terravis(&[
            "gen",
            "--random",
            "20",
            "4",
            "7",
            "--out",
            s(&b)
        ])),
        0
    );
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let inst: Value = serde_json::from_str(&fs::read_to_string(&a).unwrap()).unwrap();
    assert_eq!(inst["vertices"].as_array().unwrap().len(), 20);
    assert_eq!(inst["viewpoints"].as_array().unwrap().len(), 4);
    assert_eq!(code(&terravis(&["validate", s(&a)])), 0);

    assert_eq!(code(&terravis(&["gen", "--random", "4", "5", "1"])), 1);
}

#[test]
fn fig4b_gap() {
    let dir = TempDir::new().unwrap();
    for (m, gap) in [(3, 4), (4, 6)] {
        let out = dir.path().join(format!("f{m}.json"));
        assert_eq!(
            code(&terravis(&[
                "gen",
                "--fig4b",
                &m.to_string(),
                "--out",
                s(&out)
            ])),
            0
        );
        let o = terravis(&["verify", s(&out)]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        assert!(
            stdout(&o).contains(&format!("k_v - k_c = {gap}")),
            "{}",
            stdout(&o)
        );
    }
}

#[test]
fn eps_override() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "flat.json", &flat(&[1, 2]));
    let run = |eps: &str| {
        Command::new(env!("CARGO_BIN_EXE_terravis"))
            .args(["validate", s(&inst)])
            .env("TERRAVIS_EPS", eps)
            .output()
            .unwrap()
    };
    let o = run("1e-6");
    assert_eq!(code(&o), 0);
    let tol: f64 = stdout(&o)
        .lines()
        .next()
        .unwrap()
        .rsplit(' ')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((tol - 1e-5).abs() < 1e-12, "{tol}");
    assert_eq!(code(&run("nope")), 2);
    assert_eq!(code(&run("-1")), 2);
}
