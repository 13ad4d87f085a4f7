use std::f64::consts::{FRAC_PI_4, PI};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use homeo1::io::{parse_svg, read_curve_csv, read_profile_csv, write_sequence_csv};
use homeo1::verifier::{parse_report, BatterySpec};
use homeo1::{dir_from_slope, proj_distance, DirectionSequence, PTPoint, Point2, ProjDir, Status};
use tempfile::TempDir;

fn homeo1(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homeo1")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

fn write_sequence(dir: &TempDir, name: &str, entries: Vec<PTPoint>) -> PathBuf {
    let seq = DirectionSequence::new(entries, Point2::ORIGIN, ProjDir::HORIZONTAL).unwrap();
    let path = dir.path().join(name);
    write_sequence_csv(fs::File::create(&path).unwrap(), &seq).unwrap();
    path
}

fn parabola_entries(count: usize) -> Vec<PTPoint> {
    (1..=count)
        .map(|n| {
            let n = n as f64;
            PTPoint::new(Point2::new(1.0 / n, 1.0 / (n * n)), dir_from_slope(2.0 / n))
        })
        .collect()
}

#[test]
fn verify_w_fails_on_the_axis_sequence() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("w.json");
    let out = homeo1(&["verify", "--map", "W", "--battery", "default", "--out", path_str(&out_path)]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    let report = parse_report(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report.overall, Status::Fail);
    assert_eq!(report.properties["c"].witness.as_deref(), Some("figure1"));
}

#[test]
fn verify_g_passes_and_is_deterministic() {
    let first = homeo1(&["verify", "--map", "G"]);
    let second = homeo1(&["verify", "--map", "G"]);
    assert_eq!(code(&first), 0, "{}", stderr(&first));
    assert_eq!(first.stdout, second.stdout);
    let report = parse_report(std::str::from_utf8(&first.stdout).unwrap()).unwrap();
    assert_eq!(report.map, "G");
    assert!(report.probes.iter().any(|p| p.name == "induced_identity@origin" && p.status == Status::Pass));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(code(&homeo1(&["verify", "--map", "nosuch"])), 1);
    assert_eq!(code(&homeo1(&["verify"])), 1);
    assert_eq!(code(&homeo1(&["verify", "--map", "G", "--resolution", "bogus=1"])), 1);
    assert_eq!(code(&homeo1(&["verify", "--map", "G", "--resolution", "tail_ratio"])), 1);
    assert_eq!(code(&homeo1(&["induced", "--map", "G", "--point", "1"])), 1);
    assert_eq!(code(&homeo1(&["verify", "--map", "G", "--battery", "/nonexistent.json"])), 1);
    assert_eq!(code(&homeo1(&["frobnicate"])), 1);
    assert_eq!(code(&homeo1(&["--help"])), 0);
}

#[test]
fn resolution_flags_override_the_config_file() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("run.json");
    fs::write(&config, r#"{"resolution": {"tail_length": 30, "dir_tolerance": 0.002}}"#).unwrap();
    let out = homeo1(&[
        "verify", "--map", "identity", "--config", path_str(&config), "--resolution", "tail_length=32",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["resolution"]["tail_length"], 32);
    assert_eq!(value["resolution"]["dir_tolerance"], 0.002);
}

#[test]
fn battery_file_is_used() {
    let dir = TempDir::new().unwrap();
    let mut spec = BatterySpec::default();
    spec.sequences.retain(|s| s.name != "figure1");
    let path = dir.path().join("battery.json");
    fs::write(&path, spec.to_json()).unwrap();
    let out = homeo1(&["verify", "--map", "W", "--battery", path_str(&path)]);
    // W flattens angles only at the x-axis, so without the axis sequence
    // nothing in the battery witnesses the failure of (c).
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = parse_report(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(report.properties["c"].status, Status::Pass);
}

#[test]
fn induced_profile_of_q_off_the_origin() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("q.csv");
    let out = homeo1(&["induced", "--map", "Q", "--point", "0,0.1", "--samples", "36", "--out", path_str(&path)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = read_profile_csv(fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(rows.len(), 36);
    assert_eq!(rows[0].theta_in, 0.0);
    let out_dir = ProjDir::new(rows[0].theta_out.unwrap());
    assert!(proj_distance(out_dir, ProjDir::new(1f64.atan())) < 1e-3);
}

#[test]
fn induced_profiles_that_are_identities() {
    for (map, point) in [("identity", "1,1"), ("H", "0,0"), ("G", "0,0")] {
        let out = homeo1(&["induced", "--map", map, "--point", point, "--samples", "12"]);
        assert_eq!(code(&out), 0, "{map}: {}", stderr(&out));
        let rows = read_profile_csv(out.stdout.as_slice()).unwrap();
        assert_eq!(rows.len(), 12);
        for row in rows {
            assert!(row.exists);
            let err = proj_distance(ProjDir::new(row.theta_in), ProjDir::new(row.theta_out.unwrap()));
            assert!(err < 1e-6, "{map} at {}: {err}", row.theta_in);
        }
    }
}

#[test]
fn induced_accepts_negative_coordinates() {
    let out = homeo1(&["induced", "--map", "rot:30", "--point", "-0.3,0.7", "--samples", "6"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    for row in read_profile_csv(out.stdout.as_slice()).unwrap() {
        let expected = ProjDir::new(row.theta_in + PI / 6.0);
        assert!(proj_distance(ProjDir::new(row.theta_out.unwrap()), expected) < 1e-6);
    }
}

#[test]
fn construct_parabola_writes_curve_and_svg() {
    let dir = TempDir::new().unwrap();
    let input = write_sequence(&dir, "parabola.csv", parabola_entries(40));
    let curve = dir.path().join("curve.csv");
    let svg = dir.path().join("curve.svg");
    let out = homeo1(&[
        "construct", path_str(&input), "--want", "8", "--samples", "512",
        "--out", path_str(&curve), "--svg", path_str(&svg),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let samples = read_curve_csv(fs::File::open(&curve).unwrap()).unwrap();
    assert_eq!(samples.len(), 512);
    assert!(samples.first().unwrap().p.dist(samples.last().unwrap().p) < 1e-12);
    let doc = parse_svg(&fs::read_to_string(&svg).unwrap()).unwrap();
    assert_eq!(doc.markers.len(), 8);
    for (k, m) in doc.markers.iter().enumerate() {
        let n = (k + 1) as f64;
        assert!(m.dist(Point2::new(1.0 / n, 1.0 / (n * n))) < 1e-9);
    }
}

#[test]
fn construct_rejects_a_transverse_sequence() {
    let dir = TempDir::new().unwrap();
    let entries = (1..=40)
        .map(|k| PTPoint::new(Point2::new(1.0 / ((2 * k + 1) as f64 * PI), 0.0), ProjDir::new(FRAC_PI_4)))
        .collect();
    let input = write_sequence(&dir, "transverse.csv", entries);
    let out = homeo1(&["construct", path_str(&input)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("NOT_CONVERGENT"));
}

#[test]
fn construct_reports_insufficient_points() {
    let dir = TempDir::new().unwrap();
    let input = write_sequence(&dir, "three.csv", parabola_entries(3));
    let out = homeo1(&["construct", path_str(&input), "--want", "8"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("INSUFFICIENT_POINTS"));
}

#[test]
fn construct_config_supplies_want() {
    let dir = TempDir::new().unwrap();
    let input = write_sequence(&dir, "parabola.csv", parabola_entries(40));
    let config = dir.path().join("run.json");
    fs::write(&config, r#"{"want": 5}"#).unwrap();
    let svg = dir.path().join("curve.svg");
    let out = homeo1(&[
        "construct", path_str(&input), "--config", path_str(&config), "--svg", path_str(&svg),
        "--out", path_str(&dir.path().join("c.csv")),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(parse_svg(&fs::read_to_string(&svg).unwrap()).unwrap().markers.len(), 5);
}

#[test]
fn gallery_of_identity_is_the_grid_itself() {
    let out = homeo1(&["gallery", "--map", "identity", "--grid", "3", "--samples", "5"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc = parse_svg(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let grid: Vec<_> = doc.polylines.iter().filter(|p| p.class == "grid").collect();
    assert_eq!(grid.len(), 6);
    let ticks = [-1.0, -0.5, 0.0, 0.5, 1.0];
    for (i, c) in [-1.0, 0.0, 1.0].into_iter().enumerate() {
        for (p, t) in grid[2 * i].points.iter().zip(ticks) {
            assert!(p.dist(Point2::new(c, t)) < 1e-12);
        }
    }
    assert_eq!(doc.polylines.iter().filter(|p| p.class == "pencil").count(), 12);
}

#[test]
fn gallery_of_h_compresses_near_the_origin() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("h.svg");
    let out = homeo1(&["gallery", "--map", "H", "--region", "0.5", "--out", path_str(&path)]);
    assert_eq!(code(&out), 0);
    let doc = parse_svg(&fs::read_to_string(&path).unwrap()).unwrap();
    let reach = doc.polylines.iter().flat_map(|p| &p.points).map(|p| p.norm()).fold(0.0, f64::max);
    assert!((reach - 0.5).abs() < 1e-9, "corner image at radius {reach}");
}

#[test]
fn gallery_of_w_renders() {
    let out = homeo1(&["gallery", "--map", "W"]);
    assert_eq!(code(&out), 0);
    assert!(parse_svg(std::str::from_utf8(&out.stdout).unwrap()).is_ok());
}
