use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nrange_cli::files::{matrix_to_json, read_region, SetKind};
use nrange_core::geometry::region_contains;
use nrange_core::linalg::{random_matrix, svd};
use nrange_core::{example_a1, Region, C64};
use tempfile::TempDir;

fn nrange(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nrange")).args(args).env_remove("NRANGE_SEED").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const A1_CSV: &str = "rows,cols\n2,3\n6+i, 0, 0.5\n-4, -3-6i, 0\n";

#[test]
fn w_on_a1_is_the_sigma_disc() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "a1.csv", A1_CSV);
    let out = dir.path().join("w.json");
    let svg = dir.path().join("w.svg");
    let o = nrange(&["compute", "--input", s(&input), "--set", "w", "--out", s(&out), "--svg", s(&svg)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 2);
    let f = read_region(&out).unwrap();
    let s1 = svd(&example_a1()).unwrap().sigma_max();
    assert_eq!(f.region, Region::disc(C64::new(0.0, 0.0), s1));
    assert_eq!(f.meta.set, SetKind::W);
    assert_eq!(f.meta.sigma.len(), 2);
    assert!((f.meta.sigma[0] - s1).abs() < 1e-15);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.contains(r#"viewBox="0 0 800 800""#) && text.contains("σ1 ="));
}

#[test]
fn phik_on_three_by_two_is_a_circle() {
    let dir = TempDir::new().unwrap();
    let a = random_matrix(3, 2, 11);
    let input = write(&dir, "a.json", &matrix_to_json(&a));
    let out = dir.path().join("r.json");
    let o = nrange(&["compute", "--input", s(&input), "--set", "phik", "--k", "2", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let f = read_region(&out).unwrap();
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains(r#""kind": "circle""#), "{text}");
    assert_eq!(f.meta.k, Some(2));
    let s2 = svd(&a).unwrap().sigma[1];
    assert_eq!(f.region.rings().unwrap().2, s2);
}

#[test]
fn region_files_round_trip_containment() {
    let dir = TempDir::new().unwrap();
    let a = random_matrix(4, 4, 3);
    let input = write(&dir, "a.json", &matrix_to_json(&a));
    let probes: Vec<C64> = (0..40).map(|j| C64::from_polar(0.1 * j as f64, 0.77 * j as f64)).collect();
    for (set, extra) in [("w", vec![]), ("fov", vec![]), ("wl", vec![]), ("wh", vec![]), ("phik", vec!["--k", "2"])] {
        let out = dir.path().join(format!("{set}.json"));
        let mut args = vec!["compute", "--input", s(&input), "--set", set, "--out", s(&out), "--angles", "90"];
        args.extend(extra);
        let o = nrange(&args);
        assert_eq!(code(&o), 0, "{set}: {}", stderr(&o));
        let f = read_region(&out).unwrap();
        let again: nrange_cli::files::RegionFile = serde_json::from_str(&f.to_json()).unwrap();
        for z in &probes {
            assert_eq!(region_contains(&f.region, *z, 1e-9), region_contains(&again.region, *z, 1e-9));
        }
        assert_eq!(again, f);
    }
}

#[test]
fn wnorm_checks_the_norm_hypothesis() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "a1.csv", A1_CSV);
    let small = write(&dir, "b.csv", "2,3\n0.1,0,0\n0,0.1,0\n");
    let big = write(&dir, "big.csv", "2,3\n1,0,0\n0,1,0\n");
    let out = dir.path().join("r.json");
    let o = nrange(&["compute", "--input", s(&input), "--set", "wnorm", "--B", s(&small), "--out", s(&out)]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("||B||_F >= 1"), "{}", stderr(&o));
    let o = nrange(&["compute", "--input", s(&input), "--set", "wnorm", "--B", s(&big), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(read_region(&out).unwrap().meta.set, SetKind::Wnorm);
}

#[test]
fn flag_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "a1.csv", A1_CSV);
    let out = dir.path().join("r.json");
    let o = nrange(&["compute", "--input", s(&input), "--set", "fov", "--out", s(&out)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--set w"));
    assert_eq!(code(&nrange(&["compute", "--input", s(&input), "--set", "phik", "--out", s(&out)])), 2);
    assert_eq!(code(&nrange(&["compute", "--input", s(&input), "--set", "wnorm", "--out", s(&out)])), 2);
    assert_eq!(code(&nrange(&["compute", "--input", s(&input), "--set", "w", "--k", "1", "--out", s(&out)])), 2);
    assert_eq!(code(&nrange(&["compute", "--input", s(&input), "--set", "w", "--angles", "3", "--out", s(&out)])), 2);
    assert_eq!(code(&nrange(&["compute", "--input", s(&input), "--set", "nope", "--out", s(&out)])), 2);
    assert_eq!(code(&nrange(&["verify", "--suite", "prop99"])), 2);
    assert!(!out.exists());
}

#[test]
fn projector_frame_must_be_an_isometry() {
    let dir = TempDir::new().unwrap();
    let a = random_matrix(4, 2, 5);
    let input = write(&dir, "a.json", &matrix_to_json(&a));
    let out = dir.path().join("r.json");
    let good = write(&dir, "h.csv", "4,2\n0,0\n0,0\n1,0\n0,1\n");
    let bad = write(&dir, "bad.csv", "4,2\n2,0\n0,0\n0,0\n0,1\n");
    let wrong = write(&dir, "wrong.csv", "2,2\n1,0\n0,1\n");
    let run = |h: &Path| nrange(&["compute", "--input", s(&input), "--set", "wl", "--H", s(h), "--out", s(&out)]);
    assert_eq!(code(&run(&good)), 0);
    assert!(matches!(read_region(&out).unwrap().region, Region::ConvexBoundary(_)));
    assert_eq!(code(&run(&bad)), 4);
    assert_eq!(code(&run(&wrong)), 2);
}

#[test]
fn parse_and_io_errors() {
    let dir = TempDir::new().unwrap();
    let garbage = write(&dir, "g.csv", "2,2\n1,x\n0,1\n");
    let out = dir.path().join("r.json");
    assert_eq!(code(&nrange(&["compute", "--input", s(&garbage), "--set", "w", "--out", s(&out)])), 3);
    let missing = dir.path().join("missing.csv");
    assert_eq!(code(&nrange(&["compute", "--input", s(&missing), "--set", "w", "--out", s(&out)])), 5);
    let input = write(&dir, "a1.csv", A1_CSV);
    let nowhere = dir.path().join("no/such/dir/r.json");
    assert_eq!(code(&nrange(&["compute", "--input", s(&input), "--set", "w", "--out", s(&nowhere)])), 5);
    let blocker = write(&dir, "file", "");
    let o = nrange(&["reproduce", "--figure", "sec3-example", "--out-dir", s(&blocker.join("sub"))]);
    assert_eq!(code(&o), 5);
}

#[test]
fn single_suite_prints_a_table() {
    let o = nrange(&["verify", "--suite", "prop7", "--seed", "3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = String::from_utf8(o.stdout).unwrap();
    assert!(t.starts_with("suite"));
    assert!(t.lines().filter(|l| l.starts_with("prop7")).all(|l| l.contains("PASS")));
    let o = nrange(&["verify", "--suite", "prop7", "--perturb", "ellipse"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("FAILED prop7"));
}

#[test]
fn seed_falls_back_to_environment() {
    let dir = TempDir::new().unwrap();
    let run = |env: Option<&str>, flag: Option<&str>, sub: &str| {
        let out = dir.path().join(sub);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_nrange"));
        cmd.args(["reproduce", "--figure", "sec2-example", "--out-dir", s(&out)]).env_remove("NRANGE_SEED");
        if let Some(v) = env {
            cmd.env("NRANGE_SEED", v);
        }
        if let Some(v) = flag {
            cmd.args(["--seed", v]);
        }
        assert!(cmd.output().unwrap().status.success());
        std::fs::read(out.join("sec2-example.svg")).unwrap()
    };
    let from_env = run(Some("9"), None, "a");
    assert_eq!(from_env, run(None, Some("9"), "b"));
    assert_ne!(from_env, run(None, None, "c"));
}

#[test]
fn frobenius_figure_stays_inside_the_outer_circle() {
    let dir = TempDir::new().unwrap();
    let o = nrange(&["reproduce", "--figure", "sec2-example", "--out-dir", s(dir.path()), "--seed", "2"]);
    assert_eq!(code(&o), 0);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("sec2-example.json")).unwrap()).unwrap();
    assert_eq!(json["all_inside"], true);
    assert_eq!(json["discs"].as_array().unwrap().len(), 6);
    let nf = json["frobenius_norm"].as_f64().unwrap();
    assert!((nf * nf - 98.25).abs() < 1e-12);
    for d in json["discs"].as_array().unwrap() {
        assert!(d["b_norm"].as_f64().unwrap() >= 1.0);
    }
}

#[test]
fn projector_figure_marks_the_corner() {
    let dir = TempDir::new().unwrap();
    let o = nrange(&["reproduce", "--figure", "sec3-example", "--out-dir", s(dir.path())]);
    assert_eq!(code(&o), 0);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("sec3-example.json")).unwrap()).unwrap();
    let lower = json["corners_lower"].as_array().unwrap();
    assert!(lower.iter().any(|c| c["location"] == serde_json::json!([0.0, 5.0])));
    let svg = std::fs::read_to_string(dir.path().join("sec3-example.svg")).unwrap();
    assert!(svg.contains(">5i</text>") && svg.contains(">0</text>"));
}
