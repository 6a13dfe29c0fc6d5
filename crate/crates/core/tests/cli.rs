use std::process::Command;

use eschenburg::cli::{analyze, run_scan, verify, AnalysisReport, Assertion, ScanConfig, ScanReport, VerifyReport};
use eschenburg::families::Family;
use eschenburg::TorusParams;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eschenburg"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

const WALLACH: [&str; 8] = ["--p", "1,0,-1", "--q", "0,0,0", "--a", "0,1,-1", "--b", "0,0,0"];
const SPHERE_K3: &str = "p=0,1,-1;q=0,0,0;a=-3,0,-1;b=0,-2,-2";
const TRIANGLE_PAIR: &str = "p=2,3,5;q=1,2,7;a=3,-3,0;b=1,-1,0";

#[test]
fn analysis_json_round_trips() {
    for text in [SPHERE_K3, TRIANGLE_PAIR, "p=0,-2,0;q=-2,-1,1;a=0,-2,2;b=-1,1,0"] {
        let t: TorusParams = text.parse().unwrap();
        let r = analyze(&t, 16).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let back: AnalysisReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["schema"], 1);
    }
}

#[test]
fn params_json_round_trips() {
    let t: TorusParams = SPHERE_K3.parse().unwrap();
    let json = serde_json::to_string(&t).unwrap();
    assert_eq!(json, r#"{"p":[0,1,-1],"q":[0,0,0],"a":[-3,0,-1],"b":[0,-2,-2]}"#);
    assert_eq!(serde_json::from_str::<TorusParams>(&json).unwrap(), t);
    assert!(serde_json::from_str::<TorusParams>(r#"{"p":[0,1,0],"q":[0,0,0],"a":[0,0,0],"b":[0,0,0]}"#).is_err());
}

#[test]
fn scan_report_is_deterministic_and_round_trips() {
    let cfg = ScanConfig {
        bound: 2,
        assertions: vec![
            Assertion::TheoremAParity,
            Assertion::TheoremASmoothSphere,
            Assertion::SatAgreement,
        ],
        samples: 300,
        seed: 11,
        ..Default::default()
    };
    let one = run_scan(&ScanConfig { jobs: 1, ..cfg.clone() }).unwrap();
    let three = run_scan(&ScanConfig { jobs: 3, ..cfg }).unwrap();
    let a = serde_json::to_string_pretty(&one.without_timing()).unwrap();
    let b = serde_json::to_string_pretty(&three.without_timing()).unwrap();
    assert_eq!(a, b);
    let back: ScanReport = serde_json::from_str(&serde_json::to_string(&one).unwrap()).unwrap();
    assert_eq!(back.without_timing(), one.without_timing());
    assert!(one.passed());
}

#[test]
fn raw_mode_covers_orbit_mode() {
    let cfg = ScanConfig {
        bound: 1,
        assertions: vec![Assertion::TheoremAParity],
        ..Default::default()
    };
    let orbits = run_scan(&cfg).unwrap();
    let raw = run_scan(&ScanConfig { raw: true, ..cfg }).unwrap();
    assert!(raw.counts.visited > orbits.counts.visited);
    let keys = |r: &ScanReport| r.counts.shapes_positive.keys().cloned().collect::<Vec<_>>();
    assert_eq!(keys(&raw), keys(&orbits));
}

#[test]
fn verify_json_round_trips() {
    let r = verify(Family::SmoothSphere, Some(3), 2, &[], 12).unwrap();
    let back: VerifyReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back, r);
    assert!(r.passed());
}

#[test]
fn analyze_command() {
    let mut args = vec!["analyze"];
    args.extend(WALLACH);
    args.extend(["--format", "json"]);
    let (code, out, _) = run(&args);
    assert_eq!(code, 0);
    let r: AnalysisReport = serde_json::from_str(&out).unwrap();
    assert!(r.freeness.free);
    assert!(r.singular_graph.sigma_is_empty());
    assert_eq!(r.curvature.label(), "positive_after_swap");
    let ranks: Vec<usize> = r.cohomology.groups.iter().map(|g| g.free_rank()).collect();
    assert_eq!(&ranks[..7], &[1, 0, 2, 0, 2, 0, 1]);

    let (code, out, _) = run(&["analyze", "--params", SPHERE_K3]);
    assert_eq!(code, 0);
    assert!(out.contains("H^6   Z + Z/3"), "{out}");
    assert!(out.contains("stable      Z/3 + Z/3 from degree 8"), "{out}");

    let (code, _, err) = run(&["analyze", "--p", "1,2", "--q", "0,0,0", "--a", "0,1,-1", "--b", "0,0,0"]);
    assert_eq!(code, 2);
    assert!(err.contains("--p"), "{err}");

    let (code, _, err) = run(&["analyze", "--params", "p=1,0,-1;q=0,0,1;a=0,1,-1;b=0,0,0"]);
    assert_eq!(code, 2);
    assert!(err.contains("sum"), "{err}");
}

#[test]
fn analyze_reads_json_input() {
    let dir = std::env::temp_dir().join(format!("eschenburg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("params.json");
    std::fs::write(&path, r#"{"p":[1,0,-1],"q":[0,0,0],"a":[0,1,-1],"b":[0,0,0]}"#).unwrap();
    let (code, out, _) = run(&["analyze", "--input", path.to_str().unwrap(), "--max-degree", "8"]);
    assert_eq!(code, 0);
    assert!(out.contains("free: yes"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn graph_command() {
    let (code, dot, _) = run(&["graph", "--params", SPHERE_K3]);
    assert_eq!(code, 0);
    assert!(dot.contains("\"Id\" -- \"(23)\" [label=\"11 Z3\", color=red"), "{dot}");

    let mut args = vec!["graph"];
    args.extend(WALLACH);
    let (code, dot, _) = run(&args);
    assert_eq!(code, 0);
    assert!(!dot.contains("red"));
    assert_eq!(dot.matches(" -- ").count(), 9);

    let dir = std::env::temp_dir().join(format!("eschenburg-svg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let svg = dir.join("tri.svg");
    let (code, _, _) = run(&["graph", "--params", TRIANGLE_PAIR, "--svg", svg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert!(text.contains("L(Q1, Q2)"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_command() {
    let (code, out, _) = run(&[
        "verify",
        "example-two-singular",
        "--k",
        "3",
        "--l",
        "1",
        "--range",
        "2",
        "--all",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("stable order") && out.contains("predicted 5"), "{out}");
    let (code, _, err) = run(&["verify", "nope"]);
    assert_eq!(code, 2);
    assert!(err.contains("nope"));
    let (code, out, _) = run(&[
        "verify",
        "smooth-sphere",
        "--case",
        "1",
        "--range",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let r: VerifyReport = serde_json::from_str(&out).unwrap();
    assert_eq!(r.summary.fail, 0);
}

#[test]
fn scan_command() {
    let (code, out, _) = run(&[
        "scan",
        "-B",
        "1",
        "--assert",
        "theorem-a-parity,sat-agreement",
        "--format",
        "json",
        "--jobs",
        "2",
    ]);
    assert_eq!(code, 0);
    let r: ScanReport = serde_json::from_str(&out).unwrap();
    assert!(r.passed());
    assert_eq!(r.config.bound, 1);
    let (code, _, _) = run(&["scan", "-B", "0"]);
    assert_eq!(code, 2);
}
