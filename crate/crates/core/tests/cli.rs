//! The command-line contract: JSON output, exit codes, determinism.

use std::path::PathBuf;
use std::process::Command;

use lawvar::cli::{run_with, Report};
use lawvar::Outcome;

fn manifest(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("manifests")
        .join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(
        std::iter::once("lawvar").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lawvar"));
    cmd.env_remove("LAWVAR_SEED");
    cmd
}

/// Exit code each shipped manifest must produce.
const SHIPPED: [(&str, i32); 3] = [
    ("collapse_suite.json", 0),
    ("examples_and_assets.json", 1),
    ("risk_measures.json", 1),
];

#[test]
fn every_shipped_manifest_is_covered() {
    let mut found: Vec<String> = std::fs::read_dir(manifest(""))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    found.sort();
    let listed: Vec<String> = SHIPPED.iter().map(|(n, _)| n.to_string()).collect();
    assert_eq!(found, listed);
}

#[test]
fn exit_codes_follow_the_verdicts() {
    for (name, expected) in SHIPPED {
        let path = manifest(name);
        let (code, out, err) = run(&["verify", "--manifest", path.to_str().unwrap()]);
        assert_eq!(code, expected, "{name}: {err}");
        let report: Report = serde_json::from_str(&out).unwrap();
        assert!(report.is_consistent());
        assert_eq!(i32::from(report.has_failure()), code);
        let bad = report.summary[&Outcome::Fail] + report.summary[&Outcome::Inconsistent];
        assert_eq!(bad > 0, code == 1);
        assert_eq!(report.summary[&Outcome::Inconsistent], 0, "{name}");
    }
}

#[test]
fn verify_is_byte_identical_across_runs() {
    let path = manifest("collapse_suite.json");
    let args = [
        "verify",
        "--manifest",
        path.to_str().unwrap(),
        "--seed",
        "7",
    ];
    let a = bin().args(args).output().unwrap();
    let b = bin().args(args).output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_flag_beats_manifest_beats_environment() {
    let path = manifest("risk_measures.json");
    let p = path.to_str().unwrap();
    let seed_of = |out: &[u8]| {
        serde_json::from_slice::<Report>(out)
            .unwrap()
            .environment
            .seed
    };
    let from_manifest = bin()
        .args(["verify", "--manifest", p])
        .env("LAWVAR_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(seed_of(&from_manifest.stdout), 11);
    let from_flag = bin()
        .args(["verify", "--manifest", p, "--seed", "5"])
        .output()
        .unwrap();
    assert_eq!(seed_of(&from_flag.stdout), 5);
    let from_env = bin()
        .args([
            "collapse-scan",
            "--functional",
            r#"{"kind":"mean_affine","a":2,"b":1}"#,
            "--n",
            "4",
            "--trials",
            "20",
        ])
        .env("LAWVAR_SEED", "99")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&from_env.stdout).unwrap();
    assert_eq!(v["seed"], 99);
}

#[test]
fn report_round_trips_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = manifest("examples_and_assets.json");
    let (_, out, _) = run(&["verify", "--manifest", path.to_str().unwrap()]);
    let original: Report = serde_json::from_str(&out).unwrap();
    let saved = dir.path().join("report.json");
    std::fs::write(&saved, &out).unwrap();
    let md = dir.path().join("report.md");
    let (code, again, _) = run(&[
        "report",
        "--input",
        saved.to_str().unwrap(),
        "--md",
        md.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert_eq!(again, out);
    assert_eq!(serde_json::from_str::<Report>(&again).unwrap(), original);
    assert!(std::fs::read_to_string(md)
        .unwrap()
        .contains("translation_invariance | Fail"));

    let mut tampered = original.clone();
    *tampered.summary.get_mut(&Outcome::Pass).unwrap() += 1;
    std::fs::write(&saved, serde_json::to_string(&tampered).unwrap()).unwrap();
    assert_eq!(run(&["report", "--input", saved.to_str().unwrap()]).0, 2);
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let out = bin().arg("nonsense").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(
        bin()
            .args(["bounds", "--x", "[1]"])
            .output()
            .unwrap()
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "--manifest", "/nonexistent.json"]).0, 2);
    assert_eq!(
        run(&[
            "conjugate",
            "--functional",
            r#"{"kind":"entropic"}"#,
            "--y",
            "[1,1]"
        ])
        .0,
        2
    );
    assert_eq!(
        run(&[
            "choquet",
            "--capacity",
            r#"{"knots":[[0,0],[0.5,0.9]]}"#,
            "--x",
            "[1,2]"
        ])
        .0,
        2
    );
}

#[test]
fn documented_subcommand_outputs() {
    let (code, out, _) = run(&["bounds", "--x", "[1,2,3]", "--y", "[1,2,3]"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["lo"].as_f64().unwrap() - 3.3333333333).abs() < 1e-10);
    assert!((v["hi"].as_f64().unwrap() - 4.6666666667).abs() < 1e-10);

    let (_, out, _) = run(&["orbit-rank", "--z", "[1,-1,0]"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        (v["rank"].as_u64(), v["classification"].as_str()),
        (Some(2), Some("MeanZeroHyperplane"))
    );

    let (_, out, _) = run(&[
        "choquet",
        "--capacity",
        r#"{"n":2,"table":{"0":0,"1":0.3,"2":0.3,"3":1}}"#,
        "--x",
        "[2,1]",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["value"].as_f64().unwrap() - 1.3).abs() < 1e-12);

    let (_, out, _) = run(&[
        "conjugate",
        "--functional",
        r#"{"kind":"mean_affine","a":2,"b":1}"#,
        "--y",
        "[2,2]",
        "--method",
        "closed-form",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        (v["value"].as_f64(), v["status"].as_str()),
        (Some(-1.0), Some("Exact"))
    );

    let (code, out, _) = run(&[
        "collapse-scan",
        "--functional",
        r#"{"kind":"choquet","distortion":{"knots":[[0,0],[0.5,0.75],[1,1]]}}"#,
        "--n",
        "4",
        "--trials",
        "200",
        "--seed",
        "1",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["outcome"], "NoAffineDirection");

    let (code, out, _) = run(&[
        "collapse-scan",
        "--functional",
        r#"{"kind":"mean_affine","a":2,"b":1}"#,
        "--z",
        "[1,0,0]",
        "--trials",
        "100",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        (v["outcome"].as_str(), v["slope"].as_f64()),
        (Some("CollapseToMean"), Some(2.0))
    );
}
