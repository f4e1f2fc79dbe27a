use std::process::{Command, Output};

use serde_json::Value;

fn wzgain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wzgain")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = wzgain(&all);
    assert!(out.status.success(), "{}", stderr(&out));
    serde_json::from_str(&stdout(&out)).unwrap()
}

fn number(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn rho1_on_dsbs() {
    let v = json(&["rho1", "--dsbs-p", "0.25", "--distortion", "0.5"]);
    assert_eq!(v["command"], "rho1");
    assert!((number(&v["results"]["rho1"]) - 1.216_917).abs() < 1e-6);
    assert_eq!(v["params"]["dsbs-p"], "0.25");
}

#[test]
fn gain_detect_is_valid_at_small_p() {
    let v = json(&["gain-detect", "--p", "1e-6", "--q", "0.1", "--alpha0e", "0.5"]);
    assert_eq!(v["verdicts"]["valid"], true);
    assert!(number(&v["results"]["gap_lower"]) > 0.0);
}

#[test]
fn reproduce_paper_headline() {
    let v = json(&["reproduce-paper"]);
    assert!((number(&v["results"]["remark2_ratio"]) - 8.16).abs() <= 0.02);
    assert_eq!(number(&v["results"]["remark2_ratio_paper"]), 8.16);
    for (name, ok) in v["verdicts"].as_object().unwrap() {
        assert_eq!(ok, &Value::Bool(true), "{name}");
    }
    let text = stdout(&wzgain(&["reproduce-paper"]));
    assert!(text.contains("remark2_ratio") && text.contains("(reference 8.16"));
}

#[test]
fn json_schema_and_determinism() {
    let args = [
        "two-msg", "--p", "0.01", "--q", "0.1", "--alpha", "0.5", "--format", "json",
    ];
    let (a, b) = (stdout(&wzgain(&args)), stdout(&wzgain(&args)));
    let strip = |s: &str| {
        let mut v: Value = serde_json::from_str(s).unwrap();
        v.as_object_mut().unwrap().remove("runtime_s");
        v.to_string()
    };
    assert_eq!(strip(&a), strip(&b));
    // apart from the wall time, the text is byte-identical too
    let cut = |s: &str| {
        let start = s.find("\"runtime_s\"").unwrap();
        let end = start + s[start..].find(',').unwrap();
        format!("{}{}", &s[..start], &s[end..])
    };
    assert_eq!(cut(&a), cut(&b));
    let v: Value = serde_json::from_str(&a).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["command", "params", "results", "runtime_s", "verdicts"]);
    assert!(v["runtime_s"].is_number());
    assert_eq!(v["verdicts"]["direct_agrees"], true);
}

#[test]
fn csv_and_text_formats() {
    let csv = stdout(&wzgain(&["entropy-ratio", "--p", "1e-12", "--format", "csv"]));
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "p,slope,ratio");
    assert!(lines.next().unwrap().starts_with("1e-12,2,1.95158"));
    let text = stdout(&wzgain(&["entropy-ratio", "--p", "1e-12", "--slope", "1"]));
    assert!(text.contains("ratio") && text.contains("1.0000000000000000e0"));
}

#[test]
fn sweep_gain_detect_over_p() {
    let out = wzgain(&[
        "sweep",
        "gain-detect",
        "--p",
        "geom:1e-2:1e-20:19",
        "--q",
        "0.1",
        "--alpha0e",
        "0.5",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header = reader.headers().unwrap().clone();
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let (gap, rel) = (col("gap_lower"), col("relative_gap"));
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 19);
    let mut previous = f64::NEG_INFINITY;
    for (i, row) in rows.iter().enumerate() {
        // 50-digit reference: the gap at p = 1e-2 is -1.30094e-3, positive from 1e-3 on
        let g: f64 = row[gap].parse().unwrap();
        if i == 0 {
            assert!((g + 1.300_938_375_137_857_5e-3).abs() < 1e-12, "{g}");
        } else {
            assert!(g > 0.0, "{:?}", row);
        }
        let r: f64 = row[rel].parse().unwrap();
        assert!(r > previous);
        previous = r;
    }
}

#[test]
fn sweep_rho1_over_distortion() {
    let out = wzgain(&["sweep", "rho1", "--dsbs-p", "0.25", "--distortion", "lin:0:1:11"]);
    assert!(out.status.success());
    let h = 0.811_278_124_459_132_9;
    let text = stdout(&out);
    for line in text.lines().skip(1) {
        let cells: Vec<f64> = line.split(',').take(2).map(|c| c.parse().unwrap()).collect();
        assert!((cells[1] - (1.0 + cells[0]) * h).abs() < 1e-9, "{line}");
    }
    assert_eq!(text.lines().count(), 12);
}

#[test]
fn empty_sweep_writes_header_only() {
    let out = wzgain(&["sweep", "rho1", "--dsbs-p", "0.25", "--distortion", ""]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "distortion,rho1,alpha0e,alpha1e,rsum1,grid_fallback\n");
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = wzgain(&[
        "rho1",
        "--dsbs-p",
        "0.1",
        "--distortion",
        "1",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "rho1");
}

#[test]
fn wz_rate_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let joint = dir.path().join("joint.json");
    let dist = dir.path().join("dist.json");
    std::fs::write(
        &joint,
        r#"{"alphabet_sizes": [2, 2], "values": [0.375, 0.125, 0.125, 0.375]}"#,
    )
    .unwrap();
    std::fs::write(
        &dist,
        r#"{"alphabet_sizes": [2, 3], "values": [0, 1, "inf", "inf", 1, 0]}"#,
    )
    .unwrap();
    let v = json(&[
        "wz-rate",
        "--joint",
        joint.to_str().unwrap(),
        "--dist",
        dist.to_str().unwrap(),
        "--distortion",
        "0.5",
        "--grid-res",
        "32",
    ]);
    assert!((number(&v["results"]["rate"]) - 0.405_639).abs() < 5e-3);

    std::fs::write(
        &dist,
        r#"{"alphabet_sizes": [2, 3], "values": [0, 1, "inf", "inf", 1]}"#,
    )
    .unwrap();
    let out = wzgain(&[
        "wz-rate",
        "--joint",
        joint.to_str().unwrap(),
        "--dist",
        dist.to_str().unwrap(),
        "--distortion",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("values"));
}

fn assert_failure(args: &[&str], code: i32, needle: &str) {
    let out = wzgain(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {}", stderr(&out));
    assert!(out.stdout.is_empty(), "partial output for {args:?}");
    let err = stderr(&out);
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    assert!(err.contains(needle), "{args:?}: {err}");
}

#[test]
fn error_exit_codes() {
    assert_failure(&["frobnicate"], 2, "frobnicate");
    assert_failure(&["rho1", "--dsbs-p", "abc", "--distortion", "0.5"], 2, "--dsbs-p");
    assert_failure(&["rho1", "--dsbs-p", "1.5", "--distortion", "0.5"], 2, "outside");
    assert_failure(&["entropy-ratio", "--p", "0.1", "--q", "0.2"], 2, "--q");
    assert_failure(&["gain-detect", "--q", "0.1", "--alpha0e", "0.5"], 2, "--p");
    assert_failure(&["ratio-search", "--L", "9", "--q", "0.1"], 3, "best sum ratio");
    assert_failure(
        &["gain-search", "--q", "0.499", "--alpha0e", "0.99", "--margin", "0.1"],
        3,
        "exhausted",
    );
    assert_failure(
        &["wz-rate", "--joint", "/nonexistent/joint.json", "--distortion", "0.1"],
        1,
        "nonexistent",
    );
    assert_failure(
        &[
            "sweep",
            "gain-detect",
            "--p",
            "0.1,0.2",
            "--q",
            "0.1,0.2",
            "--alpha0e",
            "0.5,0.6",
        ],
        2,
        "at most two",
    );
    assert_failure(
        &[
            "sweep",
            "entropy-ratio",
            "--p",
            "lin:0.1:0.2:2000",
            "--slope",
            "lin:1:2:1000",
        ],
        2,
        "exceeds",
    );
    assert_failure(&["sweep", "reproduce-paper"], 2, "cannot be swept");
}

#[test]
fn help_exits_cleanly() {
    let out = wzgain(&["--help"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("reproduce-paper"));
}
