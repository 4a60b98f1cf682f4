use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinspace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn as_f64(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| v.to_string().parse().unwrap())
}

fn branch<'a>(report: &'a Value, observable: &str, sector: &str) -> &'a Value {
    report["branches"]
        .as_array()
        .unwrap()
        .iter()
        .find(|b| b["observable"] == observable && b["sector"] == sector)
        .unwrap()
}

fn configurations(args: &[&str]) -> Vec<Vec<String>> {
    json(args)["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            t["configuration"]
                .as_array()
                .unwrap()
                .iter()
                .map(|c| c.as_str().unwrap().to_string())
                .collect()
        })
        .collect()
}

#[test]
fn fermion_report_at_fifty_fifty() {
    let r = json(&["scenario", "--statistics", "fermion", "--signs", "++", "--bs", "50/50"]);
    assert!((as_f64(&r["total_entropy_ebits"]) - 2.0).abs() < 1e-9);
    let aa = branch(&r, "path", "antibunch:antibunch");
    assert!((as_f64(&aa["probability"]) - 0.75).abs() < 1e-9);
    assert!((as_f64(&aa["post_state_entropy_ebits"]) - 3f64.log2()).abs() < 1e-9);
    let sx = branch(&r, "sx", "0:0");
    assert!((as_f64(&sx["probability"]) - 0.5).abs() < 1e-9);
    assert!((as_f64(&sx["spatial_entropy_ebits"]) - 1.0).abs() < 1e-9);
    assert_eq!(r["scenario"]["statistics"], "fermion");
}

#[test]
fn boson_report_at_fifty_fifty() {
    let r = json(&["scenario", "--statistics", "boson", "--signs=++"]);
    let aa = branch(&r, "path", "antibunch:antibunch");
    assert!((as_f64(&aa["probability"]) - 0.25).abs() < 1e-9);
    assert!(as_f64(&aa["post_state_entropy_ebits"]).abs() < 1e-9);
}

#[test]
fn identity_splitter_from_flags() {
    let r = json(&["scenario", "--alpha", "1,0", "--beta", "0,0"]);
    assert!((as_f64(&r["total_entropy_ebits"]) - 2.0).abs() < 1e-9);
    let aa = branch(&r, "path", "antibunch:antibunch");
    assert!((as_f64(&aa["probability"]) - 1.0).abs() < 1e-9);
    assert!((as_f64(&aa["post_state_entropy_ebits"]) - 2.0).abs() < 1e-9);
}

#[test]
fn invalid_input_exits_with_two() {
    let cases: &[&[&str]] = &[
        &["scenario", "--alpha", "1,0", "--beta", "1,0"],
        &["scenario", "--alpha", "1;0", "--beta", "0,0"],
        &["scenario", "--signs", "+x"],
        &["scenario", "--statistics", "anyon"],
        &["scenario", "--bs", "70/30"],
        &["sweep", "--grid", "1"],
        &["scenario", "--no-such-flag"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
    let out = run(&["scenario", "--alpha", "1,0", "--beta", "1,0"]);
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("|alpha|^2 + |beta|^2"), "{msg}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    for format in ["json", "csv", "text"] {
        let args = ["scenario", "--statistics", "boson", "--signs", "+-", "--format", format];
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{format}");
    }
}

#[test]
fn out_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("spinspace-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (name, args) in [
        ("report.json", vec!["scenario", "--format", "json"]),
        ("terms.csv", vec!["terms", "--component", "sz0", "--format", "csv"]),
        ("sweep.csv", vec!["sweep", "--grid", "3"]),
    ] {
        let path = dir.join(name);
        let mut full = args.clone();
        let p = path.to_str().unwrap();
        full.extend(["--out", p]);
        let out = run(&full);
        assert!(out.status.success());
        assert_eq!(std::fs::read(&path).unwrap(), out.stdout, "{name}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn oracle_check_leaves_output_unchanged() {
    let plain = run(&["scenario", "--statistics", "fermion", "--alpha", "0.6,0.3", "--beta", "-0.2,0.71414284285428499"]);
    let checked = run(&[
        "scenario", "--statistics", "fermion", "--alpha", "0.6,0.3", "--beta", "-0.2,0.71414284285428499",
        "--check-oracle",
    ]);
    assert!(plain.status.success(), "{}", String::from_utf8_lossy(&plain.stderr));
    assert_eq!(checked.status.code(), Some(0));
    assert_eq!(plain.stdout, checked.stdout);
}

#[test]
fn csv_and_text_carry_the_same_values() {
    let csv = String::from_utf8(run(&["scenario", "--format", "csv"]).stdout).unwrap();
    let text = String::from_utf8(run(&["scenario", "--format", "text"]).stdout).unwrap();
    let row = csv
        .lines()
        .find(|l| l.contains(",path,antibunch:antibunch,"))
        .unwrap();
    let probability = row.split(',').nth(8).unwrap();
    assert!((probability.parse::<f64>().unwrap() - 0.75).abs() < 1e-9);
    assert!(text.contains(probability));
}

#[test]
fn aligned_term_appears_in_the_sz1_listing() {
    let configs = configurations(&["terms", "--statistics", "fermion", "--signs", "++", "--component", "sz1"]);
    let wanted: Vec<String> = ["C1up:1", "D1up:1", "C2dn:1", "D2dn:1"].map(String::from).to_vec();
    assert!(configs.contains(&wanted));
}

#[test]
fn sz0_listings_compare_across_signs_and_statistics() {
    let generic = ["--alpha", "0.955336489125606,0", "--beta", "0,-0.29552020666134"];
    let listing = |stats: &str, signs: &str, bs: &[&str]| {
        let mut args = vec!["terms", "--component", "sz0", "--statistics", stats, "--signs", signs];
        args.extend_from_slice(bs);
        let mut c = configurations(&args);
        c.sort();
        c
    };
    let pp = listing("fermion", "++", &generic);
    let pm = listing("fermion", "+-", &generic);
    assert!(pm.len() < pp.len());
    assert!(pm.iter().all(|c| pp.contains(c)));
    for (signs, bs) in [("++", &generic[..]), ("+-", &generic[..]), ("++", &[][..]), ("+-", &[][..])] {
        assert_eq!(listing("fermion", signs, bs), listing("boson", signs, bs), "{signs}");
    }
}

#[test]
fn sweep_rows_follow_theta() {
    let out = run(&["sweep", "--grid", "5", "--statistics", "fermion"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap_or(f64::NAN)).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    let theta = col("theta");
    for (k, row) in rows.iter().enumerate() {
        let expected = std::f64::consts::FRAC_PI_2 * k as f64 / 4.0;
        assert!((row[theta] - expected).abs() < 1e-15);
        let group: f64 = ["antibunch:antibunch", "antibunch:bunch", "bunch:antibunch", "bunch:bunch"]
            .iter()
            .map(|s| row[col(&format!("path[{s}]_probability"))])
            .sum();
        assert!((group - 1.0).abs() < 1e-9);
    }
    let aa = col("path[antibunch:antibunch]_probability");
    assert!((rows[0][aa] - 1.0).abs() < 1e-9);
    assert!((rows[2][aa] - 0.75).abs() < 1e-9);
    let aa_entropy = col("path[antibunch:antibunch]_entropy_ebits");
    assert!((rows[2][aa_entropy] - 3f64.log2()).abs() < 1e-9);
}
