use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dispteleport")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows of a CSV document: header comment and column line stripped.
fn rows(csv: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let (comment, body) = csv.split_once('\n').unwrap();
    assert!(comment.starts_with("# dispteleport "));
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let body = reader.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    (header, body)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

fn float(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn fidelity_endpoint_single_point() {
    let out = run(&["fidelity", "--alpha", "0.5", "--t", "1"]);
    assert!(out.status.success());
    let (h, body) = rows(&stdout(&out));
    assert_eq!(body.len(), 1);
    assert!((float(&body[0][column(&h, "fid_analytic")]) - 1.0).abs() < 1e-10);
}

#[test]
fn fidelity_grid_decreases_in_alpha() {
    let out = run(&["fidelity", "--grid", "alpha=0:1:11", "--grid", "t=0.9:0.99:4"]);
    assert!(out.status.success());
    let (h, body) = rows(&stdout(&out));
    assert_eq!(body.len(), 44);
    let (ia, it, ifid) = (column(&h, "alpha"), column(&h, "t"), column(&h, "fid_analytic"));
    for t in ["9e-1", "9.3e-1", "9.6e-1", "9.9e-1"] {
        let fids: Vec<f64> = body.iter().filter(|r| r[it] == t).map(|r| float(&r[ifid])).collect();
        assert_eq!(fids.len(), 11, "t = {t}");
        assert!(fids.windows(2).all(|w| w[1] < w[0]), "t = {t}: {fids:?}");
    }
    // last axis varies fastest
    assert_eq!(body[0][ia], body[3][ia]);
    assert_ne!(body[0][ia], body[4][ia]);
}

#[test]
fn exact_fidelity_tracks_closed_form() {
    let out = run(&["fidelity", "--alpha", "0.1", "--t", "0.995", "--exact"]);
    assert!(out.status.success());
    let (h, body) = rows(&stdout(&out));
    let d = float(&body[0][column(&h, "fid_analytic")]) - float(&body[0][column(&h, "fid_numeric")]);
    assert!(d.abs() <= 2e-3, "{d}");
}

#[test]
fn direct_family_is_dominated_by_low_outcomes() {
    let out = run(&["probs", "--family", "direct", "--alpha", "0.03", "--grid", "a1=0:1:101"]);
    assert!(out.status.success());
    let (h, body) = rows(&stdout(&out));
    assert_eq!(body.len(), 101);
    let (p0, p1, res) = (column(&h, "p_0"), column(&h, "p_1"), column(&h, "residual"));
    for r in &body {
        assert!(float(&r[p0]) + float(&r[p1]) >= 0.9982 - 5e-4);
        assert!(float(&r[res]).abs() <= 1e-10);
    }
}

#[test]
fn modulated_families_show_high_success_regions() {
    for alpha in ["0.06", "0.1", "0.2", "0.3"] {
        let out = run(&["probs", "--family", "am0", "--alpha", alpha, "--grid", "a1=0:1:21"]);
        assert!(out.status.success());
        let (h, body) = rows(&stdout(&out));
        let (a1, p0, res) = (column(&h, "a1_abs"), column(&h, "p_0"), column(&h, "residual"));
        assert!(float(&body[0][p0]) > 0.5, "α = {alpha}");
        assert!(body.iter().all(|r| float(&r[res]).abs() <= 1e-10));
        assert_eq!(float(&body[0][a1]), 0.0);
        assert_eq!(body[0][column(&h, "note")], "highly unbalanced");
    }
    let out = run(&["probs", "--family", "am1", "--alpha", "0.3", "--a0", "0", "--a1", "1"]);
    let (h, body) = rows(&stdout(&out));
    assert!(float(&body[0][column(&h, "p_1")]) > 0.5);
}

#[test]
fn cat_statistics_match_published_values() {
    let out = run(&["probs", "--family", "cat", "--beta", "0.3"]);
    assert!(out.status.success());
    let (h, body) = rows(&stdout(&out));
    let even = &body[0];
    let odd = &body[1];
    assert_eq!(even[column(&h, "parity")], "even");
    assert!((float(&even[column(&h, "p_0")]) - 0.996).abs() < 5e-4);
    assert!((float(&odd[column(&h, "p_1")]) - 0.9986).abs() < 5e-4);
}

#[test]
fn channel_generation_reports_all_patterns() {
    let out = run(&["channel", "--alpha", "0.1", "--beta", "0.5"]);
    assert!(out.status.success());
    let (h, body) = rows(&stdout(&out));
    let (ip, ifid) = (column(&h, "pattern"), column(&h, "fidelity"));
    let patterns: Vec<&str> = body.iter().map(|r| r[ip].as_str()).collect();
    assert_eq!(patterns, ["00", "01", "10", "11"]);
    for r in &body {
        if r[ip] == "00" || r[ip] == "11" {
            assert!((float(&r[ifid]) - 1.0).abs() < 1e-8);
        }
    }
}

#[test]
fn teleport_report_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let p = path.to_str().unwrap();
    let args = ["teleport", "--alpha", "0.03", "--trials", "20000", "--seed", "5", "--out", p];
    assert!(run(&args).status.success());
    let first = std::fs::read(&path).unwrap();
    assert!(run(&args).status.success());
    assert_eq!(first, std::fs::read(&path).unwrap());

    let doc: serde_json::Value = serde_json::from_slice(&first).unwrap();
    let outcomes = doc["report"]["outcomes"].as_array().unwrap();
    let mut high = 0.0;
    for o in outcomes {
        assert!((o["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-8);
        assert!(["00", "01", "10", "11"].contains(&o["message"].as_str().unwrap()));
        if o["n"].as_u64().unwrap() > 1 {
            high += o["frequency"].as_f64().unwrap();
        }
    }
    assert!(high <= 2e-3, "{high}");
}

#[test]
fn csv_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("surface.csv");
    let p = path.to_str().unwrap();
    let args = ["fidelity", "--grid", "alpha=0:1:6", "--grid", "t=0.9:1:6", "--out", p];
    assert!(run(&args).status.success());
    let first = std::fs::read_to_string(&path).unwrap();
    assert!(run(&args).status.success());
    assert_eq!(first, std::fs::read_to_string(&path).unwrap());
    let header = first.lines().next().unwrap();
    assert!(header.contains("0.1.0") && header.contains("fidelity --grid") && header.contains("provenance"));
}

#[test]
fn nmax_override_is_recorded() {
    let out = run(&["fidelity", "--alpha", "0.03", "--t", "0.99", "--exact", "--nmax", "20"]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().next().unwrap().ends_with("nmax: 20"));
    let out = run(&["teleport", "--nmax", "12", "--trials", "10"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["nmax"], "12");
    assert_eq!(doc["report"]["dims"]["coherent"], 13);
}

#[test]
fn verification_exit_codes() {
    let ok = run(&["verify", "--level", "quick"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("coeff sign flip"));
    let broken = run(&["verify", "--inject-sign-error"]);
    assert_eq!(broken.status.code(), Some(1));
    let table = stdout(&broken);
    let line = table.lines().find(|l| l.starts_with("coeff sign flip")).unwrap();
    assert!(line.contains("FAIL"));
}

#[test]
fn usage_and_degeneracy_exit_codes() {
    for args in [
        &["bogus"][..],
        &["fidelity", "--grid", "alpha=0:1:1"],
        &["fidelity", "--grid", "x=0:1:3"],
        &["fidelity", "--alpha", "0.1", "--grid", "alpha=0:1:3"],
        &["probs", "--family", "nope"],
        &["channel", "--alpha", "0.1", "--t", "0.9"],
        &["teleport", "--mode", "sloppy"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(run(&["channel", "--patterns", "99"]).status.code(), Some(3));
    assert_eq!(run(&["teleport", "--a0", "0", "--a1", "0"]).status.code(), Some(3));
}
