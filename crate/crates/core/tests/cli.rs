use std::path::Path;
use std::process::{Command, Output};

use wulff_lab::geom::{write_body, ConvexBody};

fn lab(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wulff-lab"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("WULFF_LAB_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn bodies(dir: &Path) -> (String, String, String) {
    let k = dir.join("cube2.json");
    let l = dir.join("disc256.json");
    let s = dir.join("simplex.json");
    write_body(&k, &ConvexBody::cube(2, -1.0, 1.0).unwrap()).unwrap();
    write_body(&l, &ConvexBody::regular_polygon(256, 1.0).unwrap()).unwrap();
    write_body(&s, &ConvexBody::standard_simplex(2).unwrap()).unwrap();
    let p = |x: &Path| x.display().to_string();
    (p(&k), p(&l), p(&s))
}

#[test]
fn square_against_disc_passes_with_small_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let (k, l, _) = bodies(dir.path());
    let o = lab(&["verify", "iso", "--k", &k, "--l", &l], None);
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["schema"], 1);
    let r = &doc["result"]["reports"][0];
    assert_eq!(r["pass"], true);
    assert!(r["ratio"].as_f64().unwrap() < 1e-3);
    assert_eq!(doc["config"]["mode"], "body");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (_, l, simplex) = bodies(dir.path());
    assert_eq!(code(&lab(&["verify", "iso", "--mode", "symmetric", "--k", &simplex, "--l", &l], None)), 66);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"dimension\": 2, \"vertices\": [[0, 0], [1").unwrap();
    assert_eq!(code(&lab(&["verify", "bm", "--k", bad.to_str().unwrap(), "--l", &l], None)), 65);
    assert_eq!(code(&lab(&["amgm", "--count", "0"], None)), 64);
    assert_eq!(code(&lab(&["verify", "iso"], None)), 64);
    assert_eq!(code(&lab(&["conjecture", "--n", "9..3"], None)), 65);
}

#[test]
fn random_bm_corpus_passes() {
    let o = lab(&["verify", "bm", "--random", "--n", "3", "--pairs", "50", "--seed", "11"], None);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn conjecture_table_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("table.csv");
    let args = ["conjecture", "--n", "2..8", "--eps", "0.02,0.01,0.005", "--out", csv.to_str().unwrap()];
    let o = lab(&args, None);
    assert_eq!(code(&o), 0);
    let table = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().count(), 22);
    assert_eq!(table.lines().next().unwrap(), "n,m,epsilon,beta,asymmetry,sigma,c_lower");
    assert!(String::from_utf8_lossy(&o.stdout).lines().last().unwrap().starts_with("exponent "));
    assert_eq!(lab(&args, None).stdout, o.stdout);
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), table);

    let single = lab(&["conjecture", "--n", "3"], None);
    let doc: serde_json::Value = serde_json::from_slice(&single.stdout).unwrap();
    assert!(doc["result"]["fit"].is_null());
    assert!(doc["result"]["note"].as_str().unwrap().contains("skipped"));
}

#[test]
fn failed_run_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("never.csv");
    let o = lab(&["conjecture", "--n", "2..4", "--eps=0.01,-1", "--out", csv.to_str().unwrap()], None);
    assert_eq!(code(&o), 65);
    assert!(!csv.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["amgm", "--count", "20000", "--seed", "5"];
    let one = lab(&args, Some("1"));
    let four = lab(&args, Some("4"));
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    let search = ["search", "--n", "2", "--budget", "60", "--seed", "9"];
    assert_eq!(lab(&search, Some("1")).stdout, lab(&search, Some("3")).stdout);
}
