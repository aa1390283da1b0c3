use std::process::{Command, Output};

use serde_json::Value;

fn hkcount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hkcount")).args(args).env_remove("HKCOUNT_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = hkcount(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn predicted(variety: &str, bundle: &str) -> Value {
    json(&["predict", "--variety", variety, "--bundle", bundle])
}

#[test]
fn predict_examples() {
    let threefold = predicted("2,2:0,1", "3,4");
    assert!((threefold["constant"].as_f64().unwrap() - 0.83190737).abs() < 1e-8);
    assert_eq!(threefold["a"], "1");
    assert_eq!(threefold["log_exponent"], 1);

    let surface = predicted("1,2:1", "2,3");
    assert!((surface["constant"].as_f64().unwrap() - 0.60792710).abs() < 1e-8);
    assert_eq!(surface["log_exponent"], 1);

    let twisted = predicted("1,2:1", "1,1");
    assert!((twisted["constant"].as_f64().unwrap() - 1.74234272).abs() < 1e-8);
    assert_eq!(twisted["a"], "3");
    assert_eq!(twisted["log_exponent"], 0);
}

#[test]
fn predict_text_has_constant_and_strata() {
    let o = hkcount(&["predict", "--variety", "2,2:0,1", "--bundle", "3,4"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("C = 0.83190737, a = 1, log = 1"), "{s}");
    assert!(s.contains("strata:"));
}

#[test]
fn predict_json_round_trips() {
    let v = predicted("1,2:1", "2,3");
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
    let strata = v["strata"].as_array().unwrap();
    assert_eq!(strata.len(), 2);
    assert!(strata.iter().all(|s| s["big"] == true));
}

#[test]
fn count_example() {
    let o = hkcount(&["count", "--variety", "1,2:1", "--bundle", "1,1", "--B", "1", "--region", "u"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("count 2\n"));
    let v = json(&["count", "--variety", "1,2:1", "--bundle", "1,1", "--B", "1", "--region", "u"]);
    assert_eq!(v["count"], 2);
    assert_eq!(v["region"], "GoodOpen");
}

#[test]
fn count_not_big_exits_3() {
    let o = hkcount(&["count", "--variety", "1,2:1", "--bundle", "1,1", "--B", "5", "--region", "f"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("infinite"));
    let o = hkcount(&["predict", "--variety", "1,2:1", "--bundle", "1,0"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn parse_errors_exit_2() {
    assert_eq!(hkcount(&["predict", "--variety", "1,2", "--bundle", "1,1"]).status.code(), Some(2));
    assert_eq!(hkcount(&["count", "--variety", "1,2:1", "--bundle", "1,1", "--B", "x"]).status.code(), Some(2));
    assert_eq!(hkcount(&["sweep", "--projective", "1", "--grid", "4,2"]).status.code(), Some(2));
}

#[test]
fn negative_bundle_literals_parse() {
    let o = hkcount(&["predict", "--variety", "1,2:1", "--bundle", "-1,2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn whole_count_reports_partition() {
    let o = hkcount(&["count", "--variety", "2,2:0,1", "--bundle", "3,4", "--B", "30", "--region", "x"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("count 2080\n"));
    assert!(s.contains("(consistent)"));
}

#[test]
fn stream_lists_every_point() {
    let o = hkcount(&["count", "--variety", "1,2:1", "--bundle", "1,1", "--B", "3", "--region", "u", "--stream"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    let n: usize = lines.last().unwrap().strip_prefix("count ").unwrap().parse().unwrap();
    assert_eq!(lines.len() - 1, n);
    let mut points = lines[..n].to_vec();
    points.sort();
    points.dedup();
    assert_eq!(points.len(), n);
    let direct = json(&["count", "--variety", "1,2:1", "--bundle", "1,1", "--B", "3", "--region", "u"]);
    assert_eq!(direct["count"], n as u64);
}

#[test]
fn sweep_csv_and_json_agree() {
    let args = ["sweep", "--variety", "1,2:1", "--bundle", "1,1", "--grid", "2,4,8,16"];
    let o = hkcount(&args);
    assert!(o.status.success());
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("B,count,predicted,ratio"));
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    assert_eq!(rows.len(), 4);
    let counts: Vec<u64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(counts.windows(2).all(|w| w[0] <= w[1]));

    let v = json(&args);
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 4);
    for (row, obj) in rows.iter().zip(arr) {
        assert_eq!(obj["bound"].as_str().unwrap(), row[0]);
        assert_eq!(obj["count"].as_u64().unwrap(), row[1].parse::<u64>().unwrap());
        let ratio: f64 = row[3].parse().unwrap();
        assert!((obj["ratio"].as_f64().unwrap() - ratio).abs() < 1e-7);
    }
}

#[test]
fn geometric_sweep() {
    let v = json(&["sweep", "--projective", "1", "--geometric", "8,2,4"]);
    let bounds: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["bound"].as_str().unwrap()).collect();
    assert_eq!(bounds, ["8", "16", "32", "64"]);
}

#[test]
fn counts_do_not_depend_on_threads() {
    let base = ["count", "--variety", "2,2:0,1", "--bundle", "3,4", "--B", "40", "--region", "u"];
    let counts: Vec<Value> = ["1", "2", "4"]
        .iter()
        .map(|t| {
            let mut a = base.to_vec();
            a.extend(["--threads", t]);
            json(&a)["count"].clone()
        })
        .collect();
    assert!(counts.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn tables_json() {
    let v = json(&["tables"]);
    let rows = v["hirzebruch"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    assert!((v["threefold_constants"]["open"].as_f64().unwrap() - 0.83190737).abs() < 1e-8);
    let only = json(&["tables", "--which", "threefold"]);
    assert!(only["hirzebruch"].is_null());
}

#[test]
fn zeta_values() {
    let v = json(&["zeta", "--function", "zeta", "--s", "2"]);
    assert!((v["value"].as_f64().unwrap() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
    let numeric = json(&["zeta", "--function", "zeta-p", "--m", "1", "--s", "6", "--tol", "1e-8"]);
    let analytic = json(&["zeta", "--function", "zeta-p-analytic", "--m", "1", "--s", "6"]);
    let tail = numeric["tail_bound"].as_f64().unwrap();
    assert!(tail <= 1e-8);
    assert!((numeric["value"].as_f64().unwrap() - analytic["value"].as_f64().unwrap()).abs() <= tail);
}

#[test]
fn invariants_file_is_used() {
    let dir = std::env::temp_dir().join(format!("hkcount-inv-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "degree = two\n").unwrap();
    let o = hkcount(&["--invariants", bad.to_str().unwrap(), "predict", "--variety", "1,2:1", "--bundle", "2,3"]);
    assert_eq!(o.status.code(), Some(2));
    let q = dir.join("q.txt");
    std::fs::write(&q, "# the rationals\nr1=1\nr2=0\nw=2\nabsDisc=1\nregulator=1\nclassNumber=1\n").unwrap();
    let with_file = json(&["--invariants", q.to_str().unwrap(), "predict", "--variety", "1,2:1", "--bundle", "2,3"]);
    assert_eq!(with_file, predicted("1,2:1", "2,3"));
    let missing = dir.join("missing.txt");
    let o = hkcount(&["--invariants", missing.to_str().unwrap(), "tables"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_suites_pass() {
    for suite in ["arakelov", "residue", "partition", "oracle", "integral"] {
        let o = hkcount(&["verify", suite]);
        assert!(o.status.success(), "{suite}: {}", stdout(&o));
        assert!(stdout(&o).contains(&format!("suite {suite}: pass")));
    }
    let v = json(&["verify", "oracle"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 3);
}
