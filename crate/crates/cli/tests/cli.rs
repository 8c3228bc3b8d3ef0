use std::process::{Command, Output};

fn oddsz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oddsz")).args(args).env("ODDSZ_THREADS", "2").output().expect("binary runs")
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = oddsz(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn unknot_document() {
    let doc = json(&["compute", "--knot", "0_1", "--json", "-"]);
    let total = doc["total_homology"].as_array().unwrap();
    let ranks: Vec<(i64, u64)> =
        total.iter().map(|g| (g["delta"].as_i64().unwrap(), g["group"]["rank"].as_u64().unwrap())).collect();
    assert_eq!(ranks, vec![(-1, 1), (1, 1)]);
    assert_eq!(doc["verification"]["jones_oracle_agrees"], true);
}

#[test]
fn trefoil_pages_report_collapse() {
    let doc = json(&["pages", "--knot", "3_1", "--flavor", "Y", "--json", "-"]);
    let ss = &doc["spectral_sequence"];
    assert_eq!(ss["pages"][0]["r"], 2);
    assert!(ss["collapse_page"].as_u64().unwrap() >= 2);
    assert_eq!(doc["verification"]["e2_equals_khovanov"], true);
    let text = oddsz(&["pages", "--knot", "3_1"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("collapses at E_"));
}

#[test]
fn random_verification_passes() {
    let out = oddsz(&["verify", "--random", "20", "--max-crossings", "5", "--seed", "7"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(!text.contains("FAIL"), "{text}");
}

#[test]
fn output_is_deterministic_apart_from_timing() {
    let args = ["compute", "--knot", "5_2", "--orient", "random", "--seed", "9", "--pages", "4", "--verify", "--json", "-"];
    let (mut a, mut b) = (json(&args), json(&args));
    a.as_object_mut().unwrap().remove("timing_ms");
    b.as_object_mut().unwrap().remove("timing_ms");
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn input_errors_exit_with_one() {
    assert_eq!(oddsz(&["compute", "--knot", "zzz"]).status.code(), Some(1));
    assert_eq!(oddsz(&["compute", "--pd", "X[1,2,3]"]).status.code(), Some(1));
    assert_eq!(oddsz(&["compute"]).status.code(), Some(1));
    assert_eq!(oddsz(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn catalog_lists_entries() {
    let entries = json(&["catalog", "--max-crossings", "3", "--json", "-"]);
    let names: Vec<&str> = entries.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"0_1") && names.contains(&"3_1") && names.contains(&"L2a1"));
    assert!(!names.contains(&"4_1"));
}
