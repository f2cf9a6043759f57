mod support;

use std::collections::BTreeSet;

use support::{bricolage, golden_dir, golden_index, golden_index_path};

fn ids(out: &std::process::Output) -> Vec<String> {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap().lines().map(str::to_owned).collect()
}

fn query(extra: &[&str]) -> std::process::Output {
    let index = golden_index_path();
    let mut args = vec!["query", "--index", index.to_str().unwrap()];
    args.extend_from_slice(extra);
    bricolage(&args)
}

#[test]
fn ingest_reproduces_the_golden_index() {
    let dir = tempfile::tempdir().unwrap();
    let golden = golden_dir();
    let manifest = golden.join("manifest.json");
    let outputs: Vec<Vec<u8>> = (0..2)
        .map(|run| {
            let out = dir.path().join(format!("index-{run}.json"));
            let status = bricolage(&[
                "ingest",
                "--manifest",
                manifest.to_str().unwrap(),
                "--images",
                golden.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
            ]);
            assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
            std::fs::read(out).unwrap()
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], std::fs::read(golden_index_path()).unwrap());
}

#[test]
fn missing_image_exits_2_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    bricolage_core::sample::write_sample(dir.path()).unwrap();
    std::fs::remove_file(dir.path().join("covers/g-004.png")).unwrap();
    let out = dir.path().join("index.json");
    let result = bricolage(&[
        "ingest",
        "--manifest",
        dir.path().join("manifest.json").to_str().unwrap(),
        "--images",
        dir.path().to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("covers/g-004.png"), "{stderr}");
    assert!(!out.exists());
}

#[test]
fn reversed_years_are_a_usage_error() {
    let out = query(&["--years", "1950:1930"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn out_of_range_k_is_rejected() {
    let out = bricolage(&["ingest", "--manifest", "m.json", "--images", ".", "--out", "x.json", "--k-colors", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn no_flags_lists_everything_in_order() {
    assert_eq!(ids(&query(&[])), golden_index().collection().ids());
}

#[test]
fn repeated_colors_take_the_union() {
    let red = ids(&query(&["--color", "#DC3232"]));
    let blue = ids(&query(&["--color", "#4678DC"]));
    let both = ids(&query(&["--color", "#DC3232", "--color", "#4678DC"]));
    let union: BTreeSet<String> = red.iter().chain(&blue).cloned().collect();
    assert_eq!(both.iter().cloned().collect::<BTreeSet<_>>(), union);
    assert_eq!(red, ["g-001", "g-003", "g-008"]);
    assert_eq!(blue, ["g-002", "g-004", "g-008"]);
}

#[test]
fn json_output_matches_the_engine() {
    let out = query(&["--sizes", "0", "--json"]);
    assert!(out.status.success());
    let got: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let f = bricolage_core::FilterState { size_categories: [0].into(), ..Default::default() };
    let expected = serde_json::to_value(golden_index().filter(&f).unwrap()).unwrap();
    assert_eq!(got, expected);
}
