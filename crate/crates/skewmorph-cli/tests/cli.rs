//! End-to-end tests of the command-line interface: exit codes, the
//! byte-determinism contract for stdout, and the map file round trip.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_skewmorph"))
}

#[test]
fn verify_am1_passes_with_exit_zero() {
    let out = bin()
        .args(["verify", "am1", "--m", "6..10"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"pass\": true"));
    assert!(!text.contains("\"pass\": false"));
}

#[test]
fn usage_errors_exit_two() {
    let out = bin()
        .args(["census", "am"]) // missing --m
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["verify", "indecomposable_mixed_map", "--n", "3", "--p", "4"]) // p not prime
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn strict_census_flags_the_published_discrepancy() {
    // The A5 table's impossible entry makes --strict exit 1; the default
    // reports it on stderr and exits 0.
    let out = bin()
        .args(["census", "a5", "--strict", "--threads", "2"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
    let out = bin()
        .args(["census", "a5", "--threads", "2"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("differs from the published table"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let run = || {
        bin()
            .args(["census", "a5", "--threads", "2", "--seed", "12345"])
            .output()
            .expect("binary runs")
            .stdout
    };
    assert_eq!(run(), run());
    let run = || {
        bin()
            .args(["skew", "enumerate-tiny", "--g", "S(3)"])
            .output()
            .expect("binary runs")
            .stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn classify_reports_the_three_kinds() {
    let out = bin()
        .args(["skew", "classify", "--x", "M23", "--g", "M22"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"kind\": \"simple\""));

    let out = bin()
        .args(["skew", "classify", "--x", "A(7)", "--g", "A(6)"])
        .output()
        .expect("binary runs");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"kind\": \"simple\""));
}

#[test]
fn map_export_and_product_round_trip() {
    let dir = std::env::temp_dir().join(format!("skewmorph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let first = dir.join("am1-6.json");
    let second = dir.join("q-5-1.json");
    let product = dir.join("product.json");

    let out = bin()
        .args(["map", "--family", "am1", "--m", "6"])
        .arg("--out")
        .arg(&first)
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let out = bin()
        .args(["map", "--family", "q", "--p", "5", "--c", "1"])
        .arg("--out")
        .arg(&second)
        .output()
        .expect("binary runs");
    assert!(out.status.success());

    let out = bin()
        .arg("product")
        .arg("--first")
        .arg(&first)
        .arg("--second")
        .arg(&second)
        .arg("--out")
        .arg(&product)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&product).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    // vertex valency of the product rotation: lcm(7, 5) = 35
    assert_eq!(parsed["vertex_valency"], "35");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn enumerate_tiny_rejects_large_groups_as_usage_error() {
    let out = bin()
        .args(["skew", "enumerate-tiny", "--g", "A(5)"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generator_list_literals_are_accepted() {
    let out = bin()
        .args([
            "skew",
            "classify",
            "--x",
            "(1,2,3); (1,2)",
            "--g",
            "(1,2,3)",
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"kind\": \"balanced\""), "{text}");

    // a generator list that is not a subgroup of X is a usage error
    let out = bin()
        .args(["skew", "classify", "--x", "(1,2,3); (1,2)", "--g", "(1,4)"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        bin()
            .args(["census", "am", "--m", "6", "--threads", threads])
            .output()
            .expect("binary runs")
            .stdout
    };
    assert_eq!(run("1"), run("3"));
}
