use std::path::Path;
use std::process::{Command, Output};

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ext-forge"))
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .output()
        .expect("spawning ext-forge")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path();
    assert_eq!(run(c, &["--max-s", "6", "ext", "f2", "--max-stem", "10"]).status.code(), Some(0));
    assert_eq!(run(c, &["--algebra", "B7", "ext", "f2", "--max-stem", "10"]).status.code(), Some(2));
    assert_eq!(run(c, &["ext", "h8 ⊗ h8", "--max-stem", "10"]).status.code(), Some(2));
    assert_eq!(run(c, &["ext", "f2", "--window", "5..3"]).status.code(), Some(2));
    assert_eq!(run(c, &["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(c, &["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(c, &["verify", "bg-lemma"]).status.code(), Some(0));
    // The v2^8 window check fails on an honest computation.
    assert_eq!(run(c, &["verify", "vanishing-windows"]).status.code(), Some(1));
}

#[test]
fn cache_hit_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path();
    let args = ["--max-s", "8", "resolve", "--max-t", "30"];
    let first = run(c, &args);
    assert!(stdout(&first).starts_with("computed"), "{}", stdout(&first));
    let second = run(c, &args);
    assert!(stdout(&second).starts_with("cache hit"));
    // A smaller request is served by the covering entry.
    assert!(stdout(&run(c, &["--max-s", "4", "resolve", "--max-t", "20"])).starts_with("cache hit"));

    let fresh = stdout(&run(c, &["--force", "--max-s", "7", "ext", "bo:1 ⊗ h8", "--max-t", "30"]));
    let cached = stdout(&run(c, &["--max-s", "7", "ext", "bo:1 ⊗ h8", "--max-t", "30"]));
    assert_eq!(fresh, cached);

    let entry = std::fs::read_dir(c)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.join("resolution.json").exists())
        .unwrap();
    let payload = entry.join("resolution.json");
    let mut bytes = std::fs::read(&payload).unwrap();
    let last = bytes.len() - 2;
    bytes[last] ^= 1;
    std::fs::write(&payload, bytes).unwrap();
    let bad = run(c, &["--max-s", "4", "resolve", "--max-t", "20"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("corrupt"));
    let forced = run(c, &["--force", "--max-s", "8", "resolve", "--max-t", "30"]);
    assert_eq!(forced.status.code(), Some(0));
    assert!(stdout(&run(c, &args)).starts_with("cache hit"));
}

#[test]
fn self_map_selection_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path();
    let o = run(c, &["--max-s", "10", "ext", "h8v18", "--max-stem", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let manifest = std::fs::read_dir(c)
        .unwrap()
        .map(|e| e.unwrap().path().join("manifest.json"))
        .find(|p| p.exists())
        .unwrap();
    assert!(std::fs::read_to_string(manifest).unwrap().contains("self-map (8,24)"));
}

#[test]
fn bgpoly_output() {
    let dir = tempfile::tempdir().unwrap();
    let first = |idx: &str| stdout(&run(dir.path(), &["bgpoly", idx])).lines().next().unwrap().to_string();
    assert_eq!(first("2"), "t x + s t^2");
    assert_eq!(first("3"), "t x^2");
    assert_eq!(first("1,1"), "x^2");
    let json: serde_json::Value = serde_json::from_str(&stdout(&run(dir.path(), &["bgpoly", "2", "--json"]))).unwrap();
    assert_eq!(json["summands"]["summands"].as_array().unwrap().len(), 2);
}

#[test]
fn svg_and_json_formats() {
    let dir = tempfile::tempdir().unwrap();
    let svg = stdout(&run(dir.path(), &["--max-s", "6", "ext", "f2", "--max-stem", "12", "--svg"]));
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&run(dir.path(), &["--max-s", "6", "ext", "f2", "--max-stem", "12", "--format", "json"]))).unwrap();
    assert!(json.is_object());
}
