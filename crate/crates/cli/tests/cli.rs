use polaris::{run, CommandResult, EXIT_INVALID, EXIT_OK, EXIT_USAGE};
use std::path::{Path, PathBuf};
use tempfile::TempDir;

fn polaris(args: &[&str]) -> CommandResult {
    run(std::iter::once("polaris").chain(args.iter().copied()))
}

fn corpus() -> (TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corpus");
    let r = polaris(&["corpus", path.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    (dir, path)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(p: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn mutate(src: &Path, dst: &Path, from: &str, to: &str) {
    let text = std::fs::read_to_string(src).unwrap();
    assert!(text.contains(from), "{from}");
    std::fs::write(dst, text.replacen(from, to, 1)).unwrap();
}

#[test]
fn figure4_is_valid() {
    let (_d, c) = corpus();
    let r = polaris(&["validate", s(&c.join("figure4.json"))]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.ends_with("valid\n"));
    assert!(!r.stdout.contains("invalid"));
}

#[test]
fn figure3_invariants() {
    let (_d, c) = corpus();
    let r = polaris(&["invariants", s(&c.join("figure3.json"))]);
    assert_eq!(r.code, EXIT_OK, "{}{}", r.stdout, r.stderr);
    for line in ["κ = -1", "A = π/3", "χ = -2", "genus = 2"] {
        assert!(r.stdout.lines().any(|l| l == line), "{line}\n{}", r.stdout);
    }
}

#[test]
fn non_primitive_slope_fails_v2_and_v4() {
    let (_d, c) = corpus();
    let broken = c.join("broken.json");
    let mut d = json(&c.join("figure4.json"));
    d["graph"]["faces"]["s0"]["torus"]["generators"] = serde_json::json!([[0, 2]]);
    std::fs::write(&broken, d.to_string()).unwrap();
    let r = polaris(&["validate", s(&broken)]);
    assert_eq!(r.code, EXIT_INVALID);
    assert!(r.stdout.contains("FAIL V2"));
    assert!(r.stdout.contains("FAIL V4"));
    assert!(r.stdout.ends_with("invalid\n"));
}

#[test]
fn usage_errors_exit_2() {
    let r = polaris(&["frobnicate"]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.stderr.contains("Usage"));
    assert_eq!(polaris(&["validate", "--bogus", "x.json"]).code, EXIT_USAGE);
    assert_eq!(polaris(&["validate", "/nonexistent/x.json"]).code, EXIT_USAGE);
    assert_eq!(polaris(&[]).code, EXIT_USAGE);
    assert_eq!(polaris(&["--help"]).code, EXIT_OK);
}

#[test]
fn exit_codes_on_corpus_and_mutations() {
    let (_d, c) = corpus();
    let stems = [
        "figure1",
        "figure2",
        "figure3",
        "figure4",
        "figure4_k1",
        "hexagon",
        "cp2",
        "biangle",
        "cp1_interval",
        "sphere_interval",
    ];
    for stem in stems {
        let r = polaris(&["validate", s(&c.join(format!("{stem}.json")))]);
        assert_eq!(r.code, EXIT_OK, "{stem}\n{}{}", r.stdout, r.stderr);
    }
    let bad = c.join("bad.json");
    // wrong corner group, wrong polar group order, unknown group name
    let cases = [
        ("figure1.json", "\"Sp(3)\"", "\"SU(3)\"", EXIT_INVALID),
        ("figure3.json", "\"order\": 12", "\"order\": 10", EXIT_INVALID),
        ("figure2.json", "\"O(2)\"", "\"Q(7)\"", EXIT_INVALID),
        ("figure4.json", "{", "[", EXIT_USAGE),
    ];
    for (file, from, to, code) in cases {
        mutate(&c.join(file), &bad, from, to);
        let r = polaris(&["validate", s(&bad)]);
        assert_eq!(r.code, code, "{file}: {from} -> {to}\n{}{}", r.stdout, r.stderr);
    }
}

#[test]
fn classify_figure4_sequences() {
    let (_d, c) = corpus();
    let r = polaris(&["classify", "--seq", s(&c.join("figure4_k1_sequence.json"))]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.starts_with("type = CP^2 # -CP^2\n"));
    let out = c.join("from_seq.json");
    let r = polaris(&["classify", "--seq", s(&c.join("figure4_sequence.json")), "--out", s(&out)]);
    assert!(r.stdout.starts_with("type = S^2xS^2\n"));
    // the corpus file also declares the polar group
    let mut want = json(&c.join("figure4.json"));
    want.as_object_mut().unwrap().remove("pi");
    assert_eq!(json(&out), want);
}

#[test]
fn constructions_round_trip_through_files() {
    let (_d, c) = corpus();
    let hex = c.join("hex.json");
    let sq = c.join("figure4.json");
    let r = polaris(&["connect-sum", s(&sq), "c0", s(&sq), "c1", "--out", s(&hex)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert_eq!(std::fs::read(&hex).unwrap(), std::fs::read(c.join("hexagon.json")).unwrap());

    let q = c.join("q.json");
    let r = polaris(&[
        "quotient",
        s(&c.join("figure2.json")),
        "--gamma",
        s(&c.join("figure2_gamma_z3.json")),
        "--out",
        s(&q),
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let r = polaris(&["cover", s(&q)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(r.stdout.contains("\"O''(2)\""));
    let r = polaris(&["quotient", s(&c.join("figure2.json")), "--gamma", s(&c.join("figure2_gamma_z2.json"))]);
    assert_eq!(r.code, EXIT_INVALID);
    assert!(r.stderr.contains("not normal"));

    let r =
        polaris(&["lift", s(&c.join("cp1_interval.json")), "--rank", "1", "--homs", s(&c.join("cp1_hopf_homs.json"))]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(r.stdout.starts_with("H: free\ne0: free\ne1: free\n"));
}

#[test]
fn glue_with_inline_arcs() {
    let (_d, c) = corpus();
    let sq = s(&c.join("figure4.json")).to_string();
    let arc_a = r#"{"type": "corner_truncation", "corner": "c0", "radius": 0.2}"#;
    let arc_b = r#"{"type": "corner_truncation", "corner": "c1", "radius": 0.2}"#;
    let r = polaris(&["glue", &sq, &sq, "--arc-a", arc_a, "--arc-b", arc_b]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let out = c.join("glued.json");
    std::fs::write(&out, &r.stdout).unwrap();
    assert_eq!(polaris(&["validate", s(&out)]).code, EXIT_OK);
}

#[test]
fn billiard_table_and_svg_are_deterministic() {
    let (_d, c) = corpus();
    let svg = c.join("fan.svg");
    let args = |svg: &Path| {
        vec![
            "billiard".to_string(),
            "--data".into(),
            s(&c.join("hexagon.json")).into(),
            "--p".into(),
            "0.013,-0.021".into(),
            "--q".into(),
            "-0.017,0.009".into(),
            "--lmax".into(),
            "6".into(),
            "--codims".into(),
            "2,2,2,2,2,2".into(),
            "--svg".into(),
            s(svg).into(),
        ]
    };
    let a = run(std::iter::once("polaris".to_string()).chain(args(&svg)));
    assert_eq!(a.code, EXIT_OK, "{}", a.stderr);
    let first = std::fs::read(&svg).unwrap();
    let b = run(std::iter::once("polaris".to_string()).chain(args(&svg)));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(first, std::fs::read(&svg).unwrap());
    let count: usize = a.stdout.lines().find_map(|l| l.strip_prefix("# count ")).unwrap().parse().unwrap();
    let rows = a.stdout.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, count);
    assert!(count > 100);
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("<?xml") && text.trim_end().ends_with("</svg>"));
}

#[test]
fn billiard_rejects_points_on_walls() {
    let (_d, c) = corpus();
    let r = polaris(&[
        "billiard",
        "--data",
        s(&c.join("figure4.json")),
        "--p",
        "0,0.5",
        "--q",
        "0.5,0.5",
        "--lmax",
        "3",
        "--codims",
        "2,2,2,2",
    ]);
    assert_eq!(r.code, EXIT_INVALID);
    assert!(r.stderr.contains("non-generic"));
}

#[test]
fn render_and_develop() {
    let (_d, c) = corpus();
    let out = c.join("fig1.svg");
    let r = polaris(&["render", s(&c.join("figure1.json")), "--out", s(&out), "--radius", "4"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("version=\"1.1\""));

    let r = polaris(&["develop", s(&c.join("figure1.json")), "--max-elems", "100"]);
    assert!(r.stdout.contains("# status closed-finite 48\n"));
    assert_eq!(r.stdout.lines().filter(|l| !l.starts_with('#')).count(), 48);
    let r = polaris(&["develop", s(&c.join("figure3.json")), "--max-elems", "50"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(!r.stdout.contains("closed-finite"));
}
