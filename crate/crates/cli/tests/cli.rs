use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_polyharm");

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn polyharm(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("POLYHARM_CONFIG")
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .unwrap()
}

fn code(args: &[&str]) -> i32 {
    polyharm(args).status.code().unwrap()
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(polyharm(args).stdout).unwrap()
}

#[test]
fn eval_prints_fifteen_digits() {
    assert_eq!(
        stdout(&[
            "eval",
            "--spec",
            &fixture("convex_shear_biharmonic.json"),
            "--z",
            "0.5"
        ])
        .trim(),
        "0.489583333333333+0i"
    );
    assert_eq!(
        stdout(&["eval", "--spec", &fixture("identity.json"), "--z", "0.25i"]).trim(),
        "0+0.250000000000000i"
    );
}

#[test]
fn eval_error_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"p\": 1,\n \"components\": [}").unwrap();
    let out = polyharm(&["eval", "--spec", bad.to_str().unwrap(), "--z", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2 column"));

    assert_eq!(
        code(&["eval", "--spec", &fixture("identity.json"), "--z", "1.5"]),
        3
    );
    assert_eq!(
        code(&["eval", "--spec", &fixture("identity.json"), "--z", "abc"]),
        2
    );
    assert_eq!(
        code(&["eval", "--spec", "/definitely/missing.json", "--z", "0"]),
        4
    );
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn mismatched_order_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{"p": 2, "components": [{"h": [[0,0],[1,0]], "g": []}]}"#,
    )
    .unwrap();
    assert_eq!(
        code(&["eval", "--spec", spec.to_str().unwrap(), "--z", "0"]),
        2
    );
}

#[test]
fn slice_test_exit_codes() {
    let example = fixture("convex_shear_biharmonic.json");
    assert_eq!(code(&["slice-test", "--spec", &example]), 0);
    assert_eq!(
        code(&["slice-test", "--spec", &fixture("sense_reversing.json")]),
        1
    );
    assert_eq!(
        code(&["slice-test", "--spec", &example, "--grid", "2x2"]),
        5
    );
    assert_eq!(
        code(&["slice-test", "--spec", &example, "--grid", "banana"]),
        2
    );
    assert_eq!(
        code(&["slice-test", "--spec", &example, "--radii", "0.5,1.2"]),
        3
    );
}

#[test]
fn slice_test_failure_carries_witness() {
    let json: Value = serde_json::from_str(&stdout(&[
        "slice-test",
        "--spec",
        &fixture("sense_reversing.json"),
        "--json",
    ]))
    .unwrap();
    assert_eq!(json["report"]["status"], "certified_fail");
    assert!(!json["report"]["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn boundary_command() {
    assert_eq!(code(&["boundary", "--spec", &fixture("identity.json")]), 3);

    let run = |name: &str| -> (i32, Value) {
        let out = polyharm(&[
            "boundary",
            "--spec",
            &fixture(name),
            "--theta0",
            "0",
            "--json",
        ]);
        (
            out.status.code().unwrap(),
            serde_json::from_slice(&out.stdout).unwrap(),
        )
    };
    let (c, json) = run("convex_shear_biharmonic.json");
    assert_eq!(c, 0);
    assert_eq!(json["report"]["jump"]["verdict"], "continuous");
    assert_eq!(json["report"]["advisory"], false);

    let (c, json) = run("log_jump.json");
    assert_eq!(c, 0);
    assert_eq!(json["report"]["jump"]["verdict"], "jump");
    let est = json["report"]["jump"]["c_estimate"].as_f64().unwrap();
    assert!((0.9..=1.1).contains(&est));

    let (_, json) = run("pole_f2.json");
    assert_eq!(json["report"]["advisory"], true);
}

#[test]
fn negative_theta_is_accepted() {
    assert_eq!(
        code(&[
            "boundary",
            "--spec",
            &fixture("convex_shear_biharmonic.json"),
            "--theta0",
            "-1.5"
        ]),
        0
    );
}

#[test]
fn gamma_integral_command() {
    let analytic = fixture("analytic_biharmonic.json");
    assert_eq!(
        code(&["gamma-integral", "--spec", &analytic, "--m", "0.1"]),
        0
    );
    assert_eq!(
        code(&["gamma-integral", "--spec", &analytic, "--m", "0.5"]),
        3
    );
    assert_eq!(
        code(&[
            "gamma-integral",
            "--spec",
            &fixture("identity.json"),
            "--m",
            "0.1"
        ]),
        3
    );

    // |φ| = |z|²·... reaches beyond one near the boundary for F₂ = 2·conj(z)
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("wild.json");
    std::fs::write(
        &spec,
        r#"{"p": 2, "components": [{"h": [[0,0],[1,0]], "g": []}, {"h": [], "g": [[0,0],[2,0]]}]}"#,
    )
    .unwrap();
    let out = polyharm(&[
        "gamma-integral",
        "--spec",
        spec.to_str().unwrap(),
        "--m",
        "0.1",
        "--cutoffs",
        "1e-2,1e-3,1e-4",
        "--json",
    ]);
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["report"]["hypothesis_holds"], false);
    assert!(json["report"]["phi_violations"].as_u64().unwrap() > 0);
}

#[test]
fn certify_ctc_command() {
    let out = polyharm(&[
        "certify-ctc",
        "--spec",
        &fixture("convex_shear_harmonic.json"),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        json["report"]["kh"]["sum_value"].as_f64().unwrap(),
        2.0 / 3.0
    );
    let sup = json["report"]["sup_dilatation"].as_f64().unwrap();
    assert!((sup - 0.6).abs() < 0.02);

    assert_eq!(
        code(&["certify-ctc", "--spec", &fixture("identity.json")]),
        0
    );
    assert_eq!(
        code(&["certify-ctc", "--spec", &fixture("quadratic.json")]),
        5
    );
    assert_eq!(
        code(&["certify-ctc", "--spec", &fixture("coefficient_excess.json")]),
        1
    );
    assert_eq!(
        code(&["certify-ctc", "--spec", &fixture("coanalytic_equal.json")]),
        1
    );
    assert_eq!(
        code(&[
            "certify-ctc",
            "--spec",
            &fixture("convex_shear_biharmonic.json")
        ]),
        3
    );
}

#[test]
fn certify_ctc_renders_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let args = [
        "certify-ctc",
        "--spec",
        &fixture("convex_shear_harmonic.json"),
        "--render",
        "--samples",
        "64",
        "--out",
        out,
    ];
    assert_eq!(code(&args), 0);
    for f in ["certify-ctc.json", "f1_sum.svg", "f.csv", "dilatation.svg"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}

#[test]
fn certificates_are_reproducible() {
    let body = |threads: &str| -> (Value, String) {
        let dir = tempfile::tempdir().unwrap();
        let out = Command::new(BIN)
            .args([
                "slice-test",
                "--spec",
                &fixture("convex_shear_biharmonic.json"),
                "--radii",
                "0.3,0.6,0.9",
            ])
            .args(["--grid", "16x64", "--out", dir.path().to_str().unwrap()])
            .env_remove("POLYHARM_CONFIG")
            .env_remove("SOURCE_DATE_EPOCH")
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        let text = std::fs::read_to_string(dir.path().join("slice-test.json")).unwrap();
        let mut json: Value = serde_json::from_str(&text).unwrap();
        json.as_object_mut().unwrap().remove("timestamp");
        (json, text)
    };
    let (a, _) = body("1");
    let (b, _) = body("4");
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    assert!(a["input_digest"].as_str().unwrap().starts_with("sha256:"));

    let pinned = || {
        stdout(&[
            "certify-ctc",
            "--spec",
            &fixture("identity.json"),
            "--grid",
            "8x32",
            "--radii",
            "0.5",
            "--json",
        ])
    };
    assert_eq!(pinned(), pinned());
    assert!(pinned().contains("2023-11-14T22:13:20Z"));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("polyharm.toml");
    std::fs::write(&cfg, "[grid]\nradial = 2\nangular = 2\n").unwrap();
    let run = |extra: &[&str]| {
        Command::new(BIN)
            .args([
                "slice-test",
                "--spec",
                &fixture("convex_shear_biharmonic.json"),
                "--radii",
                "0.5,0.9",
            ])
            .args(extra)
            .env("POLYHARM_CONFIG", &cfg)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run(&[]), Some(5));
    assert_eq!(run(&["--grid", "32x128"]), Some(0));

    std::fs::write(&cfg, "grid = 3").unwrap();
    assert_eq!(run(&[]), Some(2));
}

fn parse_csv(text: &str) -> Vec<(String, f64, f64)> {
    text.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (
                f[0].to_string(),
                f[2].parse().unwrap(),
                f[3].parse().unwrap(),
            )
        })
        .collect()
}

fn transform(svg: &str) -> (f64, f64, f64) {
    let line = svg
        .lines()
        .find(|l| l.starts_with("<!-- transform:"))
        .unwrap();
    let nums: Vec<f64> = line
        .split(|c: char| !(c.is_ascii_digit() || c == '.' || c == '-' || c == 'e'))
        .filter_map(|t| t.parse().ok())
        .collect();
    // X = s*re + dx; Y = -s*im + dy
    (nums[0], nums[1], nums[3])
}

fn render(spec: &str, dir: &Path) {
    let out = polyharm(&[
        "render",
        "--spec",
        spec,
        "--out",
        dir.to_str().unwrap(),
        "--circles",
        "4",
        "--rays",
        "6",
        "--samples",
        "64",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn svg_polylines_mirror_csv() {
    let dir = tempfile::tempdir().unwrap();
    render(&fixture("convex_shear_biharmonic.json"), dir.path());
    for stem in ["f1_sum", "f", "dilatation"] {
        let csv =
            parse_csv(&std::fs::read_to_string(dir.path().join(format!("{stem}.csv"))).unwrap());
        let svg = std::fs::read_to_string(dir.path().join(format!("{stem}.svg"))).unwrap();
        let (s, dx, dy) = transform(&svg);
        let mut vertices = Vec::new();
        for line in svg.lines().filter(|l| l.starts_with("<polyline")) {
            let id = line
                .split("id=\"")
                .nth(1)
                .unwrap()
                .split('"')
                .next()
                .unwrap();
            let pts = line
                .split("points=\"")
                .nth(1)
                .unwrap()
                .split('"')
                .next()
                .unwrap();
            for p in pts.split(' ') {
                let (x, y) = p.split_once(',').unwrap();
                vertices.push((
                    id.to_string(),
                    x.parse::<f64>().unwrap(),
                    y.parse::<f64>().unwrap(),
                ));
            }
        }
        assert_eq!(vertices.len(), csv.len());
        for ((id, re, im), (vid, x, y)) in csv.iter().zip(&vertices) {
            assert_eq!(id, vid);
            assert!((s * re + dx - x).abs() < 1e-9 && (-s * im + dy - y).abs() < 1e-9);
        }
    }
}

#[test]
fn identity_render_and_analytic_dilatation() {
    let dir = tempfile::tempdir().unwrap();
    render(&fixture("identity.json"), dir.path());
    let rows = parse_csv(&std::fs::read_to_string(dir.path().join("f.csv")).unwrap());
    for (id, re, im) in &rows {
        if let Some(k) = id.strip_prefix("circle") {
            let r = 0.995 * k.parse::<f64>().unwrap() / 4.0;
            assert!((re.hypot(*im) - r).abs() < 1e-13);
        }
    }
    let dil = parse_csv(&std::fs::read_to_string(dir.path().join("dilatation.csv")).unwrap());
    assert!(dil.iter().all(|(_, re, im)| *re == 0.0 && *im == 0.0));
}

#[test]
fn render_is_byte_identical_across_runs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    render(&fixture("convex_shear_biharmonic.json"), a.path());
    render(&fixture("convex_shear_biharmonic.json"), b.path());
    for f in ["f1_sum.csv", "f.svg", "dilatation.csv", "render.json"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn unwritable_output_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain");
    std::fs::write(&file, "x").unwrap();
    let target = file.join("sub");
    assert_eq!(
        code(&[
            "render",
            "--spec",
            &fixture("identity.json"),
            "--out",
            target.to_str().unwrap()
        ]),
        4
    );
}
