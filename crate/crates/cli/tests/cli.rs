//! End-to-end tests of the binary: golden-file comparisons for the
//! machine-readable reports, exit-code checks, and output stability.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gentle"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(name),
    )
    .unwrap()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn golden_validate() {
    let f = fixture("running.lg");
    assert_eq!(
        stdout(&["--json", "validate", f.to_str().unwrap()]),
        golden("validate_running.json")
    );
}

#[test]
fn golden_excise() {
    let f = fixture("running.lg");
    assert_eq!(
        stdout(&["--json", "excise", f.to_str().unwrap()]),
        golden("excise_running.json")
    );
}

#[test]
fn golden_surface() {
    let f = fixture("running.lg");
    assert_eq!(
        stdout(&["--json", "surface", f.to_str().unwrap()]),
        golden("surface_running.json")
    );
}

#[test]
fn golden_pi() {
    let f = fixture("running.lg");
    assert_eq!(
        stdout(&["--json", "pi", "--word", "nu,zeta^-1", f.to_str().unwrap()]),
        golden("pi_nu_zeta.json")
    );
}

#[test]
fn golden_nodal() {
    let f = fixture("ex24z1.lg");
    assert_eq!(
        stdout(&["--json", "nodal", f.to_str().unwrap()]),
        golden("nodal_ex24z1.json")
    );
}

#[test]
fn golden_dot() {
    let f = fixture("ex24z1.lg");
    assert_eq!(
        stdout(&["dot", f.to_str().unwrap()]),
        golden("dot_ex24z1.dot")
    );
}

#[test]
fn golden_module_band() {
    let f = fixture("running_f4.lg");
    let m = fixture("band_x.mat");
    assert_eq!(
        stdout(&[
            "--json",
            "module",
            "--word",
            "band:nu,beta,alpha",
            "--band-matrix",
            m.to_str().unwrap(),
            f.to_str().unwrap()
        ]),
        golden("module_band.json")
    );
}

#[test]
fn golden_split() {
    let f = fixture("running.lg");
    assert_eq!(
        stdout(&["--json", "split", f.to_str().unwrap()]),
        golden("split_running.json")
    );
}

#[test]
fn golden_tiling() {
    let f = fixture("running_f4.lg");
    assert_eq!(
        stdout(&["--json", "tiling", f.to_str().unwrap()]),
        golden("tiling_running_f4.json")
    );
}

#[test]
fn json_output_is_stable_across_runs() {
    let f = fixture("running.lg");
    for sub in ["validate", "excise", "surface", "split", "strings"] {
        let a = stdout(&["--json", sub, f.to_str().unwrap()]);
        let b = stdout(&["--json", sub, f.to_str().unwrap()]);
        assert_eq!(a, b, "unstable output for {sub}");
    }
}

#[test]
fn exit_codes() {
    // 1: validation failure.
    let out = run(&["validate", fixture("invalid.lg").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    // 2: parse error.
    let out = run(&["validate", fixture("band_x.mat").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // 2: unknown word letter.
    let out = run(&[
        "pi",
        "--word",
        "bogus",
        fixture("running.lg").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    // 3: nodal on a non-gentle pair.
    let out = run(&["nodal", fixture("running.lg").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    // 3: module without a field.
    let out = run(&[
        "module",
        "--word",
        "triv:1",
        fixture("running.lg").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    // 1: inadmissible word.
    let out = run(&[
        "pi",
        "--word",
        "beta,delta",
        fixture("running.lg").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn strings_and_bands_reports() {
    let f = fixture("ex24z1.lg");
    let text = stdout(&["strings", "--max-len", "2", f.to_str().unwrap()]);
    assert!(text.contains("10 canonical strings"));
    assert!(text.contains("triv:1"));
    let running = fixture("running.lg");
    let text = stdout(&["bands", "--max-period", "3", running.to_str().unwrap()]);
    assert!(text.contains("band:alpha,nu,beta"));
    let none = stdout(&["bands", "--max-period", "8", f.to_str().unwrap()]);
    assert!(none.contains("0 canonical bands"));
}

#[test]
fn tikz_output_contains_arcs() {
    let f = fixture("running_f4.lg");
    let text = stdout(&["tiling", "--tikz", f.to_str().unwrap()]);
    assert!(text.contains("\\begin{tikzpicture}"));
    assert!(text.contains("\\draw[blue]"));
    assert!(text.contains("\\sigma_{\\alpha}"));
}

#[test]
fn module_reports_simple_module() {
    let f = fixture("running_f4.lg");
    let text = stdout(&["module", "--word", "triv:2", f.to_str().unwrap()]);
    assert!(text.contains("total dimension 1"));
    assert!(text.contains("checks: pass"));
}

#[test]
fn reports_against_schema_shapes() {
    // Every JSON report must parse and carry its command tag.
    let running = fixture("running.lg");
    let f4 = fixture("running_f4.lg");
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["--json", "validate", running.to_str().unwrap()], "validate"),
        (vec!["--json", "classify", running.to_str().unwrap()], "classify"),
        (vec!["--json", "excise", running.to_str().unwrap()], "excise"),
        (vec!["--json", "surface", running.to_str().unwrap()], "surface"),
        (vec!["--json", "split", running.to_str().unwrap()], "split"),
        (vec!["--json", "strings", running.to_str().unwrap()], "strings"),
        (vec!["--json", "bands", running.to_str().unwrap()], "bands"),
        (
            vec![
                "--json",
                "pi",
                "--word",
                "nu,zeta^-1",
                running.to_str().unwrap(),
            ],
            "pi",
        ),
        (
            vec![
                "--json",
                "module",
                "--word",
                "triv:1",
                f4.to_str().unwrap(),
            ],
            "module",
        ),
        (vec!["--json", "tiling", f4.to_str().unwrap()], "tiling"),
        (vec!["--json", "dot", running.to_str().unwrap()], "dot"),
    ];
    for (args, tag) in cases {
        let text = stdout(&args);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["command"], tag, "wrong tag for {args:?}");
    }
}
