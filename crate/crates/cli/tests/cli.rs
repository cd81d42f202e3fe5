use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motivic"))
        .args(args)
        .current_dir(data(""))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(data("golden").join(name)).unwrap()
}

#[test]
fn golden_outputs() {
    let cases: &[(&[&str], &str)] = &[
        (&["zeta-snc", "line.json"], "zeta_snc_line.txt"),
        (&["zeta-point", "vertical.json"], "zeta_point_vertical.txt"),
        (
            &["zeta-resolve", "cusp.json", "--two-variable"],
            "zeta_resolve_cusp.txt",
        ),
        (
            &["total-volume", "canonical.json", "--q", "2"],
            "total_volume_canonical.txt",
        ),
        (
            &["--json", "zeta-snc", "vertical.json"],
            "zeta_snc_vertical.json",
        ),
    ];
    for (args, file) in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        assert_eq!(stdout(&o), golden(file), "{args:?}");
    }
}

#[test]
fn single_component_prints_the_geometric_closed_form() {
    let o = run(&["zeta-snc", "line.json"]);
    assert_eq!(
        stdout(&o).trim(),
        "([U] + ([P]*(L - 1)*L^-1 - [U]*L^-1)*T1) / ((1 - L^-1*T1))"
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["zeta-resolve", "cusp.json", "--two-variable"][..],
        &["--json", "zeta-point", "vertical.json"][..],
        &["check", "volume", "vertical.json"][..],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn checks_pass_on_fixtures() {
    for args in [
        &["check", "zeta-snc", "line.json", "--degree", "8"][..],
        &["check", "zeta-snc", "vertical.json"][..],
        &["check", "zeta-point", "vertical.json"][..],
        &["check", "zeta-resolve", "line.json"][..],
        &["check", "zeta-resolve", "cusp.json"][..],
        &["check", "volume", "line.json"][..],
        &[
            "check",
            "volume",
            "vertical.json",
            "--volume-exponent",
            "plain",
        ][..],
        &["check", "total-volume", "canonical.json", "--q", "2,3,5,7"][..],
    ] {
        let o = run(args);
        let out = stdout(&o);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {out}{}", stderr(&o));
        assert!(out.lines().all(|l| l.starts_with("PASS ")), "{out}");
    }
}

#[test]
fn malformed_input_exits_with_validation_code() {
    let dir = std::env::temp_dir().join(format!("motivic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cases = [
        ("missing.json", r#"{"d": 1, "r": 1}"#, "m"),
        (
            "unknown.json",
            r#"{"d": 1, "m": 1, "r": 1, "extra": 0}"#,
            "extra",
        ),
        (
            "index.json",
            r#"{"d": 1, "m": 1, "r": 1, "strata": [{"J": [0], "class": "P", "dim": 0}]}"#,
            "strata[0].J",
        ),
        (
            "dim.json",
            r#"{"d": 1, "m": 1, "r": 1, "strata": [{"J": [], "class": "U"}]}"#,
            "strata[0].dim",
        ),
    ];
    for (name, text, needle) in cases {
        let path = dir.join(name);
        std::fs::write(&path, text).unwrap();
        let o = run(&["zeta-snc", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{name}");
        assert!(stdout(&o).is_empty());
        assert!(stderr(&o).contains(needle), "{name}: {}", stderr(&o));
    }
    let o = run(&["zeta-snc", "no-such-file.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn divergence_exits_with_code_three() {
    let o = run(&["presburger", "gf", "l1 >= 0", "--phi", "0*l1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("infinite fiber"));
}

#[test]
fn presburger_commands() {
    let o = run(&[
        "presburger",
        "gf",
        "exists l2. l1 = 2*l2 + 1",
        "--phi",
        "l1",
    ]);
    assert_eq!(stdout(&o).trim(), "X1 / (1 - X1^2)");
    let o = run(&["presburger", "gf", "true", "--phi", "l1,l2", "--vars", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1 / ((1 - X1) * (1 - X2))");
    let o = run(&[
        "presburger",
        "check",
        "forall l3. (l3 >= l1 || l3 < l2)",
        "--box",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("PASS"));
    let o = run(&["presburger", "qe", "exists l2. (l1 = 2*l2 &&"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("column"));
}

#[test]
fn semialg_eval_reads_files() {
    let o = run(&[
        "semialg",
        "eval",
        "--condition",
        "condition.txt",
        "--point",
        "point.json",
        "--ell",
        "1,2",
        "--trunc",
        "16",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "TRUE");
    let o = run(&[
        "semialg",
        "eval",
        "--condition",
        "condition.txt",
        "--point",
        "point.json",
        "--trunc",
        "16",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_count_is_reported() {
    let o = run(&["volume", "vertical.json", "--q", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("at q = 3:"));
    let o = run(&["total-volume", "line.json"]);
    assert_eq!(o.status.code(), Some(2));
}
