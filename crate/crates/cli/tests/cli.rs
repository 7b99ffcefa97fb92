use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invburgers"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn lattice_table_has_header_and_all_sites() {
    let text = stdout(&[
        "lattice", "--a", "1", "--b", "1", "--y0", "0", "--n", "3", "--m", "3",
    ]);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "n m x y");
    assert_eq!(lines.len(), 10);
    assert!(lines.contains(&"2 1 2.0000000000000000e0 1.0000000000000000e0"));
}

#[test]
fn schwarz_report_distinguishes_lattices() {
    assert!(stdout(&["check-schwarz"]).contains("is_schwarzian=true"));
    let exp = stdout(&["check-schwarz", "--lattice", "exponential"]);
    assert!(exp.contains("is_schwarzian=false"));
    assert!(exp.contains("max_sy_violation=0.0000000000000000e0"));
}

#[test]
fn evolve_then_chi_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let field = dir.path().join("u.txt");
    let text = stdout(&[
        "evolve",
        "--solution",
        "affine",
        "--march",
        "space",
        "--output",
        path(&field),
    ]);
    assert!(text.is_empty());
    let written = std::fs::read_to_string(&field).unwrap();
    assert!(written.starts_with("n m u\n"));
    let residual: f64 = written
        .lines()
        .last()
        .unwrap()
        .strip_prefix("max_residual=")
        .unwrap()
        .parse()
        .unwrap();
    assert!(residual <= 1e-12);

    let table: String = written
        .lines()
        .filter(|l| !l.starts_with("max_"))
        .map(|l| format!("{l}\n"))
        .collect();
    std::fs::write(&field, table).unwrap();
    let line = stdout(&["chi", "--field", path(&field), "--solution", "affine"]);
    let chi: f64 = line
        .split_whitespace()
        .next()
        .unwrap()
        .strip_prefix("chi=")
        .unwrap()
        .parse()
        .unwrap();
    assert!(chi <= 1e-12, "{line}");
    assert!(line.trim_end().ends_with("sites=64 excluded=0"));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# exponential case\nlattice = exponential\na=0.1\nc=0.15\nn=4\nm=4\n",
    )
    .unwrap();
    let exp = stdout(&["check-schwarz", "--config", path(&cfg)]);
    assert!(exp.contains("is_schwarzian=false"));
    let lat = stdout(&["lattice", "--config", path(&cfg)]);
    assert_eq!(lat.lines().count(), 17);
    let orth = stdout(&[
        "check-schwarz",
        "--config",
        path(&cfg),
        "--lattice",
        "orthogonal",
    ]);
    assert!(orth.contains("is_schwarzian=true"));
}

#[test]
fn invariants_table_names_every_column() {
    let text = stdout(&["invariants", "--n", "4", "--m", "4", "--solution", "f2"]);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n m K1 K2 K3 K4 K5 K6 K7 K8 K9 K10 I1"
    );
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.split_whitespace().count() == 13));
}

#[test]
fn table2_reports_ten_rows_and_orderings() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&["table2", "--output", path(dir.path())]);
    let rows = text.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 11);
    assert!(text.contains("c=0.1 beats c=0.15 at a=0.1 for f1 and f2: true"));
    assert!(text.contains("interpreted"));
    assert!(dir.path().join("case4_f2_field.txt").exists());
    assert!(dir.path().join("case1_f1_lattice.txt").exists());
    // identical runs give identical files
    let first = std::fs::read(dir.path().join("case2_f1_field.txt")).unwrap();
    stdout(&["table2", "--output", path(dir.path())]);
    assert_eq!(
        first,
        std::fs::read(dir.path().join("case2_f1_field.txt")).unwrap()
    );
}

#[test]
fn flow_test_and_commutator() {
    let text = stdout(&[
        "flow-test",
        "--generator",
        "V5",
        "--epsilon",
        "-0.5",
        "--bracket",
        "V4",
    ]);
    let change: f64 = text
        .split_whitespace()
        .find_map(|t| t.strip_prefix("max_change="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(change <= 1e-9);
    let rel: f64 = text
        .split_whitespace()
        .find_map(|t| t.strip_prefix("rel_error="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(rel <= 1e-2);
}

#[test]
fn errors_exit_nonzero_with_one_line() {
    for args in [
        &["evolve", "--solution", "f2", "--y0", "0"][..],
        &["lattice", "--m", "2"],
        &["evolve", "--lattice", "exponential", "--steps", "9"],
        &["chi", "--field", "/nonexistent/field.txt"],
        &["flow-test", "--generator", "V6", "--bracket", "V1"],
    ] {
        let out = run(args);
        assert!(!out.status.success(), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.starts_with("error: "), "{args:?}: {err}");
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
}
