use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn laminar(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laminar"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("run laminar")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

const PORTRAIT: &str = "degree=3\n[1/9,1/9,4/9,4/9]\n[0,0,2/3,2/3]\n";

#[test]
fn check_rejects_a_diameter_in_degree_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("d.txt"), "degree=2 depth=1\n0-1/2\n").unwrap();
    let o = laminar(dir.path(), &["check", "d.txt"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("Pullback 0-1/2"));
}

#[test]
fn pullback_output_checks_clean() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p.txt"), PORTRAIT).unwrap();
    let o = laminar(
        dir.path(),
        &["pullback", "p.txt", "--depth", "4", "--out", "l.txt"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&laminar(dir.path(), &["check", "l.txt"])), 0);
}

#[test]
fn tags_on_two_copies_reports_one_equal_pair() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p.txt"), PORTRAIT).unwrap();
    laminar(
        dir.path(),
        &["pullback", "p.txt", "--depth", "3", "--out", "l.txt"],
    );
    let line = "l.txt c1=1/9,4/9 c2=0,2/3\n";
    fs::write(dir.path().join("family.txt"), line.repeat(2)).unwrap();
    let o = laminar(dir.path(), &["tags", "family.txt", "--out", "tags"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report = fs::read_to_string(dir.path().join("tags/report.txt")).unwrap();
    assert!(
        report.starts_with("# disjoint=0 equal=1 overlap=0"),
        "{report}"
    );
    assert!(report.contains("pair 0 1: equal"));
    assert!(dir.path().join("tags/tag_001.txt").exists());
}

#[test]
fn malformed_input_exits_two_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.txt"), "degree=3\n[1/9,1/9,4/9]\n").unwrap();
    let o = laminar(dir.path(), &["pullback", "bad.txt"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    fs::write(
        dir.path().join("lam.txt"),
        "degree=2 depth=1\n0-1/2\nnot a chord\n",
    )
    .unwrap();
    let o = laminar(dir.path(), &["check", "lam.txt"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    assert_eq!(code(&laminar(dir.path(), &["check", "missing.txt"])), 2);
    assert_eq!(code(&laminar(dir.path(), &["frobnicate"])), 2);
}

#[test]
fn family_line_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("family.txt"), "l.txt c1=1/9,4/9\n").unwrap();
    let o = laminar(dir.path(), &["tags", "family.txt", "--out", "t"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn render_is_deterministic_with_one_path_per_leaf() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p.txt"), PORTRAIT).unwrap();
    laminar(
        dir.path(),
        &["pullback", "p.txt", "--depth", "3", "--out", "l.txt"],
    );
    let leaves = fs::read_to_string(dir.path().join("l.txt"))
        .unwrap()
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .count();
    for style in ["straight", "hyperbolic"] {
        let a = laminar(
            dir.path(),
            &["render", "l.txt", "--style", style, "--size", "300"],
        );
        let b = laminar(
            dir.path(),
            &["render", "l.txt", "--style", style, "--size", "300"],
        );
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout);
        let svg = String::from_utf8(a.stdout).unwrap();
        assert_eq!(svg.matches("<path ").count(), leaves);
        assert_eq!(svg.matches("<circle ").count(), 1);
    }
}

#[test]
fn enumerate_then_tags_then_render_tag() {
    let dir = tempfile::tempdir().unwrap();
    let o = laminar(
        dir.path(),
        &[
            "enumerate",
            "--count",
            "4",
            "--depth",
            "5",
            "--seed",
            "3",
            "--out",
            "corpus",
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let family = fs::read_to_string(dir.path().join("corpus/family.txt")).unwrap();
    assert_eq!(family.lines().count(), 4);
    assert_eq!(
        code(&laminar(dir.path(), &["check", "corpus/lam_000.txt"])),
        0
    );
    let o = laminar(dir.path(), &["tags", "corpus/family.txt", "--out", "tags"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = laminar(
        dir.path(),
        &[
            "render-tag",
            "tags/tag_000.txt",
            "tags/tag_001.txt",
            "--out",
            "t.svg",
        ],
    );
    assert_eq!(code(&o), 0);
    let svg = fs::read_to_string(dir.path().join("t.svg")).unwrap();
    assert_eq!(svg.matches("<g>").count(), 2);
    assert_eq!(
        code(&laminar(
            dir.path(),
            &["enumerate", "--degree", "4", "--out", "x"]
        )),
        2
    );
}

#[test]
fn qml_dump_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let o = laminar(dir.path(), &["qml", "--max-period", "5", "--out", "q.txt"]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(dir.path().join("q.txt")).unwrap();
    assert!(text.starts_with("degree=2 depth=0\n"));
    // 1 + 3 + 6 + 15 minors of periods 2..=5
    assert_eq!(text.lines().count(), 1 + 25);
}
