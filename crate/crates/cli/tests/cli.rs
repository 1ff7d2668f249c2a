use genus_pls::corpus;
use genus_pls::embedding::EmbeddingScheme;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> PathBuf {
    fixtures().join(name)
}

fn named() -> Vec<(&'static str, EmbeddingScheme)> {
    vec![
        ("k4-torus.emb", corpus::k4_torus()),
        ("k5-torus.emb", corpus::k5_torus()),
        ("k33-torus.emb", corpus::k33_torus()),
        ("k7-torus.emb", corpus::k7_torus()),
        ("double-torus.emb", corpus::double_torus()),
        ("k6-projective.emb", corpus::k6_projective()),
        ("klein-bottle.emb", corpus::klein_bottle()),
    ]
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genus-pls")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Set GENUS_PLS_BLESS=1 to rewrite the fixture files from the corpus.
#[test]
fn fixture_files_match_the_corpus() {
    for (file, scheme) in named() {
        let want = genus_pls::format_scheme(&scheme);
        if std::env::var_os("GENUS_PLS_BLESS").is_some() {
            std::fs::write(fixture(file), &want).unwrap();
        }
        let have = std::fs::read_to_string(fixture(file)).unwrap();
        assert_eq!(genus_pls::parse_scheme(&have).unwrap(), scheme, "{file}");
    }
}

#[test]
fn genus_of_the_k4_torus() {
    let out = stdout(&["genus", path(&fixture("k4-torus.emb"))]);
    assert!(out.contains("orientable, genus 1, faces 2"), "{out}");
    let out = stdout(&["genus", path(&fixture("k4-planar.emb"))]);
    assert!(out.contains("orientable, genus 0, faces 4"), "{out}");
    let out = stdout(&["genus", path(&fixture("k6-projective.emb"))]);
    assert!(out.contains("non-orientable, demigenus 1"), "{out}");
}

#[test]
fn unfold_stage_counts() {
    for (file, stages) in [("k5-torus.emb", 2), ("double-torus.emb", 5), ("k4-planar.emb", 0)] {
        let out = stdout(&["unfold", path(&fixture(file))]);
        assert!(out.contains(&format!("stages {stages}\n")), "{file}: {out}");
    }
}

#[test]
fn certify_accepts_and_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let (certs, verdicts) = (dir.path().join("certs.txt"), dir.path().join("verdicts.txt"));
    let out = stdout(&[
        "certify",
        path(&fixture("k5-torus.emb")),
        "--auto",
        "--certs",
        path(&certs),
        "--verdicts",
        path(&verdicts),
    ]);
    assert!(out.contains("distributed accept") && out.contains("central accept"), "{out}");
    let verdicts = std::fs::read_to_string(verdicts).unwrap();
    assert!(verdicts.ends_with("accepted by all 5 vertices\n"), "{verdicts}");
    let certs = std::fs::read_to_string(certs).unwrap();
    assert_eq!(certs.lines().filter(|l| l.starts_with("vertex ")).count(), 5);
    assert!(!certs.contains("undecodable"));
}

#[test]
fn exit_codes() {
    let k5 = fixture("k5-torus.emb");
    assert_eq!(run(&["certify", path(&k5), "--k", "0"]).status.code(), Some(1));
    assert_eq!(run(&["certify", path(&fixture("k6-projective.emb")), "--k", "5"]).status.code(), Some(1));
    assert_eq!(
        run(&["certify", path(&fixture("k6-projective.emb")), "--k", "1", "--nonorientable"]).status.code(),
        Some(0)
    );
    assert_eq!(run(&["genus", "/nonexistent/file.emb"]).status.code(), Some(2));
    assert_eq!(run(&["certify", path(&k5), "--k", "1", "--auto"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.emb");
    std::fs::write(&bad, "v 1 : 2 3\nv 2 : 1\nv 3 : 2\n").unwrap();
    let out = run(&["genus", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn fuzz_is_deterministic_and_catches_everything() {
    let dir = tempfile::tempdir().unwrap();
    let k5 = fixture("k5-torus.emb");
    let mut reports = Vec::new();
    for name in ["a.txt", "b.txt"] {
        let out = dir.path().join(name);
        stdout(&["fuzz", path(&k5), "--count", "200", "--seed", "7", "--out", path(&out)]);
        reports.push(std::fs::read(out).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    let text = String::from_utf8(reports.remove(0)).unwrap();
    assert!(text.contains("rejected 200/200"), "{text}");
    assert!(text.contains("klein-attack rejected"), "{text}");
    assert!(text.contains("disagreements 0"), "{text}");

    let empty = stdout(&["fuzz", path(&k5), "--count", "0"]);
    assert!(empty.contains("mutants 0"), "{empty}");
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("double-torus.emb");
    let mut runs = Vec::new();
    for i in 0..2 {
        let files: Vec<PathBuf> =
            ["report", "certs", "verdicts", "trace"].iter().map(|f| dir.path().join(format!("{f}{i}"))).collect();
        stdout(&[
            "certify",
            path(&input),
            "--out",
            path(&files[0]),
            "--certs",
            path(&files[1]),
            "--verdicts",
            path(&files[2]),
        ]);
        stdout(&["unfold", path(&input), "--trace", path(&files[3])]);
        runs.push(files.iter().map(|f| std::fs::read(f).unwrap()).collect::<Vec<_>>());
    }
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn generated_graphs_sit_on_the_requested_surface() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.emb");
    stdout(&["gen", "--n", "40", "--genus", "2", "--seed", "3", "--out", path(&file)]);
    let again = stdout(&["gen", "--n", "40", "--genus", "2", "--seed", "3"]);
    assert_eq!(std::fs::read_to_string(&file).unwrap(), again);
    assert!(stdout(&["genus", path(&file)]).contains("orientable, genus 2"));
    stdout(&["gen", "--n", "30", "--genus", "3", "--seed", "1", "--nonorientable", "--out", path(&file)]);
    assert!(stdout(&["genus", path(&file)]).contains("non-orientable, demigenus 3"));
    assert!(stdout(&["certify", path(&file)]).contains("distributed accept"));
}
