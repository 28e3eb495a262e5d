use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use fracrobin::cli::{exit, main_with_args};

const SINGLE_MODE: &str = r#"
[problem]
alpha = 0.5
lambda = [1.0, 2.0]
u0 = "mode:1,1"

[solver]
modes = 16
steps = 32
nodes = [33]
"#;

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(cmd: &str, config: &Path, out: &Path) -> u8 {
    main_with_args(["fracrobin", cmd, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()])
}

/// Runs the binary and returns (exit code, stderr).
fn run_bin(cmd: &str, config: &Path, out: &Path) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_fracrobin"))
        .args([cmd, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    (o.status.code().unwrap(), String::from_utf8_lossy(&o.stderr).into_owned())
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", SINGLE_MODE);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for cmd in ["eigen", "solve", "oracle", "verify"] {
        assert_eq!(run(cmd, &cfg, &a), exit::PASS, "{cmd}");
        assert_eq!(run(cmd, &cfg, &b), exit::PASS, "{cmd}");
    }
    for name in ["eigen.csv", "field.csv", "residual.csv", "oracle.csv", "compare.csv", "verdict.csv"] {
        let (x, y) = (fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap());
        assert!(!x.is_empty());
        assert_eq!(x, y, "{name}");
    }
}

#[test]
fn cache_hit_reproduces_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", SINGLE_MODE);
    let out = dir.path().join("o");
    assert_eq!(run("solve", &cfg, &out), exit::PASS);
    let first = fs::read(out.join("field.csv")).unwrap();
    assert!(fs::read_dir(out.join("eigen-cache")).unwrap().count() > 0);
    assert_eq!(run("solve", &cfg, &out), exit::PASS);
    assert_eq!(first, fs::read(out.join("field.csv")).unwrap());
}

#[test]
fn csv_headers_record_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", SINGLE_MODE);
    let out = dir.path().join("o");
    assert_eq!(
        main_with_args([
            "fracrobin",
            "eigen",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--seed",
            "9"
        ]),
        exit::PASS
    );
    let text = fs::read_to_string(out.join("eigen.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# fracrobin-eigen v1");
    assert!(lines[1].starts_with("# version="));
    assert!(lines[2].starts_with("# config_sha256=") && lines[2].len() == "# config_sha256=".len() + 64);
    assert_eq!(lines[3], "# seed=9");
    assert_eq!(lines[4], "# command=eigen");
    assert!(text.contains("\nn,mu\n1,"));
}

#[test]
fn zero_robin_coefficient_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", &SINGLE_MODE.replace("[1.0, 2.0]", "[0.0, 2.0]"));
    let (code, err) = run_bin("eigen", &cfg, &dir.path().join("o"));
    assert_eq!(code, i32::from(exit::ERROR));
    assert!(err.contains("positive"), "{err}");
}

#[test]
fn incompatible_data_are_rejected_unless_waived() {
    let dir = tempfile::tempdir().unwrap();
    let text = SINGLE_MODE.replace("u0 = \"mode:1,1\"", "u0 = \"const:1\"");
    let cfg = write_config(dir.path(), "c.toml", &text);
    let (code, err) = run_bin("solve", &cfg, &dir.path().join("o"));
    assert_eq!(code, i32::from(exit::ERROR));
    assert!(err.contains("compatib"), "{err}");
    let waived = text.replace("u0 = \"const:1\"", "u0 = \"const:1\"\nenforce_compatibility = false");
    let cfg = write_config(dir.path(), "w.toml", &waived);
    assert_eq!(run("solve", &cfg, &dir.path().join("w")), exit::PASS);
}

#[test]
fn unknown_keys_and_values_are_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let cfg = write_config(dir.path(), "a.toml", &format!("{SINGLE_MODE}\n[extra]\nx = 1\n"));
    assert_eq!(run("eigen", &cfg, &out), exit::ERROR);
    let cfg = write_config(dir.path(), "b.toml", &SINGLE_MODE.replace("mode:1,1", "wobble:3"));
    assert_eq!(run("solve", &cfg, &out), exit::ERROR);
    let cfg = write_config(dir.path(), "c.toml", &SINGLE_MODE.replace("alpha = 0.5", "alpha = 1.5"));
    assert_eq!(run("solve", &cfg, &out), exit::ERROR);
    assert_eq!(run("solve", &dir.path().join("missing.toml"), &out), exit::ERROR);
    assert_eq!(main_with_args(["fracrobin", "bogus"]), exit::ERROR);
}

#[test]
fn verify_with_negative_data_has_nothing_applicable() {
    let dir = tempfile::tempdir().unwrap();
    let text = SINGLE_MODE.replace("mode:1,1", "bump:0.5,0.2,-1")
        + "\n[checks]\nselect = [\"weak_max\", \"strong_positivity\"]\n";
    let cfg = write_config(dir.path(), "c.toml", &text);
    let out = dir.path().join("o");
    assert_eq!(run("verify", &cfg, &out), exit::NOTHING_APPLICABLE);
    let v = fs::read_to_string(out.join("verdict.csv")).unwrap();
    assert!(v.contains("\nweak_max,inapplicable,0"), "{v}");
}

#[test]
fn verify_single_mode_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", SINGLE_MODE);
    let out = dir.path().join("o");
    assert_eq!(run("verify", &cfg, &out), exit::PASS);
    let v = fs::read_to_string(out.join("verdict.csv")).unwrap();
    for check in ["weak_max,true", "strong_positivity,true", "hopf_min,true", "extremum_caputo,true"] {
        assert!(v.contains(check), "{check} in {v}");
    }
}

#[test]
fn converge_needs_three_levels() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let two = format!("{SINGLE_MODE}\n[converge]\nladder = \"fd_time\"\nlevels = [16, 32]\nreference = 128\n");
    assert_eq!(run("converge", &write_config(dir.path(), "a.toml", &two), &out), exit::ERROR);
    let three = two.replace("[16, 32]", "[16, 32, 64]");
    assert_eq!(run("converge", &write_config(dir.path(), "b.toml", &three), &out), exit::PASS);
    let text = fs::read_to_string(out.join("converge.csv")).unwrap();
    assert!(text.contains("# fitted_order="));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 4);
}

#[test]
fn stationary_problem_has_small_residual() {
    // u ≡ 1 with b = λ is an exact steady state
    let dir = tempfile::tempdir().unwrap();
    let text = SINGLE_MODE.replace("u0 = \"mode:1,1\"", "u0 = \"const:1\"\nb_left = \"const:1\"\nb_right = \"const:2\"");
    let cfg = write_config(dir.path(), "c.toml", &text);
    let out = dir.path().join("o");
    assert_eq!(run("solve", &cfg, &out), exit::PASS);
    let text = fs::read_to_string(out.join("residual.csv")).unwrap();
    let row = text.lines().last().unwrap();
    for v in row.split(',') {
        let v: f64 = v.parse().unwrap();
        assert!(v <= 1e-8, "{row}");
    }
}

#[test]
fn shipped_configs_run() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let dir = tempfile::tempdir().unwrap();
    let mut seen = 0;
    for entry in fs::read_dir(&root).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().and_then(|e| e.to_str()) != Some("toml") {
            continue;
        }
        seen += 1;
        let text = fs::read_to_string(&p).unwrap();
        let cmd = if text.contains("[converge]") { "converge" } else { "verify" };
        let out = dir.path().join(p.file_stem().unwrap());
        let code = run(cmd, &p, &out);
        assert!(code == exit::PASS, "{}: exit {code}", p.display());
    }
    assert!(seen >= 2);
}
