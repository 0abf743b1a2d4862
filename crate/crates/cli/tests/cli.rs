use std::path::Path;
use std::process::{Command, Output};

fn ness_lab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ness-lab"))
        .args(args)
        .current_dir(dir)
        .env_remove("NESS_LAB_OUT")
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    std::fs::write(dir.join(name), text).unwrap();
    name.to_string()
}

const SMALL: &str = "\
output = out

[experiment]
name = mc
kind = mclennan-vs-exact
model = random:n=3,seed=1
eps_grid = 0.1, 0.05

[experiment]
name = fs
kind = fluctuation-symmetry
model = random:n=3,seed=1
epsilon = 0.05
T_grid = 1
n_samples = 2000
seed = 4
";

#[test]
fn run_writes_annotated_tables_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.cfg", SMALL);
    let out = ness_lab(&["run", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("[PASS] mc (mclennan-vs-exact)"));
    let table = std::fs::read_to_string(dir.path().join("out/mc.csv")).unwrap();
    assert!(table.starts_with("# experiment: mc (mclennan-vs-exact)\n# identity: "));
    assert!(table.contains("# result: PASS"));
    assert!(table.contains("\nepsilon,state,exact,mclennan,log_error\n"));
    assert_eq!(table.lines().filter(|l| !l.starts_with('#')).count(), 1 + 2 * 3);
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.cfg", SMALL);
    assert_eq!(ness_lab(&["--threads", "1", "run", &cfg, "--out", "a"], dir.path()).status.code(), Some(0));
    assert_eq!(ness_lab(&["--threads", "3", "run", &cfg, "--out", "b"], dir.path()).status.code(), Some(0));
    for f in ["mc.csv", "fs.csv"] {
        let a = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f} differs");
    }
}

#[test]
fn failed_contract_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = "[experiment]\nkind = limit-exchange\nmodel = random:n=4,seed=3\neps_grid = 0.01\nT_grid = 1/gap\ntolerance = 1e-12\n";
    let cfg = write(dir.path(), "strict.cfg", text);
    let out = ness_lab(&["run", &cfg, "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let table = std::fs::read_to_string(dir.path().join("o/limit-exchange-1.csv")).unwrap();
    assert!(table.contains("# result: FAIL"));
}

#[test]
fn config_errors_have_distinct_exit_codes_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("malformed.cfg", "[experiment]\nkind = mclennan-vs-exact\nmodel = ring\neps_grid = 0.1, 0.05\nthis line is wrong\n", 2),
        ("preset.cfg", "[experiment]\nkind = mclennan-vs-exact\nmodel = torus:n=3\neps_grid = 0.1, 0.05\n", 3),
        ("grid.cfg", "[experiment]\nkind = mclennan-vs-exact\nmodel = ring\neps_grid = 0.1, -0.05\n", 4),
        ("size.cfg", "[experiment]\nkind = los-identity\nmodel = latgas:N=12\n", 5),
    ];
    for (name, text, code) in cases {
        let cfg = write(dir.path(), name, text);
        let out = ness_lab(&["run", &cfg, "--out", "never"], dir.path());
        assert_eq!(out.status.code(), Some(code), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
        assert_eq!(ness_lab(&["validate", &cfg], dir.path()).status.code(), Some(code));
    }
    assert!(!dir.path().join("never").exists());
    assert_eq!(ness_lab(&["run", "missing.cfg"], dir.path()).status.code(), Some(6));
}

#[test]
fn validate_reports_every_problem() {
    let dir = tempfile::tempdir().unwrap();
    let text = "[experiment]\nkind = limit-exchange\nmodel = ring\neps_grid =\nT_grid = 1\n[experiment]\nkind = los-identity\nmodel = latgas:N=12\n";
    let cfg = write(dir.path(), "bad.cfg", text);
    let out = ness_lab(&["validate", &cfg], dir.path());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("eps_grid must be nonempty"), "{stderr}");
    assert!(stderr.contains("lattice-gas N 12 exceeds the limit 10"), "{stderr}");
    let ok = write(dir.path(), "ok.cfg", SMALL);
    let out = ness_lab(&["validate", &ok], dir.path());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn output_directory_falls_back_to_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "env.cfg", "[experiment]\nkind = los-identity\nmodel = latgas:N=2\n");
    let out = Command::new(env!("CARGO_BIN_EXE_ness-lab"))
        .args(["run", &cfg])
        .current_dir(dir.path())
        .env("NESS_LAB_OUT", "from-env")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("from-env/los-identity-1.csv").exists());
}

#[test]
fn model_files_and_edge_fields_are_read() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "tri.model",
        "beta = 1\npotential = 0, 0.5, -0.2\ngamma = 0,1,1; 1,0,0.5; 1,0.5,0\ndriving = 0,1,-1; -1,0,1; 1,-1,0\nlabels = a, b, c\n",
    );
    write(dir.path(), "g.edges", "from,to,value\n0,1,0.3\n1,2,-0.7\n");
    let text = "[experiment]\nkind = green-kubo\nmodel = file:tri.model\nF1 = model\nG1 = file:g.edges\nn_samples = 4000\nseed = 2\n";
    let cfg = write(dir.path(), "file.cfg", text);
    let out = ness_lab(&["run", &cfg, "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let table = std::fs::read_to_string(dir.path().join("o/green-kubo-1.csv")).unwrap();
    assert!(table.contains("pairing_gf,pairing_fg,gk_estimate"));
}

#[test]
fn presets_are_listed() {
    let out = ness_lab(&["presets"], Path::new("."));
    let stdout = String::from_utf8(out.stdout).unwrap();
    for p in ["ring:", "random:", "latgas:", "rlc:", "file:", "transient-excess"] {
        assert!(stdout.contains(p));
    }
}
