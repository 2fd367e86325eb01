use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn su22osc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_su22osc")).args(args).current_dir(dir).output().expect("binary runs")
}

fn report(dir: &Path, name: &str) -> Value {
    let text = std::fs::read_to_string(dir.join("reports").join(format!("{name}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn osc_algebra_passes_at_nmax_10() {
    let tmp = tempfile::tempdir().unwrap();
    let out = su22osc(&["verify-osc-algebra", "--nmax", "10", "--out", "."], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    for v in ["fundamental", "dual"] {
        let r = report(tmp.path(), &format!("osc-algebra-{v}"));
        assert_eq!(r["schema"], 1);
        assert_eq!(r["residual"], "exact-zero");
        assert_eq!(r["pass"], true);
    }
}

#[test]
fn usage_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(su22osc(&["spectrum", "--config", "missing.txt"], tmp.path()).status.code(), Some(2));
    assert_eq!(su22osc(&["spectrum", "--nmax", "4"], tmp.path()).status.code(), Some(2));
    assert_eq!(su22osc(&["spectrum", "--epsilon", "x/y"], tmp.path()).status.code(), Some(2));
    assert_eq!(su22osc(&["nonsense"], tmp.path()).status.code(), Some(2));
    std::fs::write(tmp.path().join("bad.txt"), "n_max = 8\ncolour = red\n").unwrap();
    assert_eq!(su22osc(&["spectrum", "--config", "bad.txt"], tmp.path()).status.code(), Some(2));
}

#[test]
fn parseval_reports_both_sums() {
    let tmp = tempfile::tempdir().unwrap();
    let out = su22osc(&["parseval", "--beta", "1", "--cutoff", "40", "--out", "."], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    let r = report(tmp.path(), "parseval");
    assert_eq!(r["pass"], false);
    assert!(r["parameters"]["max_weighted_deviation"].as_f64().unwrap() <= 1e-8);
    let csv = std::fs::read_to_string(tmp.path().join("tables/parseval.csv")).unwrap();
    assert_eq!(csv.lines().count(), 17);
}

#[test]
fn config_file_and_overrides() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("run.txt"), "# small run\nn_max = 6\nkappa = 0,1\nkappa_prime = 1\nepsilon = 1/2\nout = res\n").unwrap();
    let out = su22osc(&["massive-field", "--config", "run.txt", "--threads", "1"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(&tmp.path().join("res"), "massive-field");
    assert_eq!(r["parameters"]["mass"], "1");
    let csv = std::fs::read_to_string(tmp.path().join("res/tables/massive_classes.csv")).unwrap();
    assert_eq!(csv, "kappa,kappa_prime,d,j1,j2,s\n0,1,5/2,0,1/2,1/2\n1,1,3,1/2,1/2,1\n");
}

#[test]
fn reports_are_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("runtime_ms");
        v
    };
    su22osc(&["spectrum", "--nmax", "8", "--out", "a"], tmp.path());
    su22osc(&["spectrum", "--nmax", "8", "--out", "b"], tmp.path());
    for name in ["s05-spectrum-fundamental", "s05-spectrum-dual"] {
        assert_eq!(strip(report(&tmp.path().join("a"), name)), strip(report(&tmp.path().join("b"), name)));
    }
    let classes = std::fs::read_to_string(tmp.path().join("a/tables/doubleton_classes.csv")).unwrap();
    assert!(classes.starts_with("kappa,d,j1,j2,class\n0,1,0,0,Massless5\n1,3/2,1/2,0,Massless5\n"));
}
