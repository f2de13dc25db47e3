use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(sub: &str, config: Option<&str>, dir: &Path, extra: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_twoscale"));
    cmd.arg(sub).arg("--out-dir").arg(dir.join("out"));
    if let Some(text) = config {
        let p = dir.join("config.toml");
        std::fs::write(&p, text).unwrap();
        cmd.arg("--config").arg(p);
    }
    cmd.args(extra).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join("out").join(name)).unwrap()
}

fn payload(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).collect()
}

fn summary(dir: &Path) -> Value {
    serde_json::from_str(&read(dir, "summary.json")).unwrap()
}

const KG: &str = "schema_version = 1\n[potential]\nkind = \"kg\"\nalpha = 1.0\nv2 = 1.0\n";

#[test]
fn dispersion_writes_ny_rows_and_exits_zero() {
    let d = tempfile::tempdir().unwrap();
    let o = run("dispersion", Some(&format!("{KG}[dispersion]\nny = 37\n")), d.path(), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = read(d.path(), "dispersion.csv");
    let s = summary(d.path());
    let hash = s["config_sha256"].as_str().unwrap();
    let meta: Vec<&str> = csv.lines().take_while(|l| l.starts_with('#')).collect();
    assert_eq!(
        meta,
        ["# twoscale dispersion", "# schema_version: 1", &format!("# config_sha256: {hash}"), "# seed: 0"]
    );
    let rows = payload(&csv);
    assert_eq!(rows[0], "theta,omega,group_velocity");
    assert_eq!(rows.len(), 1 + 37);
    for r in &rows[1..] {
        let v: Vec<f64> = r.split(',').map(|x| x.parse().unwrap()).collect();
        let w = (1.0 + 2.0 * (1.0 - v[0].cos())).sqrt();
        assert!((v[1] - w).abs() < 1e-14);
        assert!((v[2] - v[0].sin() / w).abs() < 1e-14);
    }
    assert_eq!(s["passed"], Value::Bool(true));
}

#[test]
fn unstable_kg_chain_passes_schema_but_fails_at_runtime() {
    let d = tempfile::tempdir().unwrap();
    let cfg = "schema_version = 1\n[potential]\nkind = \"kg\"\nalpha = 1.0\nv2 = 0.0\ncheck_stability = true\n[dispersion]\nny = 8\n";
    let o = run("dispersion", Some(cfg), d.path(), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("stability"), "{}", stderr(&o));
}

#[test]
fn unknown_keys_are_rejected_with_their_line() {
    let d = tempfile::tempdir().unwrap();
    let o = run("dispersion", Some(&format!("{KG}[dispersion]\nny = 8\nnyy = 9\n")), d.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("config.toml:8:"), "{e}");
    assert!(e.contains("nyy"), "{e}");
}

#[test]
fn unsupported_schema_version_is_a_schema_error() {
    let d = tempfile::tempdir().unwrap();
    let o = run("dispersion", Some("schema_version = 7\n[dispersion]\nny = 8\n"), d.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("schema_version"));
}

#[test]
fn identical_configs_give_identical_payloads() {
    let cfg = format!(
        "{KG}[chain]\nn = 64\ndt = 0.01\nsteps = 200\nstride = 20\ninit = \"random\"\namplitude = 0.2\nsnapshots = true\n"
    );
    let (a, b, c) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        assert!(run("simulate-chain", Some(&cfg), d.path(), &["--seed", "11"]).status.success());
    }
    assert!(run("simulate-chain", Some(&cfg), c.path(), &["--seed", "12"]).status.success());
    for f in ["chain.csv", "snapshot_00003.csv", "config.resolved.toml"] {
        assert_eq!(read(a.path(), f), read(b.path(), f), "{f}");
    }
    assert_ne!(payload(&read(a.path(), "snapshot_00000.csv")), payload(&read(c.path(), "snapshot_00000.csv")));
    let (sa, sb) = (summary(a.path()), summary(b.path()));
    assert_eq!(sa["numbers"], sb["numbers"]);
    assert_eq!(payload(&read(a.path(), "chain.csv")).len(), 1 + 11);
}

#[test]
fn resolved_config_records_the_snapped_wave_number() {
    let d = tempfile::tempdir().unwrap();
    let cfg = format!("{KG}[chain]\nn = 100\ndt = 0.01\nsteps = 10\ninit = \"plane_wave\"\ntheta = 1.0\n");
    assert!(run("simulate-chain", Some(&cfg), d.path(), &[]).status.success());
    let text = read(d.path(), "config.resolved.toml");
    let v: toml::Table = toml::from_str(&text).unwrap();
    let th = v["chain"]["theta"].as_float().unwrap();
    assert_eq!(th, std::f64::consts::TAU * 16.0 / 100.0);
    // The resolved file is itself a valid config.
    let again = tempfile::tempdir().unwrap();
    assert!(run("simulate-chain", Some(&text), again.path(), &[]).status.success());
}

#[test]
fn resonance_reports_triads_and_zset() {
    let d = tempfile::tempdir().unwrap();
    let cfg = "schema_version = 1\n[potential]\nkind = \"kg\"\nalpha = -0.22\nv2 = 1.0\nv3 = 1.0\n[resonance]\n";
    let o = run("resonance", Some(cfg), d.path(), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = read(d.path(), "triads.csv");
    let rows = payload(&csv);
    assert_eq!(rows[0], "theta1,theta2,theta3,omega1,omega2,omega3,residual");
    assert!(rows.len() > 1);
    for r in &rows[1..] {
        assert!(r.split(',').last().unwrap().parse::<f64>().unwrap() < 1e-10);
    }
    assert_eq!(summary(d.path())["checks"]["zset_six_pairs"], Value::Bool(true));
}

#[test]
fn expand_coefficients_feed_solve_pde() {
    let d = tempfile::tempdir().unwrap();
    let cfg = "schema_version = 1\n[potential]\nkind = \"fpu\"\nv2 = 1.0\nv3 = 1.0\n[expand]\nreduction = \"kdv\"\nny = 128\nladder = 6\nwidth = 2.0\n";
    let o = run("expand", Some(cfg), d.path(), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = summary(d.path());
    assert!((s["numbers"]["exponents"]["L"].as_f64().unwrap() - 5.0).abs() < 0.1);
    assert_eq!(s["numbers"]["coefficients"]["reduction"], "kdv");
    // Six functionals plus the KdV series Ired_minus_2K.
    assert_eq!(payload(&read(d.path(), "expansion.csv")).len(), 1 + 7 * 6);

    let e = tempfile::tempdir().unwrap();
    let from = d.path().join("out/summary.json");
    let pde = format!(
        "schema_version = 1\n[potential]\nkind = \"fpu\"\nv2 = 1.0\nv3 = 1.0\n[pde]\nmodel = \"kdv\"\nn = 64\ntau_end = 0.2\ncoefficients_from = {:?}\n",
        from.display().to_string()
    );
    let o = run("solve-pde", Some(&pde), e.path(), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(payload(&read(e.path(), "invariants.csv")).len(), 1 + 3);
    assert_eq!(payload(&read(e.path(), "fields.csv")).len(), 1 + 3 * 64);
    assert!(summary(e.path())["numbers"]["l2_drift"].as_f64().unwrap() < 1e-8);
}

#[test]
fn kdv_bridge_error_decreases_with_eps() {
    let d = tempfile::tempdir().unwrap();
    let cfg = "schema_version = 1\n[potential]\nkind = \"fpu\"\nv2 = 1.0\nv3 = 1.0\n[bridge]\nreduction = \"kdv\"\neps = [0.2, 0.1]\ntau_end = 0.2\nwidth = 2.0\noutput_interval = 0.1\n";
    let o = run("bridge", Some(cfg), d.path(), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(payload(&read(d.path(), "bridge_eps_0.1_off.csv")).len() > 1);
    assert_eq!(summary(d.path())["checks"]["error_decreases"], Value::Bool(true));
}

#[test]
fn acceptance_subset_runs_and_reports() {
    let d = tempfile::tempdir().unwrap();
    let o = run("acceptance", Some("schema_version = 1\n[acceptance]\ncriteria = [5, 12]\n"), d.path(), &["--jobs", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = String::from_utf8_lossy(&o.stdout);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 2);
    assert_eq!(payload(&read(d.path(), "acceptance.csv")).len(), 1 + 2);
}

#[test]
fn unknown_criterion_is_refused() {
    let d = tempfile::tempdir().unwrap();
    let o = run("acceptance", Some("schema_version = 1\n[acceptance]\ncriteria = [99]\n"), d.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
}
