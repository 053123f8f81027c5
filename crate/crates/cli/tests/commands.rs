use std::path::Path;
use std::process::{Command, Output};

use susyell_cli::output::{OracleReportOut, PerturbReport, SolveReport};

fn susyell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_susyell"))
        .args(args)
        .env_remove("SUSYELL_DEFAULT_GRID")
        .output()
        .expect("binary runs")
}

fn with_env(args: &[&str], grid: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_susyell"))
        .args(args)
        .env("SUSYELL_DEFAULT_GRID", grid)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn report(o: &Output) -> SolveReport {
    serde_json::from_slice(&o.stdout).expect("valid solve JSON")
}

#[test]
fn oscillator_ladder() {
    let o = susyell(&["solve", "--family", "ho", "--w", "1", "--ell", "0..3"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    let energies: Vec<f64> = r.records.iter().map(|x| x.energy).collect();
    let ells: Vec<u32> = r.records.iter().map(|x| x.ell).collect();
    assert_eq!(ells, vec![0, 1, 2, 3]);
    for (e, want) in energies.iter().zip([1.5, 2.5, 3.5, 4.5]) {
        assert!((e - want).abs() < 1e-12, "{e} vs {want}");
    }
    assert!(r.checks.is_none());
    assert_eq!(r.meta.command, "solve");
}

#[test]
fn strong_screening_has_no_bound_state() {
    let o = susyell(&["solve", "--family", "hulthen", "--alpha", "3", "--ell", "1"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no bound state"));
}

#[test]
fn hydrogen_ground_state() {
    let o = susyell(&["solve", "--family", "coulomb", "--ell", "0"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert!((r.records[0].energy + 0.5).abs() < 1e-12);
    assert!(r.records[0].oracle.pass);
}

#[test]
fn verify_oscillator_passes() {
    let o = susyell(&["verify", "--family", "ho", "--ell", "0..5"]);
    assert_eq!(code(&o), 0);
    let checks = report(&o).checks.unwrap();
    assert_eq!(checks.len(), 6 * 5);
    assert!(checks.iter().all(|c| c.pass));
}

#[test]
fn injected_energy_error_fails_verification() {
    let o = susyell(&["verify", "--family", "ho", "--ell", "1", "--dev", "--inject-deps-error", "0.01"]);
    assert_eq!(code(&o), 1);
    let r = report(&o);
    let eq6 = r.records[0].residuals.eq6;
    assert!((eq6 - 0.01).abs() < 1e-9, "eq6 = {eq6}");
    let failed: Vec<&str> = r.checks.as_ref().unwrap().iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    assert!(failed.contains(&"eq6"));
    assert!(!failed.contains(&"eq5"));
}

#[test]
fn injection_requires_dev_flag() {
    let o = susyell(&["verify", "--family", "ho", "--inject-deps-error", "0.01"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_weak_hulthen_passes() {
    let o = susyell(&["verify", "--family", "hulthen", "--alpha", "0.05", "--ell", "0..3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert!(report(&o).checks.unwrap().iter().all(|c| c.pass));
}

fn orders(args: &[&str]) -> Vec<f64> {
    let o = susyell(args);
    assert_eq!(code(&o), 0);
    let r: PerturbReport = serde_json::from_slice(&o.stdout).unwrap();
    r.orders.iter().map(|t| t.eps).collect()
}

#[test]
fn perturbation_orders() {
    let ho = orders(&["perturb", "--family", "ho"]);
    assert!((ho[0] - 1.0).abs() < 1e-9 && ho[1].abs() < 1e-9, "{ho:?}");
    let co = orders(&["perturb", "--family", "coulomb"]);
    assert!((co[0] - 1.0).abs() < 1e-6 && (co[1] + 1.5).abs() < 1e-6, "{co:?}");
    let hu = orders(&["perturb", "--family", "hulthen", "--alpha", "0.1"]);
    assert!((hu[0] - 0.9975).abs() < 1e-6, "{hu:?}");
}

#[test]
fn oracle_levels() {
    let o = susyell(&["oracle", "--family", "coulomb", "--ell", "0", "--levels", "3"]);
    assert_eq!(code(&o), 0);
    let r: OracleReportOut = serde_json::from_slice(&o.stdout).unwrap();
    let ev = &r.spectra[0].eigenvalues;
    for (n, e) in ev.iter().enumerate() {
        let want = -0.5 / ((n + 1) as f64).powi(2);
        assert!((e - want).abs() < 5e-5, "n={n}: {e}");
    }
}

#[test]
fn oracle_reports_missing_closed_form() {
    let o = susyell(&["oracle", "--family", "hulthen", "--alpha", "3", "--rmax", "20", "--npoints", "400"]);
    assert_eq!(code(&o), 0);
    let r: OracleReportOut = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r.spectra[0].closed_form, None);
}

#[test]
fn json_round_trip_is_exact() {
    let o = susyell(&["solve", "--family", "hulthen", "--alpha", "0.1", "--ell", "0..2"]);
    assert_eq!(code(&o), 0);
    let first = report(&o);
    let text = serde_json::to_string_pretty(&first).unwrap() + "\n";
    assert_eq!(text.as_bytes(), o.stdout.as_slice());
    let again: SolveReport = serde_json::from_str(&text).unwrap();
    for (a, b) in first.records.iter().zip(&again.records) {
        assert_eq!(a.energy.to_bits(), b.energy.to_bits());
        assert_eq!(a.delta_eps.to_bits(), b.delta_eps.to_bits());
        assert_eq!(a.residuals.eq7.to_bits(), b.residuals.eq7.to_bits());
        assert_eq!(a.oracle.eigenvalue.to_bits(), b.oracle.eigenvalue.to_bits());
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--family", "coulomb", "--ell", "0..2"];
    let a = susyell(&args);
    let b = susyell(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn wavefunction_dump_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.csv");
    let o = susyell(&[
        "dump-wavefunction", "--family", "ho", "--ell", "2", "--rmax", "10", "--npoints", "500",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let mut rd = csv::Reader::from_path(&path).unwrap();
    assert_eq!(rd.headers().unwrap(), vec!["r", "chi", "phi", "psi"]);
    let rows: Vec<Vec<f64>> = rd
        .records()
        .map(|r| r.unwrap().iter().map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 500);
    let h = 10.0 / 500.0;
    let norm: f64 = rows.iter().map(|r| r[3] * r[3] * h).sum();
    assert!((norm - 1.0).abs() < 1e-3);
    for r in &rows {
        assert!((r[3] - r[1] * r[2]).abs() <= 1e-12 * r[3].abs().max(1e-300));
    }
}

#[test]
fn dump_needs_single_ell() {
    let o = susyell(&["dump-wavefunction", "--family", "ho", "--ell", "0..1"]);
    assert_eq!(code(&o), 2);
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    write(&cfg, r#"{"family": "ho", "w": 2.0, "ell": "0..1", "rmax": 15.0, "npoints": 3000}"#);
    let c = cfg.to_str().unwrap();

    let from_file = report(&susyell(&["solve", "--config", c]));
    assert_eq!(from_file.records.len(), 2);
    assert!((from_file.records[0].energy - 3.0).abs() < 1e-12);
    assert_eq!(from_file.records[0].grid.n_points, 3000);

    let overridden = report(&susyell(&["solve", "--config", c, "--w", "1", "--ell", "3", "--npoints", "2000"]));
    assert_eq!(overridden.records.len(), 1);
    assert!((overridden.records[0].energy - 4.5).abs() < 1e-12);
    assert_eq!(overridden.records[0].grid.n_points, 2000);
    assert_eq!(overridden.records[0].grid.r_max, 15.0);
}

#[test]
fn unknown_config_key_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    write(&cfg, r#"{"family": "ho", "omega": 2.0}"#);
    assert_eq!(code(&susyell(&["solve", "--config", cfg.to_str().unwrap()])), 2);
}

#[test]
fn environment_grid_is_honoured() {
    let r = report(&with_env(&["solve", "--family", "ho"], "12:2400"));
    assert_eq!(r.records[0].grid.r_max, 12.0);
    assert_eq!(r.records[0].grid.n_points, 2400);
    let r = report(&with_env(&["solve", "--family", "ho", "--npoints", "1200"], "12:2400"));
    assert_eq!(r.records[0].grid.n_points, 1200);
    assert_eq!(r.records[0].grid.r_max, 12.0);
    assert_eq!(code(&with_env(&["solve", "--family", "ho"], "twelve")), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&susyell(&["solve"])), 2);
    assert_eq!(code(&susyell(&["solve", "--family", "ho", "--ell", "3..1"])), 2);
    assert_eq!(code(&susyell(&["solve", "--family", "ho", "--w", "-1"])), 2);
    assert_eq!(code(&susyell(&["solve", "--family", "hulthen"])), 2);
    assert_eq!(code(&susyell(&["solve", "--family", "ho", "--npoints", "2"])), 2);
    assert_eq!(code(&susyell(&["frobnicate"])), 2);
}

#[test]
fn table_and_csv_formats() {
    let t = susyell(&["solve", "--family", "ho", "--ell", "0..1", "--format", "table"]);
    assert_eq!(code(&t), 0);
    let text = String::from_utf8(t.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().next().unwrap().contains("energy"));

    let c = susyell(&["perturb", "--family", "coulomb", "--format", "csv"]);
    let mut rd = csv::Reader::from_reader(c.stdout.as_slice());
    assert_eq!(rd.headers().unwrap(), vec!["k", "eps", "taylor", "diff"]);
    assert_eq!(rd.records().count(), 2);
}
