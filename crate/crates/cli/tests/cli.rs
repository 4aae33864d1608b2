use std::fs;
use std::process::Command as Process;

use cfs_cli::config::{self, Axis, Command, Material, MethodChoice, RunConfig, Spacing, Sweep};
use cfs_cli::run::{execute, log_log_slope, sample_points};
use cfs_cli::validate::{has_errors, validate, Severity};

const SWEEP: &str = r#"schema_version = 1
command = "force-sweep"

[film]
model = "drude"
omega_p = 2e15
omega_tau = 1e14

[geometry]
thickness = 10e-9

[sweep]
axis = "film.omega_p"
range = [1e15, 1e16]
samples = 4
"#;

fn cfs() -> Process {
    Process::new(env!("CARGO_BIN_EXE_cfs"))
}

fn data_lines(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn valid_config_has_no_diagnostics() {
    let c = config::parse(SWEEP).unwrap();
    assert!(validate(&c, Some(SWEEP)).is_empty());
}

#[test]
fn empty_range_is_an_error_with_its_line() {
    let src = SWEEP.replace("range = [1e15, 1e16]", "range = [1e16, 1e16]");
    let c = config::parse(&src).unwrap();
    let d = validate(&c, Some(&src));
    assert!(has_errors(&d));
    assert_eq!(d[0].line, Some(14));
    assert!(d[0].to_string().starts_with("error: line 14:"));
}

#[test]
fn sample_count_bounds() {
    for (n, ok) in [(1, false), (2, true), (100_000, true), (100_001, false)] {
        let src = SWEEP.replace("samples = 4", &format!("samples = {n}"));
        let c = config::parse(&src).unwrap();
        assert_eq!(!has_errors(&validate(&c, None)), ok, "{n}");
    }
}

#[test]
fn small_d_domain_warning() {
    let src = SWEEP.replace("omega_tau = 1e14", "omega_tau = 3e15").replace(
        "command = \"force-sweep\"",
        "command = \"force-sweep\"\nmethod = \"smalld\"",
    );
    let c = config::parse(&src).unwrap();
    let d = validate(&c, Some(&src));
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].severity, Severity::Warning);
    assert!(d[0].message.contains("omega_tau"));
    // The same film is fine for the retarded engine.
    let c = RunConfig {
        method: MethodChoice::Retarded,
        ..c
    };
    assert!(validate(&c, None).is_empty());
}

#[test]
fn command_requirements() {
    let mut c = RunConfig::new(Command::StabilityDiagram);
    c.film = Material::Plasma { omega_p: 1e16 };
    let msgs: Vec<String> = validate(&c, None).into_iter().map(|d| d.message).collect();
    assert!(msgs.iter().any(|m| m.contains("thickness")), "{msgs:?}");
    assert!(msgs.iter().any(|m| m.contains("[diagram]")), "{msgs:?}");
    assert!(msgs.iter().any(|m| m.contains("substrate")), "{msgs:?}");

    c.film = Material::PerfectReflector;
    c.command = Command::ElasticReport;
    assert!(has_errors(&validate(&c, None)));
}

#[test]
fn parse_errors_carry_lines() {
    let src = SWEEP.replace("samples = 4", "samples = 4\nstep = 2");
    let e = config::parse(&src).unwrap_err();
    assert_eq!(e.line, Some(16));
    let src = SWEEP.replace("model = \"drude\"", "model = \"gold\"");
    let e = config::parse(&src).unwrap_err();
    assert_eq!(e.line, Some(5));
}

#[test]
fn sample_points_hit_the_ends() {
    let p = sample_points([1.0, 2.0], 5, Spacing::Linear);
    assert_eq!(p, vec![1.0, 1.25, 1.5, 1.75, 2.0]);
    let p = sample_points([1e-9, 1e-7], 3, Spacing::Log);
    assert_eq!((p[0], p[2]), (1e-9, 1e-7));
    assert!((p[1] / 1e-8 - 1.0).abs() < 1e-14);
}

#[test]
fn slope_of_a_power_law() {
    let x = [1.0, 2.0, 4.0, 8.0];
    let y: Vec<Option<f64>> = x.iter().map(|x: &f64| Some(-3.0 * x.powi(-3))).collect();
    assert!((log_log_slope(&x, &y).unwrap() + 3.0).abs() < 1e-12);
    assert_eq!(log_log_slope(&x[..1], &y[..1]), None);
}

#[test]
fn one_row_per_sample_and_no_bare_nan() {
    let c = config::parse(SWEEP).unwrap();
    let out = execute(&c, Some(1)).unwrap();
    assert!(out.failures.is_empty());
    assert_eq!(out.table.rows.len(), 4);
    let csv = out.table.to_csv_string(&c);
    let lines = data_lines(&csv);
    assert_eq!(
        lines[0],
        "film_omega_p_rad_s,pressure_N_m2,pressure_error_N_m2,small_d_valid,status"
    );
    for l in &lines[1..] {
        assert!(!l.to_lowercase().contains("nan") && !l.contains("inf"), "{l}");
    }
    // The embedded config parses back to the run configuration.
    let embedded: String = csv
        .lines()
        .skip_while(|l| *l != "# config:")
        .skip(1)
        .take_while(|l| l.starts_with('#'))
        .map(|l| l.trim_start_matches('#').trim_start())
        .collect::<Vec<_>>()
        .join("\n");
    assert_eq!(config::parse(&embedded).unwrap(), c);
}

#[test]
fn failed_samples_become_na_rows() {
    let mut c = config::parse(SWEEP).unwrap();
    // An unreachable tolerance on a tiny budget.
    c.quadrature.max_subdivisions = 10;
    c.quadrature.rel_tol = 1e-15;
    let out = execute(&c, Some(1)).unwrap();
    assert_eq!(out.failures.len(), 4);
    let csv = out.table.to_csv_string(&c);
    for l in &data_lines(&csv)[1..] {
        assert!(l.ends_with(",NA,NA,NA,failed"), "{l}");
    }
}

#[test]
fn thickness_scan_reports_the_exponent() {
    let mut c = RunConfig::new(Command::ThicknessScan);
    c.film = Material::Plasma { omega_p: 2e15 };
    c.method = MethodChoice::Smalld;
    c.sweep = Some(Sweep {
        axis: Axis::Thickness,
        range: [1e-9, 4e-9],
        spacing: Spacing::Log,
        samples: 5,
    });
    let out = execute(&c, None).unwrap();
    for s in out
        .table
        .numbers("fitted_slope")
        .into_iter()
        .chain(out.table.numbers("local_slope"))
    {
        assert!((s.unwrap() + 3.0).abs() < 1e-9);
    }
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.toml");
    fs::write(&good, SWEEP).unwrap();
    let csv = dir.path().join("out.csv");
    let st = cfs()
        .args(["run", "--config"])
        .arg(&good)
        .arg("--output")
        .arg(&csv)
        .status()
        .unwrap();
    assert!(st.success());
    assert_eq!(data_lines(&fs::read_to_string(&csv).unwrap()).len(), 5);

    let bad = dir.path().join("bad.toml");
    fs::write(&bad, SWEEP.replace("samples = 4", "samples = 0")).unwrap();
    let out = cfs().args(["run", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 15"));
    let out = cfs().args(["validate", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    // Sample failures: exit 0 normally, 2 with --strict.
    let failing = dir.path().join("failing.toml");
    fs::write(
        &failing,
        format!("{SWEEP}\n[quadrature]\nmax_subdivisions = 10\nrel_tol = 1e-15\n"),
    )
    .unwrap();
    let out = cfs().args(["run", "--config"]).arg(&failing).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("failed"));
    let out = cfs()
        .args(["run", "--strict", "--config"])
        .arg(&failing)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.toml");
    fs::write(&path, SWEEP).unwrap();
    let out = cfs()
        .args(["thickness-scan", "--method", "smalld", "--rel-tol", "1e-6", "--config"])
        .arg(&path)
        .output()
        .unwrap();
    // thickness-scan rejects a film.omega_p sweep
    assert_eq!(out.status.code(), Some(1));
    let out = cfs()
        .args(["force-sweep", "--method", "smalld", "--rel-tol", "1e-6", "--config"])
        .arg(&path)
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("#   method = \"smalld\""));
    assert!(text.contains("#   rel_tol = 0.000001"));
}
