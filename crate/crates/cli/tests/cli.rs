use std::path::PathBuf;
use std::process::{Command, Output};

use wingtail_cli::error::Classify;
use wingtail_cli::{CliError, ScenarioConfig};
use wingtail_models::ModelError;

const FIXTURES: &[(&str, &str)] = &[
    ("heston_critical_moments", "critical_moments"),
    ("heston_mgf", "mgf"),
    ("heston_tail", "tail"),
    ("heston_wing_implied", "wing"),
    ("heston_compare_implied", "compare"),
    ("heston_compare_local", "compare"),
    ("svi_critical_moments", "critical_moments"),
    ("svi_compare_local", "compare"),
    ("svi_compare_price", "compare"),
    ("stein_stein_wing", "wing"),
];

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn fixture(name: &str) -> PathBuf {
    crate_dir().join("fixtures").join(format!("{name}.json"))
}

fn golden(name: &str) -> PathBuf {
    crate_dir().join("tests").join("golden").join(format!("{name}.csv"))
}

fn wingtail(args: &[&str], threads: Option<usize>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wingtail"));
    cmd.args(args);
    if let Some(n) = threads {
        cmd.env("RAYON_NUM_THREADS", n.to_string());
    }
    cmd.output().expect("binary runs")
}

fn run_fixture(name: &str, task: &str, threads: Option<usize>) -> Output {
    let config = fixture(name);
    wingtail(&[task, "--config", config.to_str().unwrap()], threads)
}

#[test]
fn goldens_match() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for &(name, task) in FIXTURES {
        let out = run_fixture(name, task, None);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        if update {
            std::fs::write(golden(name), &out.stdout).unwrap();
            continue;
        }
        let expected = std::fs::read(golden(name)).unwrap_or_else(|_| panic!("missing golden for {name}"));
        assert!(out.stdout == expected, "{name} differs from its golden file");
    }
}

#[test]
fn output_is_identical_across_runs_and_thread_counts() {
    for &(name, task) in FIXTURES {
        let a = run_fixture(name, task, Some(1)).stdout;
        let b = run_fixture(name, task, Some(1)).stdout;
        let c = run_fixture(name, task, Some(4)).stdout;
        assert!(a == b && a == c, "{name}");
    }
}

#[test]
fn every_cell_is_a_finite_number() {
    for &(name, _) in FIXTURES {
        let text = std::fs::read_to_string(golden(name)).unwrap();
        let mut lines = text.lines();
        let width = lines.next().unwrap().split(',').count();
        for line in lines {
            let cells: Vec<&str> = line.split(',').collect();
            assert_eq!(cells.len(), width, "{name}: {line}");
            for cell in cells.iter().filter(|c| !matches!(**c, "right" | "left")) {
                let v: f64 = cell.parse().unwrap_or_else(|_| panic!("{name}: `{cell}`"));
                assert!(v.is_finite());
            }
        }
    }
}

#[test]
fn critical_moments_header() {
    let out = run_fixture("heston_critical_moments", "critical_moments", None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("side,mu_star,dmu_star_dt,mu_hat,alpha"));
}

#[test]
fn invalid_rho_exits_with_field_path() {
    let out = run_fixture("heston_bad_rho", "critical_moments", None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("model.rho"));
}

#[test]
fn unsupported_task_exits_with_task_field() {
    let out = run_fixture("svi_compare_local", "mgf", None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`task`"));
}

#[test]
fn malformed_json_reports_position() {
    let dir = std::env::temp_dir().join(format!("wingtail-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, "{\n  \"task\": \"mgf\",\n  \"t\": oops\n}").unwrap();
    let out = wingtail(&["mgf", "--config", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn flags_override_config_and_write_file() {
    let dir = std::env::temp_dir().join(format!("wingtail-cli-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out_path = dir.join("wing.csv");
    let config = fixture("heston_wing_implied");
    let out = wingtail(
        &[
            "wing",
            "--config",
            config.to_str().unwrap(),
            "--side",
            "left",
            "--t",
            "0.5",
            "--grid",
            "3:5:1",
            "--out",
            out_path.to_str().unwrap(),
        ],
        None,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("k,total_variance,"));
    let bad = wingtail(&["wing", "--config", config.to_str().unwrap(), "--grid", "5:3:1"], None);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("grid.stop"));
}

#[test]
fn grid_below_guard_is_a_configuration_error() {
    let config = fixture("heston_wing_implied");
    let out = wingtail(&["wing", "--config", config.to_str().unwrap(), "--grid", "1:4:1"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`grid`"));
}

#[test]
fn non_convergence_maps_to_exit_three() {
    let e = ModelError::ExtrapolationUnstable { what: "omega", residual: 1.0 }.classify("heston_expansion", "grid");
    assert_eq!(e.exit_code(), 3);
    assert!(e.to_string().contains("heston_expansion"));
    let e = wingtail_core::Error::NonConvergence { op: "bisect", iterations: 10 }.classify("critical_moments", "t");
    assert!(matches!(&e, CliError::Numerical { op, .. } if op == "critical_moments/bisect"));
}

#[test]
fn svi_slices_validate_with_indexed_paths() {
    let text = r#"{"model": {"svi": {"slices": [
        {"t": 1.0, "a": 0.04, "b": 0.4, "rho": -0.4, "m": 0.1, "eta": 0.3},
        {"t": 2.0, "a": 0.04, "b": 0.4, "rho": -0.4, "m": 0.1, "eta": -0.3}]}},
        "task": "critical_moments", "t": 1.0}"#;
    let cfg = ScenarioConfig::from_json(text).unwrap();
    let err = cfg.validate().unwrap_err();
    assert!(matches!(&err, CliError::Config { field, .. } if field == "model.slices[1].eta"), "{err}");
}

#[test]
fn stein_stein_table_rejects_small_b1() {
    let text = r#"{"model": {"stein_stein": {"B1": [[1.0, 0.8]], "B2": [[1.0, 2.0]], "B3": [[1.0, 0.0]]}},
        "task": "critical_moments", "t": 1.0}"#;
    let err = ScenarioConfig::from_json(text).unwrap().validate().unwrap_err();
    assert!(matches!(&err, CliError::Config { field, .. } if field == "model.B1[0]"), "{err}");
}

