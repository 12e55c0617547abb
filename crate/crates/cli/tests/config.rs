use std::f64::consts::PI;
use std::process::Command;

use tcorr::qcore::PauliAxis;
use tcorr_cli::config::{build_mn_spec, parse_config, Family};
use tcorr_cli::run::{csv_string, run_config};

const FIG4: &str = r#"{
  "unit": "ms",
  "hamiltonian": {"coeff_unit": "pi rad/s", "hz": -100},
  "initial_state": {"kind": "ket", "amplitudes": [[1, 0], [0, 0]]},
  "operators": {"kind": "explicit", "ops": [{"axis": "x", "time": 0}, {"axis": "y", "time": "t1"}]},
  "sweep": [{"variable": "t1", "start": 0.5, "stop": 10, "step": 0.5}]
}"#;

#[test]
fn mn_specs_follow_the_interleaving() {
    let xx = build_mn_spec(Family::Xx, 3, 0.3e-3).unwrap();
    assert_eq!(xx.ops(), &[(PauliAxis::X, 0.0), (PauliAxis::X, 0.3e-3), (PauliAxis::X, 0.6e-3)]);
    let xy = build_mn_spec(Family::Xy, 2, 0.3e-3).unwrap();
    assert_eq!(xy.ops(), &[(PauliAxis::X, 0.0), (PauliAxis::Y, 0.3e-3)]);
    let dt = 1e-3;
    let xy5 = build_mn_spec(Family::Xy, 5, dt).unwrap();
    let axes: Vec<_> = xy5.ops().iter().map(|(a, _)| *a).collect();
    assert_eq!(axes, [PauliAxis::X, PauliAxis::Y, PauliAxis::X, PauliAxis::Y, PauliAxis::X]);
    assert!(build_mn_spec(Family::Xx, 1, dt).is_err());
}

#[test]
fn fig4_config_runs_and_matches_closed_form() {
    let exp = parse_config(FIG4).unwrap();
    assert_eq!(exp.point_count(), 20);
    let rows = run_config(&exp, 2).unwrap();
    assert_eq!(rows.len(), 20);
    for r in &rows {
        let t = r.times[0];
        let expected = num_complex_exp(t);
        for v in [r.protocol, r.oracle, r.nmr] {
            assert!((v.unwrap() - expected).norm() < 1e-10);
        }
        assert!(r.abs_err_max().unwrap() < 1e-10);
    }
    let csv = csv_string(&rows).unwrap();
    assert!(csv.starts_with("t_1_s,n,re_protocol,im_protocol,re_oracle,im_oracle,re_nmr,im_nmr,abs_err_max\n"));
    assert_eq!(csv.lines().count(), 21);
}

fn num_complex_exp(t: f64) -> tcorr::Complex64 {
    tcorr::Complex64::new(0.0, -1.0) * tcorr::Complex64::new(0.0, -200.0 * PI * t).exp()
}

#[test]
fn unrequested_backends_leave_empty_cells() {
    let text = FIG4.replace(r#""sweep""#, r#""backends": ["oracle"], "sweep""#);
    let rows = run_config(&parse_config(&text).unwrap(), 1).unwrap();
    let csv = csv_string(&rows).unwrap();
    let first = csv.lines().nth(1).unwrap();
    let cells: Vec<&str> = first.split(',').collect();
    assert_eq!(cells.len(), 9);
    assert!(cells[2].is_empty() && cells[3].is_empty());
    assert!(!cells[4].is_empty());
    assert!(cells[6].is_empty() && cells[7].is_empty() && cells[8].is_empty());
}

#[test]
fn thermal_inputs_agree_across_backends() {
    let text = FIG4.replace(
        r#"{"kind": "ket", "amplitudes": [[1, 0], [0, 0]]}"#,
        r#"{"kind": "thermal", "beta": 0.001}"#,
    );
    let rows = run_config(&parse_config(&text).unwrap(), 0).unwrap();
    for r in rows {
        assert!(r.abs_err_max().unwrap() < 1e-10);
    }
}

#[test]
fn validation_errors_name_the_field() {
    let cases = [
        (FIG4.replace("\"step\": 0.5", "\"step\": 0"), "step"),
        (FIG4.replace("\"t1\"}]", "\"t2\"}]"), "operators.ops[1].time"),
        (FIG4.replace("\"hz\": -100", "\"hz\": \"fast\""), "hamiltonian.hz"),
        (FIG4.replace("\"kind\": \"ket\", \"amplitudes\": [[1, 0], [0, 0]]", "\"kind\": \"ket\", \"amplitudes\": [[1, 0], [1, 0]]"), "amplitudes"),
        (FIG4.replace("\"hz\": -100", "\"hz\": -100, \"hx\": 3"), "nmr"),
        (FIG4.replace(r#"[{"variable": "t1", "start": 0.5, "stop": 10, "step": 0.5}]"#, "[]"), "sweep"),
        (FIG4.replace("\"unit\": \"ms\",", "\"unit\": \"ms\", \"colour\": 1,"), "colour"),
    ];
    for (text, needle) in cases {
        let err = format!("{:#}", parse_config(&text).unwrap_err());
        assert!(err.contains(needle), "expected '{needle}' in: {err}");
    }
}

#[test]
fn time_dependent_runs_reject_reversed_times() {
    let text = r#"{
      "hamiltonian": {"kind": "timedep", "terms": [{"axis": "y", "envelope": {"kind": "exp_decay", "amplitude": 100, "rate": 300}}], "steps_per_interval": 16},
      "initial_state": {"kind": "rotation", "axis": "x", "angle": 0.5, "angle_unit": "pi"},
      "operators": {"kind": "explicit", "ops": [{"axis": "z", "time": 0}, {"axis": "y", "time": 0.002}, {"axis": "y", "time": "t1"}]},
      "sweep": [{"variable": "t1", "start": 0.001, "stop": 0.003, "step": 0.001}]
    }"#;
    let exp = parse_config(text).unwrap();
    let err = format!("{:#}", run_config(&exp, 1).unwrap_err());
    assert!(err.contains("t1=1e-3"), "{err}");
}

#[test]
fn correlate_command_writes_csv_and_maps_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, FIG4).unwrap();
    let out = dir.path().join("out/fig4.csv");
    let status = Command::new(env!("CARGO_BIN_EXE_tcorr"))
        .args(["correlate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 21);

    std::fs::write(&cfg, "{").unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_tcorr"))
        .args(["correlate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn verify_exit_codes() {
    let status = Command::new(env!("CARGO_BIN_EXE_tcorr"))
        .args(["verify", "--suite", "decompositions", "--trials", "5", "--seed", "1"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let status = Command::new(env!("CARGO_BIN_EXE_tcorr"))
        .args(["verify", "--suite", "decompositions", "--trials", "0"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}
