use std::path::Path;
use std::process::Command;

use weakdgd::harness::*;
use weakdgd::Error;

const FULL_CONFIG: &str = r#"
[atomic]
gamma_rad_per_s = 6365913.9137
gamma_coll = 0.0
zeeman_excited = 5.0
zeeman_ground = 15.0
control_detuning = 0.0
rabi = 0.03
decay = { g13 = 1.0, g14 = 2.0, g23 = 2.0, g24 = 1.0 }

[probe]
wavelength_nm = 769.9
sigma_over_2pi_hz = 791.6
length_cm = 1.0
density_per_cm3 = 1e9

[post_selection]
beta = 0.1
"#;

fn simulate(args: &[&str], envs: &[(&str, &str)]) -> std::process::Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_simulate"));
    cmd.args(args).env_remove(THREADS_ENV);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn sweep_text(cfg: &RunConfig) -> String {
    let table = run_sweep(cfg).unwrap();
    let mut buf = Vec::new();
    write_sweep_csv(cfg, &table, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn explicit_file_reproduces_the_fig1_medium() {
    let cfg = parse_config(FULL_CONFIG).unwrap();
    let preset = RunConfig::fig1();
    assert!((cfg.atomic.gamma / preset.atomic.gamma - 1.0).abs() < 1e-7);
    assert_eq!(cfg.atomic.dephasing, preset.atomic.dephasing);
    assert_eq!(cfg.probe.grid, preset.probe.grid);
    assert_eq!(cfg.post_selection, preset.post_selection);
}

#[test]
fn empty_file_reports_missing_fields() {
    assert!(matches!(parse_config(""), Err(Error::MissingFields(f)) if f.len() == 9));
}

#[test]
fn unknown_probe_key_is_a_parse_error() {
    let err = parse_config(&format!("{FULL_CONFIG}\n[output]\nformat = \"csv\"\n")).unwrap_err();
    assert!(matches!(err, Error::Parse { .. }), "{err:?}");
}

#[test]
fn sweep_output_is_deterministic() {
    let mut cfg = RunConfig::preset(4).unwrap();
    cfg.sweep.as_mut().unwrap().values.truncate(6);
    assert_eq!(sweep_text(&cfg), sweep_text(&cfg));
}

#[test]
fn single_value_sweep_equals_the_point() {
    let mut cfg = RunConfig::fig1();
    cfg.sweep = Some(Sweep {
        variable: SweepVariable::G,
        values: vec![0.1],
    });
    let table = run_sweep(&cfg).unwrap();
    let mut point = RunConfig::fig1();
    point.atomic.rabi = 0.1;
    let direct = simulate_point(&point).unwrap();
    assert_eq!(table.rows.len(), 1);
    assert_eq!(
        table.rows[0].result.as_ref().unwrap().values(),
        direct.values()
    );
}

#[test]
fn failing_points_are_recorded_in_the_error_column() {
    let mut cfg = RunConfig::fig1();
    cfg.sweep = Some(Sweep {
        variable: SweepVariable::N,
        values: vec![1e9, -1.0, 2e9],
    });
    let text = sweep_text(&cfg);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(rows[0].starts_with("density_per_cm3,mean_arrival,") && rows[0].ends_with(",error"));
    assert_eq!(rows.len(), 4);
    assert!(rows[1].ends_with(','));
    assert!(rows[2].contains("invalid_config: "), "{}", rows[2]);
    assert!(rows[3].ends_with(','));
}

#[test]
fn fig4_delay_decreases_with_the_control_field() {
    let ds = reproduce_figure(4, &RunConfig::preset(4).unwrap()).unwrap();
    assert!(ds[0].contents.contains("# dgd_monotone_decreasing = true"));
}

#[test]
fn every_figure_has_a_dataset_and_unknown_ones_fail() {
    let mut cfg = RunConfig::fig1();
    cfg.output.gnuplot = true;
    cfg.sweep = Some(Sweep {
        variable: SweepVariable::G,
        values: vec![0.05, 0.1],
    });
    for id in [1, 3, 5, 6, 7] {
        let ds = reproduce_figure(id, &cfg).unwrap();
        assert!(!ds.is_empty());
        for d in &ds {
            assert!(d.contents.starts_with(&format!("# figure = {id}\n")));
            assert!(d.script.is_some());
        }
    }
    assert_eq!(reproduce_figure(3, &cfg).unwrap().len(), FIG3_BETAS.len());
    assert!(matches!(
        reproduce_figure(2, &cfg),
        Err(Error::UnknownFigure(2))
    ));
}

#[test]
fn cli_writes_a_report_for_a_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", FULL_CONFIG);
    let out = dir.path().join("out");
    let o = simulate(&["--config", &cfg, "--out", out.to_str().unwrap()], &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = std::fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(report.contains("dgd_measured = "));
    assert!(report.contains("atomic.rabi = 0.03"));
    assert!(out.join("point.csv").exists());
}

#[test]
fn cli_rejects_bad_input_with_a_single_error_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.toml",
        "preset = \"fig1\"\n[atomic]\ngamma_rad_per_s = -1.0\n",
    );
    let o = simulate(
        &["--config", &cfg, "--out", dir.path().to_str().unwrap()],
        &[],
    );
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(
        err.starts_with("error: kind=invalid_config message="),
        "{err}"
    );
    assert!(err.contains("atomic.gamma_rad_per_s"));

    let missing = dir.path().join("nope.toml");
    let o = simulate(&["--config", missing.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr)
        .unwrap()
        .starts_with("error: kind=io"));
}

#[test]
fn cli_figure_output_is_independent_of_the_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "fig4.toml",
        "preset = \"fig4\"\n[sweep]\nvariable = \"G\"\nvalues = [0.05, 0.1, 0.15, 0.2]\n",
    );
    // same output directory each time: it is echoed in the file header
    let out = dir.path().join("out");
    let run = |threads: Option<&str>| {
        let envs: Vec<(&str, &str)> = threads.map(|t| vec![(THREADS_ENV, t)]).unwrap_or_default();
        let o = simulate(
            &[
                "--config",
                &cfg,
                "--figure",
                "4",
                "--out",
                out.to_str().unwrap(),
            ],
            &envs,
        );
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let text = std::fs::read_to_string(out.join("fig4.csv")).unwrap();
        std::fs::remove_dir_all(&out).unwrap();
        text
    };
    let serial = run(Some("1"));
    assert!(serial == run(Some("3")) && serial == run(None));
}

#[test]
fn cli_calibration_prints_the_scalar() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "preset = \"fig6\"\n");
    let o = simulate(
        &[
            "--config",
            &cfg,
            "--calibrate",
            "--out",
            dir.path().to_str().unwrap(),
        ],
        &[],
    );
    assert!(o.status.success());
    let stdout = String::from_utf8(o.stdout).unwrap();
    let line = stdout
        .lines()
        .find(|l| l.starts_with("calibration = "))
        .unwrap();
    let c: f64 = line["calibration = ".len()..].parse().unwrap();
    assert!((c - 0.99).abs() < 0.01, "{c}");
    assert!(dir.path().join("fig6_pulses.csv").exists());
}
