use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use slitwave::run::{parse_grid_csv, run};
use slitwave::scenario::{Scenario, ScenarioConfig};
use slitwave::wavefield::density_grid;

fn slitwave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slitwave")).args(args).output().unwrap()
}

fn small_config(dir: &Path, body: &str) -> String {
    let path = dir.join("scenario.cfg");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn preset_run_reports_talbot_length_and_writes_files() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("n7");
    let o = slitwave(&["run", "neutron7", "--out", out.to_str().unwrap(), "--grid-nx", "200", "--grid-nz", "100"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let line = String::from_utf8(o.stdout).unwrap();
    assert!(line.starts_with("scenario=neutron7 z_T=100 nm (100 nm) grid=200x100"), "{line}");
    assert!(line.contains("trajectories=98/98 completed"), "{line}");
    for f in ["density.csv", "density.pgm", "trajectories.json", "maxima.csv", "fringe_0.csv"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let pgm = fs::read(out.join("density.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n200 100\n255\n"));
    assert_eq!(pgm.len(), b"P5\n200 100\n255\n".len() + 200 * 100);

    let json: serde_json::Value = serde_json::from_slice(&fs::read(out.join("trajectories.json")).unwrap()).unwrap();
    let first = &json.as_array().unwrap()[0];
    assert_eq!(first["status"], "completed");
    assert_eq!(first["points"][0][1], 0.0);
}

#[test]
fn fullerene_summary_in_millimetres() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("c60");
    let o = slitwave(&["run", "fullerene9", "--out", out.to_str().unwrap(), "--grid-nx", "100", "--grid-nz", "40", "--per-slit", "2"]);
    assert!(o.status.success());
    let line = String::from_utf8(o.stdout).unwrap();
    assert!(line.contains("z_T=25000000 nm (25 mm)"), "{line}");
}

#[test]
fn overrides_change_the_physics() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let o = slitwave(&[
        "run", "neutron7", "--out", out.to_str().unwrap(), "--pitch-nm", "10", "--lambda-nm", "1",
        "--slits", "3", "--width-nm", "2", "--sigma-nm", "0.6", "--grid-nx", "50", "--grid-nz", "20",
        "--zmax-talbots", "2", "--per-slit", "3",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let line = String::from_utf8(o.stdout).unwrap();
    // 2·10²/1
    assert!(line.contains("z_T=200 nm") && line.contains("trajectories=9/9"), "{line}");
}

#[test]
fn config_file_run() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(
        tmp.path(),
        "# two slits\nname = pair\nwavelength = 0.5\nslit_count = 2\nslit_pitch = 5\nslit_width = 1\n\
         grid_nx = 64\ngrid_nz = 32\nper_slit = 2\nfringe_talbots = 0.5, 1\n",
    );
    let out = tmp.path().join("pair");
    let o = slitwave(&["run", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("scenario=pair z_T=100 nm"));
    assert!(out.join("fringe_1.csv").is_file());
}

#[test]
fn config_errors_exit_2_and_leave_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("bad");
    let o = slitwave(&["run", "no-such-preset", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());

    let cfg = small_config(tmp.path(), "slit_pitch = 1\nslit_width = 3\n");
    let o = slitwave(&["run", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));

    let cfg = small_config(tmp.path(), "colour = blue\n");
    let o = slitwave(&["run", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));

    let o = slitwave(&["run", "neutron7", "--out", out.to_str().unwrap(), "--lambda-nm", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn io_errors_exit_3() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = blocker.join("sub");
    let o = slitwave(&["run", "neutron7", "--out", out.to_str().unwrap(), "--grid-nx", "10", "--grid-nz", "10"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn failed_run_removes_partial_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("partial");
    fs::create_dir(&out).unwrap();
    // a directory where a later output file must go makes that write fail
    fs::create_dir(out.join("maxima.csv")).unwrap();
    let mut cfg = ScenarioConfig::preset("neutron7").unwrap();
    cfg.set("grid_nx", "20").unwrap();
    cfg.set("grid_nz", "10").unwrap();
    cfg.set("per_slit", "1").unwrap();
    let err = run(&cfg.resolve().unwrap(), &out).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    let left: Vec<_> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(left, vec![std::ffi::OsString::from("maxima.csv")]);
}

#[test]
fn csv_round_trip_is_exact() {
    let mut cfg = ScenarioConfig::preset("neutron7").unwrap();
    cfg.set("grid_nx", "120").unwrap();
    cfg.set("grid_nz", "40").unwrap();
    cfg.set("per_slit", "1").unwrap();
    let s = cfg.resolve().unwrap();
    let tmp = tempfile::tempdir().unwrap();
    run(&s, tmp.path()).unwrap();
    let text = fs::read_to_string(tmp.path().join("density.csv")).unwrap();
    assert!(!text.contains('\r'));
    let (xs, zs, rows) = parse_grid_csv(&text).unwrap();
    let mut grid = density_grid(&s.params, s.grid).unwrap();
    grid.normalize();
    assert_eq!(xs, (0..s.grid.nx).map(|i| s.grid.x_at(i)).collect::<Vec<_>>());
    assert_eq!(zs, (0..s.grid.nz).map(|i| s.grid.z_at(i)).collect::<Vec<_>>());
    for (iz, row) in rows.iter().enumerate() {
        assert_eq!(row.as_slice(), grid.row(iz));
    }
}

#[test]
fn summary_talbot_length_matches_params() {
    for name in slitwave::scenario::PRESETS {
        let mut cfg = ScenarioConfig::preset(name).unwrap();
        cfg.set("grid_nx", "16").unwrap();
        cfg.set("grid_nz", "4").unwrap();
        cfg.set("per_slit", "1").unwrap();
        cfg.set("launch_slits", "1").unwrap();
        cfg.set("fringe_talbots", "").unwrap();
        cfg.set("max_steps", "2000").unwrap();
        let s = cfg.resolve().unwrap();
        let tmp = tempfile::tempdir().unwrap();
        let summary = run(&s, tmp.path()).unwrap();
        assert_eq!(summary.talbot_length, s.params.talbot_length());
        assert_eq!(summary.talbot_length, Scenario::preset(name).unwrap().talbot_length());
    }
}

#[test]
fn presets_listing() {
    let o = slitwave(&["presets"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("talbot512") && text.contains("z_T=2500 nm"));
}

#[test]
fn hidden_oracle_subcommand() {
    let o = slitwave(&["oracle", "--x-nm", "0.5", "--z-nm", "30"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("ratio"));
    let help = String::from_utf8(slitwave(&["--help"]).stdout).unwrap();
    assert!(!help.contains("oracle"));
}
