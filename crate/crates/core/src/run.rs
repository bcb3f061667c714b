//! Batch execution of a [`Scenario`] and file emission.
//!
//! Files written to the output directory:
//!
//! | file | content |
//! |------|---------|
//! | `density.csv` | header `z,<x₀>,<x₁>,…`; one row per plane: `z` then the densities |
//! | `density.pgm` | binary P5 image of the same grid, row 0 = smallest `z` |
//! | `trajectories.json` | `[{"launch_x":…, "status":…, "points":[[x,z],…]}, …]` every accepted step, forced samples at every grid plane |
//! | `fringe_<k>.csv` | header `x,density`, one file per fringe plane |
//! | `maxima.csv` | header `z,x,value,kind` over all fringe planes |
//! | `farfield.csv` | far-field runs only: `x,zeta,envelope,intensity,density` |
//!
//! Densities are max-normalized per file. Floats are written with 17
//! significant digits, lines end in LF.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::bohm::{integrate_batch, IntegratorConfig, Trajectory, TrajectoryStatus};
use crate::error::{Error, Result};
use crate::farfield::{far_field_point, MaximumKind};
use crate::fringe::{extract_fringe, FringeProfile};
use crate::render::render_pgm;
use crate::scenario::Scenario;
use crate::wavefield::{density_grid, FieldGrid};

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub name: String,
    pub talbot_length: f64,
    pub nx: usize,
    pub nz: usize,
    pub trajectories: usize,
    pub completed: usize,
    pub aborted_node: usize,
    pub aborted_bounds: usize,
    pub files: Vec<PathBuf>,
}

impl RunSummary {
    pub fn line(&self) -> String {
        format!(
            "scenario={} z_T={} nm ({}) grid={}x{} trajectories={}/{} completed (node={}, bounds={})",
            self.name,
            self.talbot_length,
            human_length(self.talbot_length),
            self.nx,
            self.nz,
            self.completed,
            self.trajectories,
            self.aborted_node,
            self.aborted_bounds
        )
    }
}

/// Length in nanometres rendered with a readable unit.
pub fn human_length(nm: f64) -> String {
    let (scale, unit) = match nm.abs() {
        v if v < 1e3 => (1.0, "nm"),
        v if v < 1e6 => (1e3, "um"),
        v if v < 1e9 => (1e6, "mm"),
        _ => (1e9, "m"),
    };
    format!("{} {unit}", nm / scale)
}

/// Formats a float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Runs the scenario on `workers` threads (the global pool when `None`).
pub fn run_with_workers(scenario: &Scenario, out_dir: &Path, workers: Option<usize>) -> Result<RunSummary> {
    match workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Config(format!("cannot start {n} workers: {e}")))?;
            pool.install(|| run(scenario, out_dir))
        }
        None => run(scenario, out_dir),
    }
}

/// Computes every output of `scenario` and writes it below `out_dir`.
/// On failure every file this call created is removed again.
pub fn run(scenario: &Scenario, out_dir: &Path) -> Result<RunSummary> {
    let mut writer = OutputSet::new(out_dir)?;
    match produce(scenario, &mut writer) {
        Ok(mut summary) => {
            summary.files = writer.finish();
            Ok(summary)
        }
        Err(e) => {
            writer.discard();
            Err(e)
        }
    }
}

fn produce(scenario: &Scenario, out: &mut OutputSet) -> Result<RunSummary> {
    let params = &scenario.params;

    let mut grid = density_grid(params, scenario.grid)?;
    grid.normalize();
    out.write("density.csv", grid_csv(&grid).as_bytes())?;
    out.write("density.pgm", &render_pgm(&grid, scenario.mapping, scenario.gamma))?;

    let plan = &scenario.trajectories;
    let mut cfg = IntegratorConfig::for_span(params, plan.z_start, plan.z_end);
    cfg.max_steps = plan.max_steps;
    let g = scenario.grid;
    let mut planes: Vec<f64> = (0..g.nz).map(|iz| g.z_at(iz)).collect();
    planes.extend_from_slice(&scenario.fringe_planes);
    let trajectories = integrate_batch(params, &cfg, &plan.launches, plan.z_start, plan.z_end, &planes)?;
    out.write("trajectories.json", &trajectories_json(&trajectories)?)?;

    let mut maxima = String::from("z,x,value,kind\n");
    for (k, &z) in scenario.fringe_planes.iter().enumerate() {
        let profile = extract_fringe(params, z, (g.z_min, g.z_max), g.x_min, g.x_max, g.nx)?;
        out.write(&format!("fringe_{k}.csv"), profile_csv(&profile).as_bytes())?;
        for m in profile.maxima()? {
            let kind = match m.kind {
                MaximumKind::Principal => "principal",
                MaximumKind::Subsidiary => "subsidiary",
            };
            let _ = writeln!(maxima, "{},{},{},{kind}", fmt_f64(z), fmt_f64(m.x), fmt_f64(m.value));
        }
    }
    out.write("maxima.csv", maxima.as_bytes())?;

    if scenario.far_field {
        out.write("farfield.csv", farfield_csv(scenario, &grid).as_bytes())?;
    }

    let count = |s: TrajectoryStatus| trajectories.iter().filter(|t| t.status == s).count();
    Ok(RunSummary {
        name: scenario.name.clone(),
        talbot_length: scenario.talbot_length(),
        nx: g.nx,
        nz: g.nz,
        trajectories: trajectories.len(),
        completed: count(TrajectoryStatus::Completed),
        aborted_node: count(TrajectoryStatus::AbortedNode),
        aborted_bounds: count(TrajectoryStatus::AbortedBounds),
        files: Vec::new(),
    })
}

pub fn grid_csv(grid: &FieldGrid<f64>) -> String {
    let spec = grid.spec;
    let mut s = String::with_capacity(grid.samples.len() * 25 + spec.nz * 25);
    s.push('z');
    for ix in 0..spec.nx {
        s.push(',');
        s.push_str(&fmt_f64(spec.x_at(ix)));
    }
    s.push('\n');
    for (iz, row) in grid.rows().enumerate() {
        s.push_str(&fmt_f64(spec.z_at(iz)));
        for v in row {
            s.push(',');
            s.push_str(&fmt_f64(*v));
        }
        s.push('\n');
    }
    s
}

/// Axis samples and density rows of a grid file.
pub type ParsedGrid = (Vec<f64>, Vec<f64>, Vec<Vec<f64>>);

/// Parses the output of [`grid_csv`] back into `(xs, zs, rows)`.
pub fn parse_grid_csv(text: &str) -> Result<ParsedGrid> {
    let bad = |m: &str| Error::Config(format!("malformed grid csv: {m}"));
    let parse = |s: &str| s.parse::<f64>().map_err(|_| bad(s));
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty"))?;
    let mut cols = header.split(',');
    if cols.next() != Some("z") {
        return Err(bad("header must start with z"));
    }
    let xs = cols.map(parse).collect::<Result<Vec<_>>>()?;
    let mut zs = Vec::new();
    let mut rows = Vec::new();
    for line in lines {
        let mut cells = line.split(',');
        zs.push(parse(cells.next().ok_or_else(|| bad("empty row"))?)?);
        let row = cells.map(parse).collect::<Result<Vec<_>>>()?;
        if row.len() != xs.len() {
            return Err(bad("row length"));
        }
        rows.push(row);
    }
    Ok((xs, zs, rows))
}

fn profile_csv(p: &FringeProfile) -> String {
    let mut s = String::from("x,density\n");
    for (x, v) in p.xs.iter().zip(&p.values) {
        let _ = writeln!(s, "{},{}", fmt_f64(*x), fmt_f64(*v));
    }
    s
}

#[derive(Serialize)]
struct TrajectoryRecord<'a> {
    launch_x: f64,
    status: TrajectoryStatus,
    points: &'a [[f64; 2]],
}

pub fn trajectories_json(trajectories: &[Trajectory]) -> Result<Vec<u8>> {
    let records: Vec<TrajectoryRecord> = trajectories
        .iter()
        .map(|t| TrajectoryRecord { launch_x: t.launch_x, status: t.status, points: &t.points })
        .collect();
    let mut buf = serde_json::to_vec(&records).map_err(|e| Error::Io(e.into()))?;
    buf.push(b'\n');
    Ok(buf)
}

/// Closed-form far-field intensity next to the directly summed density at
/// the single far-field plane, each max-normalized.
fn farfield_csv(scenario: &Scenario, grid: &FieldGrid<f64>) -> String {
    let spec = grid.spec;
    let z = spec.z_min;
    let points: Vec<_> = (0..spec.nx)
        .map(|ix| far_field_point(&scenario.params, spec.x_at(ix), z))
        .collect();
    let imax = points.iter().map(|p| p.intensity).fold(0.0, f64::max);
    let emax = points.iter().map(|p| p.envelope).fold(0.0, f64::max);
    let direct = grid.row(0);
    let mut s = String::from("x,zeta,envelope,intensity,density\n");
    for (p, d) in points.iter().zip(direct) {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            fmt_f64(p.x),
            fmt_f64(p.zeta),
            fmt_f64(if emax > 0.0 { p.envelope / emax } else { 0.0 }),
            fmt_f64(if imax > 0.0 { p.intensity / imax } else { 0.0 }),
            fmt_f64(*d)
        );
    }
    s
}

/// Tracks written files so a failed run can remove them.
struct OutputSet {
    dir: PathBuf,
    created_dir: bool,
    files: Vec<PathBuf>,
}

impl OutputSet {
    fn new(dir: &Path) -> Result<Self> {
        let created_dir = !dir.exists();
        fs::create_dir_all(dir)?;
        Ok(OutputSet { dir: dir.to_path_buf(), created_dir, files: Vec::new() })
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        self.files.push(path.clone());
        let mut f = fs::File::create(&path)?;
        f.write_all(bytes)?;
        f.flush()?;
        Ok(())
    }

    fn finish(self) -> Vec<PathBuf> {
        self.files
    }

    fn discard(self) {
        for f in &self.files {
            let _ = fs::remove_file(f);
        }
        if self.created_dir {
            let _ = fs::remove_dir(&self.dir);
        }
    }
}
