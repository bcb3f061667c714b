//! Named presets, flat `key=value` configuration files and overrides.
//!
//! A configuration file holds one `key = value` pair per line; `#` starts
//! a comment. Keys mirror [`ScenarioConfig`] field names. Distances along
//! `z` are given in Talbot lengths so that changing the pitch or the
//! wavelength rescales the whole scenario.
//!
//! ```text
//! preset = neutron7        # optional base, must come first
//! wavelength = 0.5
//! slit_count = 7
//! slit_pitch = 5
//! slit_width = 1
//! grid_nx = 1000
//! grid_nz = 800
//! zmax_talbots = 4
//! per_slit = 14
//! fringe_talbots = 0.5, 1
//! ```

use std::str::FromStr;

use crate::bohm::launch_grid_for;
use crate::error::{Error, Result};
use crate::params::ScenarioParams;
use crate::render::Mapping;
use crate::wavefield::GridSpec;

pub const PRESETS: [&str; 5] = ["neutron7", "talbot512", "grating64", "fullerene9", "farfield7"];

/// Unresolved scenario settings as read from a preset, file or flags.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub wavelength: f64,
    pub slit_count: usize,
    pub slit_pitch: f64,
    pub slit_width: f64,
    /// Effective half-width; `a/(2√2)` when unset.
    pub sigma: Option<f64>,
    pub grid_nx: usize,
    pub grid_nz: usize,
    /// Half-width of the sampled `x` window; `N·d/2` when unset.
    pub x_half_span: Option<f64>,
    pub zmax_talbots: f64,
    /// When set, the grid is the single plane `z = far_field_talbots·z_T`.
    pub far_field_talbots: Option<f64>,
    pub per_slit: usize,
    pub half_span_sigmas: f64,
    /// Launch only from this many central slits; all slits when unset.
    pub launch_slits: Option<usize>,
    /// End of the trajectories; the grid's `z` range when unset.
    pub traj_zmax_talbots: Option<f64>,
    pub max_steps: usize,
    pub fringe_talbots: Vec<f64>,
    pub mapping: Mapping,
    pub gamma: f64,
}

impl ScenarioConfig {
    fn base(name: &str, wavelength: f64, slit_count: usize, slit_pitch: f64, slit_width: f64) -> Self {
        ScenarioConfig {
            name: name.to_string(),
            wavelength,
            slit_count,
            slit_pitch,
            slit_width,
            sigma: None,
            grid_nx: 1000,
            grid_nz: 800,
            x_half_span: None,
            zmax_talbots: 4.0,
            far_field_talbots: None,
            per_slit: 14,
            half_span_sigmas: 2.0,
            launch_slits: None,
            traj_zmax_talbots: None,
            max_steps: 200_000,
            fringe_talbots: vec![0.5, 1.0],
            mapping: Mapping::Linear,
            gamma: 1.0,
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        let cfg = match name {
            // thermal neutrons, d = 10λ, a = 2λ
            "neutron7" => ScenarioConfig {
                fringe_talbots: vec![0.5, 1.0, 1.5],
                ..Self::base(name, 0.5, 7, 5.0, 1.0)
            },
            // d = 50λ; the image covers the central 16 slits
            "talbot512" => ScenarioConfig {
                x_half_span: Some(8.0 * 25.0),
                per_slit: 4,
                launch_slits: Some(8),
                traj_zmax_talbots: Some(2.0),
                ..Self::base(name, 0.5, 512, 25.0, 1.0)
            },
            // d = 1000λ, carpet followed out to 20 z_T
            "grating64" => ScenarioConfig {
                zmax_talbots: 20.0,
                per_slit: 2,
                launch_slits: Some(8),
                traj_zmax_talbots: Some(4.0),
                fringe_talbots: vec![0.5, 1.0, 12.0],
                mapping: Mapping::Log,
                gamma: 2.0,
                ..Self::base(name, 0.5, 64, 500.0, 1.0)
            },
            // C60, λ = 5 pm, d = 250 nm, a = 150 nm
            "fullerene9" => ScenarioConfig {
                per_slit: 10,
                ..Self::base(name, 0.005, 9, 250.0, 150.0)
            },
            // neutron7 geometry at z = 1e7·z_T = 1 m
            "farfield7" => ScenarioConfig {
                grid_nx: 2001,
                grid_nz: 1,
                x_half_span: Some(2.5e8),
                far_field_talbots: Some(1e7),
                per_slit: 3,
                half_span_sigmas: 1.0,
                fringe_talbots: vec![1e7],
                mapping: Mapping::Linear,
                ..Self::base(name, 0.5, 7, 5.0, 1.0)
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown preset '{other}' (known: {})",
                    PRESETS.join(", ")
                )))
            }
        };
        Ok(cfg)
    }

    /// Parses a configuration file body. A leading `preset = <name>` line
    /// selects the base; otherwise the `neutron7` preset is the base.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value, got '{raw}'", lineno + 1))
            })?;
            entries.push((lineno + 1, k.trim().to_string(), v.trim().to_string()));
        }
        let mut cfg = match entries.first() {
            Some((_, k, v)) if k == "preset" => Self::preset(v)?,
            _ => {
                let mut c = Self::preset("neutron7")?;
                c.name = "custom".into();
                c
            }
        };
        for (lineno, key, value) in entries {
            if key == "preset" {
                if lineno != 1 && cfg.name != value {
                    return Err(Error::Config(format!("line {lineno}: preset must be the first entry")));
                }
                continue;
            }
            cfg.set(&key, &value)
                .map_err(|e| Error::Config(format!("line {lineno}: {e}")))?;
        }
        Ok(cfg)
    }

    /// Sets one field by its configuration key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "name" => self.name = value.to_string(),
            "wavelength" => self.wavelength = num(key, value)?,
            "slit_count" => self.slit_count = num(key, value)?,
            "slit_pitch" => self.slit_pitch = num(key, value)?,
            "slit_width" => self.slit_width = num(key, value)?,
            "sigma" => self.sigma = Some(num(key, value)?),
            "grid_nx" => self.grid_nx = num(key, value)?,
            "grid_nz" => self.grid_nz = num(key, value)?,
            "x_half_span" => self.x_half_span = Some(num(key, value)?),
            "zmax_talbots" => self.zmax_talbots = num(key, value)?,
            "far_field_talbots" => self.far_field_talbots = Some(num(key, value)?),
            "per_slit" => self.per_slit = num(key, value)?,
            "half_span_sigmas" => self.half_span_sigmas = num(key, value)?,
            "launch_slits" => self.launch_slits = Some(num(key, value)?),
            "traj_zmax_talbots" => self.traj_zmax_talbots = Some(num(key, value)?),
            "max_steps" => self.max_steps = num(key, value)?,
            "fringe_talbots" => {
                self.fringe_talbots = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| num(key, s))
                    .collect::<Result<_>>()?
            }
            "mapping" => {
                self.mapping = match value {
                    "linear" => Mapping::Linear,
                    "log" => Mapping::Log,
                    _ => return Err(Error::Config(format!("mapping must be linear or log, got '{value}'"))),
                }
            }
            "gamma" => self.gamma = num(key, value)?,
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Validates and turns the settings into concrete lengths.
    pub fn resolve(&self) -> Result<Scenario> {
        let params = match self.sigma {
            Some(s) => ScenarioParams::with_sigma(self.wavelength, self.slit_count, self.slit_pitch, self.slit_width, s),
            None => ScenarioParams::new(self.wavelength, self.slit_count, self.slit_pitch, self.slit_width),
        }
        .map_err(|e| Error::Config(e.to_string()))?;
        let zt = params.talbot_length();
        let bad = |m: String| Err(Error::Config(m));

        if self.grid_nx < 2 || self.grid_nz == 0 {
            return bad(format!("grid must be at least 2x1, got {}x{}", self.grid_nx, self.grid_nz));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return bad(format!("gamma must be > 0, got {}", self.gamma));
        }
        let half = self
            .x_half_span
            .unwrap_or(self.slit_count as f64 * self.slit_pitch / 2.0);
        if !(half > 0.0 && half.is_finite()) {
            return bad(format!("x_half_span must be > 0, got {half}"));
        }
        let grid = match self.far_field_talbots {
            Some(f) => {
                if !(f > 0.0 && f.is_finite()) {
                    return bad(format!("far_field_talbots must be > 0, got {f}"));
                }
                let z = f * zt;
                GridSpec { x_min: -half, x_max: half, nx: self.grid_nx, z_min: z, z_max: z, nz: 1 }
            }
            None => {
                if !(self.zmax_talbots > 0.0 && self.zmax_talbots.is_finite()) {
                    return bad(format!("zmax_talbots must be > 0, got {}", self.zmax_talbots));
                }
                let z_max = self.zmax_talbots * zt;
                GridSpec {
                    x_min: -half,
                    x_max: half,
                    nx: self.grid_nx,
                    z_min: z_max / self.grid_nz as f64,
                    z_max,
                    nz: self.grid_nz,
                }
            }
        };
        grid.validate().map_err(|e| Error::Config(e.to_string()))?;

        let mut fringe_planes = Vec::with_capacity(self.fringe_talbots.len());
        for &f in &self.fringe_talbots {
            let z = f * zt;
            if !(z >= grid.z_min && z <= grid.z_max) {
                return bad(format!(
                    "fringe plane {f} z_T = {z} nm outside grid range [{}, {}] nm",
                    grid.z_min, grid.z_max
                ));
            }
            fringe_planes.push(z);
        }

        let traj_end = match self.traj_zmax_talbots {
            Some(t) if !(t > 0.0 && t.is_finite()) => return bad(format!("traj_zmax_talbots must be > 0, got {t}")),
            Some(t) => t * zt,
            None => grid.z_max,
        };
        if self.per_slit == 0 {
            return bad("per_slit must be >= 1".into());
        }
        if !(self.half_span_sigmas >= 0.0 && self.half_span_sigmas.is_finite()) {
            return bad(format!("half_span_sigmas must be >= 0, got {}", self.half_span_sigmas));
        }
        if self.max_steps == 0 {
            return bad("max_steps must be >= 1".into());
        }
        let n = self.slit_count;
        let central = self.launch_slits.unwrap_or(n).clamp(1, n);
        let first = (n - central) / 2;
        let launches = launch_grid_for(&params, first..first + central, self.per_slit, self.half_span_sigmas);

        Ok(Scenario {
            name: self.name.clone(),
            params,
            grid,
            far_field: self.far_field_talbots.is_some(),
            trajectories: TrajectoryPlan {
                launches,
                z_start: 0.0,
                z_end: traj_end,
                max_steps: self.max_steps,
            },
            fringe_planes,
            mapping: self.mapping,
            gamma: self.gamma,
        })
    }
}

fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse '{value}'")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPlan {
    pub launches: Vec<f64>,
    pub z_start: f64,
    pub z_end: f64,
    pub max_steps: usize,
}

/// A fully resolved run description.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub params: ScenarioParams,
    pub grid: GridSpec,
    /// Single-plane far-field run; also emits the closed-form comparison.
    pub far_field: bool,
    pub trajectories: TrajectoryPlan,
    pub fringe_planes: Vec<f64>,
    pub mapping: Mapping,
    pub gamma: f64,
}

impl Scenario {
    pub fn preset(name: &str) -> Result<Self> {
        ScenarioConfig::preset(name)?.resolve()
    }

    pub fn talbot_length(&self) -> f64 {
        self.params.talbot_length()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_resolves() {
        for name in PRESETS {
            let s = Scenario::preset(name).unwrap();
            assert_eq!(s.name, name);
            assert!(!s.trajectories.launches.is_empty());
        }
        assert!(matches!(Scenario::preset("nope"), Err(Error::Config(_))));
    }

    #[test]
    fn preset_talbot_lengths() {
        let zt = |n: &str| Scenario::preset(n).unwrap().talbot_length();
        assert_eq!(zt("neutron7"), 100.0);
        assert_eq!(zt("talbot512"), 2500.0);
        assert_eq!(zt("grating64"), 1.0e6);
        assert_eq!(zt("fullerene9"), 2.5e7);
        assert_eq!(zt("farfield7"), 100.0);
    }

    #[test]
    fn neutron7_defaults() {
        let s = Scenario::preset("neutron7").unwrap();
        assert_eq!((s.grid.nx, s.grid.nz), (1000, 800));
        assert_eq!(s.grid.x_min, -17.5);
        assert_eq!(s.grid.z_max, 400.0);
        assert_eq!(s.grid.z_min, 0.5);
        assert_eq!(s.trajectories.launches.len(), 98);
        assert_eq!(s.trajectories.z_end, 400.0);
    }

    #[test]
    fn farfield_is_single_plane() {
        let s = Scenario::preset("farfield7").unwrap();
        assert!(s.far_field);
        assert_eq!((s.grid.nz, s.grid.z_min, s.grid.z_max), (1, 1e9, 1e9));
        assert_eq!(s.fringe_planes, vec![1e9]);
    }

    #[test]
    fn parse_file_with_preset_and_comments() {
        let text = "preset = fullerene9\n# comment\ngrid_nx = 64 # trailing\nfringe_talbots = 0.5, 1\n";
        let cfg = ScenarioConfig::parse(text).unwrap();
        assert_eq!(cfg.name, "fullerene9");
        assert_eq!(cfg.grid_nx, 64);
        assert_eq!(cfg.fringe_talbots, vec![0.5, 1.0]);
    }

    #[test]
    fn parse_errors() {
        assert!(ScenarioConfig::parse("grid_nx 5").is_err());
        assert!(ScenarioConfig::parse("bogus = 1").is_err());
        assert!(ScenarioConfig::parse("grid_nx = many").is_err());
        assert!(ScenarioConfig::parse("grid_nx = 5\npreset = neutron7").is_err());
        assert!(ScenarioConfig::parse("mapping = sqrt").is_err());
    }

    #[test]
    fn width_override_moves_sigma() {
        let mut cfg = ScenarioConfig::preset("neutron7").unwrap();
        cfg.set("slit_width", "2").unwrap();
        let s = cfg.resolve().unwrap();
        assert!((s.params.sigma() - 2.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
        cfg.set("slit_width", "6").unwrap();
        assert!(matches!(cfg.resolve(), Err(Error::Config(_))));
    }

    #[test]
    fn fringe_outside_grid_is_config_error() {
        let mut cfg = ScenarioConfig::preset("neutron7").unwrap();
        cfg.set("fringe_talbots", "5").unwrap();
        assert!(matches!(cfg.resolve(), Err(Error::Config(_))));
    }

    #[test]
    fn central_launch_subset() {
        let s = Scenario::preset("talbot512").unwrap();
        let l = &s.trajectories.launches;
        assert_eq!(l.len(), 32);
        let d = s.params.slit_pitch();
        assert!(l.iter().all(|x| x.abs() < 4.0 * d));
    }
}
