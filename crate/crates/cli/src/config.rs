//! Flat `key = value` run configuration.
//!
//! ```text
//! # cold damping at the optimum power
//! scheme = cold-damping
//! gain = 100
//! zeta = 111.80339887498948
//! theta = 1e5
//! ```
//!
//! Blank lines and `#` comments are ignored. List values are
//! comma-separated. Command-line overrides go through [`RunConfig::set`], so
//! they are validated exactly like file entries.

use std::path::{Path, PathBuf};

use optocool::langevin::Form;
use optocool::model::{DimensionlessParams, FeedbackScheme, SystemParams};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    ColdDamping,
    Momentum,
    Ring,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Zeta,
    Gain,
    Quality,
    Theta,
    Eta,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Zeta => "zeta",
            SweepVariable::Gain => "gain",
            SweepVariable::Quality => "quality",
            SweepVariable::Theta => "theta",
            SweepVariable::Eta => "eta",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "zeta" => SweepVariable::Zeta,
            "gain" => SweepVariable::Gain,
            "quality" => SweepVariable::Quality,
            "theta" => SweepVariable::Theta,
            "eta" => SweepVariable::Eta,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub scale: Scale,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    /// Optional second parameter, one curve per value.
    pub series_variable: Option<SweepVariable>,
    pub series: Vec<f64>,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        grid(self.scale, self.min, self.max, self.points)
    }
}

/// `points` values from `min` to `max` inclusive.
pub fn grid(scale: Scale, min: f64, max: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![min];
    }
    let step = 1.0 / (points - 1) as f64;
    (0..points)
        .map(|i| {
            let t = i as f64 * step;
            match scale {
                Scale::Linear => min + (max - min) * t,
                Scale::Log => (min.ln() + (max.ln() - min.ln()) * t).exp(),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSpec {
    pub n_traj: usize,
    /// Recorded steps; default covers `20 / (γ(1+g))`.
    pub n_steps: Option<usize>,
    /// Default is the largest admissible step.
    pub dt: Option<f64>,
    pub burn_in: Option<f64>,
    pub form: Form,
    pub dump: Option<PathBuf>,
    pub dump_stride: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: DimensionlessParams,
    pub scheme: SchemeKind,
    pub gain: f64,
    /// Ring power; defaults to the power minimising `<Q_-^2>`.
    pub ring_zeta: Option<f64>,
    pub log_correction: bool,
    sweep_variable: Option<SweepVariable>,
    sweep_scale: Scale,
    sweep_range: Option<(f64, f64)>,
    sweep_points: usize,
    series_variable: Option<SweepVariable>,
    series: Vec<f64>,
    pub gain_ladder: Vec<f64>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub sim: SimulationSpec,
    /// Relative tolerance of the spectral quadrature.
    pub quad_rel_tol: f64,
    /// Allowed relative deviation of the spectral oracle in `--verify`.
    pub spectral_tol: f64,
    /// Allowed relative deviation of the Lyapunov solution in `--verify`.
    pub lyapunov_tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: DimensionlessParams::default(),
            scheme: SchemeKind::ColdDamping,
            gain: 0.0,
            ring_zeta: None,
            log_correction: false,
            sweep_variable: None,
            sweep_scale: Scale::Log,
            sweep_range: None,
            sweep_points: 50,
            series_variable: None,
            series: Vec::new(),
            gain_ladder: Vec::new(),
            out: None,
            seed: 1,
            sim: SimulationSpec {
                n_traj: 200,
                n_steps: None,
                dt: None,
                burn_in: None,
                form: Form::Adiabatic,
                dump: None,
                dump_stride: 1,
            },
            quad_rel_tol: 1e-10,
            spectral_tol: 1e-3,
            lyapunov_tol: 1e-6,
        }
    }
}

fn number(key: &str, value: &str) -> Result<f64, String> {
    value
        .parse::<f64>()
        .map_err(|_| format!("invalid value for `{key}`: expected a number, got `{value}`"))
}

fn integer<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse::<T>()
        .map_err(|_| format!("invalid value for `{key}`: expected an integer, got `{value}`"))
}

fn list(key: &str, value: &str) -> Result<Vec<f64>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| number(key, s))
        .collect()
}

fn boolean(key: &str, value: &str) -> Result<bool, String> {
    match value {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(format!("invalid value for `{key}`: expected true or false, got `{value}`")),
    }
}

fn variable(key: &str, value: &str) -> Result<SweepVariable, String> {
    SweepVariable::parse(value).ok_or_else(|| {
        format!("invalid value for `{key}`: expected zeta, gain, quality, theta or eta, got `{value}`")
    })
}

/// Keys accepted by [`RunConfig::set`].
pub const KEYS: &[&str] = &[
    "theta",
    "eta",
    "quality",
    "cutoff_ratio",
    "gamma_c_over_omega_m",
    "zeta",
    "scheme",
    "gain",
    "ring_zeta",
    "log_correction",
    "sweep_variable",
    "sweep_scale",
    "sweep_min",
    "sweep_max",
    "sweep_points",
    "series_variable",
    "series",
    "gain_ladder",
    "out",
    "seed",
    "n_traj",
    "n_steps",
    "dt",
    "burn_in",
    "form",
    "dump",
    "dump_stride",
    "quad_rel_tol",
    "spectral_tol",
    "lyapunov_tol",
];

impl RunConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Validation(format!("line {}: expected `key = value`, got `{line}`", i + 1))
            })?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| CliError::Validation(format!("line {}: {e}", i + 1)))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Validation(format!("cannot read config `{}`: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    /// Sets one key. Values are checked for syntax here and for physical
    /// range in [`RunConfig::validate`].
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "theta" => self.params.theta = number(key, value)?,
            "eta" => self.params.eta = number(key, value)?,
            "quality" => self.params.quality = number(key, value)?,
            "cutoff_ratio" => self.params.cutoff_ratio = number(key, value)?,
            "gamma_c_over_omega_m" | "gamma_c" => self.params.gamma_c = number(key, value)?,
            "zeta" => self.params.zeta = number(key, value)?,
            "scheme" => {
                self.scheme = match value {
                    "cold-damping" | "cold_damping" => SchemeKind::ColdDamping,
                    "momentum" | "momentum-feedback" => SchemeKind::Momentum,
                    "ring" => SchemeKind::Ring,
                    _ => {
                        return Err(format!(
                            "invalid value for `scheme`: expected cold-damping, momentum or ring, got `{value}`"
                        ))
                    }
                }
            }
            "gain" => self.gain = number(key, value)?,
            "ring_zeta" => self.ring_zeta = Some(number(key, value)?),
            "log_correction" => self.log_correction = boolean(key, value)?,
            "sweep_variable" => self.sweep_variable = Some(variable(key, value)?),
            "sweep_scale" => {
                self.sweep_scale = match value {
                    "log" => Scale::Log,
                    "linear" => Scale::Linear,
                    _ => {
                        return Err(format!(
                            "invalid value for `sweep_scale`: expected log or linear, got `{value}`"
                        ))
                    }
                }
            }
            "sweep_min" => {
                let v = number(key, value)?;
                self.sweep_range = Some((v, self.sweep_range.map_or(v, |r| r.1)));
            }
            "sweep_max" => {
                let v = number(key, value)?;
                self.sweep_range = Some((self.sweep_range.map_or(v, |r| r.0), v));
            }
            "sweep_points" => self.sweep_points = integer(key, value)?,
            "series_variable" => self.series_variable = Some(variable(key, value)?),
            "series" => self.series = list(key, value)?,
            "gain_ladder" => self.gain_ladder = list(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "seed" => self.seed = integer(key, value)?,
            "n_traj" => self.sim.n_traj = integer(key, value)?,
            "n_steps" => self.sim.n_steps = Some(integer(key, value)?),
            "dt" => self.sim.dt = Some(number(key, value)?),
            "burn_in" => self.sim.burn_in = Some(number(key, value)?),
            "form" => {
                self.sim.form = match value {
                    "adiabatic" => Form::Adiabatic,
                    "full" => Form::Full,
                    _ => {
                        return Err(format!(
                            "invalid value for `form`: expected adiabatic or full, got `{value}`"
                        ))
                    }
                }
            }
            "dump" => self.sim.dump = Some(PathBuf::from(value)),
            "dump_stride" => self.sim.dump_stride = integer(key, value)?,
            "quad_rel_tol" => self.quad_rel_tol = number(key, value)?,
            "spectral_tol" => self.spectral_tol = number(key, value)?,
            "lyapunov_tol" => self.lyapunov_tol = number(key, value)?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Range checks; every message names the offending key.
    pub fn validate(&self) -> CliResult<()> {
        let p = &self.params;
        let bad = |key: &str, why: &str, v: f64| {
            Err(CliError::Validation(format!("invalid value for `{key}`: {why}, got {v}")))
        };
        if !(p.theta >= 0.0 && p.theta.is_finite()) {
            return bad("theta", "must be finite and >= 0", p.theta);
        }
        if !(p.eta > 0.0 && p.eta <= 1.0) {
            return bad("eta", "must lie in (0, 1]", p.eta);
        }
        if !(p.quality > 0.0 && p.quality.is_finite()) {
            return bad("quality", "must be finite and > 0", p.quality);
        }
        if !(p.cutoff_ratio > 0.0) {
            return bad("cutoff_ratio", "must be > 0", p.cutoff_ratio);
        }
        if self.log_correction && !(p.cutoff_ratio > 1.0) {
            return bad("cutoff_ratio", "must exceed 1 with log_correction", p.cutoff_ratio);
        }
        if !(p.gamma_c > 0.0 && p.gamma_c.is_finite()) {
            return bad("gamma_c_over_omega_m", "must be finite and > 0", p.gamma_c);
        }
        if !(p.zeta >= 0.0 && p.zeta.is_finite()) {
            return bad("zeta", "must be finite and >= 0", p.zeta);
        }
        if !(self.gain >= 0.0 && self.gain.is_finite()) {
            return bad("gain", "must be finite and >= 0", self.gain);
        }
        if let Some(z) = self.ring_zeta {
            if !(z >= 0.0 && z.is_finite()) {
                return bad("ring_zeta", "must be finite and >= 0", z);
            }
        }
        if self.sweep_variable.is_some() {
            if self.sweep_points == 0 {
                return Err(CliError::Validation(
                    "invalid value for `sweep_points`: must be >= 1".into(),
                ));
            }
            let (lo, hi) = self.sweep_range.ok_or_else(|| {
                CliError::Validation("missing key `sweep_min`/`sweep_max` for the sweep".into())
            })?;
            if self.sweep_scale == Scale::Log && !(lo > 0.0) {
                return bad("sweep_min", "must be > 0 on a log scale", lo);
            }
            if self.sweep_scale == Scale::Log && !(hi > 0.0) {
                return bad("sweep_max", "must be > 0 on a log scale", hi);
            }
        }
        if self.series_variable.is_some() && self.series.is_empty() {
            return Err(CliError::Validation(
                "missing key `series` for the given `series_variable`".into(),
            ));
        }
        if self.series_variable.is_some() && self.series_variable == self.sweep_variable {
            return Err(CliError::Validation(
                "invalid value for `series_variable`: must differ from `sweep_variable`".into(),
            ));
        }
        if self.sim.n_traj < 2 {
            return Err(CliError::Validation(format!(
                "invalid value for `n_traj`: must be >= 2, got {}",
                self.sim.n_traj
            )));
        }
        if let Some(dt) = self.sim.dt {
            if !(dt > 0.0) {
                return bad("dt", "must be > 0", dt);
            }
        }
        if let Some(b) = self.sim.burn_in {
            if !(b >= 0.0) {
                return bad("burn_in", "must be >= 0", b);
            }
        }
        if !(self.quad_rel_tol > 0.0) {
            return bad("quad_rel_tol", "must be > 0", self.quad_rel_tol);
        }
        Ok(())
    }

    pub fn sweep(&self) -> Option<SweepSpec> {
        let variable = self.sweep_variable?;
        let (min, max) = self.sweep_range?;
        Some(SweepSpec {
            variable,
            scale: self.sweep_scale,
            min,
            max,
            points: self.sweep_points,
            series_variable: self.series_variable,
            series: self.series.clone(),
        })
    }

    pub fn system(&self) -> CliResult<SystemParams> {
        Ok(SystemParams::dimensionless(self.params)?)
    }

    /// The ring power actually used: explicit, or optimal for the gain.
    pub fn effective_ring_zeta(&self) -> f64 {
        self.ring_zeta.unwrap_or_else(|| {
            if self.gain > 0.0 {
                optocool::analytic::squeezing_optimal_zeta(
                    self.gain,
                    self.params.quality,
                    self.params.eta,
                )
            } else {
                self.params.zeta
            }
        })
    }

    pub fn feedback(&self) -> FeedbackScheme {
        match self.scheme {
            SchemeKind::ColdDamping => FeedbackScheme::ColdDamping { gain: self.gain },
            SchemeKind::Momentum => FeedbackScheme::MomentumFeedback { gain: self.gain },
            SchemeKind::Ring => FeedbackScheme::RingRelative {
                gain: self.gain,
                ring_zeta: self.effective_ring_zeta(),
            },
        }
    }

    /// Applies one swept value.
    pub fn with_value(&self, var: SweepVariable, v: f64) -> Self {
        let mut c = self.clone();
        match var {
            SweepVariable::Zeta => {
                c.params.zeta = v;
                if c.scheme == SchemeKind::Ring {
                    c.ring_zeta = Some(v);
                }
            }
            SweepVariable::Gain => c.gain = v,
            SweepVariable::Quality => c.params.quality = v,
            SweepVariable::Theta => c.params.theta = v,
            SweepVariable::Eta => c.params.eta = v,
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blank_lines() {
        let cfg = RunConfig::parse("# header\n\ntheta = 10 # inline\nscheme = momentum\ngain=3\n")
            .unwrap();
        assert_eq!(cfg.params.theta, 10.0);
        assert_eq!(cfg.scheme, SchemeKind::Momentum);
        assert_eq!(cfg.gain, 3.0);
    }

    #[test]
    fn reports_line_and_key() {
        let err = RunConfig::parse("theta = 1\neta = abc\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2") && msg.contains("`eta`"), "{msg}");
        let err = RunConfig::parse("bogus = 1\n").unwrap_err();
        assert!(err.to_string().contains("unknown key `bogus`"));
    }

    #[test]
    fn validation_names_key() {
        let mut cfg = RunConfig::default();
        cfg.set("eta", "0").unwrap();
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("`eta`"), "{msg}");
    }

    #[test]
    fn log_grid_endpoints() {
        let g = grid(Scale::Log, 1.0, 1e9, 10);
        assert_eq!(g.len(), 10);
        assert!((g[0] - 1.0).abs() < 1e-15);
        assert!((g[9] / 1e9 - 1.0).abs() < 1e-12);
        assert!((g[1] / 10.0 - 1.0).abs() < 1e-12);
    }
}
