//! Figure reproduction: curve data, plot scripts and shape checks.

use std::fmt;
use std::str::FromStr;

use optocool::analytic::{self, STANDARD_QUANTUM_LIMIT};
use optocool::exec::map_slice;
use optocool::model::{DimensionlessParams, RelativeFrame};
use optocool::{Execution, SystemParams};

use crate::config::{grid, Scale};
use crate::error::{CliError, CliResult};
use crate::output::{FigurePoint, PlotSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureName {
    /// Cold-damping energy versus power for several gains.
    Fig3,
    /// Momentum-feedback energy versus power for several gains.
    Fig4,
    /// Momentum-feedback energy versus power for several quality factors.
    Fig5,
    /// Position–momentum correlation versus power.
    Fig6Qp,
    /// Position variance versus power against the standard quantum limit.
    Fig6Squeeze,
    /// Ring entanglement marker versus gain.
    Fig7,
}

impl FigureName {
    pub const ALL: [FigureName; 6] = [
        FigureName::Fig3,
        FigureName::Fig4,
        FigureName::Fig5,
        FigureName::Fig6Qp,
        FigureName::Fig6Squeeze,
        FigureName::Fig7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureName::Fig3 => "fig3",
            FigureName::Fig4 => "fig4",
            FigureName::Fig5 => "fig5",
            FigureName::Fig6Qp => "fig6_qp",
            FigureName::Fig6Squeeze => "fig6_squeeze",
            FigureName::Fig7 => "fig7",
        }
    }
}

impl fmt::Display for FigureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureName {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        FigureName::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                CliError::Validation(format!(
                    "unknown figure `{s}`; expected one of fig3, fig4, fig5, fig6_qp, fig6_squeeze, fig7"
                ))
            })
    }
}

/// Parameters of one figure; defaults follow the captions.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureSettings {
    pub theta: f64,
    pub eta: f64,
    pub quality: f64,
    pub cutoff_ratio: f64,
    /// Gain held fixed when the curves differ in quality factor.
    pub gain: f64,
    /// One curve per value.
    pub series: Vec<f64>,
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

impl FigureSettings {
    pub fn defaults(fig: FigureName) -> Self {
        let base = Self {
            theta: 1e5,
            eta: 0.8,
            quality: 1e4,
            cutoff_ratio: 100.0,
            gain: 1e7,
            series: vec![],
            x_min: 1.0,
            x_max: 1e9,
            points: 241,
        };
        match fig {
            FigureName::Fig3 => Self {
                series: vec![10.0, 1e3, 1e5, 1e7],
                ..base
            },
            FigureName::Fig4 => Self {
                quality: 1e7,
                series: vec![10.0, 1e3, 1e5, 1e7],
                ..base
            },
            FigureName::Fig5 => Self {
                series: vec![1e3, 1e5, 1e7],
                x_max: 1e12,
                points: 331,
                ..base
            },
            FigureName::Fig6Qp => Self {
                series: vec![1e5, 1e6, 1e7],
                x_min: 1e-3,
                x_max: 1e3,
                ..base
            },
            FigureName::Fig6Squeeze => Self {
                series: vec![1e7, 1e9],
                x_min: 1e4,
                x_max: 1e13,
                ..base
            },
            FigureName::Fig7 => Self {
                series: vec![1e3, 3e3, 1e4],
                x_min: 1e14,
                x_max: 1e22,
                ..base
            },
        }
    }

    /// Accepts the keys that make sense for a figure.
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let num = |v: &str| -> CliResult<f64> {
            v.parse().map_err(|_| {
                CliError::Validation(format!("invalid value for `{key}`: expected a number, got `{v}`"))
            })
        };
        match key {
            "theta" => self.theta = num(value)?,
            "eta" => self.eta = num(value)?,
            "quality" => self.quality = num(value)?,
            "cutoff_ratio" => self.cutoff_ratio = num(value)?,
            "gain" => self.gain = num(value)?,
            "series" => {
                self.series = value
                    .split(',')
                    .map(|s| num(s.trim()))
                    .collect::<CliResult<_>>()?
            }
            "sweep_min" => self.x_min = num(value)?,
            "sweep_max" => self.x_max = num(value)?,
            "sweep_points" => {
                self.points = value.parse().map_err(|_| {
                    CliError::Validation(format!(
                        "invalid value for `sweep_points`: expected an integer, got `{value}`"
                    ))
                })?
            }
            _ => {
                return Err(CliError::Validation(format!(
                    "key `{key}` cannot be overridden for figures"
                )))
            }
        }
        Ok(())
    }

    fn validate(&self) -> CliResult<()> {
        let bad = |key: &str, why: &str| {
            Err(CliError::Validation(format!("invalid value for `{key}`: {why}")))
        };
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return bad("eta", "must lie in (0, 1]");
        }
        if !(self.theta >= 0.0) {
            return bad("theta", "must be >= 0");
        }
        if !(self.quality > 0.0) {
            return bad("quality", "must be > 0");
        }
        if !(self.x_min > 0.0 && self.x_max > self.x_min) {
            return bad("sweep_min", "need 0 < sweep_min < sweep_max on a log axis");
        }
        if self.points < 3 {
            return bad("sweep_points", "need at least 3 points");
        }
        if self.series.is_empty() || self.series.iter().any(|v| !(*v > 0.0)) {
            return bad("series", "need at least one positive value");
        }
        Ok(())
    }

    fn system(&self, quality: f64, zeta: f64) -> CliResult<SystemParams> {
        Ok(SystemParams::dimensionless(DimensionlessParams {
            quality,
            theta: self.theta,
            eta: self.eta,
            cutoff_ratio: self.cutoff_ratio,
            zeta,
            ..Default::default()
        })?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub description: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub name: FigureName,
    pub settings: FigureSettings,
    pub points: Vec<FigurePoint>,
    pub plot: PlotSpec,
    /// `(series id, legend)` in plotting order.
    pub legend: Vec<(String, String)>,
}

fn label(i: usize) -> String {
    char::from(b'a' + (i % 26) as u8).to_string()
}

fn sci(v: f64) -> String {
    let e = v.log10();
    if (e - e.round()).abs() < 1e-12 {
        format!("10^{{{}}}", e.round() as i64)
    } else {
        let m = v / 10f64.powf(e.floor());
        format!("{m}x10^{{{}}}", e.floor() as i64)
    }
}

/// Computes every curve of a figure.
pub fn generate(name: FigureName, settings: &FigureSettings, exec: Execution) -> CliResult<FigureData> {
    settings.validate()?;
    let s = settings;
    let xs = grid(Scale::Log, s.x_min, s.x_max, s.points);
    let energy = "2U_{st}/hbar omega_m";
    let zeta = "rescaled input power zeta";
    let (title, xlabel, ylabel, logy, reference, param): (&str, &str, &str, bool, Option<(f64, String)>, &str) =
        match name {
            FigureName::Fig3 => ("Cold damping: rescaled steady-state energy", zeta, energy, true, None, "g_2"),
            FigureName::Fig4 => ("Momentum feedback: rescaled steady-state energy", zeta, energy, true, None, "g_1"),
            FigureName::Fig5 => ("Momentum feedback: energy for increasing quality factor", zeta, energy, true, None, "Q"),
            FigureName::Fig6Qp => (
                "Steady state position-momentum correlation",
                zeta,
                "-<QP+PQ>_{st}",
                false,
                None,
                "g_1",
            ),
            FigureName::Fig6Squeeze => (
                "Steady state position variance",
                zeta,
                "<Q^2>_{st}",
                true,
                Some((STANDARD_QUANTUM_LIMIT, "standard quantum limit 1/4".to_string())),
                "g_1",
            ),
            FigureName::Fig7 => (
                "Marker of entanglement of the ring mirrors",
                "feedback gain g",
                "E",
                true,
                Some((1.0, "E = 1".to_string())),
                "Q",
            ),
        };
    let mut points = Vec::new();
    let mut legend = Vec::new();
    for (i, &p) in s.series.iter().enumerate() {
        let id = label(i);
        legend.push((id.clone(), format!("{id}: {param} = {}", sci(p))));
        let ys = map_slice(exec, &xs, |&x| curve_value(name, s, p, x));
        for (x, y) in xs.iter().zip(ys) {
            points.push(FigurePoint {
                series: id.clone(),
                parameter: p,
                x: *x,
                y: y?,
            });
        }
    }
    Ok(FigureData {
        name,
        settings: s.clone(),
        points,
        plot: PlotSpec {
            title: format!(
                "{title} (k_BT/hbar omega_m = {}, eta = {})",
                sci(s.theta),
                s.eta
            ),
            xlabel: xlabel.into(),
            ylabel: ylabel.into(),
            logx: true,
            logy,
            reference,
        },
        legend,
    })
}

fn curve_value(name: FigureName, s: &FigureSettings, p: f64, x: f64) -> CliResult<f64> {
    Ok(match name {
        FigureName::Fig3 => analytic::cold_damping_state(&s.system(s.quality, x)?, p, false)?.energy_units,
        FigureName::Fig4 => {
            analytic::momentum_feedback_state(&s.system(s.quality, x)?, p, false)?.energy_units
        }
        FigureName::Fig5 => {
            analytic::momentum_feedback_state(&s.system(p, x)?, s.gain, false)?.energy_units
        }
        FigureName::Fig6Qp => {
            -2.0 * analytic::momentum_feedback_state(&s.system(s.quality, x)?, p, false)?.qp_sym
        }
        FigureName::Fig6Squeeze => {
            analytic::momentum_feedback_state(&s.system(s.quality, x)?, p, false)?.q2
        }
        FigureName::Fig7 => {
            let frame = RelativeFrame {
                system: s.system(p, 1.0)?,
                ring_zeta: 1.0,
                center_of_mass_thermal_only: true,
            };
            analytic::entanglement_marker(&frame, x, s.cutoff_ratio, None)?.marker
        }
    })
}

impl FigureData {
    /// Points of each curve, in legend order.
    pub fn curves(&self) -> Vec<(f64, Vec<(f64, f64)>)> {
        self.legend
            .iter()
            .map(|(id, _)| {
                let pts: Vec<&FigurePoint> = self.points.iter().filter(|p| &p.series == id).collect();
                (pts[0].parameter, pts.iter().map(|p| (p.x, p.y)).collect())
            })
            .collect()
    }

    /// Qualitative statements the figure is meant to show.
    pub fn checks(&self) -> Vec<Check> {
        check_curves(self.name, &self.settings, &self.curves())
    }
}

fn argmin(c: &[(f64, f64)]) -> (usize, f64, f64) {
    let (i, &(x, y)) = c
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .expect("non-empty curve");
    (i, x, y)
}

/// First `x` where `y - level` changes sign, by log-linear interpolation.
fn crossing(c: &[(f64, f64)], level: f64) -> Option<f64> {
    c.windows(2).find_map(|w| {
        let (a, b) = (w[0].1 - level, w[1].1 - level);
        (a.signum() != b.signum() && a != 0.0).then(|| {
            let t = a / (a - b);
            (w[0].0.ln() + t * (w[1].0.ln() - w[0].0.ln())).exp()
        })
    })
}

fn list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.4e}")).collect();
    format!("[{}]", items.join(", "))
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}

/// Shape assertions evaluated on curve data; usable on data read back
/// from CSV.
pub fn check_curves(name: FigureName, s: &FigureSettings, curves: &[(f64, Vec<(f64, f64)>)]) -> Vec<Check> {
    let mut out = Vec::new();
    let mut push = |passed: bool, description: String| out.push(Check { description, passed });
    if curves.is_empty() || curves.iter().any(|c| c.1.is_empty()) {
        push(false, "figure has data for every curve".into());
        return out;
    }
    let step = (s.x_max / s.x_min).ln() / (s.points - 1) as f64;
    let interior = |c: &[(f64, f64)]| {
        let (i, _, _) = argmin(c);
        i > 0 && i + 1 < c.len()
    };
    match name {
        FigureName::Fig3 | FigureName::Fig4 | FigureName::Fig5 => {
            let all_interior = curves.iter().all(|c| interior(&c.1));
            push(all_interior, "every energy curve has an interior minimum in zeta".into());
            let minima: Vec<f64> = curves.iter().map(|c| argmin(&c.1).2).collect();
            let what = if name == FigureName::Fig5 { "quality factor" } else { "gain" };
            push(
                strictly_decreasing(&minima),
                format!("higher {what} gives a lower minimum energy: {}", list(&minima)),
            );
            match name {
                FigureName::Fig3 => {
                    let located = curves.iter().all(|(g, c)| {
                        let (_, x, _) = argmin(c);
                        (x / (g / s.eta.sqrt())).ln().abs() <= step
                    });
                    push(located, "minima sit at zeta = g_2/sqrt(eta) to grid resolution".into());
                    let (g, c) = curves.last().unwrap();
                    let e = argmin(c).2;
                    let expected = g / (1.0 + g) * (1.0 / s.eta.sqrt() + 2.0 * s.theta / g);
                    push(
                        (e / expected - 1.0).abs() < 1e-3,
                        format!("highest-gain minimum {e:.6} matches {expected:.6}"),
                    );
                }
                FigureName::Fig4 => {
                    let e = *minima.last().unwrap();
                    push(e < 2.0, format!("highest gain cools below one quantum (energy {e:.4})"));
                }
                _ => {
                    let n = minima.len();
                    let only_last = minima[..n - 1].iter().all(|&e| e > 2.0) && minima[n - 1] < 2.0;
                    push(
                        only_last,
                        format!("only the largest quality factor reaches energy near 1: {}", list(&minima)),
                    );
                }
            }
        }
        FigureName::Fig6Qp => {
            let mut zc = Vec::new();
            let mut all = true;
            for (g, c) in curves {
                let expected = (g / s.eta) / (2.0 * s.theta + ((2.0 * s.theta).powi(2) + g / s.eta).sqrt());
                let starts_positive = c[0].1 > 0.0 && c.last().unwrap().1 < 0.0;
                let found = crossing(c, 0.0);
                let ok = starts_positive
                    && found.is_some_and(|z| (z / expected).ln().abs() <= step);
                all &= ok;
                zc.push(found.unwrap_or(f64::NAN));
            }
            push(
                all,
                "correlation changes sign once, at eta zeta (zeta + 4 theta) = g_1".into(),
            );
            push(
                strictly_increasing(&zc),
                format!("sign change moves to larger power with the gain: {}", list(&zc)),
            );
        }
        FigureName::Fig6Squeeze => {
            for (g, c) in curves {
                let m = argmin(c).2;
                let beats = m < STANDARD_QUANTUM_LIMIT;
                let expect_beat = *g >= 1e9;
                push(
                    beats == expect_beat,
                    format!(
                        "g_1 = {g:e}: minimum <Q^2> = {m:.4} {} 1/4",
                        if expect_beat { "below" } else { "above" }
                    ),
                );
            }
        }
        FigureName::Fig7 => {
            let monotone = curves
                .iter()
                .all(|(_, c)| c.windows(2).all(|w| w[1].1 <= w[0].1));
            push(monotone, "marker decreases with the gain".into());
            let xs: Vec<f64> = curves
                .iter()
                .map(|(_, c)| crossing(c, 1.0).unwrap_or(f64::NAN))
                .collect();
            push(
                xs.iter().all(|x| x.is_finite()),
                format!("every curve crosses E = 1 at finite gain: {}", list(&xs)),
            );
            push(
                strictly_increasing(&xs),
                "larger quality factor needs a larger gain to entangle".into(),
            );
        }
    }
    out
}
