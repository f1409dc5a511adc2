//! Frequency-domain oracle for the stationary variances.
//!
//! Each variance is `(1/2pi) ∫ dω K(ω)` over the real line, where the kernel
//! `K` is even; we integrate over `ω >= 0` and divide by `pi`.
//!
//! # Transfer functions
//!
//! With `ω_m = 1`, `γ = 1/Q` and the adiabatically eliminated equations, cold
//! damping gives `Q(ω) = χ(ω) F(ω)` with `χ = 1/(1 - ω² - iωγ(1+g))` and `P =
//! -iω Q`. The force spectrum is the sum of the back-action density `γζ/4`,
//! the thermal density `γ (ω/2) coth(ω/2θ)` gated at the cutoff, and the fed
//! back detection noise `γ g²/(4ηζ) |G(ω)|²`, where `|G|²` is the detection
//! filter (flat `|G|² = 1` reproduces the closed forms).
//!
//! For momentum feedback the loop closes on the position equation,
//!
//! ```text
//! Q' = P - γ g Q + n_Q,     P' = -Q - γ P + F,
//! ```
//!
//! with `n_Q` the fed back detection noise. Solving in frequency space gives
//! `χ = 1/(ω0² - ω² - iωΓ)`, `ω0² = 1 + γ² g`, `Γ = γ(1+g)`, and
//!
//! ```text
//! Q = χ [F + (γ - iω) n_Q],    P = χ [(γ g - iω) F - n_Q].
//! ```
//!
//! The back-action force and the detection noise are correlated through
//! `sqrt(η)`, but the feedback gain fixes the sign so that the cross terms
//! cancel against the in-loop part of the shot noise; what survives is a
//! white density `S_N = g² γ / (4ηζ)` uncorrelated with `F`. The kernels are
//!
//! ```text
//! K_QQ = |χ|² [S_F + (γ² + ω²) S_N]
//! K_PP = |χ|² [(γ²g² + ω²) S_F + S_N]
//! K_QP = |χ|² [γ g S_F - γ S_N]
//! ```
//!
//! which reproduce the closed forms exactly in the classical thermal limit.

mod quadrature;

pub use quadrature::{integrate, QuadOptions, QuadResult};

use num_complex::Complex64;

use crate::analytic;
use crate::error::{Error, Result};
use crate::exec::{map_slice, Execution};
use crate::model::{FeedbackScheme, SystemParams};

/// Mechanical response of the feedback-modified oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Susceptibility {
    /// Squared resonance frequency, renormalised by momentum feedback.
    pub omega0_sq: f64,
    /// Total damping rate `γ(1+g)`.
    pub damping: f64,
}

impl Susceptibility {
    pub fn for_scheme(scheme: &FeedbackScheme, gamma: f64) -> Self {
        let g = scheme.gain();
        let omega0_sq = if scheme.is_momentum_type() {
            1.0 + gamma * gamma * g
        } else {
            1.0
        };
        Self {
            omega0_sq,
            damping: gamma * (1.0 + g),
        }
    }

    pub fn evaluate(&self, omega: f64) -> Complex64 {
        Complex64::new(self.omega0_sq - omega * omega, -omega * self.damping).inv()
    }

    pub fn abs_sq(&self, omega: f64) -> f64 {
        let re = if self.omega0_sq == 1.0 {
            (1.0 - omega) * (1.0 + omega)
        } else {
            self.omega0_sq - omega * omega
        };
        let im = omega * self.damping;
        1.0 / (re * re + im * im)
    }

    /// Frequency of the response maximum used to place quadrature splits.
    pub fn resonance(&self) -> f64 {
        self.omega0_sq.sqrt()
    }
}

/// Shape of the detection filter seen by the fed back noise in cold damping.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum DetectionFilter {
    /// `|G|² = ω_m²`, the resonance-peak approximation.
    #[default]
    Flat,
    /// `|G|² = ω²` inside `|ω - ω_m| <= band`, zero outside.
    BrickWall { band: f64 },
    /// Differentiator followed by a band-pass of width `band` at `ω_m`.
    Resonant { band: f64 },
}

impl DetectionFilter {
    pub fn gain_sq(&self, omega: f64) -> f64 {
        match *self {
            DetectionFilter::Flat => 1.0,
            DetectionFilter::BrickWall { band } => {
                if (omega - 1.0).abs() <= band {
                    omega * omega
                } else {
                    0.0
                }
            }
            DetectionFilter::Resonant { band } => {
                let wb = omega * band;
                let d = (1.0 - omega) * (1.0 + omega);
                omega * omega * wb * wb / (d * d + wb * wb)
            }
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match *self {
            DetectionFilter::Flat => vec![],
            DetectionFilter::BrickWall { band } | DetectionFilter::Resonant { band } => {
                vec![1.0 - band, 1.0 + band]
            }
        }
    }
}

/// One source of force noise on the mirror.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpectrum {
    /// Radiation-pressure back-action, white.
    RadiationBackAction { level: f64 },
    /// Detection noise re-injected by the loop.
    FeedbackInduced { level: f64, filter: DetectionFilter },
    /// Brownian force with a sharp cutoff.
    Thermal {
        gamma: f64,
        theta: f64,
        cutoff: f64,
        model: ThermalModel,
    },
}

/// Form of the Brownian force spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThermalModel {
    /// `γ (ω/2) coth(ω/2θ)`.
    #[default]
    Quantum,
    /// `γ θ`, the high-temperature limit assumed by the closed forms.
    Classical,
}

/// Everything that configures one quadrature besides the physics.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpectralConfig {
    pub quad: QuadOptions,
    pub filter: DetectionFilter,
    pub thermal: ThermalModel,
}

impl NoiseSpectrum {
    pub fn evaluate(&self, omega: f64) -> f64 {
        match *self {
            NoiseSpectrum::RadiationBackAction { level } => level,
            NoiseSpectrum::FeedbackInduced { level, filter } => level * filter.gain_sq(omega),
            NoiseSpectrum::Thermal {
                gamma,
                theta,
                cutoff,
                model,
            } => {
                let w = omega.abs();
                if w > cutoff {
                    0.0
                } else if model == ThermalModel::Classical {
                    gamma * theta
                } else if theta == 0.0 {
                    gamma * w / 2.0
                } else {
                    gamma * theta * x_coth_x(w / (2.0 * theta))
                }
            }
        }
    }
}

/// `x coth x`, even and equal to 1 at the origin.
pub fn x_coth_x(x: f64) -> f64 {
    let x = x.abs();
    if x < 1e-4 {
        1.0 + x * x / 3.0
    } else if x > 20.0 {
        x
    } else {
        x / x.tanh()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Moment {
    Q2,
    P2,
    /// Symmetrised correlation `<QP + PQ>/2`.
    Qp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    All,
    BackAction,
    Feedback,
    Thermal,
}

impl Source {
    fn includes(self, other: Source) -> bool {
        self == Source::All || self == other
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub n_evaluations: usize,
    /// Frequencies where the half line was split.
    pub split_points: Vec<f64>,
    pub converged: bool,
}

/// Integrand of one variance for one scheme, evaluated on `ω >= 0`.
#[derive(Debug, Clone, Copy)]
pub struct Kernel {
    chi: Susceptibility,
    momentum_type: bool,
    moment: Moment,
    gamma: f64,
    gain: f64,
    back_action: NoiseSpectrum,
    feedback: NoiseSpectrum,
    thermal: NoiseSpectrum,
    source: Source,
}

impl Kernel {
    pub fn new(
        scheme: &FeedbackScheme,
        moment: Moment,
        source: Source,
        sys: &SystemParams,
        filter: DetectionFilter,
        thermal: ThermalModel,
    ) -> Result<Self> {
        scheme.validate()?;
        let zeta = match *scheme {
            FeedbackScheme::RingRelative { ring_zeta, .. } => ring_zeta,
            _ => sys.zeta,
        };
        let gain = scheme.gain();
        if gain > 0.0 && zeta <= 0.0 {
            return Err(Error::domain(
                "zeta",
                "feedback noise diverges at zero input power",
            ));
        }
        let gamma = sys.gamma();
        let theta = sys.bath.theta;
        let fb_level = if gain == 0.0 {
            0.0
        } else {
            gain * gain * gamma / (4.0 * sys.bath.eta * zeta)
        };
        Ok(Self {
            chi: Susceptibility::for_scheme(scheme, gamma),
            momentum_type: scheme.is_momentum_type(),
            moment,
            gamma,
            gain,
            back_action: NoiseSpectrum::RadiationBackAction {
                level: gamma * zeta / 4.0,
            },
            feedback: NoiseSpectrum::FeedbackInduced {
                level: fb_level,
                filter,
            },
            thermal: NoiseSpectrum::Thermal {
                gamma,
                theta,
                cutoff: sys.bath.cutoff_ratio * theta,
                model: thermal,
            },
            source,
        })
    }

    fn part(&self, which: Source, spectrum: &NoiseSpectrum, omega: f64) -> f64 {
        if self.source.includes(which) {
            spectrum.evaluate(omega)
        } else {
            0.0
        }
    }

    pub fn evaluate(&self, omega: f64) -> f64 {
        let chi2 = self.chi.abs_sq(omega);
        let w2 = omega * omega;
        let s_f = self.part(Source::BackAction, &self.back_action, omega)
            + self.part(Source::Thermal, &self.thermal, omega);
        let s_n = self.part(Source::Feedback, &self.feedback, omega);
        if self.momentum_type {
            let g = self.gamma;
            let a = g * self.gain;
            chi2 * match self.moment {
                Moment::Q2 => s_f + (g * g + w2) * s_n,
                Moment::P2 => (a * a + w2) * s_f + s_n,
                Moment::Qp => a * s_f - g * s_n,
            }
        } else {
            let weight = match self.moment {
                Moment::Q2 => 1.0,
                Moment::P2 => w2,
                Moment::Qp => 0.0,
            };
            chi2 * weight * (s_f + s_n)
        }
    }

    fn thermal_cutoff(&self) -> Option<f64> {
        match self.thermal {
            NoiseSpectrum::Thermal { cutoff, theta, .. }
                if self.source.includes(Source::Thermal) && theta > 0.0 =>
            {
                Some(cutoff)
            }
            _ => None,
        }
    }

    /// Split points on the half line: around the resonance, at the slow
    /// pole of an overdamped response, at the filter edges and at the
    /// thermal cutoff.
    pub fn split_points(&self) -> Vec<f64> {
        let wr = self.chi.resonance();
        let delta = 10.0 * self.chi.damping / wr;
        let mut pts = vec![wr * (1.0 - delta), wr * (1.0 + delta)];
        if self.chi.damping > wr {
            pts.push(self.chi.omega0_sq / self.chi.damping);
            pts.push(self.chi.damping);
        }
        if let NoiseSpectrum::FeedbackInduced { filter, .. } = self.feedback {
            if self.source.includes(Source::Feedback) {
                pts.extend(filter.breakpoints());
            }
        }
        if let Some(c) = self.thermal_cutoff() {
            pts.push(c);
        }
        let mut pts: Vec<f64> = pts.into_iter().filter(|p| *p > 0.0 && p.is_finite()).collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
        pts
    }
}

#[derive(Clone, Copy)]
enum Map {
    Linear(f64, f64),
    Log(f64, f64),
    /// `ω = lo / t` for `t` in `(0, 1]`.
    Tail(f64),
}

fn integrate_kernel(kernel: &Kernel, opts: QuadOptions) -> SpectralResult {
    let splits = kernel.split_points();
    let mut maps = Vec::new();
    let mut lo = 0.0;
    for &p in &splits {
        if lo > 0.0 && p / lo > 4.0 {
            maps.push(Map::Log(lo, p));
        } else {
            maps.push(Map::Linear(lo, p));
        }
        lo = p;
    }
    maps.push(Map::Tail(lo));

    let run = |m: Map, opts: QuadOptions| match m {
        Map::Linear(a, b) => integrate(|w| kernel.evaluate(w), &[a, b], opts),
        Map::Log(a, b) => integrate(
            |s| {
                let w = s.exp();
                kernel.evaluate(w) * w
            },
            &[a.ln(), b.ln()],
            opts,
        ),
        Map::Tail(a) => integrate(
            |t| {
                let w = a / t;
                kernel.evaluate(w) * w / t
            },
            &[0.0, 1.0],
            opts,
        ),
    };

    // A coarse pass fixes one absolute target shared by all segments, so
    // that segments carrying little weight are not over-resolved.
    let coarse = QuadOptions {
        max_subdivisions: 0,
        ..opts
    };
    let rough: f64 = maps.iter().map(|&m| run(m, coarse).value.abs()).sum();
    let per_segment = QuadOptions {
        abs_tol: opts.abs_tol.max(opts.rel_tol * rough / maps.len() as f64),
        rel_tol: opts.rel_tol,
        max_subdivisions: opts.max_subdivisions,
    };
    let mut value = 0.0;
    let mut err = 0.0;
    let mut evaluations = 0;
    let mut converged = true;
    for &m in &maps {
        let r = run(m, per_segment);
        value += r.value;
        err += r.abs_error;
        evaluations += r.evaluations;
        converged &= r.converged;
    }
    evaluations += 21 * maps.len();
    let inv_pi = std::f64::consts::FRAC_1_PI;
    SpectralResult {
        value: value * inv_pi,
        abs_error_estimate: err * inv_pi,
        n_evaluations: evaluations,
        split_points: splits,
        converged,
    }
}

/// Quadrature of one variance. Values are returned even when the requested
/// tolerance was not reached; check `converged`.
pub fn variance_integral(
    scheme: &FeedbackScheme,
    moment: Moment,
    source: Source,
    sys: &SystemParams,
    cfg: &SpectralConfig,
) -> Result<SpectralResult> {
    if source.includes(Source::Thermal) && sys.bath.theta > 0.0 && !sys.bath.cutoff_ratio.is_finite()
    {
        return Err(Error::domain("cutoff_ratio", "thermal quadrature needs a finite cutoff"));
    }
    let kernel = Kernel::new(scheme, moment, source, sys, cfg.filter, cfg.thermal)?;
    let r = integrate_kernel(&kernel, cfg.quad);
    if !r.converged {
        log::warn!(
            "spectral quadrature for {moment:?}/{source:?} stopped at estimated error {:.3e}",
            r.abs_error_estimate
        );
    }
    Ok(r)
}

/// All three second moments from quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    pub q2: SpectralResult,
    pub p2: SpectralResult,
    pub qp: SpectralResult,
}

pub fn spectral_state(
    scheme: &FeedbackScheme,
    sys: &SystemParams,
    cfg: &SpectralConfig,
) -> Result<SpectralState> {
    let qp = if scheme.is_momentum_type() {
        variance_integral(scheme, Moment::Qp, Source::All, sys, cfg)?
    } else {
        SpectralResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            n_evaluations: 0,
            split_points: vec![],
            converged: true,
        }
    };
    Ok(SpectralState {
        q2: variance_integral(scheme, Moment::Q2, Source::All, sys, cfg)?,
        p2: variance_integral(scheme, Moment::P2, Source::All, sys, cfg)?,
        qp,
    })
}

/// Feedback-induced position variance of cold damping under a finite
/// detection band, compared with the flat approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterEffect {
    pub filtered: SpectralResult,
    pub flat_value: f64,
    /// `filtered / flat - 1`.
    pub deviation: f64,
    /// `band > γ(1+g)`, the regime where the flat approximation is claimed.
    pub in_regime: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterShape {
    BrickWall,
    Resonant,
}

pub fn detection_band_filter_effect(
    sys: &SystemParams,
    g2: f64,
    band: f64,
    shape: FilterShape,
    opts: QuadOptions,
) -> Result<FilterEffect> {
    if !(g2 > 0.0) {
        return Err(Error::domain("gain", "filter effect needs a positive gain"));
    }
    if !(band > 0.0) {
        return Err(Error::domain("band", "detection band must be positive"));
    }
    let filter = match shape {
        FilterShape::BrickWall => DetectionFilter::BrickWall { band },
        FilterShape::Resonant => DetectionFilter::Resonant { band },
    };
    let scheme = FeedbackScheme::ColdDamping { gain: g2 };
    let cfg = SpectralConfig {
        quad: opts,
        filter,
        ..Default::default()
    };
    let filtered = variance_integral(&scheme, Moment::Q2, Source::Feedback, sys, &cfg)?;
    let flat_value = analytic::cold_damping_state(sys, g2, false)?.q2_parts.feedback_induced;
    let in_regime = band > sys.gamma() * (1.0 + g2);
    if !in_regime {
        log::warn!("detection band {band} does not exceed the damped linewidth");
    }
    Ok(FilterEffect {
        deviation: filtered.value / flat_value - 1.0,
        filtered,
        flat_value,
        in_regime,
    })
}

/// Residual of the quadrature over the closed form at one cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffResidual {
    pub cutoff_ratio: f64,
    /// `ln(ϖ/ω_m)`.
    pub ln_cutoff: f64,
    pub p2_residual: f64,
    pub q2_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogCorrectionProbe {
    pub points: Vec<CutoffResidual>,
    pub p2_slope: f64,
    pub q2_slope: f64,
    /// `γ_m / (π ω_m)`.
    pub reference_slope: f64,
    pub slope_ratio: f64,
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Measures how the quadrature variances grow with the thermal cutoff.
pub fn log_correction_probe(
    sys: &SystemParams,
    scheme: &FeedbackScheme,
    cutoff_ratios: &[f64],
    exec: Execution,
    cfg: &SpectralConfig,
) -> Result<LogCorrectionProbe> {
    let theta = sys.bath.theta;
    if theta < 10.0 {
        return Err(Error::Precondition(format!(
            "log-correction probe needs k_B T >> hbar omega_m (theta >= 10), got theta = {theta}"
        )));
    }
    if cutoff_ratios.len() < 2 || cutoff_ratios.iter().any(|&c| !(c >= 10.0 && c.is_finite())) {
        return Err(Error::Precondition(
            "cutoff ladder needs at least two finite ratios, each >= 10 (hbar varpi >> k_B T)"
                .into(),
        ));
    }
    let (lo, hi) = cutoff_ratios
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), &c| (l.min(c), h.max(c)));
    if hi / lo < 100.0 {
        return Err(Error::Precondition(format!(
            "cutoff ladder must span at least two decades, got {lo}..{hi}"
        )));
    }
    let closed = analytic::steady_state(sys, scheme, false)?;
    let rows = map_slice(exec, cutoff_ratios, |&cr| -> Result<CutoffResidual> {
        let mut bath = sys.bath;
        bath.cutoff_ratio = cr;
        let s = sys.with_bath(bath)?;
        let p2 = variance_integral(scheme, Moment::P2, Source::All, &s, cfg)?;
        let q2 = variance_integral(scheme, Moment::Q2, Source::All, &s, cfg)?;
        Ok(CutoffResidual {
            cutoff_ratio: cr,
            ln_cutoff: (cr * theta).ln(),
            p2_residual: p2.value - closed.p2,
            q2_residual: q2.value - closed.q2,
        })
    });
    let points = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let x: Vec<f64> = points.iter().map(|p| p.ln_cutoff).collect();
    let yp: Vec<f64> = points.iter().map(|p| p.p2_residual).collect();
    let yq: Vec<f64> = points.iter().map(|p| p.q2_residual).collect();
    let reference_slope = sys.gamma() / std::f64::consts::PI;
    let p2_slope = fit_slope(&x, &yp);
    Ok(LogCorrectionProbe {
        q2_slope: fit_slope(&x, &yq),
        slope_ratio: p2_slope / reference_slope,
        p2_slope,
        reference_slope,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DimensionlessParams;

    fn sys(quality: f64, theta: f64, eta: f64, zeta: f64) -> SystemParams {
        SystemParams::dimensionless(DimensionlessParams {
            quality,
            theta,
            eta,
            zeta,
            gamma_c: 1e4,
            cutoff_ratio: 100.0,
        })
        .unwrap()
    }

    #[test]
    fn x_coth_x_is_continuous() {
        for x in [1e-4, 20.0] {
            let below = x_coth_x(x * (1.0 - 1e-12));
            let above = x_coth_x(x * (1.0 + 1e-12));
            assert!((below - above).abs() < 1e-9 * above);
        }
    }

    #[test]
    fn cold_damping_back_action_is_exact() {
        let s = sys(1e4, 1e5, 0.8, 100.0);
        let scheme = FeedbackScheme::ColdDamping { gain: 10.0 };
        let r =
            variance_integral(&scheme, Moment::Q2, Source::BackAction, &s, &Default::default())
                .unwrap();
        let exact = 100.0 / (8.0 * 11.0);
        assert!((r.value / exact - 1.0).abs() < 1e-8, "{} vs {exact}", r.value);
        assert!(r.abs_error_estimate >= 0.0);
    }

    #[test]
    fn thermal_position_variance() {
        let s = sys(1e4, 1e5, 1.0, 0.0);
        let scheme = FeedbackScheme::ColdDamping { gain: 0.0 };
        let r = variance_integral(&scheme, Moment::Q2, Source::Thermal, &s, &Default::default())
            .unwrap();
        assert!((r.value / 5e4 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn momentum_feedback_matches_closed_form() {
        let s = sys(1e3, 10.0, 0.8, 10.0);
        let scheme = FeedbackScheme::MomentumFeedback { gain: 10.0 };
        let closed = analytic::momentum_feedback_state(&s, 10.0, false).unwrap();
        let cfg = SpectralConfig {
            thermal: ThermalModel::Classical,
            ..Default::default()
        };
        let sp = spectral_state(&scheme, &s, &cfg).unwrap();
        assert!((sp.q2.value / closed.q2 - 1.0).abs() < 1e-6);
        // the classical spectrum stops at the cutoff, leaving a tail of order γθ/ϖ
        assert!((sp.p2.value / closed.p2 - 1.0).abs() < 1e-4, "{} {}", sp.p2.value, closed.p2);
        assert!((sp.qp.value / closed.qp_sym - 1.0).abs() < 1e-6);
    }

    #[test]
    fn kernels_are_even() {
        let s = sys(1e3, 10.0, 0.8, 10.0);
        for scheme in [
            FeedbackScheme::ColdDamping { gain: 5.0 },
            FeedbackScheme::MomentumFeedback { gain: 5.0 },
        ] {
            for m in [Moment::Q2, Moment::P2] {
                let k = Kernel::new(&scheme, m, Source::All, &s, DetectionFilter::Flat, ThermalModel::Quantum).unwrap();
                for w in [0.1, 0.99, 1.0, 3.0, 500.0] {
                    assert_eq!(k.evaluate(w), k.evaluate(-w));
                }
            }
        }
    }

    #[test]
    fn wide_band_filter_is_transparent() {
        let s = sys(1e4, 1e5, 0.8, 10.0);
        let r = detection_band_filter_effect(&s, 10.0, 1e6, FilterShape::BrickWall, Default::default())
            .unwrap();
        assert!(r.deviation.abs() < 1e-5, "{}", r.deviation);
    }

    #[test]
    fn probe_rejects_narrow_ladder() {
        let s = sys(1e3, 1e5, 0.8, 1.0);
        let scheme = FeedbackScheme::ColdDamping { gain: 0.0 };
        let err = log_correction_probe(&s, &scheme, &[10.0, 20.0], Execution::Sequential, &Default::default());
        assert!(matches!(err, Err(Error::Precondition(_))));
    }
}
