//! Closed-form stationary second moments for both feedback schemes.
//!
//! All quantities are dimensionless: variances of `Q` and `P` with
//! `[Q, P] = i/2`, energies in units of `hbar omega_m / 2`. The thermal
//! contribution uses the classical approximation `coth(x) ~ 1/x`, so no
//! zero-point term is added; states with `q2 < 1/4` at zero gain are flagged
//! as outside the validity of that approximation.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{FeedbackScheme, RelativeFrame, SystemParams};
use crate::optimize::{minimize_positive, MinimizeOptions};

/// Position variance of the standard quantum limit.
pub const STANDARD_QUANTUM_LIMIT: f64 = 0.25;

/// Per-source contributions to one variance.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseBreakdown {
    pub back_action: f64,
    pub feedback_induced: f64,
    pub brownian: f64,
}

impl NoiseBreakdown {
    pub fn total(&self) -> f64 {
        self.back_action + self.feedback_induced + self.brownian
    }
}

/// Gaussian steady state of the mirror.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub q2: f64,
    pub p2: f64,
    /// `<QP + PQ> / 2`.
    pub qp_sym: f64,
    /// `2 U / hbar omega_m = 2 (q2 + p2)`.
    pub energy_units: f64,
    /// `2 q2 - 1/2`, only for states of thermal form.
    pub occupancy: Option<f64>,
    /// Rotation of the phase-space ellipse with respect to the `Q` axis.
    pub ellipse_angle: f64,
    pub q2_parts: NoiseBreakdown,
    /// The logarithmic correction, when enabled, is part of `brownian`.
    pub p2_parts: NoiseBreakdown,
    pub log_term: f64,
    pub log_clamped: bool,
    /// Zero-gain state below the zero-point variance.
    pub outside_validity: bool,
}

impl SteadyState {
    fn assemble(
        q2_parts: NoiseBreakdown,
        p2_parts: NoiseBreakdown,
        qp_sym: f64,
        log: LogTerm,
        gain: f64,
    ) -> Self {
        let q2 = q2_parts.total();
        let p2 = p2_parts.total();
        let thermal_form = q2 == p2 && qp_sym == 0.0;
        Self {
            q2,
            p2,
            qp_sym,
            energy_units: 2.0 * (q2 + p2),
            occupancy: thermal_form.then(|| 2.0 * q2 - 0.5),
            ellipse_angle: 0.5 * (2.0 * qp_sym).atan2(q2 - p2),
            q2_parts,
            p2_parts,
            log_term: log.value,
            log_clamped: log.clamped,
            outside_validity: gain == 0.0 && q2 < STANDARD_QUANTUM_LIMIT,
        }
    }

    /// Symmetrised covariance matrix of `(Q, P)`.
    pub fn covariance(&self) -> [[f64; 2]; 2] {
        [[self.q2, self.qp_sym], [self.qp_sym, self.p2]]
    }

    pub fn is_thermal_form(&self) -> bool {
        self.occupancy.is_some()
    }

    pub fn is_contractive(&self) -> bool {
        self.qp_sym < 0.0
    }

    pub fn is_squeezed(&self) -> bool {
        self.q2 < STANDARD_QUANTUM_LIMIT
    }
}

/// Cutoff-dependent momentum-variance term `(gamma_m/pi) ln(cutoff_ratio/2pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LogTerm {
    pub value: f64,
    /// The cutoff was at or below `2 pi k_B T` and the term was set to zero.
    pub clamped: bool,
}

pub fn log_correction(quality: f64, cutoff_ratio: f64) -> Result<LogTerm> {
    if !(cutoff_ratio > 1.0) {
        return Err(Error::domain(
            "cutoff_ratio",
            format!("must exceed 1 when the logarithmic correction is requested, got {cutoff_ratio}"),
        ));
    }
    if cutoff_ratio <= 2.0 * PI {
        log::warn!(
            "cutoff_ratio {cutoff_ratio} <= 2 pi: logarithmic correction would be negative, clamped to 0"
        );
        return Ok(LogTerm {
            value: 0.0,
            clamped: true,
        });
    }
    Ok(LogTerm {
        value: (cutoff_ratio / (2.0 * PI)).ln() / (PI * quality),
        clamped: false,
    })
}

fn check_gain(gain: f64, zeta: f64) -> Result<()> {
    if !(gain.is_finite() && gain >= 0.0) {
        return Err(Error::domain("gain", format!("must be finite and >= 0, got {gain}")));
    }
    if gain > 0.0 && zeta <= 0.0 {
        return Err(Error::domain(
            "zeta",
            "feedback noise diverges at zero input power",
        ));
    }
    Ok(())
}

/// `g^2 / (8 eta zeta)`, zero at zero gain.
fn feedback_strength(gain: f64, eta: f64, zeta: f64) -> f64 {
    if gain == 0.0 {
        0.0
    } else {
        gain * gain / (8.0 * eta * zeta)
    }
}

fn cold_damping_parts(gain: f64, zeta: f64, eta: f64, theta: f64) -> NoiseBreakdown {
    let d = 1.0 + gain;
    NoiseBreakdown {
        back_action: zeta / (8.0 * d),
        feedback_induced: feedback_strength(gain, eta, zeta) / d,
        brownian: theta / (2.0 * d),
    }
}

struct MomentumParts {
    q2: NoiseBreakdown,
    p2: NoiseBreakdown,
    qp_sym: f64,
}

fn momentum_parts(gain: f64, zeta: f64, eta: f64, theta: f64, quality: f64) -> MomentumParts {
    let q_sq = quality * quality;
    let d = (1.0 + gain) * (q_sq + gain);
    let fb = feedback_strength(gain, eta, zeta);
    let p_factor = (gain * gain + q_sq + gain) / d;
    let q_factor = q_sq / d;
    let force = zeta / 8.0 + theta / 2.0;
    // factored so that the zero at the contractive threshold is exact
    let bracket = if gain == 0.0 {
        0.0
    } else {
        force - gain / (8.0 * eta * zeta)
    };
    MomentumParts {
        q2: NoiseBreakdown {
            back_action: zeta / 8.0 * q_factor,
            feedback_induced: fb * (1.0 + q_sq + gain) / d,
            brownian: theta / 2.0 * q_factor,
        },
        p2: NoiseBreakdown {
            back_action: zeta / 8.0 * p_factor,
            feedback_induced: fb * q_factor,
            brownian: theta / 2.0 * p_factor,
        },
        qp_sym: gain * quality / d * bracket,
    }
}

fn log_for(sys: &SystemParams, enabled: bool) -> Result<LogTerm> {
    if enabled {
        log_correction(sys.quality(), sys.bath.cutoff_ratio)
    } else {
        Ok(LogTerm::default())
    }
}

/// Steady state under cold damping with rescaled gain `g2`.
pub fn cold_damping_state(
    sys: &SystemParams,
    g2: f64,
    log_correction: bool,
) -> Result<SteadyState> {
    check_gain(g2, sys.zeta)?;
    let log = log_for(sys, log_correction)?;
    let q2 = cold_damping_parts(g2, sys.zeta, sys.bath.eta, sys.bath.theta);
    let mut p2 = q2;
    p2.brownian += log.value;
    Ok(SteadyState::assemble(q2, p2, 0.0, log, g2))
}

/// Steady state under momentum feedback with rescaled gain `g1`.
pub fn momentum_feedback_state(
    sys: &SystemParams,
    g1: f64,
    log_correction: bool,
) -> Result<SteadyState> {
    check_gain(g1, sys.zeta)?;
    let log = log_for(sys, log_correction)?;
    let mut parts = momentum_parts(g1, sys.zeta, sys.bath.eta, sys.bath.theta, sys.quality());
    parts.p2.brownian += log.value;
    Ok(SteadyState::assemble(parts.q2, parts.p2, parts.qp_sym, log, g1))
}

/// Closed-form steady state for any scheme. The ring scheme is evaluated in
/// the relative frame at its ring power.
pub fn steady_state(
    sys: &SystemParams,
    scheme: &FeedbackScheme,
    log_correction: bool,
) -> Result<SteadyState> {
    scheme.validate()?;
    match *scheme {
        FeedbackScheme::ColdDamping { gain } => cold_damping_state(sys, gain, log_correction),
        FeedbackScheme::MomentumFeedback { gain } => {
            momentum_feedback_state(sys, gain, log_correction)
        }
        FeedbackScheme::RingRelative { gain, ring_zeta } => {
            momentum_feedback_state(&sys.with_zeta(ring_zeta)?, gain, log_correction)
        }
    }
}

/// Energy `2U/hbar omega_m` under momentum feedback, without the
/// logarithmic correction.
pub fn momentum_feedback_energy(sys: &SystemParams, g1: f64) -> Result<f64> {
    Ok(momentum_feedback_state(sys, g1, false)?.energy_units)
}

/// Optimal input power at fixed gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoolingOptimum {
    /// Closed-form (or asymptotic) optimal power `g / sqrt(eta)`.
    pub zeta_opt: f64,
    /// Energy predicted at `zeta_opt` by the simplified closed form.
    pub energy_units: f64,
    /// Minimiser found by bracketed scalar search.
    pub numeric_zeta: f64,
    /// Energy at `numeric_zeta`.
    pub numeric_energy: f64,
}

fn require_positive_gain(gain: f64) -> Result<()> {
    if gain > 0.0 && gain.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("gain", format!("must be > 0, got {gain}")))
    }
}

fn check_eta_theta(eta: f64, theta: f64) -> Result<()> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::domain("eta", format!("must lie in (0, 1], got {eta}")));
    }
    if !(theta >= 0.0 && theta.is_finite()) {
        return Err(Error::domain("theta", format!("must be >= 0, got {theta}")));
    }
    Ok(())
}

// The Brownian contribution does not depend on zeta, so only the back-action
// and feedback terms enter the search; this keeps the objective well
// conditioned when k_B T dominates the energy.
fn minimize_in_zeta<F>(zeta_dependent: F, start: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let m = minimize_positive(
        zeta_dependent,
        start,
        MinimizeOptions {
            x_rel_tol: 1e-11,
            ..Default::default()
        },
    )?;
    match m.boundary {
        None => Ok(m.x),
        Some(b) => Err(Error::Bracket(format!(
            "no interior minimum in zeta, search ran into the {b:?} boundary"
        ))),
    }
}

/// Optimal input power for cold damping at fixed `g2`.
pub fn cold_damping_optimum(g2: f64, eta: f64, theta: f64) -> Result<CoolingOptimum> {
    require_positive_gain(g2)?;
    check_eta_theta(eta, theta)?;
    let energy = |z: f64| 4.0 * cold_damping_parts(g2, z, eta, theta).total();
    let numeric_zeta = minimize_in_zeta(
        |z| {
            let p = cold_damping_parts(g2, z, eta, theta);
            p.back_action + p.feedback_induced
        },
        g2,
    )?;
    Ok(CoolingOptimum {
        zeta_opt: g2 / eta.sqrt(),
        energy_units: g2 / (1.0 + g2) * (1.0 / eta.sqrt() + 2.0 * theta / g2),
        numeric_zeta,
        numeric_energy: energy(numeric_zeta),
    })
}

/// Optimal input power for momentum feedback at fixed `g1` and quality.
/// `zeta_opt` and `energy_units` hold the large-quality asymptotic forms.
pub fn momentum_feedback_optimum(
    g1: f64,
    eta: f64,
    theta: f64,
    quality: f64,
) -> Result<CoolingOptimum> {
    require_positive_gain(g1)?;
    check_eta_theta(eta, theta)?;
    if !(quality > 0.0) {
        return Err(Error::domain("quality", "must be > 0"));
    }
    let energy = |z: f64| {
        let p = momentum_parts(g1, z, eta, theta, quality);
        2.0 * (p.q2.total() + p.p2.total())
    };
    let numeric_zeta = minimize_in_zeta(
        |z| {
            let p = momentum_parts(g1, z, eta, theta, quality);
            p.q2.back_action + p.q2.feedback_induced + p.p2.back_action + p.p2.feedback_induced
        },
        g1,
    )?;
    Ok(CoolingOptimum {
        zeta_opt: g1 / eta.sqrt(),
        energy_units: 1.0 / eta.sqrt() + 2.0 * theta / g1,
        numeric_zeta,
        numeric_energy: energy(numeric_zeta),
    })
}

/// Gain above which momentum feedback produces a contractive state,
/// `eta zeta (zeta + 4 theta)`.
pub fn contractive_threshold(sys: &SystemParams) -> Result<f64> {
    if !(sys.zeta > 0.0) {
        return Err(Error::domain("zeta", "contractive threshold needs zeta > 0"));
    }
    Ok(sys.bath.eta * sys.zeta * (sys.zeta + 4.0 * sys.bath.theta))
}

/// Minimum over `zeta` of the momentum-feedback position variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingMinimum {
    pub q2_min: f64,
    pub zeta_at_min: f64,
    pub numeric_q2_min: f64,
    pub numeric_zeta: f64,
}

impl SqueezingMinimum {
    pub fn beats_standard_quantum_limit(&self) -> bool {
        self.q2_min < STANDARD_QUANTUM_LIMIT
    }
}

/// `(g/Q) sqrt((1 + Q^2 + g)/eta)`, the power minimising the position
/// variance at fixed gain.
pub fn squeezing_optimal_zeta(gain: f64, quality: f64, eta: f64) -> f64 {
    gain / quality * ((1.0 + quality * quality + gain) / eta).sqrt()
}

pub fn squeezing_minimum(g1: f64, quality: f64, eta: f64, theta: f64) -> Result<SqueezingMinimum> {
    require_positive_gain(g1)?;
    check_eta_theta(eta, theta)?;
    let q_sq = quality * quality;
    let d = (1.0 + g1) * (q_sq + g1);
    let q2_min = g1 * quality * (1.0 + q_sq + g1).sqrt() / (4.0 * eta.sqrt() * d)
        + theta / 2.0 * q_sq / d;
    let numeric_zeta = minimize_in_zeta(
        |z| {
            let p = momentum_parts(g1, z, eta, theta, quality);
            p.q2.back_action + p.q2.feedback_induced
        },
        g1,
    )?;
    Ok(SqueezingMinimum {
        q2_min,
        zeta_at_min: squeezing_optimal_zeta(g1, quality, eta),
        numeric_q2_min: momentum_parts(g1, numeric_zeta, eta, theta, quality).q2.total(),
        numeric_zeta,
    })
}

/// Product-criterion entanglement marker of the two ring mirrors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementReport {
    pub q_minus2: f64,
    pub p_plus2: f64,
    /// `16 <Q_-^2> <P_+^2>`.
    pub marker: f64,
    pub entangled: bool,
    pub ring_zeta: f64,
    pub log_clamped: bool,
}

/// Evaluates the marker at the supplied ring power, or at the power that
/// minimises `<Q_-^2>` when `ring_zeta` is `None`.
pub fn entanglement_marker(
    frame: &RelativeFrame,
    g3: f64,
    cutoff_ratio: f64,
    ring_zeta: Option<f64>,
) -> Result<EntanglementReport> {
    let sys = &frame.system;
    let (quality, eta, theta) = (sys.quality(), sys.bath.eta, sys.bath.theta);
    let zeta = match ring_zeta {
        Some(z) => z,
        None if g3 > 0.0 => squeezing_optimal_zeta(g3, quality, eta),
        None => frame.ring_zeta,
    };
    check_gain(g3, zeta)?;
    let q_minus2 = momentum_parts(g3, zeta, eta, theta, quality).q2.total();
    let log = log_correction(quality, cutoff_ratio)?;
    let p_plus2 = theta / 2.0 + log.value;
    let marker = 16.0 * q_minus2 * p_plus2;
    Ok(EntanglementReport {
        q_minus2,
        p_plus2,
        marker,
        entangled: marker < 1.0,
        ring_zeta: zeta,
        log_clamped: log.clamped,
    })
}

/// Nonclassical features of a momentum-feedback steady state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonclassicalityReport {
    pub contractive: bool,
    pub contractive_threshold: f64,
    pub squeezed: bool,
    /// Power minimising `q2` at this gain.
    pub squeezing_zeta: f64,
    pub squeezing_q2_min: f64,
}

pub fn nonclassicality(sys: &SystemParams, g1: f64) -> Result<NonclassicalityReport> {
    let state = momentum_feedback_state(sys, g1, false)?;
    let (squeezing_zeta, squeezing_q2_min) = if g1 > 0.0 {
        let m = squeezing_minimum(g1, sys.quality(), sys.bath.eta, sys.bath.theta)?;
        (m.zeta_at_min, m.q2_min)
    } else {
        (0.0, sys.bath.theta / 2.0)
    };
    Ok(NonclassicalityReport {
        contractive: state.is_contractive(),
        contractive_threshold: contractive_threshold(sys)?,
        squeezed: state.is_squeezed(),
        squeezing_zeta,
        squeezing_q2_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DimensionlessParams;

    fn system(quality: f64, theta: f64, eta: f64, zeta: f64) -> SystemParams {
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
    fn cold_damping_thermal_limit() {
        let s = cold_damping_state(&system(1e4, 1e5, 1.0, 0.0), 0.0, false).unwrap();
        assert_eq!(s.q2, 5e4);
        assert_eq!(s.p2, 5e4);
        assert_eq!(s.occupancy, Some(1e5 - 0.5));
    }

    #[test]
    fn cold_damping_mid_gain() {
        let s = cold_damping_state(&system(1e4, 1e5, 1.0, 100.0), 100.0, false).unwrap();
        let expected = (12.5 + 12.5 + 5e4) / 101.0;
        assert!((s.q2 - expected).abs() < 1e-12 * expected);
        assert!((s.q2 - 495.297).abs() < 1e-3);
        assert_eq!(s.qp_sym, 0.0);
        assert_eq!(s.q2, s.p2);
    }

    #[test]
    fn cold_damping_high_gain_energy() {
        let g = 1e7;
        let eta: f64 = 0.8;
        let s = cold_damping_state(&system(1e4, 1e5, eta, g / eta.sqrt()), g, false).unwrap();
        let expected = g / (1.0 + g) * (1.0 / eta.sqrt() + 2e5 / g);
        assert!((s.energy_units - expected).abs() < 1e-12 * expected);
        assert!((s.energy_units - 1.1380).abs() < 1e-4);
    }

    #[test]
    fn feedback_at_zero_power_is_rejected() {
        let err = cold_damping_state(&system(1e4, 1.0, 1.0, 0.0), 1.0, false).unwrap_err();
        assert!(matches!(err, Error::Domain { param: "zeta", .. }));
        assert!(momentum_feedback_state(&system(1e4, 1.0, 1.0, 0.0), 1.0, false).is_err());
    }

    #[test]
    fn log_term_only_touches_momentum_variance() {
        let sys = system(1e3, 1e5, 0.8, 10.0);
        let off = cold_damping_state(&sys, 10.0, false).unwrap();
        let on = cold_damping_state(&sys, 10.0, true).unwrap();
        assert_eq!(off.q2, on.q2);
        let expected = (100.0 / (2.0 * PI)).ln() / (PI * 1e3);
        assert!((on.p2 - off.p2 - expected).abs() < 1e-12 * on.p2);
        assert!(on.occupancy.is_none());
    }

    #[test]
    fn log_term_clamps_below_two_pi() {
        let t = log_correction(1e3, 5.0).unwrap();
        assert!(t.clamped);
        assert_eq!(t.value, 0.0);
        assert!(log_correction(1e3, 0.5).is_err());
    }

    #[test]
    fn optimum_examples() {
        let o = cold_damping_optimum(100.0, 1.0, 1e5).unwrap();
        assert_eq!(o.zeta_opt, 100.0);
        assert!((o.energy_units - 100.0 / 101.0 * 2001.0).abs() < 1e-9);
        assert!((o.numeric_zeta / 100.0 - 1.0).abs() < 1e-7, "{}", o.numeric_zeta);
        assert!((o.numeric_energy - o.energy_units).abs() < 1e-9 * o.energy_units);
        assert_eq!(cold_damping_optimum(10.0, 0.25, 1.0).unwrap().zeta_opt, 20.0);
        assert!(cold_damping_optimum(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn cold_damping_reaches_ground_state() {
        let mut prev = f64::INFINITY;
        for g in [1e3, 1e6, 1e9, 1e12, 1e15] {
            let o = cold_damping_optimum(g, 1.0, 1e5).unwrap();
            assert!(o.energy_units < prev);
            prev = o.energy_units;
        }
        assert!((prev - 1.0).abs() < 1e-9);
    }

    #[test]
    fn momentum_feedback_without_gain() {
        let s = momentum_feedback_state(&system(1e4, 3.0, 0.8, 5.0), 0.0, false).unwrap();
        assert_eq!(s.q2, 5.0 / 8.0 + 1.5);
        assert_eq!(s.qp_sym, 0.0);
    }

    #[test]
    fn momentum_feedback_correlation_sign() {
        let sys = system(1e4, 1e5, 0.8, 1e5);
        let s = momentum_feedback_state(&sys, 1e5, false).unwrap();
        assert!(1e5 < contractive_threshold(&sys).unwrap());
        assert!(s.qp_sym > 0.0);
        assert!(!s.is_thermal_form());
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(contractive_threshold(&system(1e4, 0.0, 1.0, 1.0)).unwrap(), 1.0);
        let sys = system(1e4, 1e5, 0.8, 1e3);
        let t = contractive_threshold(&sys).unwrap();
        assert!((t - 3.208e8).abs() < 1e-6 * 3.208e8);
        let s = momentum_feedback_state(&sys, t, false).unwrap();
        assert!(s.qp_sym.abs() <= 1e-12, "{}", s.qp_sym);
    }

    #[test]
    fn squeezing_examples() {
        let hi = squeezing_minimum(1e9, 1e4, 0.8, 1e5).unwrap();
        assert!(hi.beats_standard_quantum_limit());
        let lo = squeezing_minimum(1e7, 1e4, 0.8, 1e5).unwrap();
        assert!(!lo.beats_standard_quantum_limit());
        for m in [hi, lo] {
            assert!((m.numeric_zeta / m.zeta_at_min - 1.0).abs() < 1e-6);
            assert!((m.numeric_q2_min / m.q2_min - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn momentum_optimum_regimes() {
        // with Q >> g the asymptotic power is accurate
        let o = momentum_feedback_optimum(1e3, 0.8, 1e5, 1e7).unwrap();
        assert!((o.numeric_zeta / o.zeta_opt - 1.0).abs() < 1e-2);
        // with Q = g the exact minimiser sits at sqrt(2/3) of the asymptotic one
        let o = momentum_feedback_optimum(1e7, 0.8, 1e5, 1e7).unwrap();
        let exact = (2.0f64 / 3.0).sqrt();
        assert!((o.numeric_zeta / o.zeta_opt - exact).abs() < 1e-6);
        // low quality: no ground-state cooling
        let o = momentum_feedback_optimum(1e7, 0.8, 1e5, 1e3).unwrap();
        assert!(o.numeric_energy > 10.0);
    }

    #[test]
    fn entanglement_without_gain() {
        let frame = crate::model::RelativeFrame {
            system: system(1e3, 1e5, 0.8, 4.0),
            ring_zeta: 4.0,
            center_of_mass_thermal_only: true,
        };
        let r = entanglement_marker(&frame, 0.0, 100.0, None).unwrap();
        assert_eq!(r.q_minus2, 0.5 + 5e4);
        assert!(r.marker > 1e9);
        assert!(!r.entangled);
    }

    #[test]
    fn ellipse_angle_of_thermal_state_is_zero() {
        let s = cold_damping_state(&system(1e4, 10.0, 0.8, 3.0), 2.0, false).unwrap();
        assert_eq!(s.ellipse_angle, 0.0);
    }
}
