//! Second moments of one configuration by each of the four methods.

use optocool::analytic::{self, SteadyState};
use optocool::langevin::{
    build_sde, simulate_ensemble, EnsembleConfig, EnsembleStats, LinearSDE, MechanicalMoments,
};
use optocool::spectral::{spectral_state, QuadOptions, SpectralConfig};
use optocool::{Execution, FeedbackScheme, SystemParams};

use crate::config::{RunConfig, SchemeKind};
use crate::error::{CliError, CliResult};
use crate::output::{Method, SweepRow};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub q2: f64,
    pub p2: f64,
    pub qp: f64,
}

impl Moments {
    pub fn energy_units(&self) -> f64 {
        2.0 * (self.q2 + self.p2)
    }

    /// Relative deviations `(q2, p2, qp)` from `reference`; the correlation
    /// is measured on the scale `sqrt(q2 p2)`.
    pub fn deviation(&self, reference: &Moments) -> [f64; 3] {
        let scale = (reference.q2 * reference.p2).sqrt();
        [
            (self.q2 / reference.q2 - 1.0).abs(),
            (self.p2 / reference.p2 - 1.0).abs(),
            ((self.qp - reference.qp) / scale).abs(),
        ]
    }
}

impl From<&SteadyState> for Moments {
    fn from(s: &SteadyState) -> Self {
        Self {
            q2: s.q2,
            p2: s.p2,
            qp: s.qp_sym,
        }
    }
}

/// The mirror system actually simulated: for the ring scheme, the relative
/// coordinate at the ring power under momentum feedback.
pub fn effective_system(cfg: &RunConfig) -> CliResult<(SystemParams, FeedbackScheme)> {
    let sys = cfg.system()?;
    Ok(match cfg.scheme {
        SchemeKind::Ring => (
            sys.with_zeta(cfg.effective_ring_zeta())?,
            FeedbackScheme::MomentumFeedback { gain: cfg.gain },
        ),
        _ => (sys, cfg.feedback()),
    })
}

pub fn analytic_state(cfg: &RunConfig, log_correction: bool) -> CliResult<SteadyState> {
    let (sys, scheme) = effective_system(cfg)?;
    Ok(analytic::steady_state(&sys, &scheme, log_correction)?)
}

pub fn spectral_moments(cfg: &RunConfig) -> CliResult<Moments> {
    let (sys, scheme) = effective_system(cfg)?;
    let sc = SpectralConfig {
        quad: QuadOptions {
            rel_tol: cfg.quad_rel_tol,
            ..Default::default()
        },
        ..Default::default()
    };
    let s = spectral_state(&scheme, &sys, &sc)?;
    Ok(Moments {
        q2: s.q2.value,
        p2: s.p2.value,
        qp: s.qp.value,
    })
}

pub fn sde(cfg: &RunConfig) -> CliResult<LinearSDE> {
    let (sys, scheme) = effective_system(cfg)?;
    Ok(build_sde(&sys, &scheme, cfg.sim.form)?)
}

pub fn lyapunov_moments(cfg: &RunConfig) -> CliResult<Moments> {
    let m = MechanicalMoments::of(&sde(cfg)?)?;
    Ok(Moments {
        q2: m.q2,
        p2: m.p2,
        qp: m.qp,
    })
}

/// Ensemble settings: largest admissible step and `20 / γ(1+g)` recorded
/// time unless overridden.
pub fn ensemble_config(cfg: &RunConfig, sde: &LinearSDE, exec: Execution) -> EnsembleConfig {
    let dt = cfg.sim.dt.unwrap_or_else(|| sde.max_dt());
    let n_steps = cfg
        .sim
        .n_steps
        .unwrap_or_else(|| (20.0 / sde.mechanical_damping / dt).ceil() as usize)
        .max(1);
    EnsembleConfig {
        burn_in: cfg.sim.burn_in,
        exec,
        ..EnsembleConfig::new(dt, n_steps, cfg.sim.n_traj, cfg.seed)
    }
}

/// Default runs longer than this per trajectory must be requested
/// explicitly through `n_steps`.
pub const MAX_DEFAULT_STEPS: usize = 20_000_000;

/// Ensemble configuration, refusing default runs that would take hours
/// (a stiff full model with a slowly damped mirror).
pub fn checked_ensemble_config(
    cfg: &RunConfig,
    sde: &LinearSDE,
    exec: Execution,
) -> CliResult<EnsembleConfig> {
    let ec = ensemble_config(cfg, sde, exec);
    if cfg.sim.n_steps.is_none() && ec.n_steps > MAX_DEFAULT_STEPS {
        return Err(CliError::Validation(format!(
            "default run needs {} steps per trajectory (dt = {:.3e}, damping {:.3e}); \
             set `n_steps` explicitly to proceed",
            ec.n_steps, ec.dt, sde.mechanical_damping
        )));
    }
    Ok(ec)
}

pub fn ensemble(cfg: &RunConfig, exec: Execution) -> CliResult<EnsembleStats> {
    let sde = sde(cfg)?;
    Ok(simulate_ensemble(&sde, &checked_ensemble_config(cfg, &sde, exec)?)?)
}

pub fn moments(cfg: &RunConfig, method: Method, exec: Execution) -> CliResult<Moments> {
    match method {
        Method::Analytic => Ok(Moments::from(&analytic_state(cfg, cfg.log_correction)?)),
        Method::Spectral => spectral_moments(cfg),
        Method::Lyapunov => lyapunov_moments(cfg),
        Method::Ensemble => {
            let s = ensemble(cfg, exec)?;
            Ok(Moments {
                q2: s.q2.mean,
                p2: s.p2.mean,
                qp: s.qp.mean,
            })
        }
    }
}

/// `16 <Q_-^2> <P_+^2>` for a relative-coordinate variance.
pub fn entanglement_marker(cfg: &RunConfig, q_minus2: f64) -> CliResult<f64> {
    let log = analytic::log_correction(cfg.params.quality, cfg.params.cutoff_ratio)?;
    Ok(16.0 * q_minus2 * (cfg.params.theta / 2.0 + log.value))
}

/// Tabulates one method's moments with the derived flags.
pub fn row(
    cfg: &RunConfig,
    method: Method,
    variable: &str,
    value: f64,
    series: Option<(&str, f64)>,
    exec: Execution,
) -> CliResult<SweepRow> {
    let m = moments(cfg, method, exec)?;
    let closed = analytic_state(cfg, cfg.log_correction)?;
    let energy_units = m.energy_units();
    let occupancy = match method {
        Method::Analytic => closed.occupancy,
        _ => closed.is_thermal_form().then(|| energy_units / 2.0 - 0.5),
    };
    let entangled = match cfg.scheme {
        SchemeKind::Ring => Some(entanglement_marker(cfg, m.q2)? < 1.0),
        _ => None,
    };
    Ok(SweepRow {
        variable: variable.to_string(),
        value,
        series_variable: series.map(|s| s.0.to_string()),
        series_value: series.map(|s| s.1),
        method,
        q2: m.q2,
        p2: m.p2,
        qp_sym: m.qp,
        energy_units,
        occupancy,
        contractive: m.qp < 0.0,
        squeezed: m.q2 < analytic::STANDARD_QUANTUM_LIMIT,
        entangled,
    })
}
