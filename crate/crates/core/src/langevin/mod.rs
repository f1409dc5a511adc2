//! Time-domain model: linear stochastic equations for the mirror (and the
//! cavity), their stationary covariance and seeded ensemble simulation.

mod ensemble;
mod lyapunov;
mod sde;

pub use ensemble::{
    simulate_ensemble, simulate_trajectory, EnsembleConfig, EnsembleStats, Estimate, Integrator,
    LagGrid, Stepper, Trajectory,
};
pub use lyapunov::{solve_lyapunov, stationary_covariance_lyapunov};
pub use sde::{build_sde, Form, LinearSDE, FILTER_BANDWIDTH_FACTOR, NOISE_LABELS};

use crate::error::{Error, Result};
use crate::exec::{map_slice, Execution};
use crate::model::{FeedbackScheme, SystemParams};

/// Mechanical `(Q, P)` block of a stationary covariance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MechanicalMoments {
    pub q2: f64,
    pub p2: f64,
    pub qp: f64,
}

impl MechanicalMoments {
    pub fn of(sde: &LinearSDE) -> Result<Self> {
        let s = stationary_covariance_lyapunov(sde)?;
        Ok(Self {
            q2: s[(0, 0)],
            p2: s[(1, 1)],
            qp: s[(0, 1)],
        })
    }

    /// Largest relative deviation; the correlation is compared on the
    /// scale `sqrt(q2 p2)`.
    pub fn deviation(&self, reference: &Self) -> f64 {
        let scale = (reference.q2 * reference.p2).sqrt();
        ((self.q2 - reference.q2) / reference.q2)
            .abs()
            .max(((self.p2 - reference.p2) / reference.p2).abs())
            .max(((self.qp - reference.qp) / scale).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityPoint {
    pub gamma_c: f64,
    /// `Gβ/ω_m` at this cavity bandwidth.
    pub coupling: f64,
    pub full: MechanicalMoments,
    pub adiabatic: MechanicalMoments,
    pub deviation: f64,
    /// `γ_c ≥ 100 max(ω_m, Gβ)`.
    pub in_regime: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdiabaticValidity {
    pub points: Vec<ValidityPoint>,
    /// Deviation never grows along the ladder (sorted by `γ_c`).
    pub monotone: bool,
}

/// Compares the full and cavity-eliminated covariances over a ladder of
/// cavity bandwidths at fixed `ζ`.
pub fn adiabatic_validity_check(
    sys: &SystemParams,
    scheme: &FeedbackScheme,
    gamma_c_ladder: &[f64],
    exec: Execution,
) -> Result<AdiabaticValidity> {
    if gamma_c_ladder.is_empty() {
        return Err(Error::Precondition("empty cavity-bandwidth ladder".into()));
    }
    let mut ladder = gamma_c_ladder.to_vec();
    ladder.sort_by(f64::total_cmp);
    let points = map_slice(exec, &ladder, |&gc| -> Result<ValidityPoint> {
        let mut p = sys.dimensionless_params();
        p.gamma_c = gc;
        let s = SystemParams::dimensionless(p)?;
        let full = MechanicalMoments::of(&build_sde(&s, scheme, Form::Full)?)?;
        let adiabatic = MechanicalMoments::of(&build_sde(&s, scheme, Form::Adiabatic)?)?;
        let coupling = s.coupling_amplitude();
        Ok(ValidityPoint {
            gamma_c: gc,
            coupling,
            deviation: full.deviation(&adiabatic),
            full,
            adiabatic,
            in_regime: gc >= 100.0 * coupling.max(1.0),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let monotone = points
        .windows(2)
        .all(|w| w[1].deviation <= w[0].deviation * (1.0 + 1e-9) + 1e-14);
    Ok(AdiabaticValidity { points, monotone })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic;
    use crate::model::DimensionlessParams;

    fn sys(quality: f64, theta: f64, zeta: f64) -> SystemParams {
        SystemParams::dimensionless(DimensionlessParams {
            quality,
            gamma_c: 1e4,
            theta,
            eta: 0.8,
            cutoff_ratio: 100.0,
            zeta,
        })
        .unwrap()
    }

    #[test]
    fn thermal_oscillator_covariance() {
        let s = sys(1e4, 1e5, 0.0);
        let m = MechanicalMoments::of(
            &build_sde(&s, &FeedbackScheme::ColdDamping { gain: 0.0 }, Form::Adiabatic).unwrap(),
        )
        .unwrap();
        assert!((m.q2 / 5e4 - 1.0).abs() < 1e-9);
        assert!((m.p2 / 5e4 - 1.0).abs() < 1e-9);
        assert!(m.qp.abs() < 1e-6);
    }

    #[test]
    fn lyapunov_reproduces_closed_forms() {
        let s = sys(1e3, 50.0, 30.0);
        let cd = analytic::cold_damping_state(&s, 20.0, false).unwrap();
        let m = MechanicalMoments::of(
            &build_sde(&s, &FeedbackScheme::ColdDamping { gain: 20.0 }, Form::Adiabatic).unwrap(),
        )
        .unwrap();
        assert!((m.q2 / cd.q2 - 1.0).abs() < 1e-9);
        assert!((m.p2 / cd.p2 - 1.0).abs() < 1e-9);
        let mf = analytic::momentum_feedback_state(&s, 20.0, false).unwrap();
        let m = MechanicalMoments::of(
            &build_sde(&s, &FeedbackScheme::MomentumFeedback { gain: 20.0 }, Form::Adiabatic)
                .unwrap(),
        )
        .unwrap();
        assert!((m.q2 / mf.q2 - 1.0).abs() < 1e-9);
        assert!((m.p2 / mf.p2 - 1.0).abs() < 1e-9);
        assert!((m.qp / mf.qp_sym - 1.0).abs() < 1e-9);
    }

    #[test]
    fn decoupled_cavity_leaves_mechanics_unchanged() {
        let s = sys(1e3, 10.0, 0.0);
        let v = adiabatic_validity_check(
            &s,
            &FeedbackScheme::MomentumFeedback { gain: 0.0 },
            &[10.0, 1e4],
            Execution::Sequential,
        )
        .unwrap();
        for p in &v.points {
            assert!(p.deviation < 1e-12, "{}", p.deviation);
        }
    }
}
