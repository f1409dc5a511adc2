//! Physical parameter space of the optomechanical system.
//!
//! Internally every rate is measured in units of the mechanical frequency
//! and `hbar = 1`; temperature only enters through `theta = k_B T / hbar
//! omega_m`. The types here accept dimensionful rates but every derived
//! quantity they expose is a ratio to `omega_m`.

use num_complex::Complex64;

use crate::error::{Error, Result};

fn check_positive(param: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(param, format!("must be finite and > 0, got {value}")))
    }
}

fn check_non_negative(param: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(param, format!("must be finite and >= 0, got {value}")))
    }
}

/// Mechanical mode: frequency, damping and the cached quality factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MechanicalParams {
    omega_m: f64,
    gamma_m: f64,
    quality: f64,
}

impl MechanicalParams {
    pub fn new(omega_m: f64, gamma_m: f64) -> Result<Self> {
        check_positive("omega_m", omega_m)?;
        check_positive("gamma_m", gamma_m)?;
        Ok(Self {
            omega_m,
            gamma_m,
            quality: omega_m / gamma_m,
        })
    }

    /// Mode with `omega_m = 1` and the given quality factor. The stored
    /// quality is `quality` itself, `gamma_m` is its reciprocal.
    pub fn from_quality(quality: f64) -> Result<Self> {
        check_positive("quality", quality)?;
        Ok(Self {
            omega_m: 1.0,
            gamma_m: 1.0 / quality,
            quality,
        })
    }

    pub fn omega_m(&self) -> f64 {
        self.omega_m
    }

    pub fn gamma_m(&self) -> f64 {
        self.gamma_m
    }

    pub fn quality(&self) -> f64 {
        self.quality
    }

    /// `gamma_m / omega_m`.
    pub fn damping_ratio(&self) -> f64 {
        1.0 / self.quality
    }
}

/// Source of truth for the coherent drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Drive {
    /// Drive amplitude `E`.
    Amplitude(f64),
    /// Input power in units with `hbar = 1`; `E = sqrt(P gamma_c / omega_0)`.
    Power(f64),
}

/// Optical cavity mode and its coherent drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    pub omega_c: f64,
    pub omega_0: f64,
    pub gamma_c: f64,
    pub coupling_g: f64,
    pub drive: Drive,
}

impl CavityParams {
    pub fn validate(&self) -> Result<()> {
        check_positive("gamma_c", self.gamma_c)?;
        check_non_negative("coupling_g", self.coupling_g)?;
        if !self.omega_c.is_finite() {
            return Err(Error::domain("omega_c", "must be finite"));
        }
        if !self.omega_0.is_finite() {
            return Err(Error::domain("omega_0", "must be finite"));
        }
        match self.drive {
            Drive::Amplitude(e) => check_non_negative("drive_E", e),
            Drive::Power(p) => {
                check_non_negative("power", p)?;
                check_positive("omega_0", self.omega_0)
            }
        }
    }

    pub fn drive_amplitude(&self) -> f64 {
        match self.drive {
            Drive::Amplitude(e) => e,
            Drive::Power(p) => (p * self.gamma_c / self.omega_0).sqrt(),
        }
    }

    pub fn input_power(&self) -> f64 {
        match self.drive {
            Drive::Amplitude(e) => e * e * self.omega_0 / self.gamma_c,
            Drive::Power(p) => p,
        }
    }

    /// Bare detuning `omega_c - omega_0`.
    pub fn bare_detuning(&self) -> f64 {
        self.omega_c - self.omega_0
    }
}

/// Thermal bath and detection parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    /// `k_B T / hbar omega_m`.
    pub theta: f64,
    /// `hbar varpi / k_B T`.
    pub cutoff_ratio: f64,
    /// Homodyne detection efficiency.
    pub eta: f64,
}

impl BathParams {
    pub fn new(theta: f64, cutoff_ratio: f64, eta: f64) -> Result<Self> {
        let bath = Self {
            theta,
            cutoff_ratio,
            eta,
        };
        bath.validate()?;
        Ok(bath)
    }

    pub fn validate(&self) -> Result<()> {
        check_non_negative("theta", self.theta)?;
        check_positive("cutoff_ratio", self.cutoff_ratio)?;
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::domain(
                "eta",
                format!("detection efficiency must lie in (0, 1], got {}", self.eta),
            ));
        }
        Ok(())
    }

    /// Reservoir cutoff frequency in units of `omega_m`.
    pub fn cutoff_frequency(&self) -> f64 {
        self.cutoff_ratio * self.theta
    }
}

/// `zeta = 16 G^2 beta^2 / (gamma_m gamma_c)`.
pub fn derive_zeta(cav: &CavityParams, mech: &MechanicalParams, beta: f64) -> Result<f64> {
    check_positive("gamma_c", cav.gamma_c)?;
    check_positive("gamma_m", mech.gamma_m())?;
    if !beta.is_finite() {
        return Err(Error::domain("beta", "must be finite"));
    }
    let g = cav.coupling_g;
    Ok(16.0 * g * g * beta * beta / (mech.gamma_m() * cav.gamma_c))
}

/// Power form `zeta = 64 G^2 P / (hbar omega_0 gamma_m gamma_c^2)`, valid at
/// zero effective detuning.
pub fn zeta_from_power(cav: &CavityParams, mech: &MechanicalParams) -> Result<f64> {
    check_positive("gamma_c", cav.gamma_c)?;
    check_positive("omega_0", cav.omega_0)?;
    let g = cav.coupling_g;
    Ok(64.0 * g * g * cav.input_power()
        / (cav.omega_0 * mech.gamma_m() * cav.gamma_c * cav.gamma_c))
}

/// Semiclassical steady state of the driven cavity.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkingPoint {
    pub beta: Complex64,
    /// Effective detuning `omega_c - omega_0 + 2 G^2 |beta|^2 / omega_m`.
    pub detuning: f64,
    /// Drive frequency at the working point (tuned when zeroing detuning).
    pub drive_frequency: f64,
    /// All real positive roots `|beta|^2` of the intensity cubic, ascending.
    pub intensity_roots: Vec<f64>,
    pub multistable: bool,
    /// `|beta - E / (gamma_c/2 + i Delta)| / |beta|`.
    pub residual: f64,
}

/// Solves `beta = E / (gamma_c/2 + i(omega_c - omega_0) + 2 i G^2 |beta|^2 / omega_m)`.
///
/// With `zero_detuning`, the drive frequency is retuned so that the
/// effective detuning vanishes and `beta = 2E/gamma_c` is real. Otherwise the
/// cubic in `|beta|^2` is solved and the smallest positive root, the branch
/// continuously connected to the uncoupled cavity, is returned.
pub fn solve_semiclassical(
    cav: &CavityParams,
    mech: &MechanicalParams,
    zero_detuning: bool,
) -> Result<WorkingPoint> {
    cav.validate()?;
    let e = cav.drive_amplitude();
    let half = cav.gamma_c / 2.0;
    let kappa = 2.0 * cav.coupling_g * cav.coupling_g / mech.omega_m();

    if zero_detuning {
        let beta = e / half;
        let n = beta * beta;
        return Ok(WorkingPoint {
            beta: Complex64::new(beta, 0.0),
            detuning: 0.0,
            drive_frequency: cav.omega_c + kappa * n,
            intensity_roots: vec![n],
            multistable: false,
            residual: 0.0,
        });
    }

    let d0 = cav.bare_detuning();
    let roots = if e == 0.0 {
        vec![0.0]
    } else if kappa == 0.0 {
        vec![e * e / (half * half + d0 * d0)]
    } else {
        let mut r: Vec<f64> = real_cubic_roots(
            kappa * kappa,
            2.0 * d0 * kappa,
            half * half + d0 * d0,
            -e * e,
        )
        .into_iter()
        .filter(|&n| n > 0.0)
        .collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        r.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
        r
    };
    let n = *roots.first().ok_or_else(|| {
        Error::Solver(format!(
            "no real positive root of the intensity cubic (E={e}, Delta0={d0}, kappa={kappa})"
        ))
    })?;
    let delta = d0 + kappa * n;
    let beta = e / Complex64::new(half, delta);
    let check = e / Complex64::new(half, d0 + kappa * beta.norm_sqr());
    let residual = if beta.norm() > 0.0 {
        (beta - check).norm() / beta.norm()
    } else {
        0.0
    };
    Ok(WorkingPoint {
        beta,
        detuning: delta,
        drive_frequency: cav.omega_0,
        multistable: roots.len() > 1,
        intensity_roots: roots,
        residual,
    })
}

/// Real roots of `a x^3 + b x^2 + c x + d` with `a != 0`, Newton-polished.
fn real_cubic_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    let (p, q, r) = (b / a, c / a, d / a);
    let qq = (p * p - 3.0 * q) / 9.0;
    let rr = (2.0 * p * p * p - 9.0 * p * q + 27.0 * r) / 54.0;
    let mut roots = if rr * rr < qq * qq * qq {
        let th = (rr / (qq * qq * qq).sqrt()).clamp(-1.0, 1.0).acos();
        let s = -2.0 * qq.sqrt();
        let tau = 2.0 * std::f64::consts::PI;
        vec![
            s * (th / 3.0).cos() - p / 3.0,
            s * ((th + tau) / 3.0).cos() - p / 3.0,
            s * ((th - tau) / 3.0).cos() - p / 3.0,
        ]
    } else {
        let big_a = -rr.signum() * (rr.abs() + (rr * rr - qq * qq * qq).sqrt()).cbrt();
        let big_b = if big_a == 0.0 { 0.0 } else { qq / big_a };
        vec![big_a + big_b - p / 3.0]
    };
    for x in roots.iter_mut() {
        for _ in 0..4 {
            let f = ((a * *x + b) * *x + c) * *x + d;
            let df = (3.0 * a * *x + 2.0 * b) * *x + c;
            if df == 0.0 {
                break;
            }
            let step = f / df;
            *x -= step;
            if step.abs() <= f64::EPSILON * x.abs() {
                break;
            }
        }
    }
    roots
}

/// Full single-oscillator system at its working point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub mech: MechanicalParams,
    pub cav: CavityParams,
    pub bath: BathParams,
    /// Real semiclassical amplitude at zero effective detuning.
    pub beta: f64,
    /// Dimensionless input power.
    pub zeta: f64,
}

/// Flat dimensionless description, the form consumed by the CLI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessParams {
    pub quality: f64,
    pub gamma_c: f64,
    pub theta: f64,
    pub eta: f64,
    pub cutoff_ratio: f64,
    pub zeta: f64,
}

impl Default for DimensionlessParams {
    fn default() -> Self {
        Self {
            quality: 1e4,
            gamma_c: 1e4,
            theta: 1e5,
            eta: 0.8,
            cutoff_ratio: 100.0,
            zeta: 1.0,
        }
    }
}

impl SystemParams {
    pub fn new(
        mech: MechanicalParams,
        cav: CavityParams,
        bath: BathParams,
        beta: f64,
    ) -> Result<Self> {
        cav.validate()?;
        bath.validate()?;
        let zeta = derive_zeta(&cav, &mech, beta)?;
        Ok(Self {
            mech,
            cav,
            bath,
            beta,
            zeta,
        })
    }

    /// Builds a zero-detuning system from dimensionless ratios. The gauge
    /// `beta = 1` is used and the coupling is chosen to reproduce `zeta`.
    pub fn dimensionless(p: DimensionlessParams) -> Result<Self> {
        check_non_negative("zeta", p.zeta)?;
        check_positive("gamma_c_over_omega_m", p.gamma_c)?;
        let mech = MechanicalParams::from_quality(p.quality)?;
        let bath = BathParams::new(p.theta, p.cutoff_ratio, p.eta)?;
        let coupling = (p.zeta * mech.gamma_m() * p.gamma_c).sqrt() / 4.0;
        let cav = CavityParams {
            omega_c: 0.0,
            omega_0: 0.0,
            gamma_c: p.gamma_c,
            coupling_g: coupling,
            drive: Drive::Amplitude(p.gamma_c / 2.0),
        };
        cav.validate()?;
        let mut sys = Self {
            mech,
            cav,
            bath,
            beta: 1.0,
            zeta: p.zeta,
        };
        sys.retune();
        Ok(sys)
    }

    /// Same system at a different input power, keeping the zero-detuning
    /// working point. The amplitude is rescaled at fixed coupling, or the
    /// coupling is set when it was zero.
    pub fn with_zeta(&self, zeta: f64) -> Result<Self> {
        check_non_negative("zeta", zeta)?;
        let mut out = *self;
        let scale = (zeta * self.mech.gamma_m() * self.cav.gamma_c).sqrt() / 4.0;
        if self.cav.coupling_g > 0.0 {
            out.beta = scale / self.cav.coupling_g;
        } else {
            out.beta = 1.0;
            out.cav.coupling_g = scale;
        }
        out.zeta = zeta;
        out.cav.drive = Drive::Amplitude(out.beta * out.cav.gamma_c / 2.0);
        out.retune();
        Ok(out)
    }

    pub fn with_bath(&self, bath: BathParams) -> Result<Self> {
        bath.validate()?;
        let mut out = *self;
        out.bath = bath;
        Ok(out)
    }

    fn retune(&mut self) {
        let kappa = 2.0 * self.cav.coupling_g * self.cav.coupling_g / self.mech.omega_m();
        self.cav.omega_0 = self.cav.omega_c + kappa * self.beta * self.beta;
    }

    pub fn dimensionless_params(&self) -> DimensionlessParams {
        DimensionlessParams {
            quality: self.quality(),
            gamma_c: self.gamma_c(),
            theta: self.bath.theta,
            eta: self.bath.eta,
            cutoff_ratio: self.bath.cutoff_ratio,
            zeta: self.zeta,
        }
    }

    pub fn quality(&self) -> f64 {
        self.mech.quality()
    }

    /// `gamma_m / omega_m`.
    pub fn gamma(&self) -> f64 {
        self.mech.damping_ratio()
    }

    /// `gamma_c / omega_m`.
    pub fn gamma_c(&self) -> f64 {
        self.cav.gamma_c / self.mech.omega_m()
    }

    /// `G beta / omega_m`, the linearised optomechanical coupling.
    pub fn coupling_amplitude(&self) -> f64 {
        self.cav.coupling_g * self.beta / self.mech.omega_m()
    }
}

/// Ring cavity with two identical movable mirrors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingSystem {
    pub mech: MechanicalParams,
    /// Cavity whose `coupling_g` is the ring coupling constant.
    pub cav: CavityParams,
    pub bath: BathParams,
    pub beta: f64,
}

impl RingSystem {
    /// `32 G~^2 beta~^2 / (gamma_m gamma_c)`.
    pub fn ring_zeta(&self) -> f64 {
        let g = self.cav.coupling_g;
        32.0 * g * g * self.beta * self.beta / (self.mech.gamma_m() * self.cav.gamma_c)
    }
}

/// Relative-motion reduction of a ring system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeFrame {
    /// Effective single-mirror system for `(Q_-, P_-)`.
    pub system: SystemParams,
    pub ring_zeta: f64,
    /// The centre of mass only feels the thermal bath.
    pub center_of_mass_thermal_only: bool,
}

/// Maps the relative coordinate of a ring cavity onto a single-mirror
/// system with coupling `sqrt(2) G~`.
pub fn to_relative_frame(ring: &RingSystem) -> Result<RelativeFrame> {
    let mut cav = ring.cav;
    cav.coupling_g = std::f64::consts::SQRT_2 * ring.cav.coupling_g;
    let mut system = SystemParams::new(ring.mech, cav, ring.bath, ring.beta)?;
    let ring_zeta = ring.ring_zeta();
    system.zeta = ring_zeta;
    Ok(RelativeFrame {
        system,
        ring_zeta,
        center_of_mass_thermal_only: true,
    })
}

/// Feedback loop applied to the mirror, with its rescaled gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeedbackScheme {
    MomentumFeedback { gain: f64 },
    ColdDamping { gain: f64 },
    /// Momentum feedback on the relative coordinate of a ring cavity.
    RingRelative { gain: f64, ring_zeta: f64 },
}

impl FeedbackScheme {
    pub fn gain(&self) -> f64 {
        match *self {
            FeedbackScheme::MomentumFeedback { gain }
            | FeedbackScheme::ColdDamping { gain }
            | FeedbackScheme::RingRelative { gain, .. } => gain,
        }
    }

    pub fn with_gain(&self, gain: f64) -> Self {
        match *self {
            FeedbackScheme::MomentumFeedback { .. } => FeedbackScheme::MomentumFeedback { gain },
            FeedbackScheme::ColdDamping { .. } => FeedbackScheme::ColdDamping { gain },
            FeedbackScheme::RingRelative { ring_zeta, .. } => {
                FeedbackScheme::RingRelative { gain, ring_zeta }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FeedbackScheme::MomentumFeedback { .. } => "momentum",
            FeedbackScheme::ColdDamping { .. } => "cold-damping",
            FeedbackScheme::RingRelative { .. } => "ring",
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_non_negative("gain", self.gain())?;
        if let FeedbackScheme::RingRelative { ring_zeta, .. } = *self {
            check_non_negative("ring_zeta", ring_zeta)?;
        }
        Ok(())
    }

    /// True for the schemes whose dynamics follow the momentum-feedback
    /// equations.
    pub fn is_momentum_type(&self) -> bool {
        !matches!(self, FeedbackScheme::ColdDamping { .. })
    }
}

/// `g1 = -4 G beta g_mf / gamma_m`.
pub fn momentum_gain(g_mf: f64, coupling_amplitude: f64, gamma_m: f64) -> f64 {
    -4.0 * coupling_amplitude * g_mf / gamma_m
}

/// Inverse of [`momentum_gain`].
pub fn raw_momentum_gain(g1: f64, coupling_amplitude: f64, gamma_m: f64) -> f64 {
    -g1 * gamma_m / (4.0 * coupling_amplitude)
}

/// `g2 = 4 G beta omega_m g_cd / (gamma_m gamma_c)`.
pub fn cold_damping_gain(
    g_cd: f64,
    coupling_amplitude: f64,
    omega_m: f64,
    gamma_m: f64,
    gamma_c: f64,
) -> f64 {
    4.0 * coupling_amplitude * omega_m * g_cd / (gamma_m * gamma_c)
}

/// Inverse of [`cold_damping_gain`].
pub fn raw_cold_damping_gain(
    g2: f64,
    coupling_amplitude: f64,
    omega_m: f64,
    gamma_m: f64,
    gamma_c: f64,
) -> f64 {
    g2 * gamma_m * gamma_c / (4.0 * coupling_amplitude * omega_m)
}

/// `g3 = -4 sqrt(2) G~ beta~ g_mf^- / gamma_m`.
pub fn ring_gain(g_mf_minus: f64, ring_coupling_amplitude: f64, gamma_m: f64) -> f64 {
    -4.0 * std::f64::consts::SQRT_2 * ring_coupling_amplitude * g_mf_minus / gamma_m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cavity(g: f64, gamma_c: f64, e: f64, detuning: f64) -> CavityParams {
        CavityParams {
            omega_c: 10.0 + detuning,
            omega_0: 10.0,
            gamma_c,
            coupling_g: g,
            drive: Drive::Amplitude(e),
        }
    }

    #[test]
    fn zeta_examples() {
        let mech = MechanicalParams::new(1.0, 1.0).unwrap();
        assert_eq!(derive_zeta(&cavity(0.0, 16.0, 1.0, 0.0), &mech, 7.0).unwrap(), 0.0);
        assert_eq!(derive_zeta(&cavity(1.0, 16.0, 1.0, 0.0), &mech, 1.0).unwrap(), 1.0);
        let mech = MechanicalParams::new(1.0, 0.5).unwrap();
        assert_eq!(derive_zeta(&cavity(2.0, 8.0, 1.0, 0.0), &mech, 3.0).unwrap(), 144.0);
    }

    #[test]
    fn zeta_rejects_bad_rates() {
        let mech = MechanicalParams::new(1.0, 1.0).unwrap();
        assert!(matches!(
            derive_zeta(&cavity(1.0, 0.0, 1.0, 0.0), &mech, 1.0),
            Err(Error::Domain { param: "gamma_c", .. })
        ));
        assert!(MechanicalParams::new(1.0, -1.0).is_err());
        assert!(MechanicalParams::new(0.0, 1.0).is_err());
    }

    #[test]
    fn power_form_matches_amplitude_form() {
        let mech = MechanicalParams::new(1.0, 0.01).unwrap();
        let mut cav = cavity(0.3, 50.0, 0.0, 0.0);
        cav.omega_0 = 1e3;
        cav.drive = Drive::Power(42.0);
        let beta = 2.0 * cav.drive_amplitude() / cav.gamma_c;
        let a = derive_zeta(&cav, &mech, beta).unwrap();
        let b = zeta_from_power(&cav, &mech).unwrap();
        assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn quality_is_cached_ratio() {
        let m = MechanicalParams::new(3.0, 0.7).unwrap();
        assert_eq!(m.quality(), 3.0 / 0.7);
    }

    #[test]
    fn zero_detuning_working_point() {
        let mech = MechanicalParams::new(1.0, 1e-3).unwrap();
        let cav = cavity(0.5, 16.0, 8.0, 0.3);
        let wp = solve_semiclassical(&cav, &mech, true).unwrap();
        assert_eq!(wp.beta, Complex64::new(1.0, 0.0));
        assert_eq!(wp.detuning, 0.0);
        // retuned drive cancels the radiation-pressure shift
        let shift = 2.0 * 0.25 * 1.0;
        assert!((wp.drive_frequency - (cav.omega_c + shift)).abs() < 1e-12);
    }

    #[test]
    fn linear_cavity_working_point() {
        let mech = MechanicalParams::new(1.0, 1e-3).unwrap();
        let cav = cavity(0.0, 2.0, 1.5, -0.4);
        let wp = solve_semiclassical(&cav, &mech, false).unwrap();
        let expected = 1.5 / Complex64::new(1.0, -0.4);
        assert!((wp.beta - expected).norm() < 1e-15);
        assert!(!wp.multistable);
    }

    #[test]
    fn cubic_working_point_satisfies_fixed_point() {
        let mech = MechanicalParams::new(1.0, 1e-3).unwrap();
        let cav = cavity(0.1, 1.0, 1.0, -0.05);
        let wp = solve_semiclassical(&cav, &mech, false).unwrap();
        let n = wp.beta.norm_sqr();
        let rhs = 1.0 / Complex64::new(0.5, -0.05 + 0.02 * n);
        assert!((wp.beta - rhs).norm() < 1e-12 * wp.beta.norm());
        assert!(wp.residual < 1e-12);
        assert!((n - 3.99).abs() < 0.05);
    }

    #[test]
    fn bistable_branch_is_smallest_root() {
        let mech = MechanicalParams::new(1.0, 1e-3).unwrap();
        // large red detuning with strong drive gives three roots
        let cav = cavity(1.0, 0.2, 3.0, -20.0);
        let wp = solve_semiclassical(&cav, &mech, false).unwrap();
        assert!(wp.multistable);
        assert_eq!(wp.intensity_roots.len(), 3);
        assert!((wp.beta.norm_sqr() - wp.intensity_roots[0]).abs() < 1e-9 * wp.intensity_roots[0]);
        assert!(wp.residual < 1e-10);
    }

    #[test]
    fn relative_frame_examples() {
        let mech = MechanicalParams::new(1.0, 1.0).unwrap();
        let bath = BathParams::new(1.0, 100.0, 1.0).unwrap();
        let ring = RingSystem {
            mech,
            cav: cavity(0.0, 32.0, 1.0, 0.0),
            bath,
            beta: 1.0,
        };
        let f = to_relative_frame(&ring).unwrap();
        assert_eq!(f.system.cav.coupling_g, 0.0);
        assert_eq!(f.ring_zeta, 0.0);

        let ring = RingSystem {
            cav: cavity(1.0, 32.0, 1.0, 0.0),
            ..ring
        };
        let f = to_relative_frame(&ring).unwrap();
        assert_eq!(f.ring_zeta, 1.0);
        let single = derive_zeta(&f.system.cav, &f.system.mech, f.system.beta).unwrap();
        assert!((single - f.ring_zeta).abs() < 1e-14);
        assert!(f.center_of_mass_thermal_only);
    }

    #[test]
    fn dimensionless_system_reproduces_zeta() {
        let p = DimensionlessParams {
            zeta: 123.0,
            ..Default::default()
        };
        let sys = SystemParams::dimensionless(p).unwrap();
        let z = derive_zeta(&sys.cav, &sys.mech, sys.beta).unwrap();
        assert!((z - 123.0).abs() < 1e-12 * 123.0);
        let moved = sys.with_zeta(7.5).unwrap();
        let z = derive_zeta(&moved.cav, &moved.mech, moved.beta).unwrap();
        assert!((z - 7.5).abs() < 1e-12 * 7.5);
        let wp = solve_semiclassical(&moved.cav, &moved.mech, false).unwrap();
        assert!((wp.beta.re - moved.beta).abs() < 1e-9 * moved.beta);
        assert!(wp.detuning.abs() < 1e-9);
    }

    #[test]
    fn gain_maps_invert() {
        let g1 = momentum_gain(-0.3, 2.0, 1e-3);
        assert!((raw_momentum_gain(g1, 2.0, 1e-3) + 0.3).abs() < 1e-15);
        let g2 = cold_damping_gain(0.2, 2.0, 1.0, 1e-3, 1e4);
        assert!((raw_cold_damping_gain(g2, 2.0, 1.0, 1e-3, 1e4) - 0.2).abs() < 1e-15);
        assert_eq!(ring_gain(0.0, 1.0, 1.0), 0.0);
    }

    #[test]
    fn bath_validation_names_key() {
        match BathParams::new(1.0, 100.0, 0.0) {
            Err(Error::Domain { param, .. }) => assert_eq!(param, "eta"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(BathParams::new(-1.0, 100.0, 0.5).is_err());
    }
}
