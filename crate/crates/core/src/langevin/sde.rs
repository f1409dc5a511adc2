use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{FeedbackScheme, SystemParams};

/// Which set of equations to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// Mirror and cavity quadratures (plus the detection filter states for
    /// cold damping).
    Full,
    /// Mirror only, cavity eliminated in the large-bandwidth limit.
    Adiabatic,
}

/// Noise columns shared by every model: cavity amplitude and phase input
/// noise, the vacuum mixed in by imperfect detection, and the thermal force.
pub const NOISE_LABELS: [&str; 4] = ["xi_X", "xi_Y", "xi_aux", "xi_W"];

/// `dx = A x dt + B dW` with unit, independent Wiener increments.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSDE {
    pub drift: DMatrix<f64>,
    pub noise: DMatrix<f64>,
    pub labels: Vec<&'static str>,
    pub form: Form,
    /// Damping rate of the mechanical mode, `γ(1+g)`.
    pub mechanical_damping: f64,
    /// Fastest rate in the model, bounding the admissible time step.
    pub fastest_rate: f64,
}

impl LinearSDE {
    /// Checks that the drift is Hurwitz.
    pub fn new(
        drift: DMatrix<f64>,
        noise: DMatrix<f64>,
        labels: Vec<&'static str>,
        form: Form,
        mechanical_damping: f64,
        fastest_rate: f64,
    ) -> Result<Self> {
        let n = drift.nrows();
        if drift.ncols() != n || noise.nrows() != n || labels.len() != n {
            return Err(Error::Precondition(format!(
                "inconsistent shapes: drift {}x{}, noise {}x{}, {} labels",
                drift.nrows(),
                drift.ncols(),
                noise.nrows(),
                noise.ncols(),
                labels.len()
            )));
        }
        let eig = drift.complex_eigenvalues();
        if eig.iter().any(|z| !(z.re < 0.0)) {
            return Err(Error::NotHurwitz {
                eigenvalues: eig.iter().map(|z| (z.re, z.im)).collect(),
            });
        }
        Ok(Self {
            drift,
            noise,
            labels,
            form,
            mechanical_damping,
            fastest_rate,
        })
    }

    pub fn dim(&self) -> usize {
        self.drift.nrows()
    }

    /// `B Bᵀ`.
    pub fn diffusion(&self) -> DMatrix<f64> {
        &self.noise * self.noise.transpose()
    }

    /// Largest step accepted by the ensemble integrator.
    pub fn max_dt(&self) -> f64 {
        0.05 / self.fastest_rate
    }
}

struct Coefficients {
    gamma: f64,
    gamma_c: f64,
    gain: f64,
    zeta: f64,
    eta: f64,
    theta: f64,
    /// `G β` in units of `ω_m`.
    coupling: f64,
}

impl Coefficients {
    fn new(sys: &SystemParams, scheme: &FeedbackScheme) -> Result<Self> {
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
        let gamma_c = sys.gamma_c();
        Ok(Self {
            gamma,
            gamma_c,
            gain,
            zeta,
            eta: sys.bath.eta,
            theta: sys.bath.theta,
            coupling: (zeta * gamma * gamma_c).sqrt() / 4.0,
        })
    }

    /// White detection noise re-injected by the loop in the eliminated
    /// models, split over the phase input and the detection vacuum so that
    /// its density is `g² γ / (4ηζ)`.
    fn loop_noise(&self) -> (f64, f64) {
        if self.gain == 0.0 {
            return (0.0, 0.0);
        }
        let c = 0.5 * self.gain * (self.gamma / self.zeta).sqrt();
        (-c, c * ((1.0 - self.eta) / self.eta).sqrt())
    }

    fn mechanical_damping(&self) -> f64 {
        self.gamma * (1.0 + self.gain)
    }
}

// State indices.
const Q: usize = 0;
const P: usize = 1;
const Y: usize = 2;
const X: usize = 3;
const Z: usize = 4;
const W: usize = 5;
// Noise indices.
const NX: usize = 0;
const NY: usize = 1;
const NA: usize = 2;
const NW: usize = 3;

/// Bandwidth of the cold-damping detection filter in the full model, in
/// units of the damped linewidth.
pub const FILTER_BANDWIDTH_FACTOR: f64 = 100.0;

/// Drift and noise matrices of the linearised Langevin equations.
///
/// Input noises are classical white noises with the symmetrised quantum
/// spectra; the thermal force has density `γθ`. The homodyne signal mixes
/// the phase input with an auxiliary vacuum, `Y^η = √η ξ_Y + √(1-η) ξ_aux`,
/// which gives the `√η` correlation between measured and intracavity noise.
pub fn build_sde(sys: &SystemParams, scheme: &FeedbackScheme, form: Form) -> Result<LinearSDE> {
    let c = Coefficients::new(sys, scheme)?;
    let damping = c.mechanical_damping();
    let thermal = (c.gamma * c.theta).sqrt();
    let back_action = 0.5 * (c.gamma * c.zeta).sqrt();
    let (loop_y, loop_aux) = c.loop_noise();
    match (form, scheme.is_momentum_type()) {
        (Form::Adiabatic, momentum) => {
            let mut a = DMatrix::zeros(2, 2);
            let mut b = DMatrix::zeros(2, 4);
            a[(Q, P)] = 1.0;
            a[(P, Q)] = -1.0;
            b[(P, NX)] = back_action;
            b[(P, NW)] = thermal;
            // detection noise enters the position equation for momentum
            // feedback and the force for cold damping
            let row = if momentum {
                a[(Q, Q)] = -c.gamma * c.gain;
                a[(P, P)] = -c.gamma;
                Q
            } else {
                a[(P, P)] = -damping;
                P
            };
            b[(row, NY)] = loop_y;
            b[(row, NA)] = loop_aux;
            LinearSDE::new(a, b, vec!["Q", "P"], form, damping, damping.max(1.0))
        }
        (Form::Full, true) => {
            let mut a = DMatrix::zeros(4, 4);
            let mut b = DMatrix::zeros(4, 4);
            let sqrt_gc = c.gamma_c.sqrt();
            let g_mf = if c.gain == 0.0 {
                0.0
            } else {
                -c.gain * c.gamma / (4.0 * c.coupling)
            };
            a[(Q, P)] = 1.0;
            a[(Q, Y)] = g_mf * c.gamma_c;
            // -(g_mf/2) sqrt(γ_c/η) Y^η
            b[(Q, NY)] = -0.5 * g_mf * sqrt_gc;
            b[(Q, NA)] = -0.5 * g_mf * (c.gamma_c * (1.0 - c.eta) / c.eta).sqrt();
            a[(P, Q)] = -1.0;
            a[(P, P)] = -c.gamma;
            a[(P, X)] = 2.0 * c.coupling;
            b[(P, NW)] = thermal;
            a[(Y, Y)] = -0.5 * c.gamma_c;
            a[(Y, Q)] = 2.0 * c.coupling;
            b[(Y, NY)] = 0.5 * sqrt_gc;
            a[(X, X)] = -0.5 * c.gamma_c;
            b[(X, NX)] = 0.5 * sqrt_gc;
            let fastest = c.gamma_c.max(damping).max(1.0);
            LinearSDE::new(a, b, vec!["Q", "P", "Y", "X"], form, damping, fastest)
        }
        (Form::Full, false) => {
            // The loop differentiates the homodyne signal u through a
            // band-pass centred on ω_m:
            //   F = -k Δω s² u / (s² + Δω s + 1),
            // realised with the filter states z, w = ż. Near resonance
            // F ≈ -k u̇, the derivative feedback of the eliminated model.
            let mut a = DMatrix::zeros(6, 6);
            let mut b = DMatrix::zeros(6, 4);
            let sqrt_gc = c.gamma_c.sqrt();
            let bw = FILTER_BANDWIDTH_FACTOR * damping;
            let g_cd = if c.gain == 0.0 {
                0.0
            } else {
                c.gain * c.gamma * c.gamma_c / (4.0 * c.coupling)
            };
            let k = g_cd / (2.0 * c.eta * sqrt_gc);
            // u = 2η√γ_c Y - η ξ_Y - √(η(1-η)) ξ_aux
            let u_y = 2.0 * c.eta * sqrt_gc;
            let u_ny = -c.eta;
            let u_na = -(c.eta * (1.0 - c.eta)).sqrt();
            a[(Q, P)] = 1.0;
            a[(P, Q)] = -1.0;
            a[(P, P)] = -c.gamma;
            a[(P, X)] = 2.0 * c.coupling;
            b[(P, NW)] = thermal;
            a[(P, Y)] = -k * bw * u_y;
            b[(P, NY)] = -k * bw * u_ny;
            b[(P, NA)] = -k * bw * u_na;
            a[(P, W)] = k * bw;
            a[(P, Z)] = k;
            a[(Y, Y)] = -0.5 * c.gamma_c;
            a[(Y, Q)] = 2.0 * c.coupling;
            b[(Y, NY)] = 0.5 * sqrt_gc;
            a[(X, X)] = -0.5 * c.gamma_c;
            b[(X, NX)] = 0.5 * sqrt_gc;
            a[(Z, W)] = 1.0;
            a[(W, Z)] = -1.0;
            a[(W, W)] = -bw;
            a[(W, Y)] = bw * u_y;
            b[(W, NY)] = bw * u_ny;
            b[(W, NA)] = bw * u_na;
            let fastest = c.gamma_c.max(bw).max(damping).max(1.0);
            LinearSDE::new(
                a,
                b,
                vec!["Q", "P", "Y", "X", "z", "w"],
                form,
                damping,
                fastest,
            )
        }
    }
}
