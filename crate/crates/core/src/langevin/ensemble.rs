use std::io::{self, Write};

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::sde::LinearSDE;
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Integrator {
    /// Exact one-step propagator and noise covariance of the linear SDE.
    #[default]
    Exact,
    /// First-order Euler–Maruyama, for cross-checks only.
    EulerMaruyama,
}

/// Lag grid for the position autocorrelation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagGrid {
    /// Spacing between lags, in steps.
    pub stride: usize,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleConfig {
    pub dt: f64,
    /// Recorded steps after burn-in.
    pub n_steps: usize,
    pub n_traj: usize,
    pub seed: u64,
    /// Burn-in duration in time units; `None` means `10 / (γ(1+g))`.
    pub burn_in: Option<f64>,
    pub integrator: Integrator,
    pub exec: Execution,
    /// Estimate the damping rate from the autocorrelation on this grid.
    pub lags: Option<LagGrid>,
}

impl EnsembleConfig {
    pub fn new(dt: f64, n_steps: usize, n_traj: usize, seed: u64) -> Self {
        Self {
            dt,
            n_steps,
            n_traj,
            seed,
            burn_in: None,
            integrator: Integrator::Exact,
            exec: Execution::default(),
            lags: None,
        }
    }
}

/// Mean over trajectories with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

impl Estimate {
    fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
        Self {
            mean,
            stderr: (var / n).sqrt(),
        }
    }

    /// Distance from `target` in standard errors.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.mean - target).abs() / self.stderr
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    pub n_traj: usize,
    pub burn_in_steps: usize,
    pub n_steps: usize,
    pub dt: f64,
    pub q2: Estimate,
    pub p2: Estimate,
    pub qp: Estimate,
    /// Mean second-moment matrix over all state variables.
    pub covariance: DMatrix<f64>,
    /// Decay rate of the squared envelope `C_QQ² + C_PQ²`.
    pub decay_rate: Option<f64>,
    /// Inverse of `decay_rate`.
    pub autocorrelation_time: Option<f64>,
}

/// Discretised dynamics `x ← Φ x + L ξ`, stored row-major.
#[derive(Debug, Clone)]
pub struct Stepper {
    dim: usize,
    phi: Vec<f64>,
    noise: Vec<f64>,
    noise_cols: usize,
}

impl Stepper {
    pub fn new(sde: &LinearSDE, dt: f64, integrator: Integrator) -> Result<Self> {
        let n = sde.dim();
        let (phi, noise) = match integrator {
            Integrator::Exact => {
                // Van Loan: exp([[-A, BBᵀ], [0, Aᵀ]] dt) = [[·, F12], [0, F22]]
                // with Φ = F22ᵀ and Q_d = Φ F12.
                let mut m = DMatrix::zeros(2 * n, 2 * n);
                m.view_mut((0, 0), (n, n)).copy_from(&(-&sde.drift * dt));
                m.view_mut((0, n), (n, n)).copy_from(&(sde.diffusion() * dt));
                m.view_mut((n, n), (n, n)).copy_from(&(sde.drift.transpose() * dt));
                let e = m.exp();
                let phi = e.view((n, n), (n, n)).transpose();
                let qd = &phi * e.view((0, n), (n, n));
                let qd = (&qd + qd.transpose()) * 0.5;
                (phi, symmetric_sqrt(&qd))
            }
            Integrator::EulerMaruyama => (
                DMatrix::identity(n, n) + &sde.drift * dt,
                &sde.noise * dt.sqrt(),
            ),
        };
        Ok(Self {
            dim: n,
            noise_cols: noise.ncols(),
            phi: row_major(&phi),
            noise: row_major(&noise),
        })
    }

    fn step(&self, x: &mut [f64], scratch: &mut [f64], xi: &[f64]) {
        let n = self.dim;
        for i in 0..n {
            let row = &self.phi[i * n..(i + 1) * n];
            let nrow = &self.noise[i * self.noise_cols..(i + 1) * self.noise_cols];
            scratch[i] = row.iter().zip(x.iter()).map(|(a, b)| a * b).sum::<f64>()
                + nrow.iter().zip(xi).map(|(a, b)| a * b).sum::<f64>();
        }
        x.copy_from_slice(&scratch[..n]);
    }
}

fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    m.transpose().as_slice().to_vec()
}

/// Symmetric square root of a positive semidefinite matrix; tiny negative
/// eigenvalues from rounding are clipped.
fn symmetric_sqrt(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = m.clone().symmetric_eigen();
    let d = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    &eig.eigenvectors * DMatrix::from_diagonal(&d) * eig.eigenvectors.transpose()
}

fn check_config(sde: &LinearSDE, cfg: &EnsembleConfig) -> Result<()> {
    if cfg.n_traj < 2 {
        return Err(Error::Precondition("at least two trajectories are needed".into()));
    }
    if cfg.n_steps == 0 {
        return Err(Error::Precondition("n_steps must be positive".into()));
    }
    if !(cfg.dt > 0.0) {
        return Err(Error::Precondition(format!("dt must be positive, got {}", cfg.dt)));
    }
    let max_dt = sde.max_dt();
    if cfg.dt > max_dt * (1.0 + 1e-12) {
        return Err(Error::Precondition(format!(
            "dt = {} exceeds the limit 0.05 / {} = {max_dt}",
            cfg.dt, sde.fastest_rate
        )));
    }
    Ok(())
}

fn burn_in_steps(sde: &LinearSDE, cfg: &EnsembleConfig) -> usize {
    let t = cfg
        .burn_in
        .unwrap_or(10.0 / sde.mechanical_damping.max(f64::MIN_POSITIVE));
    (t / cfg.dt).ceil() as usize
}

struct TrajectoryTally {
    second_moments: Vec<f64>,
    /// `(C_QQ, C_PQ)` per lag, time-averaged.
    correlations: Vec<(f64, f64)>,
}

fn run_trajectory(
    stepper: &Stepper,
    cfg: &EnsembleConfig,
    burn_in: usize,
    index: usize,
) -> TrajectoryTally {
    let n = stepper.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(index as u64));
    let mut x = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    let mut xi = vec![0.0; stepper.noise_cols];
    let draw = |xi: &mut [f64], rng: &mut ChaCha8Rng| {
        for v in xi.iter_mut() {
            *v = StandardNormal.sample(rng);
        }
    };
    for _ in 0..burn_in {
        draw(&mut xi, &mut rng);
        stepper.step(&mut x, &mut scratch, &xi);
    }
    let mut sums = vec![0.0; n * n];
    let lags = cfg.lags.unwrap_or(LagGrid { stride: 1, count: 0 });
    // ring buffer of past Q values at the lag stride
    let mut history = vec![0.0; lags.count.max(1)];
    let mut corr = vec![(0.0, 0.0); lags.count];
    let mut corr_counts = vec![0usize; lags.count];
    let mut recorded = 0usize;
    for step in 0..cfg.n_steps {
        draw(&mut xi, &mut rng);
        stepper.step(&mut x, &mut scratch, &xi);
        for i in 0..n {
            for j in 0..n {
                sums[i * n + j] += x[i] * x[j];
            }
        }
        if lags.count > 0 && step % lags.stride == 0 {
            let slot = recorded % lags.count;
            history[slot] = x[0];
            for k in 0..lags.count.min(recorded + 1) {
                let past = history[(recorded - k) % lags.count];
                corr[k].0 += x[0] * past;
                corr[k].1 += x[1] * past;
                corr_counts[k] += 1;
            }
            recorded += 1;
        }
    }
    let m = cfg.n_steps as f64;
    TrajectoryTally {
        second_moments: sums.into_iter().map(|s| s / m).collect(),
        correlations: corr
            .into_iter()
            .zip(corr_counts)
            .map(|((a, b), c)| (a / c.max(1) as f64, b / c.max(1) as f64))
            .collect(),
    }
}

/// Runs `n_traj` independent trajectories with seeds `seed + i` and
/// reports burn-in-corrected moments. Results do not depend on whether the
/// trajectories ran in parallel.
pub fn simulate_ensemble(sde: &LinearSDE, cfg: &EnsembleConfig) -> Result<EnsembleStats> {
    check_config(sde, cfg)?;
    let stepper = Stepper::new(sde, cfg.dt, cfg.integrator)?;
    let burn_in = burn_in_steps(sde, cfg);
    let tallies = map_indexed(cfg.exec, cfg.n_traj, |i| {
        run_trajectory(&stepper, cfg, burn_in, i)
    });
    let n = sde.dim();
    let column = |k: usize| -> Vec<f64> { tallies.iter().map(|t| t.second_moments[k]).collect() };
    let mut covariance = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let c = column(i * n + j);
            covariance[(i, j)] = c.iter().sum::<f64>() / c.len() as f64;
        }
    }
    let decay_rate = cfg.lags.and_then(|lags| {
        if lags.count < 3 {
            return None;
        }
        let nt = tallies.len() as f64;
        let (xs, ys): (Vec<f64>, Vec<f64>) = (0..lags.count)
            .filter_map(|k| {
                let cqq = tallies.iter().map(|t| t.correlations[k].0).sum::<f64>() / nt;
                let cpq = tallies.iter().map(|t| t.correlations[k].1).sum::<f64>() / nt;
                let env = cqq * cqq + cpq * cpq;
                (env > 0.0).then(|| ((k * lags.stride) as f64 * cfg.dt, env.ln()))
            })
            .unzip();
        (xs.len() >= 3).then(|| -crate::spectral::fit_slope(&xs, &ys))
    });
    Ok(EnsembleStats {
        n_traj: cfg.n_traj,
        burn_in_steps: burn_in,
        n_steps: cfg.n_steps,
        dt: cfg.dt,
        q2: Estimate::from_samples(&column(0)),
        p2: Estimate::from_samples(&column(n + 1)),
        qp: Estimate::from_samples(&column(1)),
        covariance,
        autocorrelation_time: decay_rate.map(|r| 1.0 / r),
        decay_rate,
    })
}

/// One sampled trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub labels: Vec<&'static str>,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    /// Writes `t,Q,P[,...]` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,{}", self.labels.join(","))?;
        for (t, x) in self.times.iter().zip(&self.states) {
            write!(out, "{t:.16e}")?;
            for v in x {
                write!(out, ",{v:.16e}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Integrates trajectory `index` of an ensemble from rest, keeping every
/// `stride`-th state. Burn-in is not applied.
pub fn simulate_trajectory(
    sde: &LinearSDE,
    cfg: &EnsembleConfig,
    index: usize,
    stride: usize,
) -> Result<Trajectory> {
    check_config(sde, &EnsembleConfig { n_traj: 2, ..*cfg })?;
    let stride = stride.max(1);
    let stepper = Stepper::new(sde, cfg.dt, cfg.integrator)?;
    let n = sde.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(index as u64));
    let mut x = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    let mut xi = vec![0.0; stepper.noise_cols];
    let mut times = vec![0.0];
    let mut states = vec![x.clone()];
    for step in 1..=cfg.n_steps {
        for v in xi.iter_mut() {
            *v = StandardNormal.sample(&mut rng);
        }
        stepper.step(&mut x, &mut scratch, &xi);
        if step % stride == 0 {
            times.push(step as f64 * cfg.dt);
            states.push(x.clone());
        }
    }
    Ok(Trajectory {
        labels: sde.labels.clone(),
        times,
        states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langevin::sde::Form;
    use crate::langevin::{build_sde, stationary_covariance_lyapunov};
    use crate::model::{DimensionlessParams, FeedbackScheme, SystemParams};

    fn thermal_sde() -> LinearSDE {
        let s = SystemParams::dimensionless(DimensionlessParams {
            quality: 20.0,
            gamma_c: 1e4,
            theta: 5.0,
            eta: 1.0,
            cutoff_ratio: 100.0,
            zeta: 0.0,
        })
        .unwrap();
        build_sde(&s, &FeedbackScheme::ColdDamping { gain: 0.0 }, Form::Adiabatic).unwrap()
    }

    #[test]
    fn exact_propagator_preserves_stationary_covariance() {
        let sde = thermal_sde();
        let sigma = stationary_covariance_lyapunov(&sde).unwrap();
        let dt = 0.05;
        let st = Stepper::new(&sde, dt, Integrator::Exact).unwrap();
        let phi = DMatrix::from_row_slice(2, 2, &st.phi);
        let l = DMatrix::from_row_slice(2, st.noise_cols, &st.noise);
        let next = &phi * &sigma * phi.transpose() + &l * l.transpose();
        assert!((next - &sigma).amax() < 1e-10 * sigma.amax());
    }

    #[test]
    fn refuses_large_step() {
        let sde = thermal_sde();
        let cfg = EnsembleConfig::new(0.2, 10, 4, 1);
        assert!(matches!(simulate_ensemble(&sde, &cfg), Err(Error::Precondition(_))));
    }

    #[test]
    fn same_seed_same_statistics() {
        let sde = thermal_sde();
        let mut cfg = EnsembleConfig::new(0.05, 2000, 8, 42);
        let a = simulate_ensemble(&sde, &cfg).unwrap();
        cfg.exec = Execution::Sequential;
        let b = simulate_ensemble(&sde, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn trajectory_csv_has_header_and_rows() {
        let sde = thermal_sde();
        let cfg = EnsembleConfig::new(0.05, 10, 2, 3);
        let t = simulate_trajectory(&sde, &cfg, 0, 5).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,Q,P\n"));
        assert_eq!(text.lines().count(), 4);
    }
}
