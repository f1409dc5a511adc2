//! The five subcommands. Each writes a human-readable report to `out` and
//! any data files under the configured output path.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use optocool::analytic;
use optocool::langevin::{simulate_trajectory, Form};
use optocool::Execution;

use crate::config::{RunConfig, SchemeKind};
use crate::error::{CliError, CliResult};
use crate::figures::{generate, FigureName, FigureSettings};
use crate::methods::{self, Moments};
use crate::output::{fmt_f64, gnuplot_script, write_figure, write_sweep, Method, SweepRow};

/// Flags shared by the subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub verify: bool,
    /// Methods tabulated by `sweep` and `steady`.
    pub methods: Vec<Method>,
    pub exec: Execution,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            verify: false,
            methods: vec![Method::Analytic],
            exec: Execution::default(),
        }
    }
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path).map_err(|e| {
        std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))
    })?))
}

fn scheme_line(cfg: &RunConfig) -> String {
    let p = &cfg.params;
    let mut s = format!(
        "scheme = {}, gain = {}, zeta = {}, theta = {}, eta = {}, quality = {}, cutoff_ratio = {}",
        cfg.feedback().name(),
        cfg.gain,
        p.zeta,
        p.theta,
        p.eta,
        p.quality,
        p.cutoff_ratio
    );
    if cfg.scheme == SchemeKind::Ring {
        s.push_str(&format!(", ring_zeta = {}", cfg.effective_ring_zeta()));
    }
    s
}

fn moments_line(label: &str, m: &Moments) -> String {
    format!(
        "{label:<10} q2 = {:.10e}  p2 = {:.10e}  qp_sym = {:+.10e}  energy = {:.10e}",
        m.q2,
        m.p2,
        m.qp,
        m.energy_units()
    )
}

fn deviation_line(label: &str, d: [f64; 3], tol: f64) -> (String, bool) {
    let ok = d.iter().all(|v| *v <= tol);
    (
        format!(
            "{label:<10} rel. deviation q2 {:.2e}, p2 {:.2e}, qp {:.2e} (tolerance {tol:.0e}) {}",
            d[0],
            d[1],
            d[2],
            if ok { "ok" } else { "FAILED" }
        ),
        ok,
    )
}

/// Closed-form steady state, optionally cross-checked by quadrature and by
/// the Lyapunov equation.
pub fn steady(cfg: &RunConfig, opts: &Options, out: &mut dyn Write) -> CliResult<()> {
    cfg.validate()?;
    let state = methods::analytic_state(cfg, cfg.log_correction)?;
    writeln!(out, "{}", scheme_line(cfg))?;
    writeln!(out, "{}", moments_line("analytic", &Moments::from(&state)))?;
    match state.occupancy {
        Some(n) => writeln!(out, "occupancy  {n:.10e}")?,
        None => writeln!(out, "occupancy  n/a (not a thermal state)")?,
    }
    writeln!(out, "ellipse angle {:.6} rad", state.ellipse_angle)?;
    for (name, parts) in [("q2", &state.q2_parts), ("p2", &state.p2_parts)] {
        writeln!(
            out,
            "{name} parts: back-action {:.6e}, feedback {:.6e}, brownian {:.6e}",
            parts.back_action, parts.feedback_induced, parts.brownian
        )?;
    }
    if state.log_clamped {
        writeln!(out, "warning: cutoff_ratio <= 2 pi, logarithmic correction clamped to 0")?;
    }
    if state.outside_validity {
        writeln!(out, "warning: variance below 1/4 at zero gain, outside the model's validity")?;
    }
    let flags = [
        ("contractive", state.is_contractive()),
        ("squeezed", state.is_squeezed()),
    ];
    for (name, on) in flags {
        writeln!(out, "{name}: {on}")?;
    }
    if cfg.scheme == SchemeKind::Ring {
        let marker = methods::entanglement_marker(cfg, state.q2)?;
        writeln!(out, "entanglement marker E = {marker:.6e} (entangled: {})", marker < 1.0)?;
    }

    let mut rows = vec![methods::row(cfg, Method::Analytic, "zeta", cfg.params.zeta, None, opts.exec)?];
    let mut failures = Vec::new();
    if opts.verify {
        // the quadrature sees the finite cutoff, so compare it with the
        // closed form that includes the logarithmic term
        let with_log = cfg.params.cutoff_ratio > 1.0;
        let reference = Moments::from(&methods::analytic_state(cfg, with_log)?);
        let spectral = methods::spectral_moments(cfg)?;
        writeln!(out, "{}", moments_line("spectral", &spectral))?;
        let (line, ok) = deviation_line("spectral", spectral.deviation(&reference), cfg.spectral_tol);
        writeln!(out, "{line}")?;
        if !ok {
            failures.push("spectral");
        }
        let lyapunov = methods::lyapunov_moments(cfg)?;
        writeln!(out, "{}", moments_line("lyapunov", &lyapunov))?;
        let reference = Moments::from(&methods::analytic_state(cfg, false)?);
        let tol = match cfg.sim.form {
            Form::Adiabatic => cfg.lyapunov_tol,
            Form::Full => 1e-2,
        };
        let (line, ok) = deviation_line("lyapunov", lyapunov.deviation(&reference), tol);
        writeln!(out, "{line}")?;
        if !ok {
            failures.push("lyapunov");
        }
        rows.push(methods::row(cfg, Method::Spectral, "zeta", cfg.params.zeta, None, opts.exec)?);
        rows.push(methods::row(cfg, Method::Lyapunov, "zeta", cfg.params.zeta, None, opts.exec)?);
    }
    if let Some(path) = &cfg.out {
        write_sweep(create(path)?, &rows)?;
        writeln!(out, "wrote {}", path.display())?;
    }
    if !failures.is_empty() {
        return Err(CliError::Consistency(format!(
            "{} disagree with the closed form",
            failures.join(" and ")
        )));
    }
    Ok(())
}

/// Evaluates the requested methods over a one- or two-parameter grid.
pub fn sweep_rows(cfg: &RunConfig, opts: &Options) -> CliResult<Vec<SweepRow>> {
    cfg.validate()?;
    let spec = cfg
        .sweep()
        .ok_or_else(|| CliError::Validation("missing key `sweep_variable` for the sweep".into()))?;
    let series: Vec<Option<f64>> = match spec.series_variable {
        Some(_) => spec.series.iter().copied().map(Some).collect(),
        None => vec![None],
    };
    let mut jobs = Vec::new();
    for s in &series {
        for v in spec.values() {
            for m in &opts.methods {
                jobs.push((*s, v, *m));
            }
        }
    }
    let var = spec.variable;
    let rows = optocool::exec::map_slice(opts.exec, &jobs, |&(s, v, m)| {
        let mut c = cfg.with_value(var, v);
        let mut tag = None;
        if let (Some(sv), Some(value)) = (spec.series_variable, s) {
            c = c.with_value(sv, value);
            tag = Some((sv.name(), value));
        }
        c.validate()?;
        // ensembles already parallelise over trajectories
        methods::row(&c, m, var.name(), v, tag, Execution::Sequential)
    });
    rows.into_iter().collect()
}

pub fn sweep(cfg: &RunConfig, opts: &Options, out: &mut dyn Write) -> CliResult<()> {
    let rows = sweep_rows(cfg, opts)?;
    match &cfg.out {
        Some(path) => {
            write_sweep(create(path)?, &rows)?;
            let script = sweep_script(cfg, path, &rows);
            let gp = path.with_extension("gp");
            create(&gp)?.write_all(script.as_bytes())?;
            writeln!(out, "wrote {} rows to {} and plot script {}", rows.len(), path.display(), gp.display())?;
        }
        None => write_sweep(out, &rows)?,
    }
    Ok(())
}

fn sweep_script(cfg: &RunConfig, csv: &Path, rows: &[SweepRow]) -> String {
    let spec = cfg.sweep().expect("validated sweep");
    let name = csv.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let mut s = String::from("set datafile separator ','\n");
    s.push_str(&format!("set xlabel \"{}\"\nset ylabel \"2U_{{st}}/hbar omega_m\"\n", spec.variable.name()));
    if spec.scale == crate::config::Scale::Log {
        s.push_str("set logscale x\n");
    }
    s.push_str("set logscale y\n");
    let mut curves = Vec::new();
    let mut seen: Vec<(Option<f64>, Method)> = Vec::new();
    for r in rows {
        if !seen.contains(&(r.series_value, r.method)) {
            seen.push((r.series_value, r.method));
        }
    }
    for (sv, m) in seen {
        let (cond, title) = match sv {
            Some(v) => (
                format!("strcol(5) eq '{}' && strcol(4) eq '{}'", m.name(), fmt_f64(v)),
                format!("{} {} = {v:e}", m.name(), spec.series_variable.map_or("", |x| x.name())),
            ),
            None => (format!("strcol(5) eq '{}'", m.name()), m.name().to_string()),
        };
        curves.push(format!("'{name}' skip 1 using 2:({cond} ? $9 : 1/0) with linespoints title \"{title}\""));
    }
    s.push_str("plot ");
    s.push_str(&curves.join(", \\\n     "));
    s.push('\n');
    s
}

/// Writes `<dir>/<name>.csv` and `<dir>/<name>.gp`; fails with a
/// consistency error if a shape check does not hold.
pub fn figure(
    name: FigureName,
    settings: &FigureSettings,
    dir: &Path,
    opts: &Options,
    out: &mut dyn Write,
) -> CliResult<PathBuf> {
    let data = generate(name, settings, opts.exec)?;
    std::fs::create_dir_all(dir)?;
    let csv = dir.join(format!("{name}.csv"));
    write_figure(create(&csv)?, &data.points)?;
    let csv_name = format!("{name}.csv");
    let script = gnuplot_script(&data.plot, &csv_name, &data.legend);
    create(&dir.join(format!("{name}.gp")))?.write_all(script.as_bytes())?;
    writeln!(out, "wrote {} ({} points) and {name}.gp", csv.display(), data.points.len())?;
    let mut failed = 0;
    for c in data.checks() {
        writeln!(out, "  [{}] {}", if c.passed { "ok" } else { "FAILED" }, c.description)?;
        failed += usize::from(!c.passed);
    }
    if failed > 0 {
        return Err(CliError::Consistency(format!("{failed} shape check(s) of {name} failed")));
    }
    Ok(csv)
}

/// Ensemble moments next to the Lyapunov (and, for the eliminated model,
/// closed-form) predictions.
pub fn simulate(cfg: &RunConfig, opts: &Options, out: &mut dyn Write) -> CliResult<()> {
    cfg.validate()?;
    let sde = methods::sde(cfg)?;
    let ec = methods::checked_ensemble_config(cfg, &sde, opts.exec)?;
    let stats = optocool::langevin::simulate_ensemble(&sde, &ec)?;
    let lyapunov = methods::lyapunov_moments(cfg)?;
    writeln!(out, "{}", scheme_line(cfg))?;
    writeln!(
        out,
        "form = {:?}, states = {}, dt = {:.4e}, steps = {}, burn-in steps = {}, trajectories = {}, seed = {}",
        cfg.sim.form,
        sde.labels.join(","),
        ec.dt,
        ec.n_steps,
        stats.burn_in_steps,
        ec.n_traj,
        ec.seed
    )?;
    let closed = match cfg.sim.form {
        Form::Adiabatic => Some(Moments::from(&methods::analytic_state(cfg, false)?)),
        Form::Full => None,
    };
    let mut worst = 0.0f64;
    writeln!(out, "moment   ensemble mean ± stderr            lyapunov            z")?;
    for (name, est, target) in [
        ("q2", stats.q2, lyapunov.q2),
        ("p2", stats.p2, lyapunov.p2),
        ("qp_sym", stats.qp, lyapunov.qp),
    ] {
        let z = est.z_score(target);
        worst = worst.max(z);
        writeln!(
            out,
            "{name:<8} {:.6e} ± {:.2e}   {:.6e}   {z:.2}",
            est.mean, est.stderr, target
        )?;
    }
    if let Some(c) = closed {
        writeln!(out, "{}", moments_line("analytic", &c))?;
    }
    if let Some(path) = &cfg.sim.dump {
        let traj = simulate_trajectory(&sde, &ec, 0, cfg.sim.dump_stride)?;
        traj.write_csv(create(path)?)?;
        writeln!(out, "wrote trajectory 0 ({} samples) to {}", traj.times.len(), path.display())?;
    }
    if let Some(path) = &cfg.out {
        let lyap = methods::row(cfg, Method::Lyapunov, "zeta", cfg.params.zeta, None, opts.exec)?;
        let ens = SweepRow {
            method: Method::Ensemble,
            q2: stats.q2.mean,
            p2: stats.p2.mean,
            qp_sym: stats.qp.mean,
            energy_units: 2.0 * (stats.q2.mean + stats.p2.mean),
            occupancy: None,
            contractive: stats.qp.mean < 0.0,
            squeezed: stats.q2.mean < analytic::STANDARD_QUANTUM_LIMIT,
            ..lyap.clone()
        };
        let rows = vec![lyap, ens];
        write_sweep(create(path)?, &rows)?;
        writeln!(out, "wrote {}", path.display())?;
    }
    if opts.verify && worst > 3.0 {
        return Err(CliError::Consistency(format!(
            "ensemble deviates from the Lyapunov prediction by {worst:.2} standard errors"
        )));
    }
    Ok(())
}

/// Optimal power at the configured gain (and over `gain_ladder`).
pub fn optimize(cfg: &RunConfig, _opts: &Options, out: &mut dyn Write) -> CliResult<()> {
    cfg.validate()?;
    let p = cfg.params;
    let gains = if cfg.gain_ladder.is_empty() {
        vec![cfg.gain]
    } else {
        cfg.gain_ladder.clone()
    };
    let mut table = Vec::new();
    let mut mismatch = Vec::new();
    writeln!(out, "scheme = {}, theta = {}, eta = {}, quality = {}", cfg.feedback().name(), p.theta, p.eta, p.quality)?;
    for g in gains {
        if g == 0.0 {
            writeln!(
                out,
                "gain = 0: zeta_opt = 0 (boundary; energy only grows with power, no interior minimum)"
            )?;
            table.push([0.0, 0.0, 0.0, f64::NAN, f64::NAN, 0.0]);
            continue;
        }
        let (analytic_z, numeric_z, analytic_e, numeric_e, what) = match cfg.scheme {
            SchemeKind::ColdDamping => {
                let o = analytic::cold_damping_optimum(g, p.eta, p.theta)?;
                (o.zeta_opt, o.numeric_zeta, o.energy_units, o.numeric_energy, "energy")
            }
            SchemeKind::Momentum => {
                let o = analytic::momentum_feedback_optimum(g, p.eta, p.theta, p.quality)?;
                (o.zeta_opt, o.numeric_zeta, o.energy_units, o.numeric_energy, "energy")
            }
            SchemeKind::Ring => {
                let m = analytic::squeezing_minimum(g, p.quality, p.eta, p.theta)?;
                (m.zeta_at_min, m.numeric_zeta, m.q2_min, m.numeric_q2_min, "<Q^2>")
            }
        };
        let rel = (numeric_z / analytic_z - 1.0).abs();
        writeln!(
            out,
            "gain = {g:e}: zeta_opt numeric {numeric_z:.12e}, closed form {analytic_z:.12e} (rel. diff {rel:.2e}); {what} {numeric_e:.10e} vs {analytic_e:.10e}"
        )?;
        if cfg.scheme == SchemeKind::ColdDamping && rel > 1e-6 {
            mismatch.push(g);
        }
        table.push([g, analytic_z, numeric_z, analytic_e, numeric_e, rel]);
    }
    if let Some(path) = &cfg.out {
        let mut w = csv::Writer::from_writer(create(path)?);
        w.write_record(["gain", "zeta_opt_closed_form", "zeta_opt_numeric", "closed_form_value", "numeric_value", "relative_difference"])?;
        for r in &table {
            w.write_record(r.iter().map(|v| fmt_f64(*v)))?;
        }
        w.flush()?;
        writeln!(out, "wrote {}", path.display())?;
    }
    if !mismatch.is_empty() {
        return Err(CliError::Consistency(format!(
            "numeric optimum differs from g/sqrt(eta) by more than 1e-6 at gains {mismatch:?}"
        )));
    }
    Ok(())
}
