//! Argument parsing and dispatch.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use optocool::Execution;

use crate::commands::{self, Options};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::figures::{FigureName, FigureSettings};
use crate::output::Method;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Analytic,
    Spectral,
    Lyapunov,
    Ensemble,
    All,
}

impl MethodArg {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::Analytic => vec![Method::Analytic],
            MethodArg::Spectral => vec![Method::Spectral],
            MethodArg::Lyapunov => vec![Method::Lyapunov],
            MethodArg::Ensemble => vec![Method::Ensemble],
            MethodArg::All => Method::ALL.to_vec(),
        }
    }
}

/// Steady states of a feedback-cooled optomechanical oscillator.
#[derive(Debug, Parser)]
#[command(name = "optocool", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (directory for `figure`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Cross-check against the other methods; exit 3 on disagreement.
    #[arg(long, global = true)]
    pub verify: bool,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Methods tabulated by `sweep`.
    #[arg(long, value_enum, global = true, default_value = "analytic")]
    pub method: MethodArg,
    /// Include the cutoff-dependent term in the momentum variance.
    #[arg(long, global = true)]
    pub log_correction: bool,
    /// Run everything on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    /// Any configuration key, e.g. `--set sweep_points=20`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub set: Vec<String>,

    #[arg(long, global = true)]
    pub theta: Option<String>,
    #[arg(long, global = true)]
    pub eta: Option<String>,
    #[arg(long, global = true)]
    pub quality: Option<String>,
    #[arg(long, global = true)]
    pub cutoff_ratio: Option<String>,
    #[arg(long = "gamma-c", global = true)]
    pub gamma_c: Option<String>,
    #[arg(long, global = true)]
    pub zeta: Option<String>,
    /// cold-damping, momentum or ring.
    #[arg(long, global = true)]
    pub scheme: Option<String>,
    #[arg(long, global = true)]
    pub gain: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form steady state of one configuration.
    Steady,
    /// CSV over a parameter grid.
    Sweep,
    /// Data, plot script and shape checks of one figure (or `all`).
    Figure { name: String },
    /// Ensemble simulation against the Lyapunov prediction.
    Simulate {
        /// Write trajectory 0 to this CSV file.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// adiabatic or full.
        #[arg(long)]
        form: Option<String>,
        #[arg(long)]
        n_traj: Option<String>,
    },
    /// Optimal input power at fixed gain.
    Optimize,
}

impl Cli {
    /// Overrides in command-line order: named flags, then `--set`.
    fn overrides(&self) -> CliResult<Vec<(String, String)>> {
        let mut kv = Vec::new();
        let named = [
            ("theta", &self.theta),
            ("eta", &self.eta),
            ("quality", &self.quality),
            ("cutoff_ratio", &self.cutoff_ratio),
            ("gamma_c_over_omega_m", &self.gamma_c),
            ("zeta", &self.zeta),
            ("scheme", &self.scheme),
            ("gain", &self.gain),
        ];
        for (k, v) in named {
            if let Some(v) = v {
                kv.push((k.to_string(), v.clone()));
            }
        }
        if let Some(s) = self.seed {
            kv.push(("seed".into(), s.to_string()));
        }
        if let Command::Simulate { dump, form, n_traj } = &self.command {
            if let Some(d) = dump {
                kv.push(("dump".into(), d.display().to_string()));
            }
            if let Some(f) = form {
                kv.push(("form".into(), f.clone()));
            }
            if let Some(n) = n_traj {
                kv.push(("n_traj".into(), n.clone()));
            }
        }
        for s in &self.set {
            let (k, v) = s.split_once('=').ok_or_else(|| {
                CliError::Validation(format!("--set expects KEY=VALUE, got `{s}`"))
            })?;
            kv.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(kv)
    }

    pub fn run_config(&self) -> CliResult<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        for (k, v) in self.overrides()? {
            cfg.set(&k, &v)
                .map_err(|e| CliError::Validation(format!("command line: {e}")))?;
        }
        if self.log_correction {
            cfg.log_correction = true;
        }
        if let Some(o) = &self.out {
            cfg.out = Some(o.clone());
        }
        Ok(cfg)
    }

    fn options(&self) -> Options {
        Options {
            verify: self.verify,
            methods: self.method.methods(),
            exec: if self.sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            },
        }
    }

    pub fn execute(&self, out: &mut dyn Write) -> CliResult<()> {
        let opts = self.options();
        match &self.command {
            Command::Steady => commands::steady(&self.run_config()?, &opts, out),
            Command::Sweep => commands::sweep(&self.run_config()?, &opts, out),
            Command::Simulate { .. } => commands::simulate(&self.run_config()?, &opts, out),
            Command::Optimize => commands::optimize(&self.run_config()?, &opts, out),
            Command::Figure { name } => {
                let names = if name == "all" {
                    FigureName::ALL.to_vec()
                } else {
                    vec![name.parse()?]
                };
                let dir = self.out.clone().unwrap_or_else(|| PathBuf::from("."));
                let overrides = self.overrides()?;
                let mut first_err = None;
                for n in names {
                    let mut settings = FigureSettings::defaults(n);
                    for (k, v) in &overrides {
                        settings.set(k, v)?;
                    }
                    if let Err(e) = commands::figure(n, &settings, &dir, &opts, out) {
                        writeln!(out, "{e}")?;
                        first_err.get_or_insert(e);
                    }
                }
                first_err.map_or(Ok(()), Err)
            }
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 1;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match cli.execute(out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
